"""Pure-Python kernels: the fallback backend.

Same signatures as the compiled module; everything here favors clarity
over speed. Inputs arrive as numpy arrays (CSR graphs, word matrices) but
the loops run in plain Python.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


# -- 3SUM ------------------------------------------------------------------

def threesum_pairscan(vals):
    """Two-pointer scan over sorted distinct values.

    Returns positions (i, j, k) in the sorted array with a zero triple sum
    and pairwise-distinct positions, or None.
    """
    vals = list(vals)
    n = len(vals)
    for k in range(n):
        i, j = 0, n - 1
        while i < j:
            if i == k:
                i += 1
                continue
            if j == k:
                j -= 1
                continue
            s = vals[i] + vals[j] + vals[k]
            if s == 0:
                return (i, j, k)
            if s < 0:
                i += 1
            else:
                j -= 1
    return None


# -- 3XOR ------------------------------------------------------------------

def threexor_pairscan(rows):
    """Pair scan with membership lookup over distinct word-rows.

    rows: (n, w) uint64 matrix, any row order. Returns (i, j, k) with
    row_i ^ row_j == row_k and three distinct indices, or None; scans
    pairs in ascending (i, j) order.
    """
    n, w = rows.shape
    index = {bytes(rows[i].tobytes()): i for i in range(n)}
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            x = ri ^ rows[j]
            k = index.get(x.tobytes())
            if k is not None and k != i and k != j:
                return (i, j, k)
    return None


# -- triangles -------------------------------------------------------------

def triangle_detect(optr, oidx):
    """First triangle in a rank-oriented adjacency (higher-rank neighbors,
    each list sorted by node id); returns (u, v, w) or None."""
    n = len(optr) - 1
    for u in range(n):
        for vi in range(optr[u], optr[u + 1]):
            v = oidx[vi]
            a, b = optr[u], optr[v]
            ea, eb = optr[u + 1], optr[v + 1]
            while a < ea and b < eb:
                if oidx[a] == oidx[b]:
                    return (u, int(v), int(oidx[a]))
                if oidx[a] < oidx[b]:
                    a += 1
                else:
                    b += 1
    return None


def triangle_list_forward(optr, oidx, cap):
    """All triangles of a rank-oriented adjacency, each exactly once.

    Returns (list of (u, v, w), truncated) where truncation happens when
    cap triangles have been collected.
    """
    out = []
    n = len(optr) - 1
    for u in range(n):
        for vi in range(optr[u], optr[u + 1]):
            v = oidx[vi]
            a, b = optr[u], optr[v]
            ea, eb = optr[u + 1], optr[v + 1]
            while a < ea and b < eb:
                if oidx[a] == oidx[b]:
                    out.append((u, int(v), int(oidx[a])))
                    if len(out) >= cap:
                        return out, True
                    a += 1
                    b += 1
                elif oidx[a] < oidx[b]:
                    a += 1
                else:
                    b += 1
    return out, False


def _has_edge(indptr, indices, u, v):
    lo, hi = indptr[u], indptr[u + 1]
    pos = np.searchsorted(indices[lo:hi], v)
    return pos < hi - lo and indices[lo + pos] == v


def triangle_phase1_lowdeg(indptr, indices, is_low, cap):
    """Triangles with at least one low-degree node, each exactly once
    (attributed to its smallest low-degree corner)."""
    out = []
    n = len(indptr) - 1
    for v in range(n):
        if not is_low[v]:
            continue
        adj = indices[indptr[v]:indptr[v + 1]]
        d = len(adj)
        for ai in range(d):
            a = int(adj[ai])
            if is_low[a] and a < v:
                continue
            for bi in range(ai + 1, d):
                b = int(adj[bi])
                if is_low[b] and b < v:
                    continue
                if _has_edge(indptr, indices, a, b):
                    out.append((v, a, b))
                    if len(out) >= cap:
                        return out, True
    return out, False


def stage1_high_scan(indptr, indices, edges_u, edges_v, is_high, cap):
    """Triangles with at least one high-degree node, each exactly once
    (attributed to its smallest high-degree corner). edges_u/v list every
    edge once with u < v."""
    out = []
    n = len(indptr) - 1
    for h in range(n):
        if not is_high[h]:
            continue
        for a, b in zip(edges_u, edges_v):
            a, b = int(a), int(b)
            if a == h or b == h:
                continue
            if (is_high[a] and a < h) or (is_high[b] and b < h):
                continue
            if _has_edge(indptr, indices, h, a) and _has_edge(indptr, indices, h, b):
                out.append((h, a, b))
                if len(out) >= cap:
                    return out, True
    return out, False


# -- convolution 3XOR ------------------------------------------------------

def c3xor_scan(vals, present):
    """Ordered pair scan (i = j allowed); skips pairs touching an absent
    cell. vals: (n, w) uint64; present: uint8 mask."""
    n = vals.shape[0]
    for i in range(n):
        if not present[i]:
            continue
        vi = vals[i]
        for j in range(n):
            k = i ^ j
            if not present[j] or not present[k]:
                continue
            if ((vi ^ vals[j]) == vals[k]).all():
                return (i, j)
    return None


# -- 6SUM over Z3^t --------------------------------------------------------

def six_sum_mitm(mat):
    """Meet-in-the-middle over index triples of a (n, t) uint8 matrix.

    Finds six distinct indices whose rows sum to zero mod 3. Any zero-sum
    6-set splits into its 3 smallest and 3 largest indices, so the table
    stores, per triple-sum value, the triple maximizing its smallest
    index, and each query only needs that one candidate.
    """
    n, t = mat.shape
    if n < 6:
        return None
    rows = [tuple(int(x) for x in mat[i]) for i in range(n)]
    table = {}
    for i in range(n - 2):
        ri = rows[i]
        for j in range(i + 1, n - 1):
            rij = tuple((a + b) % 3 for a, b in zip(ri, rows[j]))
            for k in range(j + 1, n):
                key = tuple((a + b) % 3 for a, b in zip(rij, rows[k]))
                cur = table.get(key)
                if cur is None or i > cur[0]:
                    table[key] = (i, j, k)
    for i in range(n - 2):
        ri = rows[i]
        for j in range(i + 1, n - 1):
            rij = tuple((a + b) % 3 for a, b in zip(ri, rows[j]))
            for k in range(j + 1, n):
                need = tuple((-(a + b)) % 3 for a, b in zip(rij, rows[k]))
                cand = table.get(need)
                if cand is not None and cand[0] > k:
                    return (i, j, k) + cand
    return None


# -- Walsh-Hadamard --------------------------------------------------------

def wht_inplace(arr):
    """In-place Walsh-Hadamard transform of an int64 vector of length 2^l.

    Vectorized with numpy reshapes; exact integer arithmetic.
    """
    n = arr.shape[0]
    h = 1
    while h < n:
        view = arr.reshape(-1, 2 * h)
        a = view[:, :h].copy()
        b = view[:, h:]
        view[:, :h] = a + b
        view[:, h:] = a - b
        h *= 2
    return arr


# -- GF(2^s) powering generator --------------------------------------------

def _gf_mul(a, b, s, poly):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> s:
            a ^= poly
    return r


def smallbias_fill(x, y, s, poly, n):
    """Output bits <x^i, y> for i = 0..n-1 (x^0 = 1 regardless of x)."""
    out = np.empty(n, dtype=np.uint8)
    cur = 1
    for i in range(n):
        out[i] = (cur & y).bit_count() & 1
        cur = _gf_mul(cur, x, s, poly)
    return out


# -- linear xor hashing ----------------------------------------------------

def hash_apply_batch(key_words, vec_words):
    """Hash every row of vec_words with r <= 64 keys; returns uint64[n].

    Output bit j of row v is the parity of popcount(key_j AND v).
    """
    r = key_words.shape[0]
    n = vec_words.shape[0]
    keys = [[int(w) for w in key_words[j]] for j in range(r)]
    out = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        row = [int(w) for w in vec_words[i]]
        h = 0
        for j in range(r):
            p = 0
            kj = keys[j]
            for wi in range(len(row)):
                p ^= (kj[wi] & row[wi]).bit_count() & 1
            h |= p << j
        out[i] = h
    return out
