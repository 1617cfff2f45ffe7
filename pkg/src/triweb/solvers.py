"""Baseline and oracle solvers for every problem in the reduction web.

These are standalone deliverables and also the ground truth the reduction
tests compare against. Every solver accepts either the typed instance from
triweb.core or the equivalent raw data, because the reductions feed them
indexed multisets (duplicate values with distinct indices are meaningful
there).

Witness conventions: all witnesses are tuples of pairwise-distinct indices
into the input sequence, in ascending order, and always satisfy the
defining identity (checked by the verify_* helpers).
"""
from __future__ import annotations

from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .core import BitVectorSet, C3xorArray, Graph, IntegerSet, Triangle, Z3VectorSet

INT64_SAFE = 1 << 61  # |a|+|b|+|c| stays inside int64


class Witness3(NamedTuple):
    i: int
    j: int
    k: int


class WitnessC3xor(NamedTuple):
    i: int
    j: int


def _int_values(S: Union[IntegerSet, Sequence[int]]) -> list[int]:
    return list(S.values) if isinstance(S, IntegerSet) else [int(v) for v in S]


def _vec_values(S: Union[BitVectorSet, Sequence[int]],
                width: Optional[int] = None) -> tuple[list[int], int]:
    if isinstance(S, BitVectorSet):
        return list(S.vectors), S.width
    vals = [int(v) for v in S]
    if width is None:
        width = max((v.bit_length() for v in vals), default=1) or 1
    return vals, width


def verify_witness3_sum(values, w: Witness3) -> bool:
    i, j, k = w
    return len({i, j, k}) == 3 and values[i] + values[j] + values[k] == 0


def verify_witness3_xor(vectors, w: Witness3) -> bool:
    i, j, k = w
    return len({i, j, k}) == 3 and vectors[i] ^ vectors[j] ^ vectors[k] == 0


def _dup_prepass_sum(values) -> Optional[Witness3]:
    """Solutions that reuse a value: (x, x, -2x) or (0, 0, 0)."""
    by_val: dict[int, list[int]] = {}
    for idx, v in enumerate(values):
        by_val.setdefault(v, []).append(idx)
    for v, idxs in by_val.items():
        if len(idxs) < 2:
            continue
        if v == 0 and len(idxs) >= 3:
            return Witness3(*idxs[:3])
        other = by_val.get(-2 * v)
        if other is not None and -2 * v != v:
            return Witness3(*sorted((idxs[0], idxs[1], other[0])))
    return None


def _dup_prepass_xor(vectors) -> Optional[Witness3]:
    """Solutions that reuse a value: (x, x, 0) or (0, 0, 0)."""
    by_val: dict[int, list[int]] = {}
    for idx, v in enumerate(vectors):
        by_val.setdefault(v, []).append(idx)
    zeros = by_val.get(0, [])
    for v, idxs in by_val.items():
        if len(idxs) < 2:
            continue
        if v == 0:
            if len(idxs) >= 3:
                return Witness3(*idxs[:3])
            continue
        if zeros:
            return Witness3(*sorted((idxs[0], idxs[1], zeros[0])))
    return None


def solve_3sum_quadratic(S) -> Optional[Witness3]:
    """Sort-then-two-pointer 3SUM; O(n^2 + n log n) worst case.

    Returns some valid witness iff one exists.
    """
    values = _int_values(S)
    n = len(values)
    if n < 3:
        return None
    pre = _dup_prepass_sum(values)
    if pre is not None:
        return pre
    order = sorted(range(n), key=values.__getitem__)
    svals = [values[i] for i in order]
    if max(abs(v) for v in svals) < INT64_SAFE:
        hit = _kernels.threesum_pairscan(np.array(svals, dtype=np.int64))
    else:
        hit = _kernels.get_backend("pure").threesum_pairscan(svals)
    if hit is None:
        return None
    i, j, k = (order[p] for p in hit)
    return Witness3(*sorted((i, j, k)))


def _pack_words(vals: list[int], width: int) -> np.ndarray:
    """Vectors as (n, w) uint64 word rows, most significant word first,
    so lexicographic row order equals numeric order."""
    w = max(1, (width + 63) // 64)
    mat = np.empty((len(vals), w), dtype=np.uint64)
    mask = (1 << 64) - 1
    for r, v in enumerate(vals):
        for c in range(w):
            mat[r, c] = (v >> (64 * (w - 1 - c))) & mask
    return mat


def solve_3xor_quadratic(S, width: Optional[int] = None) -> Optional[Witness3]:
    """Pair scan with hash-index membership; O(n^2) after an O(n log n)
    repeated-value pre-pass.

    A triple must use three distinct indices; solutions through a repeated
    value necessarily look like (x, x, 0) and are caught by the pre-pass.
    """
    vectors, width = _vec_values(S, width)
    n = len(vectors)
    if n < 3:
        return None
    pre = _dup_prepass_xor(vectors)
    if pre is not None:
        return pre
    mat = _pack_words(vectors, width)
    if mat.shape[1] <= 64:
        perm = np.lexsort(tuple(mat[:, c] for c in range(mat.shape[1] - 1, -1, -1)))
        hit = _kernels.threexor_pairscan(np.ascontiguousarray(mat[perm]))
        if hit is None:
            return None
        i, j, k = (int(perm[p]) for p in hit)
    else:
        index = {v: i for i, v in enumerate(vectors)}
        hit = None
        for i in range(n):
            for j in range(i + 1, n):
                k = index.get(vectors[i] ^ vectors[j])
                if k is not None and k != i and k != j:
                    hit = (i, j, k)
                    break
            if hit:
                break
        if hit is None:
            return None
        i, j, k = hit
    return Witness3(*sorted((i, j, k)))


def wht_ordered_triple_count(S, width_cap: int = 24) -> int:
    """Number of ordered triples of distinct set elements xoring to zero,
    via the Walsh-Hadamard transform of the set indicator.

    The raw transform counts all ordered triples (x, y, z) in S^3 with
    x^y^z = 0; triples with a repeated coordinate force the third to be 0,
    contributing 3n - 2 exactly when 0 is in S, which is subtracted.
    """
    vectors, width = _vec_values(S, None)
    if width > width_cap:
        raise ValueError(f"width {width} over the transform cap {width_cap}")
    n = len(vectors)
    size = 1 << width
    f = np.zeros(size, dtype=np.int64)
    f[np.array(vectors, dtype=np.int64)] = 1
    _kernels.wht_inplace(f)
    if size * n ** 3 < (1 << 62):
        total = int(np.sum(f.astype(np.int64) ** 3))
    else:
        total = sum(int(x) ** 3 for x in f)
    assert total % size == 0
    total //= size
    if 0 in vectors:
        total -= 3 * n - 2
    return total


def solve_3xor_wht(S, width_cap: int = 24) -> Optional[Witness3]:
    """3XOR via the transform-based triple count; witness recovered by a
    pair scan only when the corrected count is positive. Decision agrees
    with solve_3xor_quadratic."""
    if wht_ordered_triple_count(S, width_cap) <= 0:
        return None
    wit = solve_3xor_quadratic(S)
    assert wit is not None, "positive triple count must yield a witness"
    return wit


# ---------------------------------------------------------------------------
# triangles

def _oriented_csr(g: Graph, rank: np.ndarray):
    """CSR keeping only higher-rank neighbors (id-sorted within a node)."""
    indptr, indices = g.csr
    if len(indices) == 0:
        return np.zeros(g.node_count + 1, dtype=np.int64), indices
    src = np.repeat(np.arange(g.node_count, dtype=np.int32),
                    np.diff(indptr).astype(np.int64))
    keep = rank[indices] > rank[src]
    oidx = np.ascontiguousarray(indices[keep])
    counts = np.zeros(g.node_count, dtype=np.int64)
    np.add.at(counts, src[keep], 1)
    optr = np.zeros(g.node_count + 1, dtype=np.int64)
    np.cumsum(counts, out=optr[1:])
    return optr, oidx


def _degree_rank(g: Graph) -> np.ndarray:
    deg = np.diff(g.csr[0])
    order = np.lexsort((np.arange(g.node_count), deg))
    rank = np.empty(g.node_count, dtype=np.int64)
    rank[order] = np.arange(g.node_count)
    return rank


def detect_triangle(g: Graph) -> Optional[Triangle]:
    """Degree-split detection: each edge intersects the higher-degree-rank
    neighborhoods of its endpoints once; O(m^1.5) worst case."""
    if g.edge_count < 3:
        return None
    optr, oidx = _oriented_csr(g, _degree_rank(g))
    hit = _kernels.triangle_detect(optr, oidx)
    return None if hit is None else Triangle.of(*hit)


def list_all_triangles(g: Graph, cap: Optional[int] = None) -> list[Triangle]:
    """Two-phase sqrt(m)-degree-split enumeration of distinct triangles.

    Phase one lists triangles through a node of degree <= sqrt(m), each
    reported by its smallest low-degree corner; phase two lists triangles
    whose corners all have degree > sqrt(m) from the induced subgraph on
    those nodes. Returns min(cap, z) triangles.
    """
    if cap is None:
        cap = 1 << 62
    if cap <= 0 or g.edge_count == 0:
        return []
    indptr, indices = g.csr
    deg = np.diff(indptr)
    m = g.edge_count
    is_low = (deg <= np.sqrt(m)).astype(np.uint8)
    triples, truncated = _kernels.triangle_phase1_lowdeg(indptr, indices, is_low, cap)
    out = [Triangle.of(*t) for t in triples]
    if truncated:
        return out
    high = np.flatnonzero(is_low == 0)
    if len(high) >= 3:
        hid = {int(h): i for i, h in enumerate(high)}
        sub_adj = []
        for h in high:
            sub_adj.append(tuple(sorted(hid[int(v)] for v in g.adjacency[int(h)]
                                        if not is_low[v])))
        sub = Graph(tuple(sub_adj))
        if sub.edge_count >= 3:
            optr, oidx = _oriented_csr(sub, _degree_rank(sub))
            triples, _ = _kernels.triangle_list_forward(optr, oidx, cap - len(out))
            out.extend(Triangle.of(int(high[a]), int(high[b]), int(high[c]))
                       for a, b, c in triples)
    return out


def solve_c3xor_bruteforce(A: C3xorArray) -> Optional[WitnessC3xor]:
    """Scan all ordered pairs (i, j), i = j included, skipping pairs that
    touch an absent cell; O(n^2)."""
    n = len(A)
    present = np.array([v is not None for v in A.entries], dtype=np.uint8)
    vals = _pack_words([0 if v is None else v for v in A.entries], A.value_width)
    hit = _kernels.c3xor_scan(vals, present)
    return None if hit is None else WitnessC3xor(*hit)


def detect_4clique_bruteforce(g: Graph) -> Optional[tuple[int, int, int, int]]:
    """Enumerate triangles, then test common neighbors of each one."""
    for tri in list_all_triangles(g):
        a, b, c = tri.sorted_nodes()
        common = (g.adjacency_sets[a] & g.adjacency_sets[b] & g.adjacency_sets[c])
        for d in sorted(common - {a, b, c}):
            return tuple(sorted((a, b, c, d)))
    return None


def solve_6sum_z3(S) -> Optional[tuple[int, ...]]:
    """Meet-in-the-middle 6SUM over Z3^t: index all 3-element sums by
    value, then match each triple against the negation of its sum.
    Returns 6 distinct indices whose elements sum to the zero vector."""
    mat = S.as_matrix() if isinstance(S, Z3VectorSet) else \
        np.ascontiguousarray(np.asarray(S, dtype=np.uint8))
    if mat.shape[0] < 6:
        return None
    hit = _kernels.six_sum_mitm(mat)
    return None if hit is None else tuple(sorted(int(x) for x in hit))
