# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the hot inner loops, one C function per pure twin.

Signatures and returned witnesses match triweb._kernels._pykern exactly;
the parity test suite runs both backends on the same inputs.
"""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef extern from *:
    """
    static inline int popcount64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    #endif
    }
    """
    int popcount64(unsigned long long x) nogil

BACKEND_NAME = "compiled"


# -- 3SUM ------------------------------------------------------------------

def threesum_pairscan(vals):
    cdef int64_t[::1] v = np.ascontiguousarray(vals, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, j, k
    cdef int64_t s
    for k in range(n):
        i = 0
        j = n - 1
        while i < j:
            if i == k:
                i += 1
                continue
            if j == k:
                j -= 1
                continue
            s = v[i] + v[j] + v[k]
            if s == 0:
                return (i, j, k)
            if s < 0:
                i += 1
            else:
                j -= 1
    return None


# -- 3XOR ------------------------------------------------------------------

cdef inline int _row_cmp(const uint64_t* a, const uint64_t* b, Py_ssize_t w) nogil:
    cdef Py_ssize_t t
    for t in range(w):
        if a[t] < b[t]:
            return -1
        if a[t] > b[t]:
            return 1
    return 0


cdef Py_ssize_t _row_bsearch(const uint64_t[:, ::1] rows, const uint64_t* key) nogil:
    cdef Py_ssize_t lo = 0, hi = rows.shape[0], mid
    cdef int c
    cdef Py_ssize_t w = rows.shape[1]
    while lo < hi:
        mid = (lo + hi) // 2
        c = _row_cmp(&rows[mid, 0], key, w)
        if c == 0:
            return mid
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return -1


def threexor_pairscan(rows):
    """rows must be lexicographically sorted distinct (n, w) uint64."""
    cdef uint64_t[:, ::1] r = np.ascontiguousarray(rows, dtype=np.uint64)
    cdef Py_ssize_t n = r.shape[0], w = r.shape[1]
    cdef Py_ssize_t i, j, k, t
    cdef uint64_t buf[64]
    if w > 64:
        raise ValueError("row width over 64 words")
    for i in range(n):
        for j in range(i + 1, n):
            for t in range(w):
                buf[t] = r[i, t] ^ r[j, t]
            k = _row_bsearch(r, buf)
            if k >= 0 and k != i and k != j:
                return (i, j, k)
    return None


# -- triangles -------------------------------------------------------------

def triangle_detect(optr, oidx):
    cdef int64_t[::1] p = np.ascontiguousarray(optr, dtype=np.int64)
    cdef int32_t[::1] ix = np.ascontiguousarray(oidx, dtype=np.int32)
    cdef Py_ssize_t n = p.shape[0] - 1
    cdef Py_ssize_t u, vi
    cdef int64_t a, b, ea, eb
    cdef int32_t v
    for u in range(n):
        for vi in range(p[u], p[u + 1]):
            v = ix[vi]
            a = p[u]; ea = p[u + 1]
            b = p[v]; eb = p[v + 1]
            while a < ea and b < eb:
                if ix[a] == ix[b]:
                    return (u, <object>v, <object>ix[a])
                elif ix[a] < ix[b]:
                    a += 1
                else:
                    b += 1
    return None


def triangle_list_forward(optr, oidx, cap):
    cdef int64_t[::1] p = np.ascontiguousarray(optr, dtype=np.int64)
    cdef int32_t[::1] ix = np.ascontiguousarray(oidx, dtype=np.int32)
    cdef Py_ssize_t n = p.shape[0] - 1
    cdef Py_ssize_t u, vi
    cdef int64_t a, b, ea, eb
    cdef int32_t v
    cdef Py_ssize_t limit = cap
    out = []
    for u in range(n):
        for vi in range(p[u], p[u + 1]):
            v = ix[vi]
            a = p[u]; ea = p[u + 1]
            b = p[v]; eb = p[v + 1]
            while a < ea and b < eb:
                if ix[a] == ix[b]:
                    out.append((u, <object>v, <object>ix[a]))
                    if len(out) >= limit:
                        return out, True
                    a += 1
                    b += 1
                elif ix[a] < ix[b]:
                    a += 1
                else:
                    b += 1
    return out, False


cdef inline bint _csr_has_edge(const int64_t[::1] p, const int32_t[::1] ix,
                               Py_ssize_t u, int32_t v) nogil:
    cdef int64_t lo = p[u], hi = p[u + 1], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if ix[mid] == v:
            return True
        if ix[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return False


def triangle_phase1_lowdeg(indptr, indices, is_low, cap):
    cdef int64_t[::1] p = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int32_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef uint8_t[::1] low = np.ascontiguousarray(is_low, dtype=np.uint8)
    cdef Py_ssize_t n = p.shape[0] - 1
    cdef Py_ssize_t v, ai, bi
    cdef int32_t a, b
    cdef Py_ssize_t limit = cap
    out = []
    for v in range(n):
        if not low[v]:
            continue
        for ai in range(p[v], p[v + 1]):
            a = ix[ai]
            if low[a] and a < v:
                continue
            for bi in range(ai + 1, p[v + 1]):
                b = ix[bi]
                if low[b] and b < v:
                    continue
                if _csr_has_edge(p, ix, a, b):
                    out.append((v, <object>a, <object>b))
                    if len(out) >= limit:
                        return out, True
    return out, False


def stage1_high_scan(indptr, indices, edges_u, edges_v, is_high, cap):
    cdef int64_t[::1] p = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int32_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef int32_t[::1] eu = np.ascontiguousarray(edges_u, dtype=np.int32)
    cdef int32_t[::1] ev = np.ascontiguousarray(edges_v, dtype=np.int32)
    cdef uint8_t[::1] high = np.ascontiguousarray(is_high, dtype=np.uint8)
    cdef Py_ssize_t n = p.shape[0] - 1
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t h, e
    cdef int32_t a, b
    cdef Py_ssize_t limit = cap
    out = []
    for h in range(n):
        if not high[h]:
            continue
        for e in range(m):
            a = eu[e]
            b = ev[e]
            if a == h or b == h:
                continue
            if (high[a] and a < h) or (high[b] and b < h):
                continue
            if _csr_has_edge(p, ix, h, a) and _csr_has_edge(p, ix, h, b):
                out.append((h, <object>a, <object>b))
                if len(out) >= limit:
                    return out, True
    return out, False


# -- convolution 3XOR ------------------------------------------------------

def c3xor_scan(vals, present):
    cdef uint64_t[:, ::1] v = np.ascontiguousarray(vals, dtype=np.uint64)
    cdef uint8_t[::1] pr = np.ascontiguousarray(present, dtype=np.uint8)
    cdef Py_ssize_t n = v.shape[0], w = v.shape[1]
    cdef Py_ssize_t i, j, k, t
    cdef bint ok
    for i in range(n):
        if not pr[i]:
            continue
        for j in range(n):
            k = i ^ j
            if not pr[j] or not pr[k]:
                continue
            ok = True
            for t in range(w):
                if (v[i, t] ^ v[j, t]) != v[k, t]:
                    ok = False
                    break
            if ok:
                return (i, j)
    return None


# -- 6SUM over Z3^t --------------------------------------------------------

def six_sum_mitm(mat):
    cdef uint8_t[:, ::1] m = np.ascontiguousarray(mat, dtype=np.uint8)
    cdef Py_ssize_t n = m.shape[0], t = m.shape[1]
    if n < 6:
        return None
    cdef Py_ssize_t i, j, k, d
    pair_np = np.empty(t, dtype=np.uint8)
    trip_np = np.empty(t, dtype=np.uint8)
    cdef uint8_t[::1] pair = pair_np
    cdef uint8_t[::1] trip = trip_np
    table = {}
    cdef bytes key
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for d in range(t):
                pair[d] = (m[i, d] + m[j, d]) % 3
            for k in range(j + 1, n):
                for d in range(t):
                    trip[d] = (pair[d] + m[k, d]) % 3
                key = bytes(trip_np)
                cur = table.get(key)
                if cur is None or i > cur[0]:
                    table[key] = (i, j, k)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for d in range(t):
                pair[d] = (m[i, d] + m[j, d]) % 3
            for k in range(j + 1, n):
                for d in range(t):
                    trip[d] = (3 - (pair[d] + m[k, d]) % 3) % 3
                key = bytes(trip_np)
                cand = table.get(key)
                if cand is not None and cand[0] > k:
                    return (i, j, k) + cand
    return None


# -- Walsh-Hadamard --------------------------------------------------------

def wht_inplace(arr):
    cdef int64_t[::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef int64_t x, y
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    x = a[j]
                    y = a[j + h]
                    a[j] = x + y
                    a[j + h] = x - y
                i += 2 * h
            h *= 2
    return arr


# -- GF(2^s) powering generator --------------------------------------------

cdef inline uint64_t _gf_mul(uint64_t a, uint64_t b, int s, uint64_t poly) nogil:
    cdef uint64_t r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> s:
            a ^= poly
    return r


def smallbias_fill(x, y, s, poly, n):
    out_np = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_np
    cdef uint64_t cur = 1, xx = x, yy = y, pp = poly
    cdef int ss = s
    cdef Py_ssize_t i, nn = n
    with nogil:
        for i in range(nn):
            out[i] = popcount64(cur & yy) & 1
            cur = _gf_mul(cur, xx, ss, pp)
    return out_np


# -- linear xor hashing ----------------------------------------------------

def hash_apply_batch(key_words, vec_words):
    cdef uint64_t[:, ::1] kw = np.ascontiguousarray(key_words, dtype=np.uint64)
    cdef uint64_t[:, ::1] vw = np.ascontiguousarray(vec_words, dtype=np.uint64)
    cdef Py_ssize_t r = kw.shape[0], n = vw.shape[0], w = vw.shape[1]
    if r > 64:
        raise ValueError("kernel limited to 64 output bits")
    out_np = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_np
    cdef Py_ssize_t i, j, wi
    cdef int p
    cdef uint64_t h
    with nogil:
        for i in range(n):
            h = 0
            for j in range(r):
                p = 0
                for wi in range(w):
                    p ^= popcount64(kw[j, wi] & vw[i, wi]) & 1
                h |= (<uint64_t>p) << j
            out[i] = h
    return out_np
