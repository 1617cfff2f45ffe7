"""Length preprocessing, 3XOR <-> convolution-3XOR both ways, the integer
convolution variant, and the reduction from convolution-3XOR to triangle
listing.

Conventions used throughout:

  - A C3xorArray cell index concatenates as value-then-tag or half-split
    indices; all concatenations are MSB-first, i.e. a ∘ b = (a << |b|) | b.
  - Absent cells never participate: solvers skip them, decoded witnesses
    touching one are rejected, and padding an array to a square power of
    two adds only absent cells, so it cannot create witnesses.
  - In the listing graph every cell needs a hash value to keep the edge
    count exactly 3n^1.5 ("the pair (a, b_h) determines x"); absent cells
    get an index-derived pseudo-random surrogate so they behave like
    uniform noise in the false-pair statistics.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import prand, solvers
from .core import ABSENT, BitVectorSet, C3xorArray, Graph, Triangle, TripartiteGraph
from .prand import XorHashKeys, hash_apply, hash_apply_many, sample_hash
from .solvers import Witness3, WitnessC3xor

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BucketIndex:
    """Hash buckets over a vector set; per-bucket element lists keep
    insertion (input) order. overloaded_threshold is the load above which
    an element is handled by direct scanning instead of bucketed search."""

    keys: XorHashKeys
    buckets: tuple[tuple[int, ...], ...]
    overloaded_threshold: int

    @property
    def bucket_count(self) -> int:
        return len(self.buckets)

    def overloaded(self) -> list[int]:
        """Indices of elements living in buckets over the threshold."""
        out = []
        for b in self.buckets:
            if len(b) > self.overloaded_threshold:
                out.extend(b)
        return sorted(out)


def build_bucket_index(keys: XorHashKeys, vectors: Sequence[int],
                       threshold: int) -> BucketIndex:
    r = keys.output_width
    hashed = hash_apply_many(keys, list(vectors))
    buckets: list[list[int]] = [[] for _ in range(1 << r)]
    for i, h in enumerate(hashed):
        buckets[int(h)].append(i)
    return BucketIndex(keys, tuple(tuple(b) for b in buckets), threshold)


# ---------------------------------------------------------------------------
# length preprocessing

def reduce_length(S: BitVectorSet, seed: int = 0):
    """Hash the vectors down to 3 lg n bits.

    Linearity preserves every solution; the keys are resampled until the
    hash is injective on S so the output is again a valid distinct-vector
    instance. Callers verify any claimed solution against the original
    vectors and resample on a spurious one (Las Vegas). Returns
    (reduced set, keys or None when the input was already short).
    """
    n = len(S)
    target = 3 * max(1, (max(n, 2) - 1).bit_length())
    if S.width <= target:
        return S, None
    rng = random.Random(seed)
    for _ in range(64):
        keys = sample_hash(S.width, target, rng.getrandbits(48))
        hashed = [hash_apply(keys, v) for v in S.vectors]
        if len(set(hashed)) == n:
            return BitVectorSet(tuple(hashed), target), keys
    raise RuntimeError("could not find an injective length-reducing hash")


def solve_3xor_with_length_reduction(S: BitVectorSet, solver: Callable,
                                     seed: int = 0,
                                     retries: int = 7) -> Optional[Witness3]:
    """Run a 3XOR solver on the length-reduced instance, verifying any
    witness against the original vectors (hashing can merge non-solutions
    into zero triples but never hides a real one, so a no-answer stands).
    Spurious witnesses trigger a key resample."""
    rng = random.Random(seed)
    for _ in range(max(1, retries)):
        reduced, keys = reduce_length(S, rng.getrandbits(48))
        wit = solver(reduced)
        if wit is None:
            return None
        if solvers.verify_witness3_xor(S.vectors, wit):
            return Witness3(*sorted(wit))
        if keys is None:
            return None  # nothing was hashed, so no spurious zeros exist
    log.warning("length-reduction retries exhausted without a verified "
                "witness")
    return None


# ---------------------------------------------------------------------------
# 3XOR via convolution-3XOR

def _direct_participation(vectors: list[int], idx: int) -> Optional[Witness3]:
    """Does element idx belong to some zero triple? O(n) scan."""
    index = {}
    for i, v in enumerate(vectors):
        index.setdefault(v, i)
    x = vectors[idx]
    for j, y in enumerate(vectors):
        if j == idx:
            continue
        k = index.get(x ^ y)
        if k is not None and k != idx and k != j:
            return Witness3(*sorted((idx, j, k)))
    return None


def solve_3xor_via_c3xor(S: BitVectorSet,
                         c3xor_solver: Optional[Callable] = None,
                         alpha: float = 0.25, seed: int = 0,
                         repeats: int = 1) -> Optional[Witness3]:
    """Solve 3XOR through a convolution-3XOR solver.

    Elements are hashed to r = (1 - alpha) lg n bits. Elements in buckets
    loaded over 3n/R are checked directly (their expected number is at
    most R). For every position triple (i, j, k) an array of 4R cells is
    filled: the i-th element of its bucket h goes to cell h∘01, the j-th
    to h∘10, the k-th to h∘11, everything else absent. Tag bits force
    01 ^ 10 = 11, and linearity makes h(x)∘01 ^ h(y)∘10 = h(z)∘11 exactly
    when h(z) = h(x) ^ h(y), so a solution at positions (i, j, k) of its
    buckets appears as an array witness for that triple.

    The zero vector never joins a distinct-index triple (0^y^z = 0 forces
    y = z) and is excluded up front, which also makes every decoded array
    witness genuine. With an exact inner solver the reduction is exact;
    `repeats` re-runs an erring solver before its no-answer is trusted.
    """
    if c3xor_solver is None:
        c3xor_solver = solvers.solve_c3xor_bruteforce
    pre = solvers._dup_prepass_xor(list(S.vectors))
    if pre is not None:
        return pre
    vectors = list(S.vectors)
    keep = [i for i, v in enumerate(vectors) if v != 0]
    work = [vectors[i] for i in keep]
    n = len(work)
    if n < 3:
        return None
    r = max(1, round((1 - alpha) * max(n, 2).bit_length()))
    R = 1 << r
    tau = -(-3 * n // R)  # ceil(3n/R)
    keys = sample_hash(S.width, r, seed)
    bucket_index = build_bucket_index(keys, work, tau)

    for e in bucket_index.overloaded():
        wit = _direct_participation(work, e)
        if wit is not None:
            return Witness3(*sorted(keep[p] for p in wit))

    usable = [b for b in bucket_index.buckets if 0 < len(b) <= tau]
    if not usable:
        return None
    max_load = max(len(b) for b in usable)
    width = S.width
    arr_n = 4 * R

    def cell(h: int, tag: int) -> int:
        return (h << 2) | tag

    for i in range(min(tau, max_load)):
        for j in range(min(tau, max_load)):
            for k in range(min(tau, max_load)):
                entries: list[Optional[int]] = [ABSENT] * arr_n
                back: dict[int, int] = {}
                filled = False
                for h, bucket in enumerate(bucket_index.buckets):
                    if len(bucket) > tau:
                        continue
                    for pos, tag in ((i, 1), (j, 2), (k, 3)):
                        if pos < len(bucket):
                            c = cell(h, tag)
                            entries[c] = work[bucket[pos]]
                            back[c] = bucket[pos]
                            filled = True
                if not filled:
                    continue
                arr = C3xorArray(tuple(entries), width)
                for _ in range(max(1, repeats)):
                    wit = c3xor_solver(arr)
                    if wit is None:
                        break
                    p, q = wit
                    ids = (back.get(p), back.get(q), back.get(p ^ q))
                    if None not in ids and len(set(ids)) == 3 and \
                            work[ids[0]] ^ work[ids[1]] ^ work[ids[2]] == 0:
                        return Witness3(*sorted(keep[e] for e in ids))
    return None


# ---------------------------------------------------------------------------
# convolution problems via their flat versions

def solve_c3xor_via_3xor(A: C3xorArray,
                         solver_3xor: Optional[Callable] = None
                         ) -> Optional[WitnessC3xor]:
    """Exact reduction: run 3XOR on {A[i] ∘ i}; index parts of a zero
    triple xor to zero, so the triple decodes to A[i]^A[j] = A[i^j].

    Degenerate witnesses (i = j, or an index 0) all require A[0] = 0 and
    are answered by a direct pre-check, since their flat triples would
    repeat an element."""
    if solver_3xor is None:
        solver_3xor = solvers.solve_3xor_quadratic
    if A.entries[0] == 0:
        return WitnessC3xor(0, 0)
    s = A.index_width
    present = [i for i, v in enumerate(A.entries) if v is not ABSENT]
    vecs = [(A.entries[i] << s) | i for i in present]
    wit = solver_3xor(vecs, A.value_width + s)
    if wit is None:
        return None
    ids = sorted(present[p] for p in wit)
    i, j, k = ids
    assert i ^ j == k and A.entries[i] ^ A.entries[j] == A.entries[k]
    return WitnessC3xor(i, j)


def solve_c3sum_via_3sum(A: Sequence[int],
                         solver_3sum: Optional[Callable] = None
                         ) -> Optional[tuple[int, int]]:
    """Integer convolution via 3SUM on {A[i]∘0∘i} ∪ {-(A[i]∘0∘i)}.

    The spare bit between value and index absorbs the one possible carry
    of the index sum, so the value and index parts of any zero triple
    balance independently. Sign patterns are always two-against-one and
    decode to A[i] + A[j] = A[i+j]. Pairs the signed multiset cannot
    express (i = j, and the A[0] = 0 family) are answered by pre-scans.
    """
    if solver_3sum is None:
        solver_3sum = solvers.solve_3sum_quadratic
    A = [int(v) for v in A]
    n = len(A)
    if n == 0:
        return None
    if any(v < 0 for v in A):
        raise ValueError("entries must be nonnegative")
    if A[0] == 0:
        return (0, 0)
    for i in range(n):
        if 2 * i < n and 2 * A[i] == A[2 * i]:
            return (i, i)
    s = max(1, (n - 1).bit_length())
    enc = [(A[i] << (s + 1)) | i for i in range(n)]
    values = enc + [-e for e in enc]
    wit = solver_3sum(values)
    if wit is None:
        return None
    pos = [p for p in wit if p < n]
    neg = [p - n for p in wit if p >= n]
    if len(pos) == 1:
        pos, neg = neg, pos
    i, j = sorted(pos)
    k = neg[0]
    assert i + j == k and A[i] + A[j] == A[k]
    return (i, j)


# ---------------------------------------------------------------------------
# convolution-3XOR via triangle listing

@dataclass(frozen=True)
class CxorGraph:
    """Tripartite listing graph for a convolution-3XOR array.

    Parts: n nodes (a); sqrt(n)*R nodes (b_h, x); sqrt(n)*R nodes
    (b_l, y), R = 2^s = sqrt(n). With b = b_h ∘ b_l the pair (a, b)
    stands for i = a ^ (b_h ∘ 0^s), j = a ^ b_l (so i ^ j = b), and the
    triangles are exactly the pairs with
    hash(A[i]) ^ hash(A[j]) = hash(A[b]).
    """

    graph: TripartiteGraph
    keys: XorHashKeys
    cell_hash: tuple[int, ...]
    n: int
    half_width: int

    @property
    def bucket_count(self) -> int:
        return 1 << self.half_width

    def node_kind(self, node: int):
        """('a', a) or ('bh', b_h, x) or ('bl', b_l, y)."""
        n, R = self.n, self.bucket_count
        if node < n:
            return ("a", node)
        if node < 2 * n:
            off = node - n
            return ("bh", off // R, off % R)
        off = node - 2 * n
        return ("bl", off // R, off % R)

    def decode_triangle(self, tri: Triangle) -> tuple[int, int]:
        """Triangle -> the (a, b) pair it encodes."""
        a = bh = bl = None
        for node in tri.nodes:
            kind = self.node_kind(node)
            if kind[0] == "a":
                a = kind[1]
            elif kind[0] == "bh":
                bh = kind[1]
            else:
                bl = kind[1]
        if a is None or bh is None or bl is None:
            raise ValueError("triangle does not span the three parts")
        return a, (bh << self.half_width) | bl

    def pair_to_cells(self, a: int, b: int) -> tuple[int, int, int]:
        """(a, b) -> the array cells (i, j, b) it tests."""
        s = self.half_width
        bh, bl = b >> s, b & ((1 << s) - 1)
        return a ^ (bh << s), a ^ bl, b


def _padded(A: C3xorArray) -> C3xorArray:
    n = len(A)
    s0 = max(1, (n - 1).bit_length())
    if s0 % 2:
        s0 += 1
    return A.padded_to(1 << s0) if (1 << s0) != n else A


def _cell_hashes(A: C3xorArray, keys: XorHashKeys, absent_seed: int) -> list[int]:
    rng = random.Random(absent_seed)
    per_index = [rng.getrandbits(keys.output_width) if v is ABSENT else 0
                 for v in A.entries]
    present_idx = [i for i, v in enumerate(A.entries) if v is not ABSENT]
    if present_idx:
        hashed = hash_apply_many(keys, [A.entries[i] for i in present_idx])
        for i, h in zip(present_idx, hashed):
            per_index[i] = int(h)
    return per_index


def build_cxor_graph(A: C3xorArray, keys: XorHashKeys,
                     absent_seed: int = 0) -> CxorGraph:
    """The 3n^1.5-edge tripartite graph whose triangles are exactly the
    candidate pairs; n is padded to a square power of two first."""
    A = _padded(A)
    n = len(A)
    s = A.index_width // 2
    R = 1 << s
    if keys.output_width != s:
        raise ValueError(f"keys must produce {s} output bits for n={n}")
    if keys.input_width != A.value_width:
        raise ValueError("key input width must match the array value width")
    ch = _cell_hashes(A, keys, absent_seed)
    adj: list[list[int]] = [[] for _ in range(3 * n)]

    def connect(u, v):
        adj[u].append(v)
        adj[v].append(u)

    for a in range(n):
        for bh in range(R):
            x = ch[a ^ (bh << s)]
            connect(a, n + bh * R + x)
        for bl in range(R):
            y = ch[a ^ bl]
            connect(a, 2 * n + bl * R + y)
    for b in range(n):
        bh, bl = b >> s, b & (R - 1)
        hb = ch[b]
        for x in range(R):
            connect(n + bh * R + x, 2 * n + bl * R + (hb ^ x))
    g = TripartiteGraph(tuple(tuple(sorted(a_)) for a_ in adj),
                        tuple(range(3 * n)),
                        parts=((0, n), (n, 2 * n), (2 * n, 3 * n)))
    return CxorGraph(g, keys, tuple(ch), n, s)


def is_genuine_pair(A: C3xorArray, a: int, b: int, half_width: int) -> bool:
    s = half_width
    i, j = a ^ ((b >> s) << s), a ^ (b & ((1 << s) - 1))
    vi, vj, vb = A.entries[i], A.entries[j], A.entries[b]
    return vi is not ABSENT and vj is not ABSENT and vb is not ABSENT \
        and vi ^ vj == vb


def count_star_pairs(cx: CxorGraph, A: Optional[C3xorArray] = None):
    """Over all n^2 pairs (a, b): how many satisfy the hashed relation,
    split into (genuine, false) when the array is supplied."""
    n, s = cx.n, cx.half_width
    ch = np.array(cx.cell_hash, dtype=np.int64)
    a = np.arange(n, dtype=np.int64)[:, None]
    b = np.arange(n, dtype=np.int64)[None, :]
    high = (b >> s) << s
    low = b & ((1 << s) - 1)
    star = (ch[a ^ high] ^ ch[a ^ low]) == ch[b]
    if A is None:
        return int(star.sum())
    A = _padded(A)
    present = np.array([v is not ABSENT for v in A.entries])
    vals = np.array([0 if v is ABSENT else v for v in A.entries], dtype=object)
    genuine = (present[a ^ high] & present[a ^ low] & present[b]) & \
        ((vals[a ^ high] ^ vals[a ^ low]) == vals[b])
    return int((star & genuine).sum()), int((star & ~genuine).sum())


def solve_c3xor_via_listing(A: C3xorArray, lister: Optional[Callable] = None,
                            retries: int = 7, seed: int = 0
                            ) -> Optional[WitnessC3xor]:
    """Decide convolution-3XOR by listing up to m = 3n^1.5 triangles of
    the candidate graph and checking each decoded pair against the array.

    If the lister returns fewer than m triangles and none is genuine, all
    candidate pairs were examined and the answer is an exact no. If it
    returns m without a genuine one (the unlucky-keys event, constant
    probability), the keys are resampled, up to `retries` times.
    """
    if lister is None:
        lister = solvers.list_all_triangles
    Ap = _padded(A)
    n = len(Ap)
    s = Ap.index_width // 2
    rng = random.Random(seed)
    for attempt in range(max(1, retries)):
        keys = sample_hash(Ap.value_width, s, rng.getrandbits(48))
        cx = build_cxor_graph(Ap, keys, absent_seed=rng.getrandbits(48))
        m = cx.graph.edge_count
        tris = lister(cx.graph, m)
        for tri in tris:
            a, b = cx.decode_triangle(tri)
            if is_genuine_pair(Ap, a, b, s):
                i, j, _ = cx.pair_to_cells(a, b)
                return WitnessC3xor(i, j)
        if len(tris) < m:
            return None
        log.info("listing attempt %d returned the full cap with no genuine "
                 "pair; resampling keys", attempt)
    log.warning("retries exhausted; reporting no-solution with confidence "
                ">= 1 - 2^-%d", retries)
    return None
