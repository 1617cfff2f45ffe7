"""Pseudorandom substrate: linear xor hashes, combinatorial designs,
almost-k-wise bit generators, and bucket-load statistics.

The generator is the classic powering construction: a seed encodes a pair
(x, y) in GF(2^s) and output bit i is the inner product <x^i, y>, giving
every nonzero parity test a bias below (n-1)/2^s. Choosing
2^s >= n / (alpha * 2^(-k/2)) makes any k output coordinates alpha-close
to uniform in statistical distance (bias-to-k-wise conversion; the
enumerable-spec test computes the distance exactly, so the constant here
cannot be silently wrong).

Field moduli are the lexicographically smallest irreducible polynomials of
each degree, found at runtime by Rabin's test and memoized.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .core import BitVectorSet


class SeedSpaceTooLarge(ValueError):
    """Full seed enumeration was requested above the configured cap."""


# ---------------------------------------------------------------------------
# linear xor hash family

@dataclass(frozen=True)
class XorHashKeys:
    """r keys of input_width bits; h(x) bit j = parity(keys[j] AND x)."""

    keys: tuple[int, ...]
    input_width: int
    output_width: int

    def __post_init__(self):
        if len(self.keys) != self.output_width:
            raise ValueError("need exactly output_width keys")
        for a in self.keys:
            if a < 0 or a >> self.input_width:
                raise ValueError("key wider than input_width")


def hash_apply(keys: XorHashKeys, x: int) -> int:
    """Linear by construction: h(x) ^ h(y) = h(x ^ y), h(0) = 0."""
    if x < 0 or x >> keys.input_width:
        raise ValueError(f"input 0x{x:x} wider than {keys.input_width} bits")
    h = 0
    for j, a in enumerate(keys.keys):
        h |= ((a & x).bit_count() & 1) << j
    return h


def hash_apply_many(keys: XorHashKeys, values: Sequence[int]) -> np.ndarray:
    """Vectorized hash of many values; returns uint64[n] (needs r <= 64)."""
    if keys.output_width > 64:
        raise ValueError("batched hashing supports at most 64 output bits")
    w = max(1, (keys.input_width + 63) // 64)
    mask = (1 << 64) - 1
    kw = np.empty((keys.output_width, w), dtype=np.uint64)
    for j, a in enumerate(keys.keys):
        for c in range(w):
            kw[j, c] = (a >> (64 * (w - 1 - c))) & mask
    vw = np.empty((len(values), w), dtype=np.uint64)
    for i, v in enumerate(values):
        if v < 0 or v >> keys.input_width:
            raise ValueError(f"input 0x{v:x} wider than {keys.input_width} bits")
        for c in range(w):
            vw[i, c] = (v >> (64 * (w - 1 - c))) & mask
    return _kernels.hash_apply_batch(kw, vw)


def sample_hash(input_width: int, output_width: int, seed: int) -> XorHashKeys:
    if input_width < 1 or output_width < 0:
        raise ValueError("need input_width >= 1 and output_width >= 0")
    rng = random.Random(seed)
    keys = tuple(rng.getrandbits(input_width) for _ in range(output_width))
    return XorHashKeys(keys, input_width, output_width)


# ---------------------------------------------------------------------------
# combinatorial designs

@dataclass(frozen=True)
class DesignFamily:
    """m equal-size subsets of [universe_size] with bounded pairwise
    intersections."""

    sets: tuple[tuple[int, ...], ...]
    c: float
    set_size: int
    intersection_bound: int
    universe_size: int
    strategy: str

    @property
    def m(self) -> int:
        return len(self.sets)

    def check(self) -> None:
        """Exhaustive invariant verification (sizes, bound, containment)."""
        for s in self.sets:
            if len(s) != self.set_size or len(set(s)) != self.set_size:
                raise AssertionError("set size mismatch")
            if any(not 0 <= e < self.universe_size for e in s):
                raise AssertionError("element outside universe")
        mx = max_pairwise_intersection(self.sets, self.universe_size)
        if mx > self.intersection_bound:
            raise AssertionError(
                f"intersection {mx} exceeds bound {self.intersection_bound}")


def max_pairwise_intersection(sets, universe_size: int) -> int:
    """Largest |S_i ∩ S_j| over i != j, via sparse co-occurrence counts.

    Exhaustive over all pairs; the sparse product makes m=4096 families
    with multi-million-element universes checkable in seconds.
    """
    if len(sets) < 2:
        return 0
    g = _cooccurrence(sets, universe_size).tocoo()
    off = (g.row != g.col) & (g.data > 0)
    return int(g.data[off].max()) if off.any() else 0


def _cooccurrence(sets, universe: int):
    m = len(sets)
    indices = np.fromiter((e for s in sets for e in s), dtype=np.int64)
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum([len(s) for s in sets], out=indptr[1:])
    a = sp.csr_matrix((np.ones(len(indices), dtype=np.int32), indices, indptr),
                      shape=(m, universe))
    return a @ a.T


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, int(math.isqrt(q)) + 1):
        if q % p == 0:
            return False
    return True


def _next_prime(q: int) -> int:
    while not _is_prime(q):
        q += 1
    return q


def _sample_distinct(rng: np.random.Generator, universe: int, size: int) -> np.ndarray:
    chosen: set[int] = set()
    while len(chosen) < size:
        batch = rng.integers(0, universe, size=size - len(chosen))
        chosen.update(int(x) for x in batch)
    return np.array(sorted(chosen), dtype=np.int64)


def build_design(m: int, c: int, strategy: str = "randomized_verified",
                 seed: int = 0, verify_cap: int = 8192) -> DesignFamily:
    """Family of m sets with pairwise intersections a small fraction of the
    set size.

    randomized_verified: uniform size-(c^2 lg m) subsets of a universe of
    50 c^3 lg m points, all pairwise intersections verified <= 2c lg m and
    offending sets resampled (expected O(1) rounds by concentration).

    polynomial: graphs of degree-<=d polynomials over a prime field F_q,
    universe q^2, exact intersection bound d, with d/q below the 2/c ratio
    the randomized parameters give; guaranteed by construction but
    verified all the same.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    if c <= 1:
        raise ValueError("need c > 1")
    if strategy == "randomized_verified":
        if m > verify_cap:
            raise ValueError(
                f"m={m} exceeds the pairwise-verification cap {verify_cap}")
        lg = max(1, math.ceil(math.log2(m)))
        set_size = int(c * c * lg)
        universe = int(50 * c ** 3 * lg)
        bound = int(2 * c * lg)
        rng = np.random.default_rng(seed)
        sets = [_sample_distinct(rng, universe, set_size) for _ in range(m)]
        for _ in range(50):
            g = _cooccurrence(sets, universe).tocoo()
            bad = (g.data > bound) & (g.row != g.col)
            if not bad.any():
                break
            for i in sorted({int(r) for r in g.row[bad]}):
                sets[i] = _sample_distinct(rng, universe, set_size)
        else:
            raise RuntimeError("design resampling did not converge")
        fam = DesignFamily(tuple(tuple(int(e) for e in s) for s in sets),
                           c, set_size, bound, universe, strategy)
        fam.check()
        return fam
    if strategy == "polynomial":
        best = None
        for d in range(1, 7):
            q = _next_prime(max(math.ceil(m ** (1.0 / (d + 1))),
                                math.floor(c * d / 2) + 1, 2))
            if q ** (d + 1) < m:
                q = _next_prime(q + 1)
            if q ** (d + 1) < m or d / q >= 2 / c:
                continue
            if best is None or q * q < best[1] ** 2:
                best = (d, q)
        if best is None:
            raise ValueError(f"no prime field fits m={m}, c={c}")
        d, q = best
        sets = []
        for i in range(m):
            coeffs = []
            v = i
            for _ in range(d + 1):
                coeffs.append(v % q)
                v //= q
            sets.append(tuple(
                x * q + (sum(cf * x ** p for p, cf in enumerate(coeffs)) % q)
                for x in range(q)))
        fam = DesignFamily(tuple(sets), c, q, d, q * q, strategy)
        fam.check()
        return fam
    raise ValueError(f"unknown strategy {strategy!r}")


def design_to_label(family: DesignFamily, i: int, base: int):
    """Label for set i: digit 1 at the positions of S_i.

    base 10 gives the integer used for sum-based reductions (degree-6 sums
    of 0/1 digits never carry), base 2 the bit string for xor-based ones,
    base 3 a vector over {0,1,2}.
    """
    if not 0 <= i < family.m:
        raise ValueError(f"set index {i} out of range")
    s = family.sets[i]
    if base == 10:
        return sum(10 ** p for p in s)
    if base == 2:
        lbl = 0
        for p in s:
            lbl |= 1 << p
        return lbl
    if base == 3:
        vec = np.zeros(family.universe_size, dtype=np.uint8)
        vec[list(s)] = 1
        return vec
    raise ValueError(f"unknown base {base}")


def write_design(family: DesignFamily, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{family.m} {family.universe_size} "
                 f"{family.set_size} {family.intersection_bound}\n")
        for s in family.sets:
            fh.write(" ".join(str(e) for e in s) + "\n")


def read_design(path: str, c: float = 2.0,
                strategy: str = "file") -> DesignFamily:
    with open(path) as fh:
        m, u, size, bound = (int(x) for x in fh.readline().split())
        sets = tuple(tuple(int(x) for x in fh.readline().split())
                     for _ in range(m))
    return DesignFamily(sets, c, size, bound, u, strategy)


# ---------------------------------------------------------------------------
# GF(2^s) and the almost-k-wise generator

def _poly_mod(a: int, f: int) -> int:
    fl = f.bit_length()
    while a.bit_length() >= fl:
        a ^= f << (a.bit_length() - fl)
    return a


def _poly_mulmod(a: int, b: int, f: int) -> int:
    a, r = _poly_mod(a, f), 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a = _poly_mod(a << 1, f)
    return r


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def irreducible_poly(s: int) -> int:
    """Smallest irreducible polynomial of degree s over GF(2), by Rabin's
    criterion: x^(2^s) = x mod f, and gcd(x^(2^(s/p)) - x, f) = 1 for every
    prime p dividing s."""
    if s < 1:
        raise ValueError("degree must be >= 1")
    primes = _prime_divisors(s)
    for cand in range(1, 1 << s, 2):
        f = (1 << s) | cand
        if bin(f).count("1") % 2 == 0:  # divisible by x+1
            if f != 0b11:
                continue
        t = _poly_mod(2, f)
        for _ in range(s):
            t = _poly_mulmod(t, t, f)
        if t != _poly_mod(2, f):
            continue
        ok = True
        for p in primes:
            u = _poly_mod(2, f)
            for _ in range(s // p):
                u = _poly_mulmod(u, u, f)
            if _poly_gcd(u ^ _poly_mod(2, f), f) != 1:
                ok = False
                break
        if ok:
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {s}")


@dataclass(frozen=True)
class SmallBiasSpec:
    """Parameters of the almost-k-wise generator on n bits.

    Derived: bias target eps = alpha * 2^(-k/2), field degree s with
    2^s >= n / eps, seed = the 2s bits of (x, y).
    """

    n: int
    k: int
    alpha: float

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or not 0 < self.alpha <= 1:
            raise ValueError("need n >= 1, k >= 1, 0 < alpha <= 1")

    @property
    def bias(self) -> float:
        return self.alpha * 2.0 ** (-self.k / 2.0)

    @property
    def field_degree(self) -> int:
        s = max(1, (math.ceil(self.n / self.bias) - 1).bit_length())
        if s > 62:
            raise ValueError("field degree over 62 is not supported")
        return s

    @property
    def seed_bits(self) -> int:
        return 2 * self.field_degree

    @property
    def seed_count(self) -> int:
        return 1 << self.seed_bits


def decode_seed(spec: SmallBiasSpec, seed: int) -> tuple[int, int]:
    """Seed -> (x, y) by bit de-interleaving (x even bits, y odd bits), so
    ascending enumeration reaches pairs with both coordinates nonzero after
    a handful of seeds."""
    if not 0 <= seed < spec.seed_count:
        raise ValueError(f"seed {seed} outside {spec.seed_bits}-bit space")
    x = y = 0
    for b in range(spec.field_degree):
        x |= ((seed >> (2 * b)) & 1) << b
        y |= ((seed >> (2 * b + 1)) & 1) << b
    return x, y


def small_bias_bits(spec: SmallBiasSpec, seed: int) -> np.ndarray:
    """n output bits for the given seed, as a uint8 array."""
    x, y = decode_seed(spec, seed)
    s = spec.field_degree
    return _kernels.smallbias_fill(x, y, s, irreducible_poly(s), spec.n)


def enumerate_seeds(spec: SmallBiasSpec, cap: int = 32) -> Iterator[int]:
    """Every seed exactly once, ascending; refuses seed spaces over the cap."""
    if spec.seed_bits > cap:
        raise SeedSpaceTooLarge(
            f"{spec.seed_bits} seed bits exceed the enumeration cap {cap}")
    return iter(range(spec.seed_count))


# ---------------------------------------------------------------------------
# bucket-load statistic

def bucket_load_stats(keys: XorHashKeys, S, k: float,
                      R: Optional[int] = None):
    """Histogram of per-element bucket loads plus the count of elements in
    buckets of load >= 2n/R + k.

    The expected overloaded count over random keys is at most n/k whenever
    distinct inputs collide with probability <= 1/R, which this hash family
    satisfies.
    """
    vectors = S.vectors if isinstance(S, BitVectorSet) else [int(v) for v in S]
    if R is None:
        R = 1 << keys.output_width
    elif R != 1 << keys.output_width:
        raise ValueError("R must equal 2^output_width of the keys")
    n = len(vectors)
    hashed = hash_apply_many(keys, vectors).astype(np.int64)
    loads = np.bincount(hashed, minlength=R)
    per_elem = loads[hashed]
    threshold = 2 * n / R + k
    histogram: dict[int, int] = {}
    for size, cnt in zip(*np.unique(per_elem, return_counts=True)):
        histogram[int(size)] = int(cnt)
    overloaded = int(np.count_nonzero(per_elem >= threshold))
    return histogram, overloaded
