"""Domain types, instance generators and file formats.

Every problem instance in the package is one of the types below. All of
them are immutable after construction and safe to share across threads;
generators take an explicit seed and are pure functions of it.

File formats (ASCII, newline-terminated):

  edges    graphs: header "n m", then one "u v" line per edge
  ints     integer sets: one signed decimal per line
  hexvecs  bit-vector sets: header "n l", then one hex string per line
           (big-endian bit order, left-padded to ceil(l/4) digits)
  c3xor    arrays: header "n w", then "index hexvalue", or "index -" for
           an absent cell
  z3vecs   vectors over {0,1,2}: header "n t", then one t-digit base-3
           string per line (component 0 first)
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

#: absent-cell marker for C3xorArray entries
ABSENT = None

DEFAULT_MAGNITUDE_EXPONENT = 3


class FormatError(ValueError):
    """Malformed instance file; message carries the 1-based line number."""


@dataclass(frozen=True)
class IntegerSet:
    """A 3SUM instance: distinct signed integers of bounded magnitude."""

    values: tuple[int, ...]
    magnitude_bound: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.magnitude_bound <= 0:
            raise ValueError("magnitude_bound must be positive")
        if len(set(self.values)) != len(self.values):
            raise ValueError("values must be pairwise distinct")
        for v in self.values:
            if abs(v) > self.magnitude_bound:
                raise ValueError(f"|{v}| exceeds magnitude bound {self.magnitude_bound}")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class BitVectorSet:
    """A 3XOR instance: distinct width-bit vectors stored as ints."""

    vectors: tuple[int, ...]
    width: int

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(int(v) for v in self.vectors))
        if self.width < 1:
            raise ValueError("width must be >= 1")
        if len(set(self.vectors)) != len(self.vectors):
            raise ValueError("vectors must be pairwise distinct")
        for v in self.vectors:
            if v < 0 or v >> self.width:
                raise ValueError(f"vector 0x{v:x} does not fit in {self.width} bits")

    def __len__(self):
        return len(self.vectors)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on dense 0-based node ids.

    adjacency[u] is the sorted tuple of neighbors of u; symmetry, absence
    of loops and of duplicate edges are guaranteed by normalize_graph.
    labels maps dense ids back to the caller's original node labels.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.adjacency))))

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def adjacency_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr int64, indices int32) view consumed by the kernels."""
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        for u, a in enumerate(self.adjacency):
            indptr[u + 1] = indptr[u] + len(a)
        indices = np.empty(int(indptr[-1]), dtype=np.int32)
        for u, a in enumerate(self.adjacency):
            indices[indptr[u]:indptr[u + 1]] = a
        return indptr, indices

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographic."""
        return [(u, v) for u in range(self.node_count)
                for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency_sets[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])


@dataclass(frozen=True)
class TripartiteGraph(Graph):
    """Graph whose nodes split into three parts with no intra-part edge.

    parts are (start, stop) id ranges; the Graph invariants all hold.
    """

    parts: tuple[tuple[int, int], ...] = ()

    def part_of(self, u: int) -> int:
        for i, (lo, hi) in enumerate(self.parts):
            if lo <= u < hi:
                return i
        raise ValueError(f"node {u} outside all parts")


@dataclass(frozen=True)
class Triangle:
    """Three distinct nodes, all three edges present in the host graph."""

    nodes: frozenset

    def __post_init__(self):
        if len(self.nodes) != 3:
            raise ValueError("a triangle has exactly 3 distinct nodes")

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "Triangle":
        return cls(frozenset((a, b, c)))

    def sorted_nodes(self) -> tuple[int, int, int]:
        a, b, c = sorted(self.nodes)
        return a, b, c

    def in_graph(self, g: Graph) -> bool:
        a, b, c = self.sorted_nodes()
        return g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)


@dataclass(frozen=True)
class C3xorArray:
    """Array of n cells, each a w-bit value or ABSENT; n is a power of two."""

    entries: tuple[Optional[int], ...]
    value_width: int

    def __post_init__(self):
        n = len(self.entries)
        if n < 1 or n & (n - 1):
            raise ValueError("cell count must be a power of two")
        if self.value_width < 1:
            raise ValueError("value_width must be >= 1")
        for i, v in enumerate(self.entries):
            if v is not ABSENT and (v < 0 or v >> self.value_width):
                raise ValueError(f"entry {i} does not fit in {self.value_width} bits")

    def __len__(self):
        return len(self.entries)

    @property
    def index_width(self) -> int:
        return (len(self.entries) - 1).bit_length() if len(self.entries) > 1 else 1

    def padded_to(self, n: int) -> "C3xorArray":
        """Extend with ABSENT cells up to n (a larger power of two)."""
        if n < len(self.entries) or n & (n - 1):
            raise ValueError("pad target must be a power of two >= current size")
        return C3xorArray(self.entries + (ABSENT,) * (n - len(self.entries)),
                          self.value_width)


@dataclass(frozen=True)
class Z3VectorSet:
    """Vectors over {0,1,2} of common length t (a 6SUM instance)."""

    elements: tuple[tuple[int, ...], ...]
    length: int

    def __post_init__(self):
        object.__setattr__(
            self, "elements",
            tuple(tuple(int(d) for d in e) for e in self.elements))
        for e in self.elements:
            if len(e) != self.length:
                raise ValueError("all elements must have the declared length")
            if any(d not in (0, 1, 2) for d in e):
                raise ValueError("entries must be in {0,1,2}")

    def __len__(self):
        return len(self.elements)

    def as_matrix(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.uint8).reshape(
            len(self.elements), self.length)


# ---------------------------------------------------------------------------
# graph normalization and generation

@dataclass(frozen=True)
class NormalizationReport:
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    isolated_dropped: int = 0


def normalize_graph(edge_list: Iterable[tuple[int, int]],
                    keep_report: bool = False):
    """Build a Graph from an arbitrary edge list.

    Self-loops and duplicate edges are dropped (counted, not fatal);
    surviving endpoints are relabeled to dense 0-based ids in sorted
    original-label order, so normalization is idempotent.
    """
    seen = set()
    loops = dups = 0
    for u, v in edge_list:
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
    nodes = sorted({x for e in seen for x in e})
    index = {lbl: i for i, lbl in enumerate(nodes)}
    adj = [[] for _ in nodes]
    for u, v in seen:
        adj[index[u]].append(index[v])
        adj[index[v]].append(index[u])
    g = Graph(tuple(tuple(sorted(a)) for a in adj), tuple(nodes))
    if keep_report:
        return g, NormalizationReport(loops, dups, 0)
    return g


def gen_graph(n: int, m: int, planted_triangles: int, seed: int) -> Graph:
    """Random simple graph with at least the requested number of triangles.

    Plants triangles on random node triples first, then fills with random
    non-edges up to m. Deterministic given the seed. Raises ValueError on
    infeasible (n, m, planted_triangles).
    """
    max_m = n * (n - 1) // 2
    if m > max_m:
        raise ValueError(f"m={m} exceeds {max_m} for n={n}")
    if planted_triangles > 0 and n < 3:
        raise ValueError("need n >= 3 to plant a triangle")
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()

    def add(u, v):
        edges.add((u, v) if u < v else (v, u))

    for _ in range(planted_triangles):
        tries = 0
        while True:
            a, b, c = rng.sample(range(n), 3)
            new = {tuple(sorted(p)) for p in ((a, b), (b, c), (a, c))}
            if len(edges | new) <= m:
                add(a, b), add(b, c), add(a, c)
                break
            tries += 1
            if tries > 200:
                raise ValueError("cannot fit planted triangles within m edges")
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        add(u, v)
    # keep all n nodes: nodes never touched by an edge are dropped on
    # normalization, so route labels through normalize_graph directly
    return normalize_graph(sorted(edges))


def _rand_distinct_ints(rng: random.Random, n: int, bound: int) -> list[int]:
    vals: set[int] = set()
    while len(vals) < n:
        vals.add(rng.randint(-bound, bound))
    return sorted(vals)


def gen_planted_instance(kind: str, n: int, plant: bool, seed: int,
                         magnitude_exponent: int = DEFAULT_MAGNITUDE_EXPONENT,
                         width: Optional[int] = None):
    """Random instance of one of {3sum, 3xor, c3xor, 6sum_z3}.

    With plant=True a witness is embedded and returned alongside the
    instance as (instance, witness); plant=False rejection-samples against
    the matching brute-force oracle until the instance is solution-free,
    returning (instance, None). Deterministic given the seed.
    """
    if kind not in ("3sum", "3xor", "c3xor", "6sum_z3"):
        raise ValueError(f"unknown instance kind {kind!r}")
    if n < (6 if kind == "6sum_z3" else 3):
        raise ValueError(f"n={n} too small for {kind}")
    from . import solvers  # local import: solvers depends on core types

    rng = random.Random(seed)
    for _ in range(10_000):
        if kind == "3sum":
            bound = max(8, n ** magnitude_exponent)
            vals = _rand_distinct_ints(rng, n, bound)
            inst = IntegerSet(tuple(vals), bound)
            if plant:
                i, j, k = rng.sample(range(n), 3)
                a, b = vals[i], vals[j]
                c = -(a + b)
                if abs(c) > bound or c in (a, b) or (c in vals and vals.index(c) in (i, j)):
                    continue
                if c in vals:
                    k = vals.index(c)
                else:
                    vals[k] = c
                if len(set(vals)) != n:
                    continue
                inst = IntegerSet(tuple(vals), bound)
                wit = tuple(sorted((i, j, k)))
                return inst, wit
            if solvers.solve_3sum_quadratic(inst) is None:
                return inst, None
        elif kind == "3xor":
            w = width or max(4, 3 * (n - 1).bit_length())
            vecs = set()
            while len(vecs) < n:
                vecs.add(rng.getrandbits(w))
            vecs = sorted(vecs)
            if plant:
                i, j, k = rng.sample(range(n), 3)
                c = vecs[i] ^ vecs[j]
                if c in (vecs[i], vecs[j]):
                    continue
                if c in vecs:
                    k = vecs.index(c)
                else:
                    vecs[k] = c
                if len(set(vecs)) != n:
                    continue
                inst = BitVectorSet(tuple(vecs), w)
                return inst, tuple(sorted((i, j, k)))
            inst = BitVectorSet(tuple(vecs), w)
            if solvers.solve_3xor_quadratic(inst) is None:
                return inst, None
        elif kind == "c3xor":
            size = 1 << max(2, (n - 1).bit_length())
            w = width or max(4, 3 * (size - 1).bit_length())
            cells = [rng.getrandbits(w) for _ in range(size)]
            inst = C3xorArray(tuple(cells), w)
            if plant:
                i, j = rng.sample(range(1, size), 2)
                if i ^ j in (0, i, j):
                    continue
                cells[i ^ j] = cells[i] ^ cells[j]
                inst = C3xorArray(tuple(cells), w)
                return inst, (i, j)
            if solvers.solve_c3xor_bruteforce(inst) is None:
                return inst, None
        else:  # 6sum_z3
            t = width or max(2, (n - 1).bit_length())
            elems = [tuple(rng.randrange(3) for _ in range(t)) for _ in range(n)]
            if plant:
                idx = rng.sample(range(n), 6)
                partial = [sum(elems[i][d] for i in idx[:5]) for d in range(t)]
                elems[idx[5]] = tuple((-p) % 3 for p in partial)
                inst = Z3VectorSet(tuple(elems), t)
                return inst, tuple(sorted(idx))
            inst = Z3VectorSet(tuple(elems), t)
            if solvers.solve_6sum_z3(inst) is None:
                return inst, None
    raise RuntimeError(f"could not generate a {kind} instance after many tries")


# ---------------------------------------------------------------------------
# serialization

FORMATS = ("edges", "ints", "hexvecs", "z3vecs", "c3xor")


def _fail(path, lineno, msg):
    raise FormatError(f"{path}:{lineno}: {msg}")


def write_instance(instance, path: str, fmt: str) -> None:
    lines: list[str] = []
    if fmt == "edges":
        g: Graph = instance
        lines.append(f"{g.node_count} {g.edge_count}")
        for u, v in g.edges():
            lines.append(f"{g.labels[u]} {g.labels[v]}")
    elif fmt == "ints":
        lines.extend(str(v) for v in instance.values)
    elif fmt == "hexvecs":
        s: BitVectorSet = instance
        digits = (s.width + 3) // 4
        lines.append(f"{len(s)} {s.width}")
        lines.extend(format(v, f"0{digits}x") for v in s.vectors)
    elif fmt == "c3xor":
        a: C3xorArray = instance
        digits = (a.value_width + 3) // 4
        lines.append(f"{len(a)} {a.value_width}")
        for i, v in enumerate(a.entries):
            lines.append(f"{i} -" if v is ABSENT else f"{i} {format(v, f'0{digits}x')}")
    elif fmt == "z3vecs":
        z: Z3VectorSet = instance
        lines.append(f"{len(z)} {z.length}")
        lines.extend("".join(str(d) for d in e) for e in z.elements)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n" if lines else "")


def read_instance(path: str, fmt: str,
                  magnitude_bound: Optional[int] = None):
    with open(path) as fh:
        raw = fh.read().splitlines()
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]

    def header(expect_fields):
        if not lines:
            _fail(path, 1, "missing header")
        no, ln = lines[0]
        parts = ln.split()
        if len(parts) != expect_fields:
            _fail(path, no, f"expected {expect_fields} header fields")
        try:
            return [int(p) for p in parts]
        except ValueError:
            _fail(path, no, "non-integer header field")

    if fmt == "edges":
        n, m = header(2)
        edges = []
        for no, ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                _fail(path, no, "expected 'u v'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                _fail(path, no, "non-integer endpoint")
            edges.append((u, v))
        if len(edges) != m:
            _fail(path, lines[0][0], f"header says {m} edges, found {len(edges)}")
        return normalize_graph(edges)
    if fmt == "ints":
        vals = []
        for no, ln in lines:
            try:
                vals.append(int(ln))
            except ValueError:
                _fail(path, no, f"bad integer {ln!r}")
        bound = magnitude_bound or max(
            (abs(v) for v in vals), default=1) or 1
        return IntegerSet(tuple(vals), bound)
    if fmt == "hexvecs":
        n, width = header(2)
        vecs = []
        for no, ln in lines[1:]:
            try:
                vecs.append(int(ln, 16))
            except ValueError:
                _fail(path, no, f"bad hex {ln!r}")
        if len(vecs) != n:
            _fail(path, lines[0][0], f"header says {n} vectors, found {len(vecs)}")
        try:
            return BitVectorSet(tuple(vecs), width)
        except ValueError as exc:
            _fail(path, lines[0][0], str(exc))
    if fmt == "c3xor":
        n, width = header(2)
        cells: list[Optional[int]] = [ABSENT] * n
        for no, ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                _fail(path, no, "expected 'index value'")
            try:
                i = int(parts[0])
            except ValueError:
                _fail(path, no, f"bad index {parts[0]!r}")
            if not 0 <= i < n:
                _fail(path, no, f"index {i} out of range")
            if parts[1] != "-":
                try:
                    cells[i] = int(parts[1], 16)
                except ValueError:
                    _fail(path, no, f"bad hex {parts[1]!r}")
        try:
            return C3xorArray(tuple(cells), width)
        except ValueError as exc:
            _fail(path, lines[0][0], str(exc))
    if fmt == "z3vecs":
        n, t = header(2)
        elems = []
        for no, ln in lines[1:]:
            if len(ln) != t or any(ch not in "012" for ch in ln):
                _fail(path, no, f"expected {t} base-3 digits")
            elems.append(tuple(int(ch) for ch in ln))
        if len(elems) != n:
            _fail(path, lines[0][0], f"header says {n} elements, found {len(elems)}")
        return Z3VectorSet(tuple(elems), t)
    raise ValueError(f"unknown format {fmt!r}")
