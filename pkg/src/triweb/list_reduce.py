"""Listing min(t, z) triangles with a triangle-detection oracle.

Three stages. Stage one lists triangles through high-degree nodes
(degree > delta*m) directly and removes those nodes. Stage two blows the
residual up into a tripartite graph with three copies of the node set, so
each residual triangle corresponds to exactly 6 colored ones. Stage three
recursively halves every part with one generator bit per node, recursing
only into the (at most 8, each certified by the detector) subgraphs that
still contain a triangle, keeping at most t' = 6t subproblems alive, and
brute-forcing subgraphs below the base-case edge bound.

The halving seed is not random: seeds of an almost-4-wise generator are
tried in ascending order and the first one whose 8 induced subgraphs all
carry at most a (1/4 + gamma) fraction of the edges is kept. Each edge
lands in exactly 2 subgraphs and each triangle in exactly 1, which is what
makes every reported triangle unique.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels, prand, solvers
from .core import Graph, Triangle, TripartiteGraph


class SeedsExhausted(RuntimeError):
    """No enumerated or fallback seed satisfied the balance bound; the
    partition parameters are misconfigured for this instance."""


@dataclass(frozen=True)
class ListingParams:
    """Knobs of the listing reduction.

    gamma is the balance slack of the partition bound (0 < gamma < 1/4);
    delta the high-degree threshold fraction; alpha the generator
    closeness; base_case_edges the brute-force cutoff. delta and alpha
    default to gamma^2/64. Seeds are verified constructively, so these
    only affect how fast a good partition is found, never correctness.
    """

    gamma: float = 0.05
    delta: Optional[float] = None
    alpha: Optional[float] = None
    base_case_edges: int = 64
    gen_k: int = 4
    max_seed_trials: int = 4096
    random_fallback_trials: int = 64
    check_invariants: bool = True

    def __post_init__(self):
        if not 0 < self.gamma < 0.25:
            raise ValueError("need 0 < gamma < 1/4")
        if self.base_case_edges < 3:
            raise ValueError("base_case_edges must be >= 3")
        if self.delta is None:
            object.__setattr__(self, "delta", self.gamma ** 2 / 64)
        if self.alpha is None:
            object.__setattr__(self, "alpha", self.gamma ** 2 / 64)
        if self.delta <= 0 or self.alpha <= 0:
            raise ValueError("delta and alpha must be positive")


@dataclass(frozen=True)
class Subproblem:
    """One node subset per part plus the induced edges, at some depth."""

    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    edges: tuple[tuple[int, int], ...]
    depth: int

    @property
    def edge_count(self) -> int:
        return len(self.edges)


class TraceEntry(NamedTuple):
    depth: int
    edges: int
    detected: bool
    seed: Optional[int]
    kind: str  # "root" | "child" | "base"


class PartitionResult(NamedTuple):
    children: tuple[Subproblem, ...]
    seed: int
    from_generator: bool  # False when the truly-random fallback was used


class Stage1Result(NamedTuple):
    triangles: list[Triangle]
    residual: Graph
    node_map: tuple[int, ...]  # residual id -> original id
    high_nodes: tuple[int, ...]


def stage1_high_degree(g: Graph, delta: float,
                       t: Optional[int] = None) -> Stage1Result:
    """List triangles through any node of degree > delta*m, then remove
    those nodes. Triangles are deduplicated (reported once, by their
    smallest high-degree corner); stops early once t are found."""
    cap = t if t is not None else 1 << 62
    m = g.edge_count
    indptr, indices = g.csr
    deg = np.diff(indptr)
    is_high = (deg > delta * m).astype(np.uint8)
    high = tuple(int(h) for h in np.flatnonzero(is_high))
    triangles: list[Triangle] = []
    if high and m and cap > 0:
        edges = g.edges()
        eu = np.array([e[0] for e in edges], dtype=np.int32)
        ev = np.array([e[1] for e in edges], dtype=np.int32)
        triples, _ = _kernels.stage1_high_scan(indptr, indices, eu, ev,
                                               is_high, cap)
        triangles = [Triangle.of(*tr) for tr in triples]
    keep = [u for u in range(g.node_count) if not is_high[u]]
    sub, node_map = induced_subgraph(g, keep)
    return Stage1Result(triangles, sub, node_map, high)


def induced_subgraph(g: Graph, keep: Sequence[int]):
    """Subgraph induced on `keep`, densely relabeled; nodes isolated inside
    the subgraph are dropped. Returns (Graph, map sub-id -> g-id)."""
    keep_set = set(keep)
    edges = [(u, v) for u, v in g.edges() if u in keep_set and v in keep_set]
    touched = sorted({x for e in edges for x in e})
    idx = {u: i for i, u in enumerate(touched)}
    adj: list[list[int]] = [[] for _ in touched]
    for u, v in edges:
        adj[idx[u]].append(idx[v])
        adj[idx[v]].append(idx[u])
    sub = Graph(tuple(tuple(sorted(a)) for a in adj))
    return sub, tuple(touched)


def stage2_tripartite(g: Graph) -> TripartiteGraph:
    """Three copies of the node set; each edge (a, b) becomes the 6 edges
    (a_i, b_j) for i != j, so |E'| = 6|E| and every triangle of g yields
    exactly 6 triangles of the blow-up (one per part assignment)."""
    n = g.node_count
    adj: list[list[int]] = [[] for _ in range(3 * n)]
    for a, b in g.edges():
        for i in range(3):
            for j in range(3):
                if i != j:
                    u, v = a + i * n, b + j * n
                    adj[u].append(v)
                    adj[v].append(u)
    return TripartiteGraph(tuple(tuple(sorted(x)) for x in adj),
                           tuple(range(3 * n)),
                           parts=((0, n), (n, 2 * n), (2 * n, 3 * n)))


def as_root_subproblem(h: TripartiteGraph) -> Subproblem:
    parts = tuple(tuple(range(lo, hi)) for lo, hi in h.parts)
    return Subproblem(parts, tuple(h.edges()), 0)


def subproblem_graph(sub: Subproblem):
    """Materialize the subproblem for a Graph-consuming detector.

    Returns (Graph, map graph-id -> subproblem node id)."""
    touched = sorted({x for e in sub.edges for x in e})
    idx = {u: i for i, u in enumerate(touched)}
    adj: list[list[int]] = [[] for _ in touched]
    for u, v in sub.edges:
        adj[idx[u]].append(idx[v])
        adj[idx[v]].append(idx[u])
    return Graph(tuple(tuple(sorted(a)) for a in adj)), tuple(touched)


def _edge_child_ids(sub: Subproblem, part_of: dict, bits: np.ndarray,
                    pos: dict) -> list[tuple[int, int]]:
    """The two subgraph ids (h1 h2 h3 as a 3-bit number) each edge joins."""
    out = []
    for u, v in sub.edges:
        pu, pv = part_of[u], part_of[v]
        base = (int(bits[pos[u]]) << (2 - pu)) | (int(bits[pos[v]]) << (2 - pv))
        free = 2 - (3 - pu - pv)
        out.append((base, base | (1 << free)))
    return out


def balanced_partition(sub, params: ListingParams,
                       spec: Optional[prand.SmallBiasSpec] = None,
                       rng_seed: int = 0) -> PartitionResult:
    """Split each part in two with one generator bit per node; keep the
    first seed (ascending) whose 8 induced subgraphs all have at most
    (1/4 + gamma) of the edges. Falls back to seeded truly-random
    partitions, and raises SeedsExhausted when nothing satisfies the bound
    (a one-edge subproblem, say, can never satisfy it)."""
    if isinstance(sub, TripartiteGraph):
        sub = as_root_subproblem(sub)
    nodes = [u for part in sub.parts for u in part]
    pos = {u: i for i, u in enumerate(nodes)}
    part_of = {u: p for p, part in enumerate(sub.parts) for u in part}
    m = sub.edge_count
    bound = (0.25 + params.gamma) * m
    if spec is None:
        spec = prand.SmallBiasSpec(max(1, len(nodes)), params.gen_k, params.alpha)

    posu = np.array([pos[u] for u, _ in sub.edges], dtype=np.int64)
    posv = np.array([pos[v] for _, v in sub.edges], dtype=np.int64)
    shu = np.array([2 - part_of[u] for u, _ in sub.edges], dtype=np.int64)
    shv = np.array([2 - part_of[v] for _, v in sub.edges], dtype=np.int64)
    shf = np.array([2 - (3 - part_of[u] - part_of[v]) for u, v in sub.edges],
                   dtype=np.int64)

    def counts_ok(bits) -> bool:
        if m == 0:
            return True
        base = (bits[posu].astype(np.int64) << shu) | \
               (bits[posv].astype(np.int64) << shv)
        ids = np.concatenate([base, base | (1 << shf)])
        return int(np.bincount(ids, minlength=8).max()) <= bound

    def build(bits, seed, from_gen) -> PartitionResult:
        children_parts = [[[], [], []] for _ in range(8)]
        for p, part in enumerate(sub.parts):
            sh = 2 - p
            for u in part:
                b = int(bits[pos[u]])
                for sid in range(8):
                    if (sid >> sh) & 1 == b:
                        children_parts[sid][p].append(u)
        children_edges: list[list] = [[] for _ in range(8)]
        for (u, v), (c0, c1) in zip(sub.edges,
                                    _edge_child_ids(sub, part_of, bits, pos)):
            children_edges[c0].append((u, v))
            children_edges[c1].append((u, v))
        children = tuple(
            Subproblem(tuple(tuple(p) for p in children_parts[sid]),
                       tuple(children_edges[sid]), sub.depth + 1)
            for sid in range(8))
        return PartitionResult(children, seed, from_gen)

    for seed in range(min(spec.seed_count, params.max_seed_trials)):
        bits = prand.small_bias_bits(spec, seed)
        if counts_ok(bits):
            return build(bits, seed, True)
    rng = random.Random((rng_seed, sub.depth, m))
    for trial in range(params.random_fallback_trials):
        bits = np.array([rng.getrandbits(1) for _ in nodes], dtype=np.uint8)
        if counts_ok(bits):
            return build(bits, trial, False)
    raise SeedsExhausted(
        f"no partition of a {m}-edge subproblem met the "
        f"{(0.25 + params.gamma):.3f}m bound")


def _normalize_detector(detector: Callable):
    """Wrap a Graph -> bool/Triangle/None detector into
    Subproblem -> (bool, Triangle in subproblem ids or None)."""

    def run(sub: Subproblem):
        g, node_map = subproblem_graph(sub)
        if g.edge_count < 3:
            return False, None
        res = detector(g)
        if isinstance(res, tuple) and len(res) == 2:
            # detect_reduce-style (has_triangle, certificate) pair
            res = res[1] if res[1] is not None else res[0]
        if res is None or res is False:
            return False, None
        if isinstance(res, Triangle):
            a, b, c = res.sorted_nodes()
            return True, Triangle.of(node_map[a], node_map[b], node_map[c])
        return True, None

    return run


def _brute_force_triangles(sub: Subproblem) -> list[Triangle]:
    g, node_map = subproblem_graph(sub)
    return [Triangle.of(*(node_map[x] for x in tri.nodes))
            for tri in solvers.list_all_triangles(g)]


def _certificate_child(cert: Triangle, children) -> Optional[int]:
    """The unique child holding all three certificate nodes, if any."""
    for sid, child in enumerate(children):
        members = set(child.parts[0]) | set(child.parts[1]) | set(child.parts[2])
        if cert.nodes <= members:
            return sid
    return None


def stage3_recurse(h, t_prime: int, detector: Callable,
                   params: ListingParams,
                   trace: Optional[list] = None) -> set[Triangle]:
    """Level-synchronous recursion: split every live subproblem, drop
    children the detector rejects, keep at most t_prime certified
    subproblems alive, brute-force small ones. Returns >= min(t_prime, z)
    distinct triangles of h, truncated to t_prime."""
    if isinstance(h, TripartiteGraph):
        root = as_root_subproblem(h)
        root_m = h.edge_count
    else:
        root, root_m = h, h.edge_count
    detect = _normalize_detector(detector)
    found: set[Triangle] = set()
    ok, cert = detect(root)
    if trace is not None:
        trace.append(TraceEntry(0, root.edge_count, ok, None, "root"))
    if not ok:
        return found
    live: list[tuple[Subproblem, Optional[Triangle]]] = [(root, cert)]
    depth = 0
    while live and len(found) < t_prime:
        depth += 1
        next_live: list[tuple[Subproblem, Optional[Triangle]]] = []
        for sub, cert in live:
            if sub.edge_count <= params.base_case_edges:
                for tri in _brute_force_triangles(sub):
                    found.add(tri)
                if trace is not None:
                    trace.append(TraceEntry(sub.depth, sub.edge_count, True,
                                            None, "base"))
                continue
            result = balanced_partition(sub, params)
            if params.check_invariants:
                # per-level balance; the depth-indexed bound
                # edges <= root_m * (1/4+gamma)^depth follows inductively
                for child in result.children:
                    assert child.edge_count <= \
                        (0.25 + params.gamma) * sub.edge_count + 1e-9
            cert_sid = _certificate_child(cert, result.children) \
                if cert is not None else None
            for sid, child in enumerate(result.children):
                if len(found) + len(next_live) >= t_prime:
                    break  # enough certified subproblems already
                if child.edge_count < 3:
                    continue
                if sid == cert_sid:
                    ok, ccert = True, cert
                else:
                    ok, ccert = detect(child)
                if trace is not None:
                    trace.append(TraceEntry(child.depth, child.edge_count, ok,
                                            result.seed, "child"))
                if ok:
                    next_live.append((child, ccert))
        live = next_live
        if params.check_invariants:
            assert len(live) <= min(8 ** depth, t_prime)
    if len(found) > t_prime:
        return set(sorted(found, key=lambda t: t.sorted_nodes())[:t_prime])
    return found


def list_triangles(g: Graph, t: int, detector: Optional[Callable] = None,
                   params: Optional[ListingParams] = None,
                   trace: Optional[list] = None) -> list[Triangle]:
    """List min(t, z) distinct triangles of g using only a detection
    oracle inside the recursion. All returned triangles are valid and
    distinct; exactly min(t, z) are returned."""
    if t < 1:
        raise ValueError("t must be >= 1")
    detector = detector or solvers.detect_triangle
    params = params or ListingParams()
    stage1 = stage1_high_degree(g, params.delta, t)
    out: list[Triangle] = list(stage1.triangles[:t])
    if len(out) >= t or stage1.residual.edge_count < 3:
        return out[:t]
    h = stage2_tripartite(stage1.residual)
    found_h = stage3_recurse(h, 6 * t, detector, params, trace)
    n_res = stage1.residual.node_count
    projected = {
        Triangle(frozenset(stage1.node_map[x % n_res] for x in tri.nodes))
        for tri in found_h
    }
    for tri in sorted(projected, key=lambda tr: tr.sorted_nodes()):
        if len(out) >= t:
            break
        out.append(tri)
    return out
