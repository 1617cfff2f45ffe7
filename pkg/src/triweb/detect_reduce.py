"""Triangle-freeness decided by a single 3SUM or 3XOR call.

Nodes get labels X_a; each edge contributes Y_(a,b) = X_a - X_b (both
orientations, for the sum variant) or X_a ^ X_b (one per edge, for the
xor variant). A triangle always yields a zero triple, so completeness is
unconditional. Soundness is where the modes differ:

  randomized     uniform labels; a zero triple among labels of a
                 triangle-free graph appears with probability at most 1/2
                 per round, and decoded witnesses are verified against the
                 adjacency before being believed (Las Vegas retry on a
                 spurious one).
  deterministic  labels are characteristic vectors of a design with
                 pairwise intersections under 1/5 of the set size; a zero
                 triple then forces each node label to appear twice, which
                 is exactly a triangle. No retries, no error.

Solvers are injected: any callable (values, width) -> witness indices or
None works for xor, (values) -> witness for sum. A solver may also return
a bare bool, in which case the randomized mode degrades to independent
repetitions whose yes-verdicts must all agree (error 2^-rounds).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from . import prand, solvers
from .core import Graph, Triangle

DESIGN_RATIO_C = 11  # intersection/set-size ratio 2/11 < 1/5


@dataclass(frozen=True)
class EdgeLabeling:
    """Node labels, derived edge values, and the value-index -> edge map."""

    node_labels: tuple
    edge_values: tuple
    back_map: tuple  # back_map[i] = (a, b) with edge_values[i] built from it
    mode: str  # "3xor" or "3sum"


@lru_cache(maxsize=32)
def _label_design(m_pow2: int) -> prand.DesignFamily:
    return prand.build_design(max(2, m_pow2), DESIGN_RATIO_C,
                              strategy="polynomial")


def _design_labels(g: Graph, base: int) -> list:
    size = 1 << max(1, (g.node_count - 1).bit_length())
    fam = _label_design(size)
    return [prand.design_to_label(fam, a, base) for a in range(g.node_count)]


def _random_labels(g: Graph, width: int, rng: random.Random) -> list[int]:
    return [rng.getrandbits(width) for _ in range(g.node_count)]


def label_edges_3xor(g: Graph, node_labels) -> EdgeLabeling:
    values, back = [], []
    for u, v in g.edges():
        values.append(node_labels[u] ^ node_labels[v])
        back.append((u, v))
    return EdgeLabeling(tuple(node_labels), tuple(values), tuple(back), "3xor")


def label_edges_3sum(g: Graph, node_labels) -> EdgeLabeling:
    values, back = [], []
    for u, v in g.edges():
        values.append(node_labels[u] - node_labels[v])
        back.append((u, v))
        values.append(node_labels[v] - node_labels[u])
        back.append((v, u))
    return EdgeLabeling(tuple(node_labels), tuple(values), tuple(back), "3sum")


def _decode_triangle(g: Graph, labeling: EdgeLabeling, witness) -> Optional[Triangle]:
    """Map a solver witness back to edges; accept only a real triangle."""
    edges = [labeling.back_map[i] for i in witness]
    undirected = {frozenset(e) for e in edges}
    nodes = {x for e in edges for x in e}
    if len(undirected) != 3 or len(nodes) != 3:
        return None
    tri = Triangle(frozenset(nodes))
    return tri if tri.in_graph(g) else None


def _xor_width(m: int) -> int:
    return max(1, 3 * max(m, 2).bit_length())


def _sum_width(m: int) -> int:
    # the directed multiset has 2m entries; three extra bits keep the
    # union bound over its triples at 1/6
    return _xor_width(m) + 3


def _detect(g: Graph, mode: str, seed: int, confidence_rounds: int,
            solver: Callable, labeler: Callable, det_labels: Callable,
            rand_width: int, solve):
    if g.edge_count < 3:
        return False, None
    if mode == "deterministic":
        labeling = labeler(g, det_labels())
        wit = solve(solver, labeling)
        if wit is None or wit is False:
            return False, None
        if wit is True:
            raise RuntimeError("deterministic mode needs a witness-returning solver")
        tri = _decode_triangle(g, labeling, wit)
        if tri is None:
            raise AssertionError(
                "deterministic zero triple decoded to a non-triangle; "
                "the design ratio precondition is broken")
        return True, tri
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    decision_only = None
    for _ in range(max(1, confidence_rounds)):
        labeling = labeler(g, _random_labels(g, rand_width, rng))
        wit = solve(solver, labeling)
        if wit is None or wit is False:
            return False, None
        if wit is True:
            decision_only = True
            continue
        tri = _decode_triangle(g, labeling, wit)
        if tri is not None:
            return True, tri
        # spurious collision: fresh labels next round
    if decision_only:
        # every round said yes without a certificate
        return True, None
    # witnesses kept failing verification; settle it exactly
    return _detect(g, "deterministic", seed, confidence_rounds, solver,
                   labeler, det_labels, rand_width, solve)


def detect_via_3xor(g: Graph, solver: Optional[Callable] = None,
                    mode: str = "deterministic", seed: int = 0,
                    confidence_rounds: int = 8):
    """Decide triangle-freeness with one 3XOR call per round.

    Returns (has_triangle, Triangle or None). See the module docstring for
    the mode semantics; witnesses are always adjacency-verified.
    """
    solver = solver or solvers.solve_3xor_quadratic
    width = _xor_width(g.edge_count)

    def det_labels():
        return _design_labels(g, base=2)

    def solve(sv, labeling):
        # the solver only needs a width >= every value; deterministic labels
        # are design-universe wide, randomized ones 3 lg m wide
        used = max(width, 1,
                   max((v.bit_length() for v in labeling.edge_values), default=1))
        return sv(list(labeling.edge_values), used)

    return _detect(g, mode, seed, confidence_rounds, solver,
                   label_edges_3xor, det_labels, width, solve)


def detect_via_3sum(g: Graph, solver: Optional[Callable] = None,
                    mode: str = "deterministic", seed: int = 0,
                    confidence_rounds: int = 8):
    """Decide triangle-freeness with one 3SUM call per round.

    The graph is made directed by keeping both orientations of every edge;
    deterministic labels are base-10 digit vectors (degree-6 sums of 0/1
    digits never carry), promoted to big integers when they outgrow
    machine words.
    """
    solver = solver or solvers.solve_3sum_quadratic

    def det_labels():
        return _design_labels(g, base=10)

    def solve(sv, labeling):
        return sv(list(labeling.edge_values))

    return _detect(g, mode, seed, confidence_rounds, solver,
                   label_edges_3sum, det_labels, _sum_width(g.edge_count), solve)


def single_round_verdict(g: Graph, kind: str, seed: int,
                         solver: Optional[Callable] = None) -> bool:
    """One randomized round, no witness verification: did the solver claim
    a zero triple? Used to measure the raw one-sided error rate."""
    if g.edge_count < 3:
        return False
    rng = random.Random(seed)
    if kind == "3xor":
        solver = solver or solvers.solve_3xor_quadratic
        width = _xor_width(g.edge_count)
        labeling = label_edges_3xor(g, _random_labels(g, width, rng))
        return solver(list(labeling.edge_values), width) is not None
    if kind == "3sum":
        solver = solver or solvers.solve_3sum_quadratic
        labeling = label_edges_3sum(
            g, _random_labels(g, _sum_width(g.edge_count), rng))
        return solver(list(labeling.edge_values)) is not None
    raise ValueError(f"unknown kind {kind!r}")
