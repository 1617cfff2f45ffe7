"""4-clique detection via one 6SUM call over vectors mod 3.

Each node gets a design label viewed as a vector over Z3; each edge
contributes the sum of its endpoint labels. A 4-clique's six edges hit
each corner label exactly 3 times, so they sum to zero componentwise.
Conversely, with pairwise label intersections under 1/11 of the set size,
any six edge values summing to zero force every node label to appear a
multiple of 3 times, and six distinct simple edges can only do that as
the edge set of a 4-clique.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import prand, solvers
from .core import Graph

DESIGN_RATIO_C = 23  # intersection/set-size ratio 2/23 < 1/11


@lru_cache(maxsize=32)
def _label_design(m_pow2: int) -> prand.DesignFamily:
    return prand.build_design(max(2, m_pow2), DESIGN_RATIO_C,
                              strategy="polynomial")


def detect_4clique_via_6sum(g: Graph,
                            solver_6sum: Optional[Callable] = None,
                            design: Optional[prand.DesignFamily] = None):
    """Returns (has_4clique, sorted node quadruple or None).

    The 6SUM solver must return six distinct element indices; the design
    must have intersection ratio under 1/11 (checked). A decoded witness
    failing the clique check is a broken precondition and raises.
    """
    solver_6sum = solver_6sum or solvers.solve_6sum_z3
    edges = g.edges()
    if len(edges) < 6:
        return False, None
    if design is None:
        design = _label_design(1 << max(1, (g.node_count - 1).bit_length()))
    if design.m < g.node_count:
        raise ValueError("design too small for this graph")
    if design.intersection_bound * 11 >= design.set_size:
        raise ValueError("design intersection ratio must be under 1/11")
    labels = np.stack([prand.design_to_label(design, a, base=3)
                       for a in range(g.node_count)])
    values = np.ascontiguousarray(
        (labels[[u for u, _ in edges]] + labels[[v for _, v in edges]]) % 3,
        dtype=np.uint8)
    wit = solver_6sum(values)
    if wit is None:
        return False, None
    chosen = [edges[i] for i in wit]
    nodes: dict[int, int] = {}
    for u, v in chosen:
        nodes[u] = nodes.get(u, 0) + 1
        nodes[v] = nodes.get(v, 0) + 1
    quad = tuple(sorted(nodes))
    if len(nodes) != 4 or set(nodes.values()) != {3} or \
            {frozenset(e) for e in chosen} != \
            {frozenset((a, b)) for ai, a in enumerate(quad) for b in quad[ai + 1:]}:
        raise AssertionError(
            "zero-sum edges did not decode to a 4-clique; the design "
            "ratio precondition is broken")
    return True, quad
