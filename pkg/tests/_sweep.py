"""One pass over every D4-D6 quiver shape and every crossing vector of its catalog.

Several test modules need the same expensive data (base graphs, posets,
oracle tables), so it is computed once per session and shared.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx

from artifact.dimer import (
    BaseGraph,
    FlipPoset,
    MixedDimerConfiguration,
    build_base_graph,
    enumerate_poset,
    f_polynomial_dimer,
    minimal_matching,
    place_nodes,
)
from artifact.evector import f_polynomial_evector
from artifact.jacobian import module_from_arc
from artifact.oracle import enumerate_cluster_variables
from artifact.poly import Poly
from artifact.quiver import Quiver, VatneClass, classify_vatne
from artifact.surface import Triangulation, arcs_not_in, catalog_dvectors, crossing_vector, ideal_triangulations, realize

SIZES = (4, 5, 6)


@dataclass
class Instance:
    q: Quiver
    vc: VatneClass
    d: tuple[int, ...]
    family: str
    singular: frozenset
    g: BaseGraph
    mmin: MixedDimerConfiguration
    poset: FlipPoset
    dimer: Poly
    evector: Poly
    oracle: Poly


@dataclass
class Sweep:
    quivers: list[tuple[Quiver, VatneClass, Triangulation]] = field(default_factory=list)
    instances: list[Instance] = field(default_factory=list)
    # crossing vectors reached by arcs whose modules disagree on singular arrows
    ambiguous_singular: list[tuple[Quiver, tuple[int, ...]]] = field(default_factory=list)
    seconds: float = 0.0


def shapes(n: int) -> list[Quiver]:
    """One quiver per isomorphism class among quivers of ideal triangulations of the punctured n-gon."""
    out: list[Quiver] = []
    for _, q in ideal_triangulations(n):
        if not any(nx.is_isomorphic(q.digraph(), c.digraph()) for c in out):
            out.append(q)
    return out


def _singular_by_vector(t: Triangulation) -> dict[tuple[int, ...], set[frozenset]]:
    seen: dict[tuple[int, ...], set[frozenset]] = {}
    for arc in arcs_not_in(t):
        seen.setdefault(crossing_vector(t, arc), set()).add(module_from_arc(t, arc).singular)
    return seen


@lru_cache(maxsize=None)
def sweep() -> Sweep:
    start = time.perf_counter()
    out = Sweep()
    for n in SIZES:
        for q in shapes(n):
            vc = classify_vatne(q)
            t = realize(q)
            out.quivers.append((q, vc, t))
            g0 = build_base_graph(q, t=t)
            table = enumerate_cluster_variables(q)
            sing_by_d = _singular_by_vector(t)
            for cv in catalog_dvectors(q, vc):
                options = sing_by_d[cv.entries]
                if len(options) > 1:
                    out.ambiguous_singular.append((q, cv.entries))
                for sing in sorted(options, key=sorted):
                    g = place_nodes(g0, cv.entries, sing)
                    out.instances.append(
                        Instance(
                            q=q,
                            vc=vc,
                            d=cv.entries,
                            family=cv.provenance,
                            singular=sing,
                            g=g,
                            mmin=minimal_matching(g, cv.entries, sing),
                            poset=enumerate_poset(g, cv.entries, sing),
                            dimer=f_polynomial_dimer(q, cv.entries, sing, g=g0),
                            evector=f_polynomial_evector(q, cv.entries, sing),
                            oracle=table.get(cv.entries, Poly.zero(q.n)),
                        )
                    )
    out.seconds = time.perf_counter() - start
    return out
