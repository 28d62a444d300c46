"""Submodule-indexing vectors and the coefficient rule.

An e-vector picks a candidate dimension vector for a submodule of the arc
module with dimension vector d.  Arrows constrain e through the
acceptability inequality, vertices with (d, e) = (2, 1) form the critical
set C, and each component of C either carries a free projective line
(coefficient 2) or is pinned by a critical arrow (coefficient 1).

The two bijection directions with mixed dimer configurations live at the
bottom of the module: :func:`e_to_dimer` replays weighted flips, and
:func:`dimer_to_e` peels cycles off the superimposition with the minimal
matching.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable

import networkx as nx

from .poly import Poly
from .quiver import Quiver

Arrow = tuple[int, int]


class BijectionError(RuntimeError):
    """A weighted-flip replay or a cycle peel left inconsistent data."""


@dataclass(frozen=True, order=True)
class EVector:
    entries: tuple[int, ...]

    def serialize(self) -> str:
        return ",".join(map(str, self.entries))

    @classmethod
    def parse(cls, text: str) -> "EVector":
        return cls(tuple(int(v) for v in text.split(",")))

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)


def _pos(x: int) -> int:
    return x if x > 0 else 0


def is_acceptable(d, e, arrow: Arrow) -> bool:
    i, j = arrow
    return e[i] - e[j] <= _pos(d[i] - d[j])


def is_critical(d, e, arrow: Arrow) -> bool:
    i, j = arrow
    return ((d[i], e[i]) == (2, 1) and (d[j], e[j]) == (1, 0)) or ((d[j], e[j]) == (2, 1) and (d[i], e[i]) == (1, 1))


def critical_set(d, e) -> list[int]:
    return [i for i in range(len(d)) if (d[i], e[i]) == (2, 1)]


def _shared_constraints(q: Quiver, d, e, comp: frozenset[int], sing: set[Arrow]) -> int:
    """Pairs of critical arrows through one vertex of ``comp`` that impose a single constraint.

    If i -> j is critical into j, j -> k is critical out of j, and the arrow
    k -> i closing the triangle is singular, the relation of that triangle
    sends the image of i -> j into the kernel of j -> k.  Both are lines in
    the plane at j, so they coincide and the two arrows pin the same line.
    """
    arrows = set(q.arrows)
    count = 0
    for j in comp:
        for (i, jj) in q.arrows:
            if jj != j or (i, j) in sing or not is_critical(d, e, (i, j)):
                continue
            for (j2, k) in q.arrows:
                if j2 != j or (j, k) in sing or not is_critical(d, e, (j, k)):
                    continue
                if (k, i) in arrows and (k, i) in sing:
                    count += 1
    return count


def critical_components(q: Quiver, d, e, singular: Iterable[Arrow] = ()) -> list[tuple[frozenset[int], int]]:
    """Components S of C with ν(S), the number of independent critical constraints on S.

    Critical arrows touching S are counted; singular arrows carry the zero
    map and never count.  Two critical arrows closing a triangle with a
    singular arrow count once (see :func:`_shared_constraints`).
    """
    sing = set(singular)
    C = critical_set(d, e)
    g = q.graph().subgraph(C)
    out = []
    for comp in sorted(nx.connected_components(g), key=min):
        comp = frozenset(comp)
        nu = sum(
            1 for a in q.arrows if a not in sing and (a[0] in comp or a[1] in comp) and is_critical(d, e, a)
        )
        out.append((comp, nu - _shared_constraints(q, d, e, comp, sing)))
    return out


def literal_critical_count(q: Quiver, d, e, comp: Iterable[int], singular: Iterable[Arrow] = ()) -> int:
    """ν(S) counted literally: every non-singular critical arrow touching S."""
    sing = set(singular)
    comp = set(comp)
    return sum(1 for a in q.arrows if a not in sing and (a[0] in comp or a[1] in comp) and is_critical(d, e, a))


def global_nu(q: Quiver, d, e, singular: Iterable[Arrow] = ()) -> int:
    """ν(C) read globally: all critical arrows with a vertex in C."""
    sing = set(singular)
    C = set(critical_set(d, e))
    return sum(1 for a in q.arrows if a not in sing and (a[0] in C or a[1] in C) and is_critical(d, e, a))


def is_submodule_indexing(q: Quiver, d, e, singular: Iterable[Arrow] = ()) -> bool:
    sing = set(singular)
    if any(not 0 <= x <= y for x, y in zip(e, d)):
        return False
    if any(a not in sing and not is_acceptable(d, e, a) for a in q.arrows):
        return False
    return all(nu <= 1 for _, nu in critical_components(q, d, e, sing))


def coefficient(q: Quiver, d, e, singular: Iterable[Arrow] = ()) -> int:
    """2 to the number of critical components with ν = 0."""
    return 2 ** sum(1 for _, nu in critical_components(q, d, e, singular) if nu == 0)


def enumerate_submodule_indexing(q: Quiver, d, singular: Iterable[Arrow] = ()) -> list[EVector]:
    """All submodule-indexing vectors, sorted by total size then lexicographically."""
    d = tuple(d)
    sing = frozenset(singular)
    out = [
        EVector(e)
        for e in product(*[range(x + 1) for x in d])
        if is_submodule_indexing(q, d, e, sing)
    ]
    out.sort(key=lambda v: (sum(v.entries), v.entries))
    return out


def nu_disagreements(q: Quiver, d, singular: Iterable[Arrow] = ()) -> list[EVector]:
    """Vectors where the global and per-component readings of ν ≤ 1 differ."""
    d = tuple(d)
    sing = frozenset(singular)
    bad = []
    for e in product(*[range(x + 1) for x in d]):
        if any(not 0 <= x <= y for x, y in zip(e, d)):
            continue
        if any(a not in sing and not is_acceptable(d, e, a) for a in q.arrows):
            continue
        per_comp = all(nu <= 1 for _, nu in critical_components(q, d, e, sing))
        if per_comp != (global_nu(q, d, e, sing) <= 1):
            bad.append(EVector(e))
    return bad


def f_polynomial_evector(q: Quiver, d, singular: Iterable[Arrow] = ()) -> Poly:
    sing = frozenset(singular)
    terms = {v.entries: coefficient(q, d, v.entries, sing) for v in enumerate_submodule_indexing(q, d, sing)}
    return Poly(q.n, terms)


# ---------------------------------------------------------------------------
# the bijection with mixed dimer configurations


@dataclass(frozen=True)
class WeightedConfiguration:
    """Integer edge weights; negative entries are antiedges."""

    weights: tuple[int, ...]

    def antiedges(self) -> list[int]:
        return [k for k, w in enumerate(self.weights) if w < 0]


def e_to_dimer(g, q: Quiver, d, singular: Iterable[Arrow], e, trace: list[str] | None = None, order: Iterable[int] | None = None):
    """Replay e as weighted flips from M_-: tile i is flipped e_i times.

    Tiles are visited in increasing index unless ``order`` says otherwise;
    intermediate weights may go negative.  The result must have all weights
    in 0..2, satisfy the valence condition and be node-monochromatic, else
    :class:`BijectionError` is raised.
    """
    from .dimer import is_node_monochromatic, minimal_matching, place_nodes, valence_violations, weighted_flip

    d = tuple(d)
    e = tuple(e)
    sing = frozenset(singular)
    if not g.nodes:
        g = place_nodes(g, d, sing)
    m = minimal_matching(g, d, sing)
    tiles = list(order) if order is not None else list(range(len(d)))
    for i in tiles:
        for _ in range(e[i]):
            m = weighted_flip(g, m, i)
            if trace is not None:
                anti = WeightedConfiguration(m.mult).antiedges()
                trace.append(f"flip tile {i}: flips {','.join(map(str, m.flips))}" + (f"; antiedges {anti}" if anti else ""))
    if tuple(m.flips) != e:
        raise BijectionError("tile order does not cover every tile")
    if any(w < 0 for w in m.mult):
        raise BijectionError(f"negative weights remain on edges {WeightedConfiguration(m.mult).antiedges()}")
    if valence_violations(g, d, m):
        raise BijectionError("weighted flips ended outside the valence condition")
    if not is_node_monochromatic(g, m):
        raise BijectionError("weighted flips ended in a node-polychromatic configuration")
    return m


def _face_sides(g) -> dict[int, list[int]]:
    """Faces on the two sides of each edge: tile indices, -1 for the outer face."""
    sides = {k: [] for k in range(len(g.edges))}
    for i in range(len(g.tiles)):
        for k, _ in g.tile_edges(i):
            sides[k].append(i)
    for k in sides:
        if len(sides[k]) == 1:
            sides[k].append(-1)
    return sides


def enclosed_tiles(g, cycle_edges: set[int]) -> frozenset[int]:
    """Tiles separated from the outer face by ``cycle_edges``."""
    sides = _face_sides(g)
    adj: dict[int, set[int]] = {}
    for k, (a, b) in sides.items():
        if k in cycle_edges:
            continue
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen = {-1}
    stack = [-1]
    while stack:
        f = stack.pop()
        for h in adj.get(f, ()):
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return frozenset(i for i in range(len(g.tiles)) if i not in seen)


def _runs_clockwise(g, cyc: list[int], inside: frozenset[int], k: int) -> bool:
    """Whether the directed cycle keeps its enclosed tiles on the right."""
    u, v = cyc[0], cyc[1]
    for i in g.edge_tiles(k):
        if i in inside:
            tile = g.tiles[i]
            pos = tile.index(u)
            return tile[(pos + 1) % len(tile)] == v
    raise BijectionError("cycle edge borders no enclosed tile")


def dimer_to_e(g, m, mmin, trace: list[str] | None = None, rng: random.Random | None = None) -> EVector:
    """Recover e from a configuration by peeling cycles off its superimposition with M_-.

    Edges present in both configurations cancel one for one.  The rest is
    directed black to white on edges of ``m`` and white to black on edges of
    M_-, so every vertex has as many edges in as out, and it is cut into
    directed cycles: the longest one first, ties going to the
    lexicographically smallest set of enclosed tiles, or to a random one
    when ``rng`` is given.  A counterclockwise cycle adds one to each tile
    it encloses.  A clockwise cycle only occurs
    around a hole of the support (a tile with d = 0 surrounded by supported
    tiles) and subtracts one, which cancels the outer cycle there.
    """
    residue = [a - b for a, b in zip(m.mult, mmin.mult)]
    e = [0] * len(g.tiles)
    while True:
        h = nx.DiGraph()
        for k, x in enumerate(residue):
            if x:
                bv, wv = g.edges[k]
                h.add_edge(*((bv, wv) if x > 0 else (wv, bv)), key=k)
        longest: list[tuple[tuple[int, ...], list[int], frozenset[int], list[int]]] = []
        for cyc in nx.simple_cycles(h):
            if len(cyc) <= 2 or (longest and len(cyc) < len(longest[0][3])):
                continue
            ks = [h.edges[cyc[i], cyc[(i + 1) % len(cyc)]]["key"] for i in range(len(cyc))]
            inside = enclosed_tiles(g, set(ks))
            if longest and len(cyc) > len(longest[0][3]):
                longest = []
            longest.append((tuple(sorted(inside)), ks, inside, cyc))
        if not longest:
            break
        if rng is None:
            _, ks, inside, cyc = min(longest, key=lambda c: c[0])
        else:
            _, ks, inside, cyc = rng.choice(sorted(longest, key=lambda c: (c[0], c[1])))
        if not inside:
            raise BijectionError("a peeled cycle encloses no tile")
        sign = -1 if _runs_clockwise(g, cyc, inside, ks[0]) else 1
        for k in ks:
            residue[k] -= 1 if residue[k] > 0 else -1
        for i in inside:
            e[i] += sign
        if trace is not None:
            names = " ".join(g.names[v] for v in cyc)
            way = "clockwise" if sign < 0 else "counterclockwise"
            trace.append(f"peel {way} cycle of length {len(cyc)} ({names}) enclosing tiles {sorted(inside)}")
    if any(residue):
        raise BijectionError("superimposition leaves edges outside every cycle")
    if any(x < 0 for x in e):
        raise BijectionError("peeling produced a negative entry")
    return EVector(tuple(e))
