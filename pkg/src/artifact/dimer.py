"""Base graphs, mixed dimer configurations and the flip poset.

The base graph is read off a triangulation realising the quiver.  Black
vertices are the marked points (and the puncture when three or more radii
meet there), white vertices are the triangle centres, and the tile of arc i
is the quadrilateral around arc i whose corners are the two endpoints of i
and the centres of the two triangles containing it.  Walking a tile with the
tile on the right ("clockwise") the edge shared with a neighbour j is crossed
black to white exactly when the quiver has i -> j, so the white vertex sits
on the right when the edge is crossed in the direction of the arrow.

Two corners of the puncture need small gadgets, both recorded on the graph:

* two radii: the two puncture triangles share one white hub, the puncture
  itself is removed and each radius gets one private white vertex, so the
  oriented 4-cycle through both radii becomes a 4-star around the hub;
* a self-folded triangle: the loop keeps its square, the radius is moved to
  the far corner of the outer triangle where it becomes a square hanging off
  a black hub shared with the two outer sides, which turn into hexagons.

A configuration is stored as edge multiplicities together with the number of
flips applied at each tile.  Multiplicities are affine in the flip counts,
so a configuration is determined by its flip vector.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable

import networkx as nx

from .poly import Poly
from .quiver import Quiver, VatneClass, classify_vatne
from .surface import Triangulation, realize, _triangles

Arrow = tuple[int, int]
BLACK, WHITE = "black", "white"


class BaseGraphError(ValueError):
    """The quiver has no base graph (not type D) or the construction broke an invariant."""


class FlipNotAllowed(ValueError):
    """A flip was requested at a tile whose black-to-white edges are not all present."""


class ValenceError(RuntimeError):
    """A configuration violates the valence condition."""


@dataclass(frozen=True)
class BaseGraph:
    """A planar bipartite graph tiled by the quiver vertices.

    ``tiles[i]`` lists the vertices of tile i in clockwise order (tile on the
    right).  ``edges`` are (black, white) pairs in a fixed order; edge k of
    the graph is ``edges[k]``.  ``nodes`` holds (vertex, colour) pairs and is
    empty until :func:`place_nodes` is called.
    """

    quiver: Quiver
    colors: tuple[str, ...]
    names: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    tiles: tuple[tuple[int, ...], ...]
    triangulation: Triangulation | None = None
    hub: int | None = None
    nodes: tuple[tuple[int, str], ...] = ()
    _edge_index: dict = field(default=None, compare=False, hash=False, repr=False)
    _tile_edges: tuple = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        index = {e: k for k, e in enumerate(self.edges)}
        object.__setattr__(self, "_edge_index", index)
        per_tile = []
        for cyc in self.tiles:
            signs = []
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                if self.colors[a] == BLACK:
                    signs.append((index[(a, b)], -1))
                else:
                    signs.append((index[(b, a)], +1))
            per_tile.append(tuple(signs))
        object.__setattr__(self, "_tile_edges", tuple(per_tile))

    # -- lookups ----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.colors)

    def edge_index(self, black: int, white: int) -> int:
        return self._edge_index[(black, white)]

    def tile_edges(self, i: int) -> tuple[tuple[int, int], ...]:
        """(edge, sign) around tile i: sign -1 for black-to-white clockwise, +1 otherwise."""
        return self._tile_edges[i]

    def edge_tiles(self, k: int) -> list[int]:
        return [i for i in range(len(self.tiles)) if any(e == k for e, _ in self._tile_edges[i])]

    def shared_edges(self, i: int, j: int) -> list[int]:
        a = {e for e, _ in self._tile_edges[i]}
        return sorted(e for e, _ in self._tile_edges[j] if e in a)

    def arrow_edge(self, arrow: Arrow) -> int:
        """The edge straddled by ``arrow``."""
        (k,) = self.shared_edges(*arrow)
        return k

    def tile_vertices(self, i: int) -> frozenset[int]:
        return frozenset(self.tiles[i])

    def is_boundary_edge(self, k: int) -> bool:
        return len(self.edge_tiles(k)) == 1

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    # -- embedding ----------------------------------------------------------
    def rotation(self) -> dict[int, tuple[int, ...]]:
        """Neighbours of each vertex in cyclic order, read off the tiles.

        Consecutive neighbours bound a common tile except at one place per
        boundary vertex, where the outer face sits.
        """
        succ: dict[int, dict[int, int]] = {v: {} for v in range(self.n_vertices)}
        for cyc in self.tiles:
            k = len(cyc)
            for idx in range(k):
                u, v, w = cyc[idx - 1], cyc[idx], cyc[(idx + 1) % k]
                succ[v][w] = u
        out = {}
        nbrs = {v: set() for v in range(self.n_vertices)}
        for b, w in self.edges:
            nbrs[b].add(w)
            nbrs[w].add(b)
        for v in range(self.n_vertices):
            s = succ[v]
            heads = sorted(nbrs[v] - set(s.values()))
            order: list[int] = []
            seen: set[int] = set()
            starts = heads + sorted(nbrs[v])
            for start in starts:
                u = start
                while u not in seen:
                    seen.add(u)
                    order.append(u)
                    if u not in s:
                        break
                    u = s[u]
            out[v] = tuple(order)
        return out

    def faces(self) -> list[tuple[int, ...]]:
        """All faces of the embedding given by :meth:`rotation` (tiles and the outer face)."""
        rot = self.rotation()
        nxt = {}
        for v, order in rot.items():
            k = len(order)
            for idx, u in enumerate(order):
                nxt[(u, v)] = order[(idx + 1) % k]
        seen = set()
        out = []
        for b, w in self.edges:
            for dart in ((b, w), (w, b)):
                if dart in seen:
                    continue
                face = []
                u, v = dart
                while (u, v) not in seen:
                    seen.add((u, v))
                    face.append(u)
                    u, v = v, nxt[(u, v)]
                out.append(tuple(face))
        return out

    def outer_faces(self) -> list[tuple[int, ...]]:
        tile_sets = {_cyclic_key(c) for c in self.tiles}
        return [f for f in self.faces() if _cyclic_key(f) not in tile_sets]

    # -- text -------------------------------------------------------------
    def describe(self) -> str:
        lines = [f"vertices {self.n_vertices} edges {len(self.edges)} tiles {len(self.tiles)}"]
        for i, cyc in enumerate(self.tiles):
            lines.append(f"tile {i}: " + " ".join(self.names[v] for v in cyc))
        for v, c in self.nodes:
            lines.append(f"node {self.names[v]} {c}")
        return "\n".join(lines)


def _cyclic_key(cyc) -> frozenset:
    k = len(cyc)
    return frozenset(frozenset((cyc[i], cyc[(i + 1) % k])) for i in range(k))


# ---------------------------------------------------------------------------
# construction


class _Builder:
    def __init__(self) -> None:
        self.ids: dict = {}
        self.colors: list[str] = []
        self.names: list[str] = []

    def vertex(self, key, color: str) -> int:
        if key not in self.ids:
            self.ids[key] = len(self.colors)
            self.colors.append(color)
            self.names.append(_key_name(key))
        return self.ids[key]


def _key_name(key) -> str:
    kind = key[0]
    if kind == "pt":
        return f"p{key[1]}" + (key[2] if len(key) > 2 else "")
    if kind == "W":
        return f"w{key[1]}"
    if kind == "P":
        return "P"
    return "".join(str(x) for x in key)


def build_base_graph(q: Quiver, singular: Iterable[Arrow] = (), t: Triangulation | None = None) -> BaseGraph:
    """The base graph of a type D quiver.

    ``singular`` is accepted for symmetry with the other constructors; the
    graph itself does not depend on it (singular arrows only enter through
    the minimal matching).
    """
    vc = classify_vatne(q)
    if vc.type_tag not in ("I", "II", "III", "IV"):
        raise BaseGraphError("base graphs are built for type D quivers only")
    if t is None:
        t = realize(q)
    n = t.n
    tris = _triangles(t)
    folded = t.self_folded_pairs()
    radii = t.radii_points()
    b = _Builder()

    split: set[int] = set()
    hub_white = False
    gadget_c = None
    if folded:
        (loop_idx, rad_idx) = folded[0]
        p = t.arcs[loop_idx].start
        outer = next(tr for tr in tris if not tr.self_folded and tr.sides[2] == loop_idx and tr.corners[2] is not None)
        v = outer.corners[1] % n
        split = {p, v}
        gadget_c = (loop_idx, rad_idx, outer)
    elif len(radii) == 2:
        split = set(radii)
        hub_white = True

    def black(c, side: str) -> int:
        if c is None:
            return b.vertex(("P",), BLACK)
        c %= n
        return b.vertex(("pt", c, side) if c in split else ("pt", c), BLACK)

    def white(ti: int, tr) -> int:
        if hub_white and tr.corners[2] is None:
            return b.vertex(("H",), WHITE)
        return b.vertex(("W", ti), WHITE)

    # fix an order of creation: points first, then centres
    for p in range(n):
        for side in ("R", "M", "L"):
            if p not in split and side != "R":
                continue
            if p in split and gadget_c is not None and p != gadget_c[2].corners[1] % n and side == "M":
                continue
            black(p, side)

    segments: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(n)}
    for ti, tr in enumerate(tris):
        w = white(ti, tr)
        corners = tr.corners
        sides = ("R", "M", "L") if corners[2] is not None else ("R", "L", None)
        for k, s in enumerate(tr.sides):
            if s is None:
                continue
            a = black(corners[(k + 1) % 3], sides[(k + 1) % 3])
            c = black(corners[k], sides[k])
            segments[s].append((a, w, c))

    tiles: list[tuple[int, ...] | None] = [None] * n
    hub = None
    if gadget_c is not None:
        loop_idx, rad_idx, outer = gadget_c
        x, y, _ = outer.sides
        v = outer.corners[1] % n
        vm = b.vertex(("pt", v, "M"), BLACK)
        s2 = b.vertex(("s", x if x is not None else "b", "x"), WHITE)
        s3 = b.vertex(("s", y if y is not None else "b", "y"), WHITE)
        tb = b.vertex(("t", rad_idx), BLACK)
        tiles[rad_idx] = (vm, s2, tb, s3)
        for arc, filler in ((x, s2), (y, s3)):
            if arc is None:
                continue
            segs = segments[arc]
            tiles[arc] = _close_with(segs, vm, filler)
        segments[rad_idx] = []
        hub = vm
    elif hub_white:
        h = b.vertex(("H",), WHITE)
        for idx, a in enumerate(t.arcs):
            if a.kind == "radius":
                pr = b.vertex(("pt", a.start, "R"), BLACK)
                pl = b.vertex(("pt", a.start, "L"), BLACK)
                tw = b.vertex(("t", idx), WHITE)
                tiles[idx] = (pr, h, pl, tw)
                segments[idx] = []
        hub = h
    elif len(radii) >= 3:
        hub = b.ids[("P",)]

    for i in range(n):
        if tiles[i] is not None:
            continue
        tiles[i] = _chain(segments[i], i)

    used = set(v for cyc in tiles for v in cyc)
    # drop vertices that ended up in no tile (the puncture inside the gadgets)
    keep = [v for v in range(len(b.colors)) if v in used]
    renum = {v: k for k, v in enumerate(keep)}
    colors = tuple(b.colors[v] for v in keep)
    names = tuple(b.names[v] for v in keep)
    tiles_r = tuple(tuple(renum[v] for v in cyc) for cyc in tiles)
    edge_set = set()
    for cyc in tiles_r:
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            if colors[u] == colors[v]:
                raise BaseGraphError(f"edge {names[u]}-{names[v]} joins equal colours")
            edge_set.add((u, v) if colors[u] == BLACK else (v, u))
    edges = tuple(sorted(edge_set))
    g = BaseGraph(q, colors, names, edges, tiles_r, t, renum.get(hub) if hub is not None else None)
    _check_base_graph(g)
    return g


def _chain(segs: list[tuple[int, int, int]], i: int) -> tuple[int, ...]:
    if len(segs) != 2:
        raise BaseGraphError(f"arc {i} lies in {len(segs)} triangles")
    (a1, w1, c1), (a2, w2, c2) = segs
    if c1 == a2 and c2 == a1:
        return (a1, w1, c1, w2)
    raise BaseGraphError(f"tile {i} does not close up")


def _close_with(segs, hub: int, filler: int) -> tuple[int, ...]:
    """Join two segments of a hexagonal tile: the gap at the hub is bridged by ``filler``."""
    (a1, w1, c1), (a2, w2, c2) = segs
    for (a, w, c), (a_, w_, c_) in (((a1, w1, c1), (a2, w2, c2)), ((a2, w2, c2), (a1, w1, c1))):
        if c == a_ and a == hub:
            # hub -> w -> c=a_ -> w_ -> c_ -> filler -> hub
            return (hub, w, c, w_, c_, filler)
        if c == a_ and c_ == hub:
            # a -> w -> c -> w_ -> hub -> filler -> a
            return (a, w, c, w_, hub, filler)
    raise BaseGraphError("hexagonal tile does not close up")


def _check_base_graph(g: BaseGraph) -> None:
    q = g.quiver
    counts = {k: 0 for k in range(len(g.edges))}
    for i in range(len(g.tiles)):
        for e, _ in g.tile_edges(i):
            counts[e] += 1
    if any(c == 0 or c > 2 for c in counts.values()):
        raise BaseGraphError("an edge lies in no tile or in more than two")
    adjacent = {frozenset(a) for a in q.arrows}
    for i in range(q.n):
        for j in range(i + 1, q.n):
            shared = g.shared_edges(i, j)
            if frozenset((i, j)) in adjacent:
                if len(shared) != 1:
                    raise BaseGraphError(f"tiles {i} and {j} share {len(shared)} edges")
            elif shared:
                raise BaseGraphError(f"tiles {i} and {j} share an edge without an arrow")
    for (i, j) in q.arrows:
        k = g.arrow_edge((i, j))
        sign = dict(g.tile_edges(i))[k]
        if sign != -1:
            raise BaseGraphError(f"arrow {i}->{j} does not see white on the right")
    if not nx.is_connected(g.graph()) or not nx.check_planarity(g.graph())[0]:
        raise BaseGraphError("base graph is not a connected planar graph")
    v, e, f = g.n_vertices, len(g.edges), len(g.faces())
    if v - e + f != 2 or len(g.outer_faces()) != 1:
        raise BaseGraphError("tiles do not form a disk")


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True, order=True)
class MixedDimerConfiguration:
    """Edge multiplicities plus the flip count of every tile since M_-."""

    flips: tuple[int, ...]
    mult: tuple[int, ...]

    def degree(self, g: BaseGraph) -> list[int]:
        deg = [0] * g.n_vertices
        for k, (bv, wv) in enumerate(g.edges):
            deg[bv] += self.mult[k]
            deg[wv] += self.mult[k]
        return deg

    def monomial(self) -> tuple[int, ...]:
        return self.flips


def _layer(g: BaseGraph, support: set[int]) -> list[int]:
    """M(G_k): black-to-white clockwise boundary edges of the tiles in ``support``."""
    mult = [0] * len(g.edges)
    inside: dict[int, int] = {}
    for i in support:
        for e, _ in g.tile_edges(i):
            inside[e] = inside.get(e, 0) + 1
    for i in sorted(support):
        for e, sign in g.tile_edges(i):
            if sign == -1 and inside[e] == 1:
                mult[e] += 1
    return mult


def minimal_matching(g: BaseGraph, d, singular: Iterable[Arrow] = ()) -> MixedDimerConfiguration:
    d = tuple(d)
    mult = [0] * len(g.edges)
    for level in (1, 2):
        layer = _layer(g, {i for i, x in enumerate(d) if x >= level})
        mult = [a + c for a, c in zip(mult, layer)]
    for arrow in sorted(set(singular)):
        mult[g.arrow_edge(arrow)] += 1
    m = MixedDimerConfiguration((0,) * len(d), tuple(mult))
    check_valence(g, d, m)
    return m


def valence_violations(g: BaseGraph, d, m: MixedDimerConfiguration) -> list[int]:
    deg = m.degree(g)
    bad = set()
    for v, x in enumerate(deg):
        if x > 2 or x < 0:
            bad.add(v)
    for i, cyc in enumerate(g.tiles):
        for v in cyc:
            if d[i] == 2 and deg[v] != 2:
                bad.add(v)
            if d[i] == 1 and deg[v] < 1:
                bad.add(v)
    if any(x < 0 or x > 2 for x in m.mult):
        bad.add(-1)
    return sorted(bad)


def check_valence(g: BaseGraph, d, m: MixedDimerConfiguration) -> None:
    bad = valence_violations(g, d, m)
    if bad:
        raise ValenceError(f"valence condition fails at {[g.names[v] if v >= 0 else 'edge' for v in bad]}")


def can_flip(g: BaseGraph, d, m: MixedDimerConfiguration, tile: int) -> bool:
    return d[tile] > 0 and all(m.mult[e] >= 1 for e, s in g.tile_edges(tile) if s == -1)


def flip(g: BaseGraph, d, m: MixedDimerConfiguration, tile: int) -> MixedDimerConfiguration:
    """Exchange the black-to-white clockwise edges of ``tile`` for the other half."""
    if not can_flip(g, d, m, tile):
        raise FlipNotAllowed(f"tile {tile} cannot be flipped")
    out = weighted_flip(g, m, tile)
    check_valence(g, d, out)
    return out


def weighted_flip(g: BaseGraph, m: MixedDimerConfiguration, tile: int, times: int = 1) -> MixedDimerConfiguration:
    """Flip without checks; multiplicities may go negative (weights), ``times`` may be negative."""
    mult = list(m.mult)
    for e, s in g.tile_edges(tile):
        mult[e] += s * times
    flips = list(m.flips)
    flips[tile] += times
    return MixedDimerConfiguration(tuple(flips), tuple(mult))


def expected_multiplicity(g: BaseGraph, d, e, singular: Iterable[Arrow], edge: int) -> int:
    """Closed form for the multiplicity of ``edge`` after the flips ``e``.

    An edge shared by tiles i and j lies on an arrow i -> j and carries
    [d_i - d_j]_+ + e_j - e_i, plus one when the arrow is singular.  A
    boundary edge of tile i carries d_i - e_i if it runs black to white
    clockwise around i (an arrow from i out to the boundary) and e_i
    otherwise.
    """
    tiles = g.edge_tiles(edge)
    if len(tiles) == 1:
        i = tiles[0]
        sign = dict(g.tile_edges(i))[edge]
        return d[i] - e[i] if sign == -1 else e[i]
    a, b = tiles
    i, j = (a, b) if dict(g.tile_edges(a))[edge] == -1 else (b, a)
    return max(d[i] - d[j], 0) + e[j] - e[i] + (1 if (i, j) in set(singular) else 0)


def multiplicity_mismatches(g: BaseGraph, d, singular: Iterable[Arrow], m: MixedDimerConfiguration) -> list[tuple[int, int, int]]:
    """Edges whose multiplicity in ``m`` differs from :func:`expected_multiplicity`, as (edge, expected, actual)."""
    sing = frozenset(singular)
    out = []
    for k in range(len(g.edges)):
        want = expected_multiplicity(g, d, m.flips, sing, k)
        if want != m.mult[k]:
            out.append((k, want, m.mult[k]))
    return out


def configuration_from_flips(g: BaseGraph, base: MixedDimerConfiguration, e) -> MixedDimerConfiguration:
    m = base
    for i, k in enumerate(e):
        if k:
            m = weighted_flip(g, m, i, k)
    return m


# ---------------------------------------------------------------------------
# nodes


def place_nodes(g: BaseGraph, d, singular: Iterable[Arrow] = (), vc: VatneClass | None = None) -> BaseGraph:
    """Attach the coloured node vertices relevant for ``d`` (none if d has no 2)."""
    d = tuple(d)
    if 2 not in d:
        return replace(g, nodes=())
    return replace(g, nodes=tuple(_node_list(g, d, set(singular), vc)))


def _node_list(g: BaseGraph, d, singular: set[Arrow], vc: VatneClass | None) -> list[tuple[int, str]]:
    if vc is None:
        vc = classify_vatne(g.quiver)
    return _fork_nodes(g, d, singular, vc) + [(v, "green") for v in _tail_nodes(g, d, vc)]


def _fork_nodes(g: BaseGraph, d, singular: set[Arrow], vc: VatneClass) -> list[tuple[int, str]]:
    """Red and blue nodes on the D-shaped end of the quiver.

    Types I-III: the far sides of tiles a and b, measured against whichever
    of c and d carries the 2.  Type IV: the star hub and the vertex of tile a
    next to it, where a -> b is the singular arrow of the central cycle.
    """
    if vc.type_tag in ("I", "II", "III"):
        a, b = vc.vertex("a"), vc.vertex("b")
        centres = [vc.vertex(r) for r in ("c", "d") if r in vc.role_map.values()]
        c = next((x for x in centres if d[x] == 2), centres[0])
        red = sorted(g.tile_vertices(a) - g.tile_vertices(c))
        blue = sorted(g.tile_vertices(b) - g.tile_vertices(c))
        return [(v, "red") for v in red] + [(v, "blue") for v in blue]
    cyc = set(vc.central_cycle)
    central = [(a, b) for (a, b) in sorted(singular) if a in cyc and b in cyc]
    if not central or g.hub is None:
        return []
    a, b = central[0]
    w = g.hub
    bw, ww = g.edges[g.arrow_edge((a, b))]
    x = [v for v in g.tiles[a] if v not in (bw, ww) and v in _neighbours(g, w)]
    return [(w, "blue")] + [(v, "blue") for v in x]


def _tail_nodes(g: BaseGraph, d, vc: VatneClass) -> list[int]:
    """Green nodes: every place where a path can leave the d = 2 region on the tail side.

    A path in a configuration runs through vertices of valence 2, that is
    through vertices of d = 2 tiles, and stops one edge after leaving them.
    On a tail tile j with d_j = 1 those last edges join a vertex of the
    d = 2 region to one outside it; the outside ends are the green nodes.
    For a square tile j glued to the region along one edge these are the
    two vertices of j not shared with its d = 2 neighbour.  When j meets
    the region in a further corner (a fan of arcs at one marked point) the
    path can also end one tile further down the tail, and that end is
    marked too.
    """
    fork = {v for v, r in vc.role_map.items() if r in ("a", "b", "central-cycle")}
    region = set()
    for i, x in enumerate(d):
        if x == 2:
            region |= g.tile_vertices(i)
    out = set()
    for j, x in enumerate(d):
        if x != 1 or j in fork:
            continue
        cyc = g.tiles[j]
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            if u in region and v not in region:
                out.add(v)
            if v in region and u not in region:
                out.add(u)
    return sorted(out)


def _neighbours(g: BaseGraph, v: int) -> set[int]:
    return {u for e in g.edges if v in e for u in e if u != v}


def node_components(g: BaseGraph, m: MixedDimerConfiguration) -> list[set[int]]:
    h = nx.Graph()
    h.add_nodes_from(range(g.n_vertices))
    h.add_edges_from(g.edges[k] for k, x in enumerate(m.mult) if x > 0)
    return [set(c) for c in nx.connected_components(h)]


def is_node_monochromatic(g: BaseGraph, m: MixedDimerConfiguration) -> bool:
    if not g.nodes:
        return True
    colour_of: dict[int, set[str]] = {}
    for v, c in g.nodes:
        colour_of.setdefault(v, set()).add(c)
    for comp in node_components(g, m):
        seen = set()
        for v in comp:
            seen |= colour_of.get(v, set())
        if len(seen) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# poset


@dataclass
class FlipPoset:
    elements: list[MixedDimerConfiguration]
    covers: list[tuple[int, int, int]]
    excluded: list[MixedDimerConfiguration]

    def __len__(self) -> int:
        return len(self.elements)

    def index(self) -> dict[tuple[int, ...], int]:
        return {m.flips: k for k, m in enumerate(self.elements)}


def enumerate_poset(g: BaseGraph, d, singular: Iterable[Arrow] = (), monochromatic: bool = True) -> FlipPoset:
    """Breadth-first closure of flips from M_-.

    Flips are taken through every reachable configuration; elements that
    join nodes of different colours are reported in ``excluded`` and left out
    of the poset (and of its covering relation) when ``monochromatic`` holds.
    """
    d = tuple(d)
    start = minimal_matching(g, d, singular)
    seen = {start.flips: start}
    order = [start]
    queue = deque([start])
    while queue:
        m = queue.popleft()
        for i in range(len(d)):
            if can_flip(g, d, m, i):
                nxt = weighted_flip(g, m, i)
                if nxt.flips not in seen:
                    seen[nxt.flips] = nxt
                    order.append(nxt)
                    queue.append(nxt)
    order.sort(key=lambda m: (sum(m.flips), m.flips))
    keep = [m for m in order if not monochromatic or is_node_monochromatic(g, m)]
    dropped = [m for m in order if monochromatic and not is_node_monochromatic(g, m)]
    idx = {m.flips: k for k, m in enumerate(keep)}
    covers = []
    for k, m in enumerate(keep):
        for i in range(len(d)):
            if can_flip(g, d, m, i):
                up = list(m.flips)
                up[i] += 1
                j = idx.get(tuple(up))
                if j is not None:
                    covers.append((k, j, i))
    return FlipPoset(keep, covers, dropped)


def dimer_cycles(g: BaseGraph, m: MixedDimerConfiguration) -> list[list[int]]:
    """Components of the support of ``m`` that are cycles of length > 2 (vertex lists)."""
    h = nx.MultiGraph()
    for k, x in enumerate(m.mult):
        for _ in range(x):
            h.add_edge(*g.edges[k])
    out = []
    for comp in nx.connected_components(h):
        sub = h.subgraph(comp)
        if len(comp) > 2 and all(deg == 2 for _, deg in sub.degree()):
            out.append(sorted(comp))
    return out


def count_cycles(g: BaseGraph, m: MixedDimerConfiguration) -> int:
    return len(dimer_cycles(g, m))


def f_polynomial_dimer(q: Quiver, d, singular: Iterable[Arrow] = (), g: BaseGraph | None = None) -> Poly:
    d = tuple(d)
    if g is None:
        g = build_base_graph(q)
    g = place_nodes(g, d, singular)
    terms: dict[tuple[int, ...], int] = {}
    for m in enumerate_poset(g, d, singular).elements:
        terms[m.flips] = terms.get(m.flips, 0) + 2 ** count_cycles(g, m)
    return Poly(q.n, terms)


# ---------------------------------------------------------------------------
# DOT


def to_dot(g: BaseGraph, m: MixedDimerConfiguration | None = None) -> str:
    node_colour = {v: c for v, c in g.nodes}
    lines = ["graph base {", "  node [shape=circle, style=filled, label=\"\"];"]
    for v in range(g.n_vertices):
        attrs = [f'fillcolor={g.colors[v]}', f'xlabel="{g.names[v]}"']
        if v in node_colour:
            attrs.append(f"color={node_colour[v]}")
            attrs.append("penwidth=3")
        lines.append(f"  v{v} [{', '.join(attrs)}];")
    for k, (bv, wv) in enumerate(g.edges):
        tiles = ",".join(str(i) for i in g.edge_tiles(k))
        label = str(m.mult[k]) if m is not None else tiles
        style = ", style=bold" if m is not None and m.mult[k] else ""
        lines.append(f'  v{bv} -- v{wv} [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
