"""Triangulations of the once-punctured n-gon and their crossing combinatorics.

Geometry is done in the universal cover: the upper half plane with the
puncture at infinity and deck translation x -> x + n.  Boundary marked points
are the integers, and point k of the polygon is every integer congruent to k
mod n.  Points are numbered clockwise, so moving right in the cover is moving
clockwise in the polygon.  The picture is a mirror image of the polygon,
which is why "clockwise in the polygon" reads "counterclockwise in the
cover" below.

* A chord ``chord(s, L)`` hugs the clockwise run s, s+1, ..., s+L of boundary
  points (2 <= L <= n-1) and keeps the puncture on its other side.  Its lifts
  are the semicircles over [s + mn, s + L + mn].
* A loop at s lifts to the semicircles over [s + mn, s + n + mn].
* A radius at s lifts to the vertical rays x = s + mn.

Two geodesics in minimal position cross as often as their lifts interleave,
so crossing numbers reduce to integer comparisons.  Crossing points have
rational coordinates, which lets us order crossings along an arc exactly.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .quiver import Quiver, VatneClass, classify_vatne

CHORD, RADIUS, LOOP = "chord", "radius", "loop"


class SurfaceError(ValueError):
    """Invalid triangulation or arc data."""


class FlipNotPossible(SurfaceError):
    """The arc is the radius of a self-folded triangle and cannot be flipped."""


@dataclass(frozen=True, order=True)
class TaggedArc:
    """An arc of the once-punctured n-gon.

    ``kind`` is chord, radius or loop.  ``start`` is a boundary point.
    ``length`` is the clockwise span of a chord (loops have span n, radii 0).
    ``notched`` marks a radius tagged at the puncture.  Loops are ideal arcs,
    not tagged arcs; they appear only inside ideal triangulations, where a
    loop stands for the notched radius at its base point.
    """

    kind: str
    start: int
    length: int = 0
    notched: bool = False

    @property
    def tag(self) -> str:
        return "notched" if self.notched else "plain"

    def endpoints(self, n: int) -> tuple[int | str, int | str]:
        if self.kind == RADIUS:
            return (self.start, "P")
        if self.kind == LOOP:
            return (self.start, self.start)
        return (self.start, (self.start + self.length) % n)

    @property
    def winding(self) -> str:
        """Chords read from ``start`` travel clockwise around the puncture."""
        return "cw" if self.kind == CHORD else ""

    def plain(self) -> "TaggedArc":
        return TaggedArc(self.kind, self.start, self.length, False)

    def describe(self, n: int) -> str:
        if self.kind == RADIUS:
            return f"radius {self.start}" + (" notched" if self.notched else "")
        if self.kind == LOOP:
            return f"loop {self.start}"
        return f"chord {self.start} {(self.start + self.length) % n} cw"


def chord(i: int, j: int, n: int, side: str = "cw") -> TaggedArc:
    """Chord between i and j hugging the clockwise run from i to j (``cw``) or from j to i."""
    i %= n
    j %= n
    if side == "ccw":
        i, j = j, i
    elif side != "cw":
        raise SurfaceError(f"side must be cw or ccw, got {side!r}")
    length = (j - i) % n
    if length < 2 or length > n - 1:
        raise SurfaceError(f"chord {i} {j} {side} is a boundary segment or degenerate")
    return TaggedArc(CHORD, i, length)


def radius(p: int, n: int, notched: bool = False) -> TaggedArc:
    return TaggedArc(RADIUS, p % n, 0, notched)


def loop(p: int, n: int) -> TaggedArc:
    return TaggedArc(LOOP, p % n, n)


def all_tagged_arcs(n: int) -> list[TaggedArc]:
    """The n^2 tagged arcs: n plain radii, n notched radii, n(n-2) chords."""
    arcs = [radius(p, n) for p in range(n)] + [radius(p, n, True) for p in range(n)]
    arcs += [TaggedArc(CHORD, s, L) for s in range(n) for L in range(2, n)]
    return arcs


# ---------------------------------------------------------------------------
# cover geometry


def _lift(arc: TaggedArc) -> tuple:
    if arc.kind == RADIUS:
        return ("ray", arc.start)
    return ("semi", arc.start, arc.start + arc.length)


def _interleave(a: int, b: int, c: int, d: int) -> bool:
    return a < c < b < d or c < a < d < b


def plain_crossing(alpha: TaggedArc, beta: TaggedArc, n: int) -> int:
    """Minimal crossing number of the underlying ideal arcs (tags ignored)."""
    la, lb = _lift(alpha), _lift(beta)
    if la[0] == "ray" and lb[0] == "ray":
        return 0
    if la[0] == "ray":
        la, lb = lb, la
    if lb[0] == "ray":
        _, a, b = la
        p = lb[1]
        return sum(1 for m in range(-3, 4) if a < p + n * m < b)
    _, a, b = la
    _, c, d = lb
    return sum(1 for m in range(-3, 4) if _interleave(a, b, c + n * m, d + n * m))


def tagged_crossing(gamma: TaggedArc, delta: TaggedArc, n: int) -> int:
    """Crossing number of two tagged arcs.

    Tags only matter when both arcs are radii: equal tags never cross, and
    radii with different tags cross once unless they share their boundary
    endpoint.  Every other pair crosses as its plain versions do.  Loops are
    read as notched radii.
    """
    g = _as_tagged(gamma, n)
    d = _as_tagged(delta, n)
    if g.kind == RADIUS and d.kind == RADIUS:
        if g.notched == d.notched:
            return 0
        return 0 if g.start == d.start else 1
    return plain_crossing(g.plain(), d.plain(), n)


def _as_tagged(arc: TaggedArc, n: int) -> TaggedArc:
    if arc.kind == LOOP:
        return radius(arc.start, n, True)
    return arc


# ---------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class Triangle:
    """An ideal triangle seen in the cover.

    ``corners`` are cover coordinates (None for the puncture) and ``sides``
    are arc indices, or None for a boundary segment, listed clockwise in the
    polygon.  ``self_folded`` marks the triangle formed by a loop and its
    radius.
    """

    corners: tuple
    sides: tuple
    self_folded: bool = False


@dataclass(frozen=True)
class Triangulation:
    n: int
    arcs: tuple[TaggedArc, ...]

    def __post_init__(self) -> None:
        arcs = tuple(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        n = self.n
        if n < 3:
            raise SurfaceError("need at least 3 boundary points")
        if len(arcs) != n:
            raise SurfaceError(f"a triangulation of the punctured {n}-gon has {n} arcs, got {len(arcs)}")
        if len(set(arcs)) != n:
            raise SurfaceError("repeated arc")
        for a in arcs:
            if a.notched:
                raise SurfaceError("triangulations are given in ideal form; write a loop instead of a notched radius")
            if a.kind == CHORD and not 2 <= a.length <= n - 1:
                raise SurfaceError(f"bad chord {a}")
        for a, b in combinations(arcs, 2):
            if plain_crossing(a, b, n):
                raise SurfaceError(f"arcs {a.describe(n)} and {b.describe(n)} cross")
        for a in arcs:
            if a.kind == LOOP and radius(a.start, n) not in arcs:
                raise SurfaceError(f"loop at {a.start} must enclose the radius at {a.start}")
        if not any(a.kind == RADIUS for a in arcs):
            raise SurfaceError("a triangulation needs at least one radius")

    # -- views ----------------------------------------------------------
    def tagged(self) -> tuple[TaggedArc, ...]:
        """Arcs in tagged form: each loop becomes the notched radius at its base."""
        return tuple(_as_tagged(a, self.n) for a in self.arcs)

    def index_of(self, arc: TaggedArc) -> int:
        return self.arcs.index(arc)

    def self_folded_pairs(self) -> list[tuple[int, int]]:
        """(loop index, radius index) pairs."""
        out = []
        for i, a in enumerate(self.arcs):
            if a.kind == LOOP:
                out.append((i, self.arcs.index(radius(a.start, self.n))))
        return out

    def radii_points(self) -> list[int]:
        return sorted(a.start for a in self.arcs if a.kind == RADIUS)

    def relabel(self, order: list[int]) -> "Triangulation":
        """New triangulation whose arc k is the old arc ``order[k]``."""
        return Triangulation(self.n, tuple(self.arcs[i] for i in order))

    # -- text form ----------------------------------------------------
    def serialize(self) -> str:
        return f"n={self.n}\n" + "".join(a.describe(self.n) + "\n" for a in self.arcs)

    @classmethod
    def parse(cls, text: str) -> "Triangulation":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines or not re.fullmatch(r"n\s*=\s*\d+", lines[0]):
            raise SurfaceError("first line must be n=<int>")
        n = int(lines[0].split("=")[1])
        arcs = [parse_arc(ln, n) for ln in lines[1:]]
        return cls(n, tuple(arcs))

    # -- cover combinatorics --------------------------------------------
    def triangles(self) -> list[Triangle]:
        return list(_triangles(self))


def parse_arc(line: str, n: int) -> TaggedArc:
    parts = line.split()
    try:
        if parts[0] == "chord" and len(parts) == 4:
            return chord(int(parts[1]), int(parts[2]), n, parts[3])
        if parts[0] == "radius" and len(parts) in (2, 3):
            notched = len(parts) == 3
            if notched and parts[2] != "notched":
                raise SurfaceError(f"bad radius tag {parts[2]!r}")
            return radius(int(parts[1]), n, notched)
        if parts[0] == "loop" and len(parts) == 2:
            return loop(int(parts[1]), n)
    except (ValueError, IndexError) as exc:
        raise SurfaceError(f"cannot parse arc {line!r}") from exc
    raise SurfaceError(f"cannot parse arc {line!r}")


@lru_cache(maxsize=4096)
def _triangles(t: Triangulation) -> tuple[Triangle, ...]:
    n = t.n
    edges: dict[tuple[int, int], int | None] = {}
    rays: dict[int, int] = {}
    for idx, a in enumerate(t.arcs):
        for m in range(-2, 4):
            if a.kind == RADIUS:
                rays[a.start + n * m] = idx
            else:
                edges[(a.start + n * m, a.start + a.length + n * m)] = idx
    for k in range(-2 * n, 4 * n):
        edges.setdefault((k, k + 1), None)
    out = []
    for (u, w), idx in sorted(edges.items(), key=lambda kv: kv[0]):
        if not 0 <= u < n or w - u < 2:
            continue
        for v in range(u + 1, w):
            if (u, v) in edges and (v, w) in edges:
                out.append(Triangle((u, v, w), (edges[(u, v)], edges[(v, w)], idx)))
    positions = sorted(rays)
    for u, v in zip(positions, positions[1:]):
        if not 0 <= u < n:
            continue
        if (u, v) not in edges:
            raise SurfaceError("rays without a base arc; triangulation is not maximal")
        sf = rays[u] == rays[v]
        out.append(Triangle((u, v, None), (edges[(u, v)], rays[v], rays[u]), sf))
    return tuple(out)


def _exchange_from_triangles(t: Triangulation) -> list[list[int]]:
    n = t.n
    b = [[0] * n for _ in range(n)]
    loop_to_radius = dict(t.self_folded_pairs())
    for tri in _triangles(t):
        if tri.self_folded:
            continue
        sides = list(tri.sides)
        variants = [sides]
        for L, R in loop_to_radius.items():
            if L in sides:
                variants.append([R if s == L else s for s in sides])
        for v, sd in enumerate(variants):
            for k in range(3):
                s, r = sd[k], sd[(k + 1) % 3]
                if v and sd[k] == sides[k] and sd[(k + 1) % 3] == sides[(k + 1) % 3]:
                    continue
                if s is not None and r is not None:
                    b[s][r] += 1
                    b[r][s] -= 1
    return b


def quiver_from_triangulation(t: Triangulation) -> Quiver:
    """One vertex per arc; arrows run clockwise inside each triangle.

    In a self-folded triangle the radius borrows every arrow of its loop, and
    radius and loop are never joined.  Opposite arrows cancel.
    """
    return Quiver.from_matrix(_exchange_from_triangles(t))


def internal_triangles(t: Triangulation) -> list[tuple[int, int, int]]:
    """Clockwise side triples of triangles whose three sides are arcs.

    The triangle outside a loop is listed once more with the radius in place
    of the loop.  Triangles whose arrows cancelled against a neighbour are
    omitted, so every listed triple is an oriented 3-cycle of the quiver.
    """
    q = quiver_from_triangulation(t)
    arrows = set(q.arrows)
    loop_to_radius = dict(t.self_folded_pairs())
    out = []
    for tri in _triangles(t):
        if tri.self_folded or None in tri.sides:
            continue
        variants = [tri.sides]
        for L, R in loop_to_radius.items():
            if L in tri.sides:
                variants.append(tuple(R if s == L else s for s in tri.sides))
        for sd in variants:
            if all((sd[k], sd[(k + 1) % 3]) in arrows for k in range(3)):
                out.append(tuple(sd))
    return out


def puncture_cycle(t: Triangulation) -> tuple[int, ...]:
    """Arrow-ordered cycle of arcs around the puncture, if the quiver has one.

    With three or more radii this is the counterclockwise cycle of radii.  With
    two radii the two puncture triangles merge into an oriented 4-cycle
    through both radii and both third sides.  A self-folded pair gives none.
    """
    q = quiver_from_triangulation(t)
    arrows = set(q.arrows)
    if t.self_folded_pairs():
        return ()
    pts = t.radii_points()
    n = t.n
    idx = {a.start: i for i, a in enumerate(t.arcs) if a.kind == RADIUS}
    if len(pts) >= 3:
        order = [idx[p] for p in reversed(pts)]
        cyc = tuple(order)
        if all((cyc[k], cyc[(k + 1) % len(cyc)]) in arrows for k in range(len(cyc))):
            return cyc
        return ()
    if len(pts) == 2:
        punct = [tri for tri in _triangles(t) if tri.corners[2] is None]
        thirds = [tri.sides[0] for tri in punct]
        if None in thirds:
            return ()
        r1, r2 = idx[pts[0]], idx[pts[1]]
        for cyc in ((r1, thirds[0], r2, thirds[1]), (r1, thirds[1], r2, thirds[0])):
            if all((cyc[k], cyc[(k + 1) % 4]) in arrows for k in range(4)):
                i = cyc.index(min(cyc))
                return cyc[i:] + cyc[:i]
        rev = [(r1, thirds[0], r2, thirds[1])[::-1], (r1, thirds[1], r2, thirds[0])[::-1]]
        for cyc in rev:
            if all((cyc[k], cyc[(k + 1) % 4]) in arrows for k in range(4)):
                return cyc
    _ = n
    return ()


def potential_from_triangulation(t: Triangulation, labels: dict[tuple[int, int], str] | None = None, signed: bool = False):
    """Sum of the clockwise internal-triangle cycles plus the puncture cycle.

    The plain form has every coefficient +1.  With ``signed`` the puncture
    cycle and each triangle cycle through the radius of a self-folded
    triangle get coefficient -1.  Rescaling one arrow per flipped term by -1
    carries one form to the other, so both present the same Jacobian
    algebra; the arc modules of :mod:`artifact.jacobian`, whose maps are all
    0 or 1, satisfy the relations of the signed form.
    """
    from .jacobian import Potential

    q = quiver_from_triangulation(t)
    folded_radii = {r for _, r in t.self_folded_pairs()}
    flip_sign = -1 if signed else 1
    terms: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    for tri in internal_triangles(t):
        path = tuple((tri[k], tri[(k + 1) % 3]) for k in range(3))
        terms.append((flip_sign if folded_radii & set(tri) else 1, path))
    cyc = puncture_cycle(t)
    if cyc:
        path = tuple((cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc)))
        if len(cyc) == 4 and len(t.radii_points()) == 2:
            terms.append((1, path))
        else:
            terms.append((flip_sign, path))
    return Potential.from_paths(q, terms, labels)


# ---------------------------------------------------------------------------
# flips and realisation


def _geodesic_to_arc(x: int | None, y: int | None, n: int) -> TaggedArc:
    if x is None or y is None:
        p = y if x is None else x
        return radius(p, n)
    a, b = sorted((x, y))
    if b - a == n:
        return loop(a, n)
    return TaggedArc(CHORD, a % n, b - a)


def flip(t: Triangulation, k: int) -> Triangulation:
    """Replace arc k by the other diagonal of the quadrilateral around it."""
    n = t.n
    target = t.arcs[k]
    for L, R in t.self_folded_pairs():
        if R == k:
            raise FlipNotPossible("the radius inside a self-folded triangle cannot be flipped")
    lift = _lift(target)
    shifts = range(-2, 4)
    found = []
    for tri in _triangles(t):
        for m in shifts:
            corners = tri.corners
            sh = tuple(None if c is None else c + n * m for c in corners)
            for pos in range(3):
                if tri.sides[pos] != k:
                    continue
                if tri.corners[2] is None:
                    ends = [(sh[0], sh[1]), (sh[1], None), (sh[0], None)][pos]
                    opposite = [None, sh[0], sh[1]][pos]
                else:
                    ends = [(sh[0], sh[1]), (sh[1], sh[2]), (sh[0], sh[2])][pos]
                    opposite = [sh[2], sh[0], sh[1]][pos]
                if lift[0] == "ray":
                    ok = ends[1] is None and ends[0] == lift[1]
                else:
                    ok = ends == (lift[1], lift[2])
                if ok:
                    found.append(opposite)
    opp = sorted(set(found), key=lambda v: (v is None, v))
    if len(opp) != 2:
        raise FlipNotPossible(f"arc {k} does not sit in two distinct triangles")
    new_arc = _geodesic_to_arc(opp[0], opp[1], n)
    arcs = list(t.arcs)
    arcs[k] = new_arc
    # a flipped loop leaves its radius behind; a radius can become a loop's partner
    return Triangulation(n, tuple(arcs))


def fan_triangulation(n: int) -> Triangulation:
    return Triangulation(n, tuple(radius(p, n) for p in range(n)))


@lru_cache(maxsize=16)
def ideal_triangulations(n: int) -> tuple[tuple[Triangulation, Quiver], ...]:
    """Every ideal triangulation reachable by flips from the fan, with its quiver."""
    start = fan_triangulation(n)
    key = lambda t: frozenset(t.arcs)  # noqa: E731
    seen = {key(start): start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for k in range(n):
            try:
                nxt = flip(cur, k)
            except FlipNotPossible:
                continue
            kk = key(nxt)
            if kk not in seen:
                seen[kk] = nxt
                queue.append(nxt)
    out = []
    for t in sorted(seen.values(), key=lambda t: sorted(t.arcs)):
        canon = Triangulation(n, tuple(sorted(t.arcs)))
        out.append((canon, quiver_from_triangulation(canon)))
    return tuple(out)


def realize(q: Quiver) -> Triangulation:
    """A triangulation whose arc k corresponds to vertex k of ``q``.

    Triangulations without self-folded triangles are preferred; a self-folded
    one is used only when the quiver needs it (type II).
    """
    n = q.n
    if n < 3:
        raise SurfaceError("need n >= 3")
    target = q.digraph()
    degs = sorted(d for _, d in target.degree())
    candidates = sorted(ideal_triangulations(n), key=lambda tq: len(tq[0].self_folded_pairs()))
    for t, tq in candidates:
        g = tq.digraph()
        if sorted(d for _, d in g.degree()) != degs or g.number_of_edges() != target.number_of_edges():
            continue
        matcher = DiGraphMatcher(target, g)
        for mapping in matcher.isomorphisms_iter():
            order = [mapping[v] for v in range(n)]
            return t.relabel(order)
    raise SurfaceError("quiver is not the quiver of a triangulation of the punctured polygon")


# ---------------------------------------------------------------------------
# crossing vectors


@dataclass(frozen=True)
class CrossingVector:
    entries: tuple[int, ...]
    provenance: str = ""

    def serialize(self) -> str:
        return ",".join(str(v) for v in self.entries)

    @classmethod
    def parse(cls, text: str) -> "CrossingVector":
        text = text.strip()
        if not re.fullmatch(r"\d(\s*,\s*\d)*", text):
            raise ValueError(f"bad vector {text!r}")
        return cls(tuple(int(v) for v in text.split(",")))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]


def tagged_crossing_number(t: Triangulation, g: TaggedArc, arc_index: int) -> int:
    """Crossing number of ``g`` with arc ``arc_index`` of ``t`` in tagged form."""
    tau = t.tagged()[arc_index]
    if tau == _as_tagged(g, t.n):
        raise SurfaceError("the arc is isotopic to the triangulation arc")
    return tagged_crossing(g, tau, t.n)


def crossing_vector(t: Triangulation, g: TaggedArc) -> tuple[int, ...]:
    return tuple(tagged_crossing(g, tau, t.n) for tau in t.tagged())


def ideal_crossing_vector(t: Triangulation, g: TaggedArc) -> tuple[int, ...]:
    """Plain crossing numbers of an ideal arc (chord, radius or loop) with the ideal arcs of ``t``."""
    return tuple(plain_crossing(g, tau, t.n) for tau in t.arcs)


def arcs_not_in(t: Triangulation) -> list[TaggedArc]:
    tagged = set(t.tagged())
    return [a for a in all_tagged_arcs(t.n) if a not in tagged]


def support_is_connected(q: Quiver, d) -> bool:
    supp = [i for i, v in enumerate(d) if v > 0]
    if not supp:
        return True
    return nx.is_connected(q.graph().subgraph(supp))


def twos_form_tree(q: Quiver, d) -> bool:
    supp2 = [i for i, v in enumerate(d) if v == 2]
    if not supp2:
        return True
    return nx.is_tree(q.graph().subgraph(supp2))


def family_label(t: Triangulation, vc: VatneClass, g: TaggedArc, d: tuple[int, ...]) -> str:
    """Name the catalog family of an arc from its shape and crossing pattern."""
    n = t.n
    tag = vc.subtype or vc.type_tag
    has_two = 2 in d
    if vc.type_tag == "IV":
        glue = set(t.radii_points())
        cyc = set(vc.central_cycle)
        if has_two:
            return f"{tag} XI"
        if g.kind == RADIUS:
            return f"{tag} IX" if g.start in glue else f"{tag} VIII"
        ends = {g.start % n, (g.start + g.length) % n}
        if all(d[v] == 0 for v in cyc):
            return f"{tag} I"
        if ends <= glue:
            return f"{tag} X"
        at_glue = ends & glue
        span = [(g.start + s) % n for s in range(1, g.length)]
        same_polygon = not (set(span) & glue)
        if at_glue and same_polygon:
            return f"{tag} VI" if g.start in glue else f"{tag} VII"
        if at_glue:
            return f"{tag} V" if g.start in glue else f"{tag} IV"
        return f"{tag} II" if len(set(span) & glue) % 2 else f"{tag} III"
    roles = {r: v for v, r in vc.role_map.items()}
    head_roles = ["a", "b", "c"] + (["d"] if "d" in roles else [])
    head = tuple(d[roles[r]] for r in head_roles)
    head_txt = ",".join(map(str, head))
    if all(v == 0 for v in head):
        fam = "I"
    elif g.kind == RADIUS:
        fam = "IV"
    elif has_two:
        fam = "V"
    elif vc.type_tag in ("II", "III") and head[2] and head[3]:
        fam = "I" if head[:2] in ((1, 1), (1, 0)) else "II"
    else:
        fam = "II" if head[0] + head[1] in (0, 1) and head[0] <= head[1] else "III"
    return f"{tag} {fam} ({head_txt}|A)"


def catalog_dvectors(q: Quiver, vc: VatneClass | None = None) -> list[CrossingVector]:
    """Crossing vectors of every tagged arc outside a triangulation realising ``q``.

    The arcs are generated from the geometry of the realising triangulation,
    which covers every Appendix-style family at once; family names are
    attached afterwards.  Vectors are deduplicated and sorted.
    """
    if vc is None:
        vc = classify_vatne(q)
    if vc.type_tag not in ("I", "II", "III", "IV"):
        raise SurfaceError(f"catalog needs a type D quiver, got {vc.type_tag}")
    if q.n < 4:
        raise SurfaceError("catalog needs n >= 4")
    t = realize(q)
    seen: dict[tuple[int, ...], CrossingVector] = {}
    for g in arcs_not_in(t):
        d = crossing_vector(t, g)
        if d not in seen:
            seen[d] = CrossingVector(d, family_label(t, vc, g, d))
    return [seen[d] for d in sorted(seen)]


def arc_for_vector(t: Triangulation, d) -> TaggedArc:
    """An arc outside ``t`` with crossing vector ``d`` (first match)."""
    d = tuple(d)
    for g in arcs_not_in(t):
        if crossing_vector(t, g) == d:
            return g
    raise SurfaceError(f"no arc has crossing vector {d}")


# ---------------------------------------------------------------------------
# crossing sequences along an arc


@dataclass(frozen=True)
class Crossing:
    """One crossing of an arc with a triangulation arc.

    ``positions`` are slots along the arc; a crossing may own two slots after
    a lollipop fold.  ``lift`` is the deck translate of the crossed arc,
    used to detect a stretch of the arc that winds once around the puncture.
    ``reach_in`` and ``reach_out`` list the slots this crossing is joined to
    when it is the target or the source of an arrow; by default both are the
    two neighbouring slots.
    """

    arc: int
    positions: frozenset[int]
    lift: int
    reach_in: frozenset[int] | None = None
    reach_out: frozenset[int] | None = None

    def _around(self) -> frozenset[int]:
        return frozenset(p + s for p in self.positions for s in (-1, 1))

    def incoming(self) -> frozenset[int]:
        return self._around() if self.reach_in is None else self.reach_in

    def outgoing(self) -> frozenset[int]:
        return self._around() if self.reach_out is None else self.reach_out

    def relabel(self, arc: int) -> "Crossing":
        return Crossing(arc, self.positions, self.lift, self.reach_in, self.reach_out)


@dataclass(frozen=True)
class CrossingSequence:
    crossings: tuple[Crossing, ...]

    def of_arc(self, i: int) -> list[Crossing]:
        return [c for c in self.crossings if c.arc == i]

    def adjacent(self, src: Crossing, tgt: Crossing) -> bool:
        """True when the stretch from ``src`` to ``tgt`` lies in one triangle."""
        return bool(src.outgoing() & tgt.positions) and bool(tgt.incoming() & src.positions)

    def dims(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for c in self.crossings:
            out[c.arc] += 1
        return tuple(out)


def _circle_x(a: int, b: int, c: int, d: int) -> Fraction:
    c1, r1 = Fraction(a + b, 2), Fraction(b - a, 2)
    c2, r2 = Fraction(c + d, 2), Fraction(d - c, 2)
    return (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2 * (c2 - c1))


def _raw_sequence(t: Triangulation, gamma: TaggedArc) -> list[tuple[Fraction, int, int]]:
    """(coordinate along gamma, arc index, lift) for each crossing, in order."""
    n = t.n
    lg = _lift(gamma.plain())
    events = []
    for idx, tau in enumerate(t.arcs):
        lt = _lift(tau)
        for m in range(-3, 4):
            if lg[0] == "semi":
                a, b = lg[1], lg[2]
                if lt[0] == "ray":
                    p = lt[1] + n * m
                    if a < p < b:
                        events.append((Fraction(p), idx, m))
                else:
                    c, d = lt[1] + n * m, lt[2] + n * m
                    if _interleave(a, b, c, d):
                        events.append((_circle_x(a, b, c, d), idx, m))
            else:
                p = lg[1]
                if lt[0] == "semi":
                    c, d = lt[1] + n * m, lt[2] + n * m
                    if c < p < d:
                        ctr, rad = Fraction(c + d, 2), Fraction(d - c, 2)
                        events.append((rad * rad - (p - ctr) ** 2, idx, m))
    events.sort()
    return events


def crossing_sequence(t: Triangulation, gamma: TaggedArc) -> CrossingSequence:
    """Ordered crossings of ``gamma`` with ``t``, ready for the module rule.

    Plain chords, radii and loops are read straight off the cover, in the
    order of increasing cover coordinate.

    Inside a self-folded triangle the pass loop-radius-loop becomes one slot
    holding a loop crossing and a radius crossing (the loop stands for the
    notched radius).  When the arc enters and leaves the outer triangle
    through the same side, the radius crossing is joined only to the slot
    before it as an arrow target, and only to the slot after it as an arrow
    source; the loop crossing is joined to both.  This is what separates the
    kernels of the two maps out of the doubly crossed side.

    A notched radius is drawn as a lollipop: the loop around the puncture
    with its two passes along the stick folded together, so each chord on
    the stick is crossed once.  When ``t`` has a self-folded triangle, the
    notched radius is handled by swapping the roles of loop and radius in
    the module of the plain radius.
    """
    n = t.n
    if gamma.kind == RADIUS and gamma.notched:
        pairs = t.self_folded_pairs()
        if pairs:
            plain_seq = crossing_sequence(t, gamma.plain())
            ((L, R),) = pairs
            swap = {L: R, R: L}
            return CrossingSequence(tuple(c.relabel(swap.get(c.arc, c.arc)) for c in plain_seq.crossings))
        raw = _raw_sequence(t, loop(gamma.start, n))
        k = len(raw)
        crossings = []
        used = set()
        for i, (_, idx, m) in enumerate(raw):
            if i in used:
                continue
            j = k - 1 - i
            if t.arcs[idx].kind != RADIUS and j != i and raw[j][1] == idx:
                used.add(j)
                crossings.append(Crossing(idx, frozenset({i, j}), m))
            else:
                crossings.append(Crossing(idx, frozenset({i}), m))
        return CrossingSequence(tuple(crossings))
    raw = _raw_sequence(t, gamma)
    pairs = dict(t.self_folded_pairs())
    crossings = []
    pos = 0
    i = 0
    while i < len(raw):
        _, idx, m = raw[i]
        if idx in pairs and i + 2 < len(raw) and raw[i + 1][1] == pairs[idx] and raw[i + 2][1] == idx:
            crossings.append(Crossing(idx, frozenset({pos}), m))
            same_side = 0 < i and i + 3 < len(raw) and raw[i - 1][1] == raw[i + 3][1]
            if same_side:
                crossings.append(
                    Crossing(pairs[idx], frozenset({pos}), raw[i + 1][2], frozenset({pos - 1}), frozenset({pos + 1}))
                )
            else:
                crossings.append(Crossing(pairs[idx], frozenset({pos}), raw[i + 1][2]))
            i += 3
        else:
            crossings.append(Crossing(idx, frozenset({pos}), m))
            i += 1
        pos += 1
    return CrossingSequence(tuple(crossings))
