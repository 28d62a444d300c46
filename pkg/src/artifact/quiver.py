"""Quivers, quiver mutation and the Vatne shapes of type D_n quivers.

A quiver is stored as a vertex count plus a sorted multiset of arrows, so two
quivers compare equal exactly when they have the same labelled arrows.  The
optional ``frozen`` set marks vertices that may not be mutated; it is used for
framed quivers with principal coefficients.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

Arrow = tuple[int, int]


class QuiverError(ValueError):
    """Invalid quiver data or an out-of-range vertex."""


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[Arrow, ...] = ()
    frozen: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise QuiverError("vertex count must be nonnegative")
        arrows = tuple(sorted((int(s), int(t)) for s, t in self.arrows))
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "frozen", frozenset(self.frozen))
        pairs = set(arrows)
        for s, t in arrows:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise QuiverError(f"arrow {s}->{t} has an endpoint outside 0..{self.n - 1}")
            if s == t:
                raise QuiverError(f"loop at vertex {s}")
            if (t, s) in pairs:
                raise QuiverError(f"2-cycle between {s} and {t}")
        for v in self.frozen:
            if not 0 <= v < self.n:
                raise QuiverError(f"frozen vertex {v} out of range")

    # -- views ----------------------------------------------------------
    def exchange_matrix(self) -> list[list[int]]:
        """Skew-symmetric matrix b with b[i][j] = #(i->j) - #(j->i)."""
        b = [[0] * self.n for _ in range(self.n)]
        for s, t in self.arrows:
            b[s][t] += 1
            b[t][s] -= 1
        return b

    @classmethod
    def from_matrix(cls, b: list[list[int]], frozen: frozenset[int] | set[int] = frozenset()) -> "Quiver":
        n = len(b)
        arrows = [(i, j) for i in range(n) for j in range(n) for _ in range(max(b[i][j], 0))]
        return cls(n, tuple(arrows), frozenset(frozen))

    @property
    def mutable(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.frozen]

    def neighbours(self, v: int) -> set[int]:
        return {t for s, t in self.arrows if s == v} | {s for s, t in self.arrows if t == v}

    def degree(self, v: int) -> int:
        """Number of arrows incident to ``v``, counted with multiplicity."""
        return sum(1 for s, t in self.arrows if v in (s, t))

    def has_arrow(self, s: int, t: int) -> bool:
        return (s, t) in set(self.arrows)

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.arrows)
        return g

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.arrows)
        return g

    # -- text form ----------------------------------------------------
    def serialize(self) -> str:
        lines = [f"n={self.n}", "arrows=" + ",".join(f"{s}->{t}" for s, t in self.arrows)]
        if self.frozen:
            lines.append("frozen=" + ",".join(str(v) for v in sorted(self.frozen)))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Quiver":
        fields: dict[str, str] = {}
        for raw in text.splitlines():
            line = re.sub(r"\s+", "", raw)
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise QuiverError(f"expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            if key in fields:
                raise QuiverError(f"duplicate field {key!r}")
            fields[key] = value
        if "n" not in fields:
            raise QuiverError("missing n=<int> line")
        try:
            n = int(fields["n"])
        except ValueError as exc:
            raise QuiverError(f"bad vertex count {fields['n']!r}") from exc
        arrows = []
        body = fields.get("arrows", "")
        if body:
            for item in body.split(","):
                m = re.fullmatch(r"(\d+)->(\d+)", item)
                if not m:
                    raise QuiverError(f"bad arrow {item!r}")
                arrows.append((int(m.group(1)), int(m.group(2))))
        frozen = frozenset(int(v) for v in fields["frozen"].split(",") if v) if fields.get("frozen") else frozenset()
        unknown = set(fields) - {"n", "arrows", "frozen"}
        if unknown:
            raise QuiverError(f"unknown fields {sorted(unknown)}")
        return cls(n, tuple(arrows), frozen)


def mutate(q: Quiver, k: int) -> Quiver:
    """Mutate at ``k``: reverse arrows at k, add composites, cancel 2-cycles.

    Arrows between two frozen vertices are dropped, as usual for ice quivers.
    """
    if not 0 <= k < q.n:
        raise QuiverError(f"vertex {k} out of range 0..{q.n - 1}")
    if k in q.frozen:
        raise QuiverError(f"vertex {k} is frozen")
    b = q.exchange_matrix()
    n = q.n
    nb = [row[:] for row in b]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                nb[i][j] = -b[i][j]
            else:
                nb[i][j] = b[i][j] + max(b[i][k], 0) * max(b[k][j], 0) - max(-b[i][k], 0) * max(-b[k][j], 0)
    for i in q.frozen:
        for j in q.frozen:
            nb[i][j] = 0
    return Quiver.from_matrix(nb, q.frozen)


def frame(q: Quiver, sink: bool = False) -> Quiver:
    """Principal-coefficient framing: add frozen i' = n+i with one arrow i' -> i.

    With ``sink`` the frozen arrows point the other way, i -> i'.
    """
    if q.frozen:
        raise QuiverError("quiver already has frozen vertices")
    n = q.n
    extra = [(i, n + i) for i in range(n)] if sink else [(n + i, i) for i in range(n)]
    return Quiver(2 * n, tuple(list(q.arrows) + extra), frozenset(range(n, 2 * n)))


def opposite(q: Quiver) -> Quiver:
    """Reverse every arrow."""
    return Quiver(q.n, tuple((t, s) for s, t in q.arrows), q.frozen)


def induced_subquiver(q: Quiver, keep) -> tuple[Quiver, dict[int, int]]:
    """Restrict to ``keep`` and relabel increasingly.

    Returns the subquiver and the map old label -> new label; invert it for
    the other direction.
    """
    keep_sorted = sorted(set(keep))
    for v in keep_sorted:
        if not 0 <= v < q.n:
            raise QuiverError(f"vertex {v} out of range")
    relabel = {old: new for new, old in enumerate(keep_sorted)}
    arrows = tuple((relabel[s], relabel[t]) for s, t in q.arrows if s in relabel and t in relabel)
    frozen = frozenset(relabel[v] for v in q.frozen if v in relabel)
    return Quiver(len(keep_sorted), arrows, frozen), relabel


def oriented_cycles(q: Quiver) -> list[list[int]]:
    """All directed simple cycles of length >= 2, smallest vertex first, sorted."""
    out = []
    for cyc in nx.simple_cycles(q.digraph()):
        if len(cyc) < 2:
            continue
        i = cyc.index(min(cyc))
        out.append(cyc[i:] + cyc[:i])
    out.sort(key=lambda c: (len(c), c))
    return out


# ---------------------------------------------------------------------------
# Vatne classification


@dataclass(frozen=True)
class VatneClass:
    """Which of the four D_n shapes a quiver has, with the role of each vertex.

    ``subtype`` refines type I by the fork orientation: IA when a and b both
    point into c, IB when a -> c -> b, IC when c points to both.
    ``central_cycle`` lists the oriented central cycle of a type IV quiver in
    arrow order; ``spikes`` maps each central arrow (u, v) to its spike.
    ``tails`` maps each attachment vertex to the vertex set of the type A
    part hanging from it (the attachment vertex included).
    """

    type_tag: str
    role_map: dict[int, str] = field(default_factory=dict)
    subtype: str = ""
    central_cycle: tuple[int, ...] = ()
    spikes: dict[tuple[int, int], int] = field(default_factory=dict)
    tails: dict[int, frozenset[int]] = field(default_factory=dict)

    def vertex(self, role: str) -> int:
        for v, r in self.role_map.items():
            if r == role:
                return v
        raise KeyError(role)

    def describe(self) -> str:
        head = f"type {self.subtype or self.type_tag}"
        if self.type_tag == "NotTypeD":
            return head
        parts = [f"{v}:{r}" for v, r in sorted(self.role_map.items())]
        text = head + "\n" + "roles " + " ".join(parts)
        if self.central_cycle:
            text += "\ncentral cycle " + "->".join(map(str, self.central_cycle))
        return text


NOT_TYPE_D = "NotTypeD"


def _simple_arrows(q: Quiver) -> bool:
    return all(c == 1 for c in Counter(frozenset(a) for a in q.arrows).values())


def _triangles(q: Quiver, vertices: set[int]) -> list[frozenset[int]]:
    g = q.graph().subgraph(vertices)
    tri = set()
    for u, v in g.edges():
        for w in set(g[u]) & set(g[v]):
            tri.add(frozenset((u, v, w)))
    return sorted(tri, key=sorted)


def _is_oriented_triangle(q: Quiver, tri: frozenset[int]) -> bool:
    u, v, w = sorted(tri)
    arrows = set(q.arrows)
    return ((u, v) in arrows and (v, w) in arrows and (w, u) in arrows) or (
        (v, u) in arrows and (w, v) in arrows and (u, w) in arrows
    )


def is_type_a(q: Quiver, vertices: set[int]) -> bool:
    """Check the Buan-Vatne description of the A_m mutation class on a vertex set.

    The induced quiver must be connected, have simple arrows, and its only
    cycles must be oriented triangles glued in a tree-like way, with the
    neighbour-count rules at vertices of valence three and four.
    """
    if not vertices:
        return True
    sub = q.graph().subgraph(vertices)
    if not nx.is_connected(sub):
        return False
    for comp in nx.biconnected_components(sub):
        if len(comp) == 2:
            continue
        if len(comp) != 3:
            return False
        if sub.subgraph(comp).number_of_edges() != 3 or not _is_oriented_triangle(q, frozenset(comp)):
            return False
    tris = _triangles(q, vertices)
    for v in vertices:
        nb = len(set(sub[v]))
        in_tri = sum(1 for t in tris if v in t)
        if nb > 4:
            return False
        if nb == 4 and in_tri != 2:
            return False
        if nb == 3 and in_tri != 1:
            return False
    return True


def is_connecting_vertex(q: Quiver, vertices: set[int], c: int) -> bool:
    """A type A part can be glued at ``c``: at most two neighbours, and a triangle if two."""
    nb = set(q.graph().subgraph(vertices)[c])
    if len(nb) > 2:
        return False
    if len(nb) == 2:
        return any(c in t and nb <= t for t in _triangles(q, vertices))
    return True


def _tail_components(q: Quiver, removed: set[int], cut: set[frozenset[int]] = frozenset()) -> list[set[int]]:
    g = q.graph()
    g.remove_nodes_from(removed)
    for e in cut:
        u, v = tuple(e)
        if g.has_edge(u, v):
            g.remove_edge(u, v)
    return [set(c) for c in nx.connected_components(g)]


def _try_type_one(q: Quiver) -> VatneClass | None:
    nb = {v: q.neighbours(v) for v in range(q.n)}
    leaves = [v for v in range(q.n) if len(nb[v]) == 1]
    for a, b in combinations(leaves, 2):
        if nb[a] != nb[b]:
            continue
        (c,) = nb[a]
        rest = set(range(q.n)) - {a, b}
        if not is_type_a(q, rest) or not is_connecting_vertex(q, rest, c):
            continue
        a_in = q.has_arrow(a, c)
        b_in = q.has_arrow(b, c)
        if a_in and b_in:
            sub = "IA"
        elif not a_in and not b_in:
            sub = "IC"
        else:
            sub = "IB"
            if not a_in:
                a, b = b, a
        roles = {a: "a", b: "b", c: "c"}
        for v in rest - {c}:
            roles[v] = "typeA-part-1"
        return VatneClass("I", roles, sub, tails={c: frozenset(rest)})
    return None


def _try_type_two(q: Quiver) -> VatneClass | None:
    arrows = set(q.arrows)
    for d, c in sorted(arrows):
        mids = sorted(v for v in range(q.n) if (c, v) in arrows and (v, d) in arrows)
        for a, b in combinations(mids, 2):
            if len(q.neighbours(a)) != 2 or len(q.neighbours(b)) != 2:
                continue
            comps = _tail_components(q, {a, b}, {frozenset((c, d))})
            qc = next(s for s in comps if c in s)
            qd = next(s for s in comps if d in s)
            if qc is qd or len(comps) != 2:
                continue
            if not (is_type_a(q, qc) and is_connecting_vertex(q, qc, c)):
                continue
            if not (is_type_a(q, qd) and is_connecting_vertex(q, qd, d)):
                continue
            roles = {a: "a", b: "b", c: "c", d: "d"}
            for v in qc - {c}:
                roles[v] = "typeA-part-1"
            for v in qd - {d}:
                roles[v] = "typeA-part-2"
            return VatneClass("II", roles, "II", tails={c: frozenset(qc), d: frozenset(qd)})
    return None


def _try_type_three(q: Quiver) -> VatneClass | None:
    for cyc in oriented_cycles(q):
        if len(cyc) != 4:
            continue
        for shift in (0, 1):
            a, c, b, d = cyc[shift:] + cyc[:shift]
            if len(q.neighbours(a)) != 2 or len(q.neighbours(b)) != 2:
                continue
            if d in q.neighbours(c):
                continue
            comps = _tail_components(q, {a, b})
            qc = next(s for s in comps if c in s)
            qd = next(s for s in comps if d in s)
            if qc is qd or len(comps) != 2:
                continue
            if not (is_type_a(q, qc) and is_connecting_vertex(q, qc, c)):
                continue
            if not (is_type_a(q, qd) and is_connecting_vertex(q, qd, d)):
                continue
            roles = {a: "a", b: "b", c: "c", d: "d"}
            for v in qc - {c}:
                roles[v] = "typeA-part-1"
            for v in qd - {d}:
                roles[v] = "typeA-part-2"
            return VatneClass("III", roles, "III", tails={c: frozenset(qc), d: frozenset(qd)})
    return None


def _try_type_four(q: Quiver) -> VatneClass | None:
    arrows = set(q.arrows)
    for cyc in oriented_cycles(q):
        k = len(cyc)
        if k < 3:
            continue
        on_cycle = set(cyc)
        spikes: dict[tuple[int, int], int] = {}
        ok = True
        for i in range(k):
            u, v = cyc[i], cyc[(i + 1) % k]
            cands = [s for s in range(q.n) if s not in on_cycle and (v, s) in arrows and (s, u) in arrows]
            if len(cands) > 1:
                ok = False
                break
            if cands:
                spikes[(u, v)] = cands[0]
        if not ok or len(set(spikes.values())) != len(spikes):
            continue
        allowed = {v: set() for v in cyc}
        for i in range(k):
            u, v = cyc[i], cyc[(i + 1) % k]
            allowed[u].add(v)
            allowed[v].add(u)
        for (u, v), s in spikes.items():
            allowed[u].add(s)
            allowed[v].add(s)
        if any(q.neighbours(v) != allowed[v] for v in cyc):
            continue
        comps = _tail_components(q, on_cycle)
        tails: dict[int, frozenset[int]] = {}
        spike_set = set(spikes.values())
        for comp in comps:
            inside = comp & spike_set
            if len(inside) != 1:
                ok = False
                break
            (s,) = inside
            if not (is_type_a(q, comp) and is_connecting_vertex(q, comp, s)):
                ok = False
                break
            tails[s] = frozenset(comp)
        if not ok:
            continue
        roles = {v: "central-cycle" for v in cyc}
        for idx, s in enumerate(sorted(spike_set), start=1):
            roles[s] = "spike"
            for v in tails[s] - {s}:
                roles[v] = f"typeA-part-{idx}"
        return VatneClass("IV", roles, "IV", tuple(cyc), spikes, tails)
    return None


def classify_vatne(q: Quiver) -> VatneClass:
    """Match ``q`` against the four D_n shapes; NotTypeD when none fits.

    Shapes are tried in the order I, II, III, IV.  Small quivers can fit more
    than one shape (a bare oriented 4-cycle is both type III and a type IV
    wheel); the first match wins, so the bare 4-cycle reports type III.
    """
    if q.frozen or q.n < 4 or not _simple_arrows(q) or not nx.is_connected(q.graph()):
        return VatneClass(NOT_TYPE_D)
    for attempt in (_try_type_one, _try_type_two, _try_type_three, _try_type_four):
        found = attempt(q)
        if found is not None:
            return found
    return VatneClass(NOT_TYPE_D)


def linear_dn(n: int) -> Quiver:
    """Dynkin D_n with the fork 0,1 -> 2 and the path 2 -> 3 -> ... -> n-1."""
    if n < 4:
        raise QuiverError("D_n needs n >= 4")
    arrows = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 1)]
    return Quiver(n, tuple(arrows))


def _is_dn_dynkin(q: Quiver) -> bool:
    g = q.graph()
    if q.n < 4 or g.number_of_edges() != q.n - 1 or not nx.is_tree(g):
        return False
    degs = sorted(d for _, d in g.degree())
    if q.n == 4:
        return degs == [1, 1, 1, 3]
    if degs.count(3) != 1 or degs.count(1) != 3:
        return False
    hub = next(v for v, d in g.degree() if d == 3)
    short = sum(1 for v in g[hub] if g.degree(v) == 1)
    return short >= 2


def mutation_reaches_dn(q: Quiver, depth_limit: int = 12, state_limit: int = 200_000) -> bool:
    """Slow validator: does a bounded mutation BFS reach a D_n Dynkin orientation?"""
    if q.n < 4:
        return False
    seen = {q}
    frontier = deque([(q, 0)])
    while frontier:
        cur, depth = frontier.popleft()
        if _is_dn_dynkin(cur):
            return True
        if depth >= depth_limit:
            continue
        for k in range(cur.n):
            nxt = mutate(cur, k)
            if not _simple_arrows(nxt):
                continue
            if nxt not in seen:
                if len(seen) >= state_limit:
                    return False
                seen.add(nxt)
                frontier.append((nxt, depth + 1))
    return False
