"""Potentials, Jacobian relations and the module attached to an arc.

Matrices are plain nested lists of ints (rows = target basis, columns =
source basis).  Everything here is small: dimension vectors have entries at
most 2, so naive linear algebra over the integers or a small prime field is
plenty.
"""

from __future__ import annotations

import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .quiver import Quiver
from .surface import (
    TaggedArc,
    Triangulation,
    crossing_sequence,
    crossing_vector,
    ideal_crossing_vector,
    potential_from_triangulation,
)

Arrow = tuple[int, int]
Path = tuple[Arrow, ...]
Matrix = list[list[int]]


class ModuleError(RuntimeError):
    """The arc module violates a Jacobian relation (a construction bug)."""


class SizeLimitExceeded(ValueError):
    """Point counting was asked for a module or field outside the size gate."""


def _rotate_min(cycle: tuple, key=lambda c: c) -> tuple:
    rots = [cycle[i:] + cycle[:i] for i in range(len(cycle))]
    return min(rots, key=key)


def default_labels(q: Quiver) -> dict[Arrow, str]:
    letters = string.ascii_lowercase + string.ascii_uppercase
    return {a: letters[i] for i, a in enumerate(q.arrows)}


@dataclass(frozen=True)
class Potential:
    """A finite integer combination of oriented cycles.

    ``terms`` maps a cycle (a tuple of arrows, rotated to its smallest
    rotation) to its coefficient.  ``labels`` names arrows for printing.
    """

    quiver: Quiver
    terms: tuple[tuple[Path, int], ...]
    labels: dict[Arrow, str] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_paths(cls, q: Quiver, terms, labels: dict[Arrow, str] | None = None) -> "Potential":
        arrows = set(q.arrows)
        acc: dict[Path, int] = {}
        for coeff, path in terms:
            path = tuple(tuple(a) for a in path)
            if len(path) < 3:
                raise ValueError("potential terms are cycles of length at least 3")
            for a in path:
                if a not in arrows:
                    raise ValueError(f"arrow {a} is not in the quiver")
            for k in range(len(path)):
                if path[k][1] != path[(k + 1) % len(path)][0]:
                    raise ValueError(f"{path} is not a cycle")
            key = _rotate_min(path)
            acc[key] = acc.get(key, 0) + coeff
        clean = tuple(sorted((p, c) for p, c in acc.items() if c))
        return cls(q, clean, dict(labels) if labels else default_labels(q))

    def arrows(self) -> list[Arrow]:
        return sorted({a for path, _ in self.terms for a in path})

    def serialize(self) -> str:
        words = []
        for path, coeff in self.terms:
            word = _rotate_min(tuple(self.labels[a] for a in path))
            words.append((("".join(word)), coeff))
        words.sort()
        out = ""
        for w, c in words:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out += f"{sign}{mag}{w}"
        return out.lstrip("+") or "0"

    @classmethod
    def parse(cls, text: str, q: Quiver, labels: dict[Arrow, str] | None = None) -> "Potential":
        labels = dict(labels) if labels else default_labels(q)
        by_name = {v: k for k, v in labels.items()}
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls(q, (), labels)
        if s[0] not in "+-":
            s = "+" + s
        terms = []
        i = 0
        while i < len(s):
            sign = -1 if s[i] == "-" else 1
            i += 1
            j = i
            while j < len(s) and s[j] not in "+-":
                j += 1
            chunk = s[i:j]
            coeff = 1
            if "*" in chunk:
                num, chunk = chunk.split("*", 1)
                coeff = int(num)
            try:
                path = tuple(by_name[ch] for ch in chunk)
            except KeyError as exc:
                raise ValueError(f"unknown arrow label in {chunk!r}") from exc
            terms.append((sign * coeff, path))
            i = j
        return cls.from_paths(q, terms, labels)

    def word(self, path: Path) -> str:
        return "".join(self.labels[a] for a in path)


def cyclic_derivative(w: Potential, arrow: Arrow) -> dict[Path, int]:
    """Sum over occurrences of ``arrow`` of the path that follows it round the cycle."""
    out: dict[Path, int] = {}
    for path, coeff in w.terms:
        for k, a in enumerate(path):
            if a == arrow:
                rest = path[k + 1 :] + path[:k]
                out[rest] = out.get(rest, 0) + coeff
    return {p: c for p, c in out.items() if c}


def jacobian_ideal(w: Potential) -> list[tuple[Arrow, dict[Path, int]]]:
    """One generator per arrow occurring in ``w``, in arrow order."""
    return [(a, cyclic_derivative(w, a)) for a in w.arrows()]


def relation_text(w: Potential, rel: dict[Path, int]) -> str:
    parts = []
    for p, c in sorted(rel.items(), key=lambda pc: w.word(pc[0])):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(f"{sign}{mag}{w.word(p)}")
    return "".join(parts).lstrip("+")


# ---------------------------------------------------------------------------
# modules


def _zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def _matmul(a: Matrix, b: Matrix, inner: int) -> Matrix:
    rows, cols = len(a), (len(b[0]) if b else 0)
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(rows)]


@dataclass(frozen=True)
class ArcModule:
    """A representation: a vector space dimension per vertex and a matrix per arrow."""

    dims: tuple[int, ...]
    maps: dict[Arrow, Matrix] = field(hash=False)
    singular: frozenset[Arrow] = frozenset()

    def matrix(self, arrow: Arrow) -> Matrix:
        s, t = arrow
        return self.maps.get(arrow, _zeros(self.dims[t], self.dims[s]))

    def path_matrix(self, path: Path) -> Matrix:
        """Composite of the arrow maps along ``path`` (first arrow acts first)."""
        s = path[0][0]
        if any(self.dims[a[0]] == 0 or self.dims[a[1]] == 0 for a in path):
            return _zeros(self.dims[path[-1][1]], self.dims[s])
        acc = [[int(i == j) for j in range(self.dims[s])] for i in range(self.dims[s])]
        for a in path:
            acc = _matmul(self.matrix(a), acc, self.dims[a[0]])
        return acc

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)


def singular_arrows(m: ArcModule) -> frozenset[Arrow]:
    """Arrows carrying the zero map between two nonzero spaces."""
    out = set()
    for (s, t) in m.maps:
        if m.dims[s] and m.dims[t] and not any(any(row) for row in m.maps[(s, t)]):
            out.add((s, t))
    return frozenset(out)


def relation_residues(m: ArcModule, w: Potential) -> list[tuple[Arrow, Matrix]]:
    """The nonzero composites ∂_a W evaluated on ``m``."""
    bad = []
    for a, rel in jacobian_ideal(w):
        tgt, src = a[0], a[1]
        total = _zeros(m.dims[tgt], m.dims[src])
        for path, coeff in rel.items():
            pm = m.path_matrix(path)
            for i in range(m.dims[tgt]):
                for j in range(m.dims[src]):
                    total[i][j] += coeff * pm[i][j]
        if any(any(row) for row in total):
            bad.append((a, total))
    return bad


def satisfies_relations(m: ArcModule, w: Potential) -> bool:
    return not relation_residues(m, w)


def module_from_arc(t: Triangulation, g: TaggedArc, puncture_correction: bool = True, check: bool | None = None) -> ArcModule:
    """The module of an arc: one basis vector per crossing with the triangulation.

    For an arrow i -> k, the basis vector of crossing r (on arc i) maps to
    crossing q (on arc k) when the stretch of ``g`` between them stays in one
    triangle.  With ``puncture_correction`` it also maps to q when the
    crossing q' one turn further clockwise around the puncture (same arc,
    next deck translate) is reached from r inside one triangle.

    Relations are checked against the signed potential (see
    :func:`artifact.surface.potential_from_triangulation`) unless ``check``
    is false; by default only the corrected construction is checked, since
    dropping the correction can break relations on purpose.  A failure
    raises :class:`ModuleError`.  Loops are ideal arcs and get their plain
    crossing numbers as dimensions.
    """
    from .surface import quiver_from_triangulation

    q = quiver_from_triangulation(t)
    dims = ideal_crossing_vector(t, g) if g.kind == "loop" else crossing_vector(t, g)
    seq = crossing_sequence(t, g)
    if seq.dims(t.n) != dims:
        raise ModuleError(f"crossing sequence {seq.dims(t.n)} disagrees with crossing vector {dims}")
    per_arc = {i: seq.of_arc(i) for i in range(t.n)}
    maps: dict[Arrow, Matrix] = {}
    for (i, k) in q.arrows:
        src, tgt = per_arc[i], per_arc[k]
        mat = _zeros(len(tgt), len(src))
        for b, qb in enumerate(tgt):
            for a, ra in enumerate(src):
                hit = seq.adjacent(ra, qb)
                if not hit and puncture_correction and ra.reach_out is None:
                    hit = any(qq.lift == qb.lift + 1 and seq.adjacent(ra, qq) for qq in tgt)
                mat[b][a] = int(hit)
        maps[(i, k)] = mat
    m = ArcModule(dims, maps, frozenset())
    m = ArcModule(dims, maps, singular_arrows(m))
    if check is None:
        check = puncture_correction
    if check:
        w = potential_from_triangulation(t, signed=True)
        bad = relation_residues(m, w)
        if bad:
            raise ModuleError(f"relations fail at arrows {[a for a, _ in bad]} for {g.describe(t.n)}")
    return m


def module_for_vector(q: Quiver, d) -> ArcModule:
    """Module of the arc with crossing vector ``d`` over a triangulation realising ``q``."""
    from .surface import arc_for_vector, realize

    t = realize(q)
    return module_from_arc(t, arc_for_vector(t, d))


# ---------------------------------------------------------------------------
# linear algebra over F_p


def _rref(rows: list[list[int]], p: int) -> list[list[int]]:
    m = [[x % p for x in r] for r in rows]
    out = []
    col = 0
    ncols = len(m[0]) if m else 0
    r = 0
    while r < len(m) and col < ncols:
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        col += 1
    out = [row for row in m if any(row)]
    return out


def rank_mod(rows: list[list[int]], p: int) -> int:
    return len(_rref(rows, p)) if rows else 0


def nullspace_mod(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    red = _rref(rows, p) if rows else []
    pivots = []
    for row in red:
        pivots.append(next(j for j, x in enumerate(row) if x))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def subspaces(d: int, e: int, p: int) -> list[list[list[int]]]:
    """Every e-dimensional subspace of F_p^d as a reduced row-echelon basis."""
    if e == 0:
        return [[]]
    out = []
    for pivots in combinations(range(d), e):
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in pivots]
        for vals in product(range(p), repeat=len(slots)):
            rows = [[0] * d for _ in range(e)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(slots, vals):
                rows[r][c] = v
            out.append(rows)
    return out


def _apply(mat: Matrix, vec: list[int], p: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, vec)) % p for row in mat]


GRASSMANNIAN_MAX_DIM = 10
GRASSMANNIAN_FIELDS = (2, 3, 5)


def grassmannian_point_count(m: ArcModule, e, q: int) -> int:
    """Number of subrepresentations of ``m`` over F_q with dimension vector ``e``."""
    e = tuple(e)
    if q not in GRASSMANNIAN_FIELDS:
        raise SizeLimitExceeded(f"field size {q} is outside {GRASSMANNIAN_FIELDS}")
    if m.total_dimension > GRASSMANNIAN_MAX_DIM:
        raise SizeLimitExceeded(f"total dimension {m.total_dimension} exceeds {GRASSMANNIAN_MAX_DIM}")
    if len(e) != len(m.dims) or any(not 0 <= x <= d for x, d in zip(e, m.dims)):
        raise ValueError("e must satisfy 0 <= e <= dims")
    n = len(m.dims)
    choices = [subspaces(m.dims[i], e[i], q) for i in range(n)]
    arrows = [a for a in m.maps if m.dims[a[0]] and m.dims[a[1]]]

    def ok(assign: dict[int, list[list[int]]], a: Arrow) -> bool:
        s, t = a
        base = assign[t]
        for v in assign[s]:
            img = _apply(m.matrix(a), v, q)
            if any(img) and rank_mod(base + [img], q) != len(base):
                return False
        return True

    order = sorted(range(n), key=lambda i: -len(choices[i]))

    def count_from(pos: int, assign: dict[int, list[list[int]]]) -> int:
        if pos == n:
            return 1
        v = order[pos]
        total = 0
        for sub in choices[v]:
            assign[v] = sub
            if all(ok(assign, a) for a in arrows if v in a and a[0] in assign and a[1] in assign):
                total += count_from(pos + 1, assign)
            del assign[v]
        return total

    first = order[0]
    from .oracle import thread_count

    def branch(sub):
        assign = {first: sub}
        if not all(ok(assign, a) for a in arrows if a == (first, first)):
            return 0
        return count_from(1, assign)

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(branch, choices[first]))
    return sum(branch(s) for s in choices[first])


def euler_characteristic_by_counting(m: ArcModule, e) -> tuple[Fraction, list[Fraction]]:
    """Interpolate the F_q point counts at q = 2, 3, 5 and evaluate at q = 1.

    Returns the value at 1 and the interpolating coefficients (constant term
    first).
    """
    xs = list(GRASSMANNIAN_FIELDS)
    ys = [grassmannian_point_count(m, e, q) for q in xs]
    coeffs = [Fraction(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(len(basis)):
            coeffs[k] += yi * basis[k] / denom
    value = sum(coeffs)
    return value, coeffs


def endomorphism_dimension(m: ArcModule, p: int = 3) -> int:
    return len(_endomorphism_basis(m, p))


def _endomorphism_basis(m: ArcModule, p: int) -> list[list[int]]:
    offsets = []
    pos = 0
    for d in m.dims:
        offsets.append(pos)
        pos += d * d
    nvars = pos
    rows = []
    for (s, t), mat in m.maps.items():
        ds, dt = m.dims[s], m.dims[t]
        # (M f_s - f_t M)[i][j] = 0
        for i in range(dt):
            for j in range(ds):
                row = [0] * nvars
                for k in range(ds):
                    row[offsets[s] + k * ds + j] += mat[i][k]
                for k in range(dt):
                    row[offsets[t] + i * dt + k] -= mat[k][j]
                rows.append(row)
    return nullspace_mod(rows, nvars, p)


def is_indecomposable(m: ArcModule, p: int = 3) -> bool:
    """No idempotent endomorphism other than 0 and 1 exists (brute force over F_p)."""
    if m.total_dimension > GRASSMANNIAN_MAX_DIM:
        raise SizeLimitExceeded("indecomposability check is limited to total dimension 10")
    if m.total_dimension == 0:
        return False
    basis = _endomorphism_basis(m, p)
    dims = m.dims
    offs = []
    pos = 0
    for d in dims:
        offs.append(pos)
        pos += d * d

    def blocks(vec):
        return [[[vec[offs[v] + i * d + j] for j in range(d)] for i in range(d)] for v, d in enumerate(dims)]

    for coeffs in product(range(p), repeat=len(basis)):
        vec = [sum(c * b[k] for c, b in zip(coeffs, basis)) % p for k in range(pos)]
        bl = blocks(vec)
        zero = all(x == 0 for x in vec)
        ident = all(bl[v][i][j] == int(i == j) for v, d in enumerate(dims) for i in range(d) for j in range(d))
        if zero or ident:
            continue
        idem = all(
            [[x % p for x in row] for row in _matmul(bl[v], bl[v], d)] == bl[v] for v, d in enumerate(dims)
        )
        if idem:
            return False
    return True
