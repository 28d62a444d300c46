"""Ground truth by brute force: seed mutation with principal coefficients.

Coefficient convention.  F-polynomials here count submodules along the
arrows of the quiver: for the arrow 0 -> 1 of A_2 the variable with
denominator u0*u1 has F = 1 + u1 + u0*u1.  That is the reading under which
the dimer and vector models and the arc modules agree, and it is what the
worked D_6 example needs.  It corresponds to frozen vertices attached as
sinks (i -> i').  Attaching them as sources (i' -> i) produces the
F-polynomials of the opposite quiver; pass ``framing="source"`` for that.

Cluster variables are Laurent polynomials in x_0..x_{n-1} (cluster) and
y_0..y_{n-1} (frozen coefficients), stored as :class:`~artifact.poly.Poly`
values over 2n variables.  Every exchange is an exact division; a remainder
means the Laurent phenomenon failed, which can only be a bug here.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .poly import DivisionError, Poly
from .quiver import Quiver, frame, mutate

LaurentPoly = Poly


class LaurentViolation(ArithmeticError):
    """An exchange relation did not divide exactly."""


class NotFound(LookupError):
    """The requested cluster variable was not reached."""


class IncompleteEnumeration(RuntimeError):
    """The seed search hit its depth limit before closing up."""


@dataclass(frozen=True)
class Seed:
    """A framed quiver together with the current cluster.

    ``quiver`` has 2n vertices, the last n frozen; ``cluster`` holds the n
    mutable cluster variables as Laurent polynomials in 2n variables.  A
    coefficient-free seed has no frozen vertices and n variables.
    """

    quiver: Quiver
    cluster: tuple[LaurentPoly, ...]

    @property
    def rank(self) -> int:
        return len(self.cluster)

    def key(self) -> frozenset[LaurentPoly]:
        """Seeds with the same cluster (as a set) are identified in searches."""
        return frozenset(self.cluster)


FRAMINGS = ("sink", "source")


def initial_seed(q: Quiver, framing: str = "sink") -> Seed:
    if framing not in FRAMINGS:
        raise ValueError(f"framing must be one of {FRAMINGS}")
    fq = frame(q, sink=framing == "sink")
    n = q.n
    cluster = tuple(Poly.var(2 * n, i) for i in range(n))
    return Seed(fq, cluster)


def coefficient_free_seed(q: Quiver) -> Seed:
    """Seed on ``q`` itself with no frozen vertices; variables x_0..x_{n-1}."""
    return Seed(q, tuple(Poly.var(q.n, i) for i in range(q.n)))


def _variable(seed: Seed, v: int) -> LaurentPoly:
    n = seed.rank
    if v < n:
        return seed.cluster[v]
    return Poly.var(2 * n, v)


def exchange_numerator(seed: Seed, k: int) -> LaurentPoly:
    """Product over arrows into k plus product over arrows out of k."""
    nvars = seed.cluster[k].nvars
    incoming = Poly.one(nvars)
    outgoing = Poly.one(nvars)
    for s, t in seed.quiver.arrows:
        if t == k:
            incoming = incoming * _variable(seed, s)
        elif s == k:
            outgoing = outgoing * _variable(seed, t)
    return incoming + outgoing


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Exchange x_k for (prod_in + prod_out) / x_k and mutate the quiver."""
    if not 0 <= k < seed.rank:
        raise ValueError(f"vertex {k} is not mutable")
    numerator = exchange_numerator(seed, k)
    try:
        new_var = numerator.exact_div(seed.cluster[k])
    except DivisionError as exc:
        raise LaurentViolation(f"exchange at {k} is not a Laurent polynomial") from exc
    cluster = seed.cluster[:k] + (new_var,) + seed.cluster[k + 1 :]
    return Seed(mutate(seed.quiver, k), cluster)


def denominator_vector(x: LaurentPoly, n: int) -> tuple[int, ...]:
    """d with x = N / x^d and N divisible by no x_i."""
    mins = x.min_exponents()
    return tuple(-mins[i] for i in range(n))


def f_polynomial_of(x: LaurentPoly, n: int) -> Poly:
    """Set every x_i to 1; what remains is F in y, renamed u."""
    return x.substitute_ones(range(n))


def f_polynomial_mutation(q: Quiver, target, framing: str = "sink") -> Poly:
    """F-polynomial of the variable named by a mutation word or a denominator vector.

    A list of vertices is read as a mutation word applied to the initial
    seed; the last mutated variable is returned.  A tuple of length n is read
    as a denominator vector and looked up in the full enumeration.
    """
    n = q.n
    if isinstance(target, list):
        seed = initial_seed(q, framing)
        last = None
        for k in target:
            seed = mutate_seed(seed, k)
            last = k
        if last is None:
            return Poly.one(n)
        return f_polynomial_of(seed.cluster[last], n)
    target = tuple(target)
    if len(target) != n:
        raise ValueError("denominator vector has the wrong length")
    if all(v == 0 for v in target):
        return Poly.one(n)
    if target.count(-1) == 1 and all(v in (0, -1) for v in target):
        return Poly.one(n)
    table = enumerate_cluster_variables(q, framing=framing)
    if target not in table:
        raise NotFound(f"no cluster variable with denominator vector {target}")
    return table[target]


_CACHE: dict[tuple[Quiver, str], dict[tuple[int, ...], Poly]] = {}


def enumerate_cluster_variables(q: Quiver, depth_limit: int = 64, framing: str = "sink") -> dict[tuple[int, ...], Poly]:
    """Breadth-first search over seeds until no new seed appears.

    Returns the F-polynomial of every non-initial cluster variable keyed by
    its denominator vector.  Seeds are identified by their cluster as a set.
    Raises :class:`IncompleteEnumeration` if the depth limit cuts the search
    short, and :class:`LaurentViolation` if any exchange is inexact.
    """
    if (q, framing) in _CACHE:
        return dict(_CACHE[(q, framing)])
    n = q.n
    start = initial_seed(q, framing)
    seen = {start.key()}
    frontier = deque([(start, 0)])
    initial = set(start.cluster)
    found: dict[tuple[int, ...], Poly] = {}
    variables: set[LaurentPoly] = set()
    truncated = False
    while frontier:
        seed, depth = frontier.popleft()
        for k in range(n):
            nxt = mutate_seed(seed, k)
            x = nxt.cluster[k]
            if x not in initial and x not in variables:
                variables.add(x)
                d = denominator_vector(x, n)
                f = f_polynomial_of(x, n)
                if d in found and found[d] != f:
                    raise RuntimeError(f"two cluster variables share denominator vector {d}")
                found[d] = f
            key = nxt.key()
            if key in seen:
                continue
            if depth + 1 > depth_limit:
                truncated = True
                continue
            seen.add(key)
            frontier.append((nxt, depth + 1))
    if truncated:
        raise IncompleteEnumeration(f"depth limit {depth_limit} reached before closure")
    _CACHE[(q, framing)] = dict(found)
    return found


def thread_count() -> int:
    """Worker cap taken from DIMER_THREADS (default 1)."""
    raw = os.environ.get("DIMER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
