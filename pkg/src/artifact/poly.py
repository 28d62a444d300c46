"""Sparse integer polynomials with exponent-vector keys.

A single class covers ordinary polynomials (F-polynomials in u_0..u_{n-1})
and Laurent polynomials (cluster variables in x and y).  Exponents live in a
fixed-length tuple; negative entries are allowed, which is all a Laurent
polynomial needs.  Coefficients are Python ints, so arithmetic is exact.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


class DivisionError(ArithmeticError):
    """Raised when an exact division leaves a remainder."""


class Poly:
    """Immutable sparse polynomial over the integers.

    ``terms`` maps exponent tuples to nonzero integer coefficients.  All
    exponent tuples share the length ``nvars``.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, int] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff:
                    if len(exp) != nvars:
                        raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
                    clean[tuple(exp)] = clean.get(tuple(exp), 0) + coeff
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff: int = 1) -> "Poly":
        exp = tuple(exp)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Poly":
        exp = [0] * nvars
        exp[i] = power
        return cls(nvars, {tuple(exp): 1})

    # -- basic protocol -----------------------------------------------
    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp: Iterable[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            other = Poly.constant(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            other = Poly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            return Poly(self.nvars, {e: c * other for e, c in self._terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exp: Iterable[int]) -> "Poly":
        """Multiply by the monomial with exponent ``exp``."""
        exp = tuple(exp)
        return Poly(self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()})

    def exact_div(self, other: "Poly") -> "Poly":
        """Divide exactly, raising :class:`DivisionError` on a remainder.

        Works for Laurent polynomials.  Leading terms are taken in lex order,
        and every quotient exponent is confined to the box forced by the
        per-variable degree ranges of dividend and divisor.  A quotient term
        outside that box proves the division is not exact, so the loop always
        terminates.
        """
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly(self.nvars)
        lo = [min(e[i] for e in self._terms) - min(e[i] for e in other._terms) for i in range(self.nvars)]
        hi = [max(e[i] for e in self._terms) - max(e[i] for e in other._terms) for i in range(self.nvars)]
        if any(a > b for a, b in zip(lo, hi)):
            raise DivisionError("degree ranges rule out an exact quotient")
        lead_e = max(other._terms)
        lead_c = other._terms[lead_e]
        rem = dict(self._terms)
        quot: dict[Exponent, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            q, r = divmod(c, lead_c)
            if r:
                raise DivisionError("leading coefficient does not divide")
            qe = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < l or x > h for x, l, h in zip(qe, lo, hi)):
                raise DivisionError("quotient term leaves the admissible box")
            quot[qe] = q
            for oe, oc in other._terms.items():
                te = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(te, 0) - q * oc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return Poly(self.nvars, quot)

    def substitute_ones(self, indices: Iterable[int]) -> "Poly":
        """Set the listed variables to 1 and drop them from the exponent vectors."""
        drop = set(indices)
        keep = [i for i in range(self.nvars) if i not in drop]
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            k = tuple(e[i] for i in keep)
            out[k] = out.get(k, 0) + c
        return Poly(len(keep), out)

    def min_exponents(self) -> Exponent:
        return tuple(min(e[i] for e in self._terms) for i in range(self.nvars))

    def max_exponents(self) -> Exponent:
        return tuple(max(e[i] for e in self._terms) for i in range(self.nvars))

    def evaluate(self, values: Iterable[int]) -> int:
        vals = list(values)
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(vals, e):
                t *= v**k
            total += t
        return total

    # -- ordering and text form ----------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        """Terms in graded-lex order, highest first.

        Variables with larger index weigh more, so ``u1*u2*u5`` comes before
        ``u0*u2*u5`` and the constant term comes last.
        """
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0][::-1]), reverse=True)

    def to_string(self, var: str = "u") -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exp, coeff in self.sorted_terms():
            factors = []
            for i, k in enumerate(exp):
                if k == 1:
                    factors.append(f"{var}{i}")
                elif k:
                    factors.append(f"{var}{i}^{k}")
            if not factors:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = "*".join(factors)
            else:
                body = f"{abs(coeff)}*" + "*".join(factors)
            pieces.append(("-" if coeff < 0 else "+", body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.to_string()!r})"


_TERM = re.compile(r"^(?:(\d+)\*?)?((?:[a-zA-Z]+\d+(?:\^-?\d+)?\*?)*)$")
_FACTOR = re.compile(r"([a-zA-Z]+)(\d+)(?:\^(-?\d+))?")


def parse_poly(text: str, nvars: int, var: str = "u") -> Poly:
    """Parse the text produced by :meth:`Poly.to_string`.

    Accepts ``2*u1*u2^2 + u0 - 3`` style input; whitespace is ignored.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly(nvars)
    if s[0] not in "+-":
        s = "+" + s
    chunks = re.findall(r"([+-])([^+-]+)", s)
    if "".join(sign + body for sign, body in chunks) != s:
        raise ValueError(f"cannot parse polynomial: {text!r}")
    terms: dict[Exponent, int] = {}
    for sign, body in chunks:
        m = _TERM.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse term {body!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        exp = [0] * nvars
        for name, idx, power in _FACTOR.findall(m.group(2)):
            if name != var:
                raise ValueError(f"unexpected variable {name}{idx}")
            i = int(idx)
            if i >= nvars:
                raise ValueError(f"variable {name}{i} out of range for {nvars} variables")
            exp[i] += int(power) if power else 1
        if m.group(2) == "" and m.group(1) is None:
            raise ValueError(f"cannot parse term {body!r}")
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + (coeff if sign == "+" else -coeff)
    return Poly(nvars, terms)
