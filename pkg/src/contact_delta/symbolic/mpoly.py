"""Exact multivariate polynomials over Python integers.

Terms are stored as ``{exponent tuple: int}`` against a tuple of generator
names. Operands with different generators are aligned on the fly, so
``beta + xi_beta`` just works. No floating point is ever produced.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class NotExactError(ArithmeticError):
    """Raised when a division that must be exact leaves a remainder."""

    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


class MPoly:
    __slots__ = ("gens", "terms")
    __hash__ = None

    def __init__(self, terms: Mapping[tuple, int] | None = None, gens: Iterable[str] = ()):
        self.gens = tuple(gens)
        self.terms = {}
        for e, a in (terms or {}).items():
            if len(e) != len(self.gens):
                raise ValueError(f"exponent {e} does not match generators {self.gens}")
            if a:
                a = int(a)
                self.terms[tuple(e)] = self.terms.get(tuple(e), 0) + a
        self.terms = {e: a for e, a in self.terms.items() if a}

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls({(1,): 1}, (name,))

    @classmethod
    def const(cls, a: int, gens: Iterable[str] = ()) -> "MPoly":
        gens = tuple(gens)
        return cls({(0,) * len(gens): a}, gens)

    # -- alignment ---------------------------------------------------------

    def with_gens(self, gens: tuple[str, ...]) -> "MPoly":
        if gens == self.gens:
            return self
        idx = []
        for g in self.gens:
            if g not in gens:
                if any(e[self.gens.index(g)] for e in self.terms):
                    raise ValueError(f"generator {g} is used and missing from {gens}")
            idx.append(gens.index(g) if g in gens else None)
        out = {}
        for e, a in self.terms.items():
            new = [0] * len(gens)
            for k, p in enumerate(e):
                if idx[k] is not None:
                    new[idx[k]] = p
            out[tuple(new)] = a
        return MPoly(out, gens)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, int):
            return MPoly.const(other, self.gens)
        return NotImplemented

    def _align(self, other: "MPoly") -> tuple["MPoly", "MPoly"]:
        if self.gens == other.gens:
            return self, other
        gens = self.gens + tuple(g for g in other.gens if g not in self.gens)
        return self.with_gens(gens), other.with_gens(gens)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, a.gens)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -a for e, a in self.terms.items()}, self.gens)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out: dict[tuple, int] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, a.gens)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        return a.terms == b.terms

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()), 0)

    # -- structure -----------------------------------------------------------

    def degree(self, var: str) -> int:
        if var not in self.gens:
            return 0 if self.terms else -1
        i = self.gens.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coeffs_in(self, var: str) -> list["MPoly"]:
        """Coefficients of var^0, var^1, ... as polynomials in the other generators."""
        d = self.degree(var)
        if var not in self.gens:
            return [self]
        i = self.gens.index(var)
        rest = self.gens[:i] + self.gens[i + 1:]
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for e, a in self.terms.items():
            buckets[e[i]][e[:i] + e[i + 1:]] = a
        return [MPoly(b, rest) for b in buckets]

    def coeff(self, monomial: Mapping[str, int]) -> int:
        e = tuple(monomial.get(g, 0) for g in self.gens)
        if any(g not in self.gens and p for g, p in monomial.items()):
            return 0
        return self.terms.get(e, 0)

    def diff(self, var: str) -> "MPoly":
        if var not in self.gens:
            return MPoly({}, self.gens)
        i = self.gens.index(var)
        out = {}
        for e, a in self.terms.items():
            if e[i]:
                new = list(e)
                new[i] -= 1
                out[tuple(new)] = a * e[i]
        return MPoly(out, self.gens)

    def subst(self, var: str, value) -> Union["MPoly", "RationalExpr"]:
        """Replace ``var`` by an int, MPoly or RationalExpr (Horner in var)."""
        if isinstance(value, RationalExpr):
            return value.substitute_into(self, var)
        if var not in self.gens:
            return self
        value = self._coerce(value) if not isinstance(value, MPoly) else value
        coeffs = self.coeffs_in(var)
        acc = MPoly({}, ())
        for cf in reversed(coeffs):
            acc = acc * value + cf
        return acc

    def evaluate(self, point: Mapping[str, Scalar]) -> Scalar:
        missing = [g for g in self.gens if g not in point and self.degree(g) > 0]
        if missing:
            raise KeyError(f"no value for {missing}")
        total: Scalar = 0
        for e, a in self.terms.items():
            t: Scalar = a
            for g, p in zip(self.gens, e):
                if p:
                    t = t * point[g] ** p
            total += t
        return total

    def content(self) -> int:
        g = 0
        for a in self.terms.values():
            g = gcd(g, a)
        return g

    def monomial_content(self) -> dict[str, int]:
        if not self.terms:
            return {}
        mins = [min(e[i] for e in self.terms) for i in range(len(self.gens))]
        return {g: p for g, p in zip(self.gens, mins) if p}

    def divide_monomial(self, monomial: Mapping[str, int]) -> "MPoly":
        shift = [monomial.get(g, 0) for g in self.gens]
        out = {}
        for e, a in self.terms.items():
            new = tuple(x - s for x, s in zip(e, shift))
            if min(new, default=0) < 0:
                raise NotExactError(f"monomial {dict(monomial)} does not divide the term {e}")
            out[new] = a
        return MPoly(out, self.gens)

    def leading(self) -> tuple[tuple, int]:
        """Lex-leading exponent and coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def exquo(self, other) -> "MPoly":
        """Exact quotient over Z[gens]; raises NotExactError otherwise."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a, b = self._align(other)
        gens = a.gens
        lt_e, lt_c = b.leading()
        rem = dict(a.terms)
        quot: dict[tuple, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            shift = tuple(x - y for x, y in zip(e, lt_e))
            if min(shift, default=0) < 0 or c % lt_c:
                raise NotExactError("division leaves a remainder", MPoly(rem, gens))
            q = c // lt_c
            quot[shift] = q
            for be, bc in b.terms.items():
                k = tuple(x + y for x, y in zip(be, shift))
                v = rem.get(k, 0) - q * bc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MPoly(quot, gens)

    def divides(self, other: "MPoly") -> bool:
        try:
            other.exquo(self)
        except NotExactError:
            return False
        return True

    # -- presentation --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def term_str(self, e: tuple, a: int, with_sign: bool = True) -> str:
        mono = "*".join(g if p == 1 else f"{g}^{p}" for g, p in zip(self.gens, e) if p)
        mag = abs(a)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
        sign = "-" if a < 0 else "+"
        return f"{sign}{body}" if with_sign else (f"-{body}" if a < 0 else body)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [self.term_str(e, a) for e, a in self.sorted_terms()]
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return f"MPoly({self})"


def reorder(p: MPoly, order: Iterable[str]) -> MPoly:
    """Same polynomial over the used generators, listed in ``order``."""
    used = [g for g in p.gens if p.degree(g) > 0]
    gens = tuple(g for g in order if g in used) + tuple(g for g in used if g not in order)
    return p.with_gens(gens)


class RationalExpr:
    """numerator / denominator; no gcd reduction is attempted."""
    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly):
        if isinstance(den, int):
            den = MPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num if isinstance(num, MPoly) else MPoly.const(num)
        self.den = den

    def _lift(self, other) -> "RationalExpr":
        if isinstance(other, RationalExpr):
            return other
        if isinstance(other, (int, MPoly)):
            return RationalExpr(other if isinstance(other, MPoly) else MPoly.const(other), MPoly.const(1))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalExpr(self.num + other.num, self.den)
        if other.den == 1:
            return RationalExpr(self.num + other.num * self.den, self.den)
        if self.den == 1:
            return RationalExpr(self.num * other.den + other.num, other.den)
        return RationalExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def substitute_into(self, p: MPoly, var: str) -> "RationalExpr":
        """p(var = num/den) written over den^deg_var(p)."""
        d = p.degree(var)
        if d <= 0:
            return RationalExpr(p, MPoly.const(1))
        coeffs = p.coeffs_in(var)
        num = MPoly({}, ())
        num_pows = [MPoly.const(1)]
        den_pows = [MPoly.const(1)]
        for _ in range(d):
            num_pows.append(num_pows[-1] * self.num)
            den_pows.append(den_pows[-1] * self.den)
        for e, cf in enumerate(coeffs):
            if cf:
                num = num + cf * num_pows[e] * den_pows[d - e]
        return RationalExpr(num, den_pows[d])

    def evaluate(self, point):
        den = self.den.evaluate(point)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at point")
        return Fraction(self.num.evaluate(point)) / Fraction(den)

    def __repr__(self):
        return f"RationalExpr(({self.num}) / ({self.den}))"
