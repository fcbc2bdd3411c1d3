"""Exact multivariate Laurent polynomials with integer coefficients.

Terms are stored as a map from integer exponent vectors (entries may be
negative) to nonzero arbitrary-precision coefficients.  All operations are
exact; division either succeeds exactly or raises ``NotDivisible``.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class NotDivisible(ArithmeticError):
    """Raised when an exact Laurent division has a nonzero remainder."""


class VariableMismatch(ValueError):
    """Raised when two polynomials live over different variable tuples."""


class LaurentPoly:
    """A Laurent polynomial over a fixed ordered tuple of variable names."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, int] | None = None):
        self.vars = tuple(variables)
        clean = {}
        if terms:
            n = len(self.vars)
            for expo, coeff in terms.items():
                if len(expo) != n:
                    raise VariableMismatch(
                        f"exponent vector {expo} does not match {n} variables")
                if coeff:
                    clean[tuple(expo)] = int(coeff)
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, c):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def one(cls, variables):
        return cls.const(variables, 1)

    @classmethod
    def gen(cls, variables, name, power=1):
        variables = tuple(variables)
        i = variables.index(name)
        e = [0] * len(variables)
        e[i] = power
        return cls(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables, expo, coeff=1):
        return cls(variables, {tuple(expo): coeff})

    # -- basic protocol ----------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * len(self.vars): 1}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, tuple(sorted(self.terms.items()))))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPoly(self.vars, terms)

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return LaurentPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            inv = LaurentPoly.one(self.vars).exact_div(self)
            return inv ** (-k)
        out = LaurentPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- division ----------------------------------------------------------

    def _split_monomial_content(self):
        """Factor out x^m with m the coordinatewise min exponent.

        Returns (m, polynomial part with min exponent 0 in each variable).
        """
        n = len(self.vars)
        mins = [min(e[i] for e in self.terms) for i in range(n)]
        shifted = {tuple(a - b for a, b in zip(e, mins)): c for e, c in self.terms.items()}
        return tuple(mins), shifted

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Return q with q*other == self, else raise NotDivisible."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.vars)
        sm, snum = self._split_monomial_content()
        om, oden = other._split_monomial_content()
        shift = tuple(a - b for a, b in zip(sm, om))
        # ordinary polynomial long division, which terminates with remainder 0
        # exactly when the division is exact over Z
        lead = max(oden)
        lc = oden[lead]
        rem = dict(snum)
        quo: dict[tuple, int] = {}
        while rem:
            rlead = max(rem)
            rc = rem[rlead]
            diff = tuple(a - b for a, b in zip(rlead, lead))
            if any(d < 0 for d in diff) or rc % lc:
                raise NotDivisible(f"{self} is not divisible by {other}")
            q = rc // lc
            quo[diff] = q
            for e, c in oden.items():
                t = tuple(a + b for a, b in zip(e, diff))
                s = rem.get(t, 0) - q * c
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return LaurentPoly(self.vars, {tuple(a + b for a, b in zip(e, shift)): c
                                       for e, c in quo.items()})

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    # -- text form ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, p in zip(self.vars, e):
                if p == 0:
                    continue
                factors.append(name if p == 1 else f"{name}^{p}")
            body = "*".join(factors)
            if not body:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"{c}*{body}")
        out = pieces[0]
        for p in pieces[1:]:
            out += p if p.startswith("-") else "+" + p
        return out
