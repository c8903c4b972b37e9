"""Laurent polynomials in the symbol tau = 2*i*pi with exact scalar coefficients."""

from __future__ import annotations

from fractions import Fraction

from .scalar import ONE, ZERO, ExactScalar, as_scalar


class Tau:
    """``sum c_n tau^n`` over finitely many integers ``n``.

    ``tau`` stands for ``2 i pi``; it is transcendental over every field used
    here, so equality of two values is equality of coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for n, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                clean[int(n)] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> "Tau":
        return cls({0: c})

    @classmethod
    def tau(cls, power: int = 1, c=ONE) -> "Tau":
        return cls({power: c})

    @staticmethod
    def lift(v) -> "Tau":
        return v if isinstance(v, Tau) else Tau.const(v)

    def zero_like(self) -> "Tau":
        return Tau()

    def one_like(self) -> "Tau":
        return Tau({0: ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            other = Tau.const(other)
        if not isinstance(other, Tau):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((n, c.key()) for n, c in self.terms.items())))

    def __add__(self, other):
        other = Tau.lift(other)
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out[n] + c if n in out else c
        return Tau(out)

    __radd__ = __add__

    def __neg__(self):
        return Tau({n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Tau.lift(other))

    def __rsub__(self, other):
        return Tau.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Tau):
            c = as_scalar(other)
            return Tau({n: v * c for n, v in self.terms.items()})
        out: dict = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                k = n1 + n2
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return Tau(out)

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "Tau":
        """Inverse of a single term ``c tau^n``; sums of terms are not invertible here."""
        if not self.is_monomial():
            raise ZeroDivisionError("only single tau-monomials are invertible")
        (n, c), = self.terms.items()
        return Tau({-n: c.inverse()})

    def __truediv__(self, other):
        if isinstance(other, Tau):
            return self * other.inverse()
        return self * as_scalar(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Tau.const(ONE)
        for _ in range(e):
            out = out * self
        return out

    def coeff(self, n: int) -> ExactScalar:
        return self.terms.get(n, ZERO)

    def is_scalar(self) -> bool:
        return all(n == 0 for n in self.terms)

    def scalar(self) -> ExactScalar:
        if not self.is_scalar():
            raise ValueError(f"{self} depends on tau")
        return self.coeff(0)

    def __repr__(self):
        return f"Tau({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for n in sorted(self.terms, reverse=True):
            c = self.terms[n]
            if n == 0:
                parts.append(f"({c})")
            elif n == 1:
                parts.append(f"({c})*tau")
            else:
                parts.append(f"({c})*tau^{n}")
        return " + ".join(parts)


__all__ = ["Tau"]
