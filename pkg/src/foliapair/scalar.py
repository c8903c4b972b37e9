"""Exact scalars in Q(i), optionally extended by one real quadratic irrationality.

A value is ``A + B*sqrt(D)`` with ``A, B`` Gaussian rationals and ``D`` a
square-free integer other than 0 and 1.  Values whose ``B`` part vanishes
forget their ``D`` so they combine freely with any context.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

from .errors import ContextError, UnresolvedLocusError

__all__ = ["ExactScalar", "S", "ZERO", "ONE", "I", "as_scalar", "squarefree_part", "sqrt_exact"]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _ginv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("division by zero scalar")
    return (a[0] / n, -a[1] / n)


_F0 = Fraction(0)


def _make(re, im, sre, sim, D):
    """Build from Fractions already known to be consistent (no validation)."""
    z = object.__new__(ExactScalar)
    if not sre and not sim:
        D = None
    object.__setattr__(z, "re", re)
    object.__setattr__(z, "im", im)
    object.__setattr__(z, "sre", sre)
    object.__setattr__(z, "sim", sim)
    object.__setattr__(z, "D", D)
    object.__setattr__(z, "_hash", None)
    return z


def _rat(r):
    return _make(r, _F0, _F0, _F0, None)


@total_ordering
class ExactScalar:
    """Immutable element of Q(i)(sqrt D)."""

    __slots__ = ("re", "im", "sre", "sim", "D", "_hash")

    def __init__(self, re=0, im=0, sre=0, sim=0, D=None):
        re, im, sre, sim = _frac(re), _frac(im), _frac(sre), _frac(sim)
        if sre == 0 and sim == 0:
            D = None
        elif D is None:
            raise ContextError("quadratic component given without a discriminant")
        elif D in (-1, 0, 1) or squarefree_part(D) != D:
            raise ContextError(f"extension discriminant {D} is not square-free")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "sre", sre)
        object.__setattr__(self, "sim", sim)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- structure -------------------------------------------------------
    @property
    def gaussian(self):
        return (self.re, self.im)

    @property
    def surd(self):
        return (self.sre, self.sim)

    def is_zero(self) -> bool:
        return not self.re and not self.im and self.D is None

    def __bool__(self):
        return bool(self.re) or bool(self.im) or self.D is not None

    def is_rational(self) -> bool:
        return self.im == 0 and self.D is None

    def is_gaussian(self) -> bool:
        return self.D is None

    def is_real(self) -> bool:
        if self.D is None:
            return self.im == 0
        if self.D > 0:
            return self.im == 0 and self.sim == 0
        # sqrt(D) = i*sqrt(|D|): real part re - sim*sqrt|D|, imaginary im + sre*sqrt|D|
        return self.im == 0 and self.sre == 0

    def real_sign(self) -> int:
        """Sign of a real value, decided exactly."""
        if not self.is_real():
            raise ValueError("sign of a non-real scalar")
        if self.D is None:
            return (self.re > 0) - (self.re < 0)
        a = self.re
        b = self.sre if self.D > 0 else -self.sim
        d = abs(self.D)
        return _sign_surd(a, b, d)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.re

    def _ctx(self, other: "ExactScalar"):
        if self.D is not None and other.D is not None and self.D != other.D:
            raise ContextError(f"mixing extensions sqrt({self.D}) and sqrt({other.D})")
        return self.D if self.D is not None else other.D

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if type(other) is not ExactScalar:
            other = as_scalar(other, strict=False)
            if other is NotImplemented:
                return NotImplemented
        if self.D is None and other.D is None:
            if not self.im and not other.im:
                return _rat(self.re + other.re)
            return _make(self.re + other.re, self.im + other.im, _F0, _F0, None)
        D = self._ctx(other)
        return _make(self.re + other.re, self.im + other.im,
                     self.sre + other.sre, self.sim + other.sim, D)

    __radd__ = __add__

    def __neg__(self):
        return _make(-self.re, -self.im, -self.sre, -self.sim, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if type(other) is not ExactScalar:
            other = as_scalar(other, strict=False)
            if other is NotImplemented:
                return NotImplemented
        if self.D is None and other.D is None:
            if not self.im and not other.im:
                return _rat(self.re * other.re)
            r = _gmul(self.gaussian, other.gaussian)
            return _make(r[0], r[1], _F0, _F0, None)
        D = self._ctx(other)
        A, B = self.gaussian, self.surd
        C, E = other.gaussian, other.surd
        BE = _gmul(B, E)
        g = _gadd(_gmul(A, C), (BE[0] * D, BE[1] * D))
        s = _gadd(_gmul(A, E), _gmul(B, C))
        return _make(g[0], g[1], s[0], s[1], D)

    __rmul__ = __mul__

    def inverse(self):
        if self.D is None:
            if not self.im:
                if not self.re:
                    raise ZeroDivisionError("division by zero scalar")
                return _rat(1 / self.re)
            r = _ginv(self.gaussian)
            return _make(r[0], r[1], _F0, _F0, None)
        A, B = self.gaussian, self.surd
        BB = _gmul(B, B)
        den = _gsub(_gmul(A, A), (BB[0] * self.D, BB[1] * self.D))
        inv = _ginv(den)
        g = _gmul(A, inv)
        s = _gmul((-B[0], -B[1]), inv)
        return ExactScalar(g[0], g[1], s[0], s[1], self.D)

    def __truediv__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate_surd(self):
        """Galois conjugate sqrt(D) -> -sqrt(D)."""
        return ExactScalar(self.re, self.im, -self.sre, -self.sim, self.D)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self.key() == other.key()

    def __lt__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self.key() < other.key()

    def key(self):
        """Deterministic total order used for canonical sorting (not a field order)."""
        return (self.re, self.im, self.sre, self.sim, self.D or 0)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key()))
        return self._hash

    # -- text ------------------------------------------------------------
    def __repr__(self):
        return f"ExactScalar({str(self)!r})"

    def __str__(self):
        parts = []
        if self.re != 0 or (self.im == 0 and self.D is None):
            parts.append(str(self.re))
        if self.im != 0:
            parts.append(f"{self.im}*i")
        if self.D is not None:
            if self.sre != 0:
                parts.append(f"{self.sre}*sqrt{self.D}")
            if self.sim != 0:
                parts.append(f"{self.sim}*i*sqrt{self.D}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out.replace("sqrt-", "sqrtm")

    _TERM = re.compile(r"([+-]?\d+(?:/\d+)?)(\*i)?(\*sqrt(m?)(\d+))?")

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """Inverse of ``str``: ``"a/b+c/d*i+e/f*sqrtD"`` (``sqrtmD`` for negative D)."""
        pos, acc = 0, ZERO
        text = text.strip()
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"bad scalar literal {text!r}")
            coeff = Fraction(m.group(1))
            term = ExactScalar(coeff)
            if m.group(2):
                term = term * I
            if m.group(3):
                D = int(m.group(5)) * (-1 if m.group(4) else 1)
                term = term * ExactScalar(0, 0, 1, 0, D)
            acc = acc + term
            pos = m.end()
        return acc

    def to_complex(self) -> complex:
        """Floating value; for display and diagnostics only."""
        z = complex(float(self.re), float(self.im))
        if self.D is not None:
            r = math.sqrt(abs(self.D))
            s = r if self.D > 0 else 1j * r
            z += complex(float(self.sre), float(self.sim)) * s
        return z


def _sign_surd(a: Fraction, b: Fraction, d: int) -> int:
    """Sign of a + b*sqrt(d), d > 0 square-free."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d
    diff = a * a - b * b * d
    return sa if diff > 0 else sb


def as_scalar(v, strict=True):
    if isinstance(v, ExactScalar):
        return v
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return ExactScalar(v)
    if strict:
        raise TypeError(f"cannot convert {type(v).__name__} to ExactScalar")
    return NotImplemented


def S(re=0, im=0) -> ExactScalar:
    """Shorthand for a Gaussian rational; accepts ints, Fractions and 'a/b' strings."""
    return ExactScalar(re, im)


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


def squarefree_part(n: int) -> int:
    """Square-free kernel of a nonzero integer, sign kept."""
    if n == 0:
        raise ValueError("zero has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out, p = 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1 if p == 2 else 2
    return sign * out * n


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_exact(z, allow_extension=True) -> ExactScalar:
    """An exact square root of ``z``.

    Gaussian squares stay in Q(i); a rational non-square ``r`` is promoted to
    ``s*sqrt(D)``.  Anything else raises UnresolvedLocusError.
    """
    z = as_scalar(z)
    if z.D is not None:
        raise UnresolvedLocusError(f"square root of {z} needs a second extension")
    a, b = z.re, z.im
    if b == 0:
        r = _rational_sqrt(a)
        if r is not None:
            return ExactScalar(r)
        r = _rational_sqrt(-a)
        if r is not None:
            return ExactScalar(0, r)
        if not allow_extension:
            raise UnresolvedLocusError(f"{z} is not a square in Q(i)")
        num = a.numerator * a.denominator
        D = squarefree_part(num)
        coeff = _rational_sqrt(a / D)
        return ExactScalar(0, 0, coeff, 0, D)
    # Gaussian: (c + d i)^2 = a + b i
    modulus = _rational_sqrt(a * a + b * b)
    if modulus is not None:
        c = _rational_sqrt((a + modulus) / 2)
        if c is not None and c != 0:
            return ExactScalar(c, b / (2 * c))
    raise UnresolvedLocusError(f"square root of {z} is outside Q(i)(sqrt D)")


def rational_root(q: Fraction, k: int):
    """Exact k-th root of a rational (real root, sign allowed for odd k) or None."""
    if k == 1:
        return q
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q

    def iroot(n):
        r = round(n ** (1.0 / k)) if n < 2 ** 1000 else int(n ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == n:
                return c
        return None

    rn, rd = iroot(q.numerator), iroot(q.denominator)
    if rn is None or rd is None:
        return None
    return sign * Fraction(rn, rd)


def root_exact(z, k: int):
    """An exact k-th root of ``z`` in Q(i) when one is easy to certify, else None."""
    z = as_scalar(z)
    if k == 1:
        return z
    if z.D is not None:
        return None
    if z.im == 0:
        r = rational_root(z.re, k)
        if r is not None:
            return ExactScalar(r)
    if k % 2 == 0:
        try:
            s = sqrt_exact(z, allow_extension=False)
        except UnresolvedLocusError:
            return None
        return root_exact(s, k // 2)
    return None
