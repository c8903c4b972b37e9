"""Truncated power series in one and two variables with exact coefficients.

``Jet1`` is generic in its coefficient ring (anything closed under ``+``,
``-``, ``*`` with ints; division is only used by ``invert``).  ``Jet2``
holds ExactScalar coefficients keyed by exponent pairs and truncates by
total degree.  A ``Jet2`` flagged ``exact`` is a polynomial known in full:
exact-by-exact operations never truncate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import ContextError, PreconditionError
from .scalar import ONE, ZERO, ExactScalar, as_scalar

__all__ = ["Jet1", "Jet2", "DEFAULT_ORDER"]

DEFAULT_ORDER = 12


def _zero_like(c):
    if type(c) is ExactScalar:
        return ZERO
    if hasattr(c, "zero_like"):
        return c.zero_like()
    return c - c


def _is_zero(c) -> bool:
    return not c


class Jet1:
    """Univariate jet ``c_0 + c_1 z + ... + c_N z^N``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [as_scalar(c) if isinstance(c, (int, Fraction)) else c for c in coeffs]
        if not cs:
            cs = [ZERO]
        if order is not None:
            if order < 0:
                raise ValueError("negative truncation order")
            zero = _zero_like(cs[0])
            cs = cs[: order + 1] + [zero] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def identity(cls, order: int, one=ONE):
        zero = _zero_like(one)
        return cls([zero, one], order)

    @classmethod
    def constant(cls, c, order: int):
        return cls([c], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def zero(self):
        return _zero_like(self.coeffs[0])

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError(n)
        return self.coeffs[n] if n <= self.order else self.zero

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Jet1):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"({c})*z^{n}" for n, c in enumerate(self.coeffs) if not _is_zero(c)]
        return f"Jet1[{self.order}](" + (" + ".join(terms) or "0") + ")"

    def truncate(self, order: int) -> "Jet1":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return Jet1(self.coeffs[: order + 1])

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero jet."""
        for n, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return n
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    # ring operations carry the minimum order
    def __add__(self, other):
        if not isinstance(other, Jet1):
            other = Jet1([other], self.order)
        n = min(self.order, other.order)
        return Jet1([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return Jet1([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet1):
            return Jet1([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        nz_b = [j for j in range(n + 1) if not _is_zero(b[j])]
        out = [None] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if _is_zero(ai):
                continue
            for j in nz_b:
                if i + j > n:
                    break
                p = ai * b[j]
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        zero = self.zero
        return Jet1([zero if c is None else c for c in out])

    def __rmul__(self, other):
        return Jet1([other * c for c in self.coeffs])

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a jet")
        result = Jet1.constant(_one_like(self.coeffs[0]), self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Jet1":
        return Jet1([c * x for x in self.coeffs])

    def shift(self, k: int) -> "Jet1":
        """Multiply by z^k keeping the order."""
        if k >= 0:
            return Jet1([self.zero] * k + list(self.coeffs[: self.order + 1 - k]), self.order)
        for c in self.coeffs[:-k]:
            if not _is_zero(c):
                raise PreconditionError(f"jet not divisible by z^{-k}")
        return Jet1(self.coeffs[-k:])

    def derivative(self) -> "Jet1":
        """Derivative; the result is known to order N-1."""
        cs = [self.coeffs[n] * n for n in range(1, self.order + 1)]
        return Jet1(cs or [self.zero])

    def unit_inverse(self) -> "Jet1":
        """Multiplicative inverse of a jet with invertible constant term."""
        c0 = self.coeffs[0]
        if _is_zero(c0):
            raise PreconditionError("jet is not a unit")
        inv0 = _inverse(c0)
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self.zero
            for i in range(1, k + 1):
                if not _is_zero(self.coeffs[i]):
                    acc = acc + self.coeffs[i] * out[k - i]
            out.append(-acc * inv0)
        return Jet1(out)

    def compose(self, inner: "Jet1") -> "Jet1":
        """``self(inner(z))``; ``inner`` must vanish at 0."""
        if not _is_zero(inner.coeffs[0]):
            raise PreconditionError("inner series of a composition must vanish at 0")
        n = min(self.order, inner.order)
        inner = inner.truncate(n) if inner.order > n else inner
        # Horner in the outer coefficients; each step gains one order of vanishing.
        acc = Jet1.constant(self.coeffs[n] if n <= self.order else self.zero, n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + Jet1.constant(self.coeffs[k], n)
        return acc

    def __call__(self, inner: "Jet1") -> "Jet1":
        return self.compose(inner)

    def invert(self) -> "Jet1":
        """Compositional inverse of ``f`` with ``f(0)=0`` and ``f'(0)`` invertible."""
        if not _is_zero(self.coeffs[0]):
            raise PreconditionError("compositional inverse needs f(0)=0")
        if self.order < 1 or _is_zero(self.coeffs[1]):
            raise PreconditionError("compositional inverse needs a nonzero linear coefficient")
        n = self.order
        a1_inv = _inverse(self.coeffs[1])
        zero = self.zero
        g = Jet1([zero, a1_inv], n)
        # Newton-free coefficient recursion: fix g_k so that f(g) = z through order k.
        for k in range(2, n + 1):
            fg = self.truncate(k).compose(g.truncate(k))
            err = fg.coeffs[k]
            cs = list(g.coeffs)
            cs[k] = cs[k] - err * a1_inv
            g = Jet1(cs)
        return g


def _inverse(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    return 1 / c


def _one_like(c):
    if hasattr(c, "one_like"):
        return c.one_like()
    return _zero_like(c) + 1


Monomial = tuple


class Jet2:
    """Bivariate jet truncated by total degree, or an exact polynomial."""

    __slots__ = ("terms", "order", "exact", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None,
                 order: int = DEFAULT_ORDER, exact: bool = False):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in a jet")
            if not exact and i + j > order:
                continue
            c = as_scalar(c)
            if c:
                clean[(i, j)] = c
        self.terms = clean
        self.order = order
        self.exact = exact
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, order=DEFAULT_ORDER, exact=True):
        return cls({}, order, exact)

    @classmethod
    def const(cls, c, order=DEFAULT_ORDER, exact=True):
        return cls({(0, 0): c}, order, exact)

    @classmethod
    def x(cls, order=DEFAULT_ORDER, exact=True):
        return cls({(1, 0): 1}, order, exact)

    @classmethod
    def y(cls, order=DEFAULT_ORDER, exact=True):
        return cls({(0, 1): 1}, order, exact)

    @classmethod
    def monomial(cls, i, j, c=1, order=DEFAULT_ORDER, exact=True):
        return cls({(i, j): c}, order, exact)

    @classmethod
    def from_function(cls, fn: Callable[[int, int], object], order: int):
        return cls({(i, n - i): fn(i, n - i) for n in range(order + 1) for i in range(n + 1)}, order)

    @classmethod
    def from_jet1(cls, f: Jet1, var: str = "x", order: int | None = None):
        order = f.order if order is None else order
        key = (lambda n: (n, 0)) if var == "x" else (lambda n: (0, n))
        return cls({key(n): c for n, c in enumerate(f.coeffs)}, min(order, f.order))

    # -- inspection ------------------------------------------------------
    def __getitem__(self, ij):
        return self.terms.get(ij, ZERO)

    def coeff(self, i, j):
        return self.terms.get((i, j), ZERO)

    def items(self):
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def valuation(self) -> int | None:
        """Minimal total degree of a nonzero term."""
        return min((i + j for i, j in self.terms), default=None)

    def x_valuation(self) -> int | None:
        return min((i for i, _ in self.terms), default=None)

    def y_valuation(self) -> int | None:
        return min((j for _, j in self.terms), default=None)

    def constant_term(self) -> ExactScalar:
        return self.coeff(0, 0)

    def homogeneous(self, d: int) -> dict:
        return {k: c for k, c in self.terms.items() if k[0] + k[1] == d}

    @property
    def D(self):
        ds = {c.D for c in self.terms.values() if c.D is not None}
        if len(ds) > 1:
            raise ContextError(f"jet mixes extensions {sorted(ds)}")
        return ds.pop() if ds else None

    def effective_order(self) -> float:
        return float("inf") if self.exact else self.order

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return (self.terms == other.terms and self.exact == other.exact
                and (self.exact or self.order == other.order))

    def agrees_with(self, other: "Jet2", order: int | None = None) -> bool:
        """Coefficient equality through ``order`` (default: the common order)."""
        if order is None:
            order = min(self.effective_order(), other.effective_order())
            if order == float("inf"):
                order = max(self.degree(), other.degree())
        keys = set(self.terms) | set(other.terms)
        return all(self.coeff(*k) == other.coeff(*k) for k in keys if k[0] + k[1] <= order)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.terms.items())), self.exact))
        return self._hash

    def __repr__(self):
        tag = "exact" if self.exact else f"O({self.order + 1})"
        return f"Jet2[{tag}]({self.to_text()})"

    def to_text(self, xs="x", ys="y") -> str:
        from .parser import format_polynomial
        return format_polynomial(self, xs, ys)

    # -- arithmetic ------------------------------------------------------
    def _combine_meta(self, other: "Jet2"):
        if self.exact and other.exact:
            return min(self.order, other.order), True
        if self.exact:
            return other.order, False
        if other.exact:
            return self.order, False
        return min(self.order, other.order), False

    def _coerce(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2.const(as_scalar(other), self.order, True)

    def __add__(self, other):
        other = self._coerce(other)
        order, exact = self._combine_meta(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Jet2(terms, order, exact)

    __radd__ = __add__

    def __neg__(self):
        return Jet2({k: -c for k, c in self.terms.items()}, self.order, self.exact)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            c = as_scalar(other)
            return Jet2({k: v * c for k, v in self.terms.items()}, self.order, self.exact)
        order, exact = self._combine_meta(other)
        out: dict = {}
        bound = None if exact else order
        b_items = list(other.terms.items())
        for (i1, j1), c1 in self.terms.items():
            d1 = i1 + j1
            if bound is not None and d1 > bound:
                continue
            for (i2, j2), c2 in b_items:
                if bound is not None and d1 + i2 + j2 > bound:
                    continue
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return Jet2(out, order, exact)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a jet")
        result = Jet2.const(1, self.order, True)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate(self, order: int) -> "Jet2":
        if not self.exact and order > self.order:
            raise ValueError("cannot raise the truncation order of a truncated jet")
        return Jet2(self.terms, order, False)

    def with_order(self, order: int) -> "Jet2":
        """Keep exactness; reset the nominal order (exact) or truncate (non-exact)."""
        if self.exact:
            return Jet2(self.terms, order, True)
        return self.truncate(min(order, self.order))

    def dx(self) -> "Jet2":
        terms = {(i - 1, j): c * i for (i, j), c in self.terms.items() if i}
        return Jet2(terms, self.order if self.exact else self.order - 1, self.exact)

    def dy(self) -> "Jet2":
        terms = {(i, j - 1): c * j for (i, j), c in self.terms.items() if j}
        return Jet2(terms, self.order if self.exact else self.order - 1, self.exact)

    def shift(self, di: int, dj: int) -> "Jet2":
        """Multiply by x^di y^dj (negative values divide, exactly)."""
        terms = {}
        for (i, j), c in self.terms.items():
            if i + di < 0 or j + dj < 0:
                raise PreconditionError(f"jet not divisible by x^{-di} y^{-dj}")
            terms[(i + di, j + dj)] = c
        order = self.order + di + dj if not self.exact else self.order
        return Jet2(terms, max(order, 0), self.exact)

    def unit_inverse(self) -> "Jet2":
        """Multiplicative inverse of a jet with nonzero constant term (truncated result)."""
        c0 = self.constant_term()
        if not c0:
            raise PreconditionError("jet is not a unit")
        order = self.order
        inv0 = c0.inverse()
        rest = (self - c0).with_order(order)
        rest = Jet2(rest.terms, order, False) * inv0
        # 1/(c0 (1 + r)) = inv0 * sum (-r)^k
        acc = Jet2.const(1, order, False)
        power = Jet2.const(1, order, False)
        neg = -rest
        for _ in range(order):
            power = power * neg
            if power.is_zero():
                break
            acc = acc + power
        return acc * inv0

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.unit_inverse()
        return self * as_scalar(other).inverse()

    def map_coeffs(self, fn) -> "Jet2":
        return Jet2({k: fn(c) for k, c in self.terms.items()}, self.order, self.exact)

    def substitute(self, X: "Jet2", Y: "Jet2") -> "Jet2":
        """``self(X(x,y), Y(x,y))``."""
        truncated = not (self.exact and X.exact and Y.exact)
        if not self.exact and (X.constant_term() or Y.constant_term()):
            raise PreconditionError("substituting points off the origin into a truncated jet")
        if truncated:
            orders = [j.order for j in (self, X, Y) if not j.exact]
            order = min(orders)
        else:
            order = min(self.order, X.order, Y.order)
        if truncated:
            X = X.with_order(order) if X.exact else X.truncate(min(order, X.order))
            Y = Y.with_order(order) if Y.exact else Y.truncate(min(order, Y.order))
            X = Jet2(X.terms, order, False)
            Y = Jet2(Y.terms, order, False)
        if not self.terms:
            return Jet2({}, order, not truncated)
        max_i = max(i for i, _ in self.terms)
        max_j = max(j for _, j in self.terms)
        one = Jet2.const(1, order, not truncated)
        xp, yp = [one], [one]
        for _ in range(max_i):
            xp.append(xp[-1] * X)
        for _ in range(max_j):
            yp.append(yp[-1] * Y)
        acc = Jet2({}, order, not truncated)
        # group by i to share the x-power product
        by_i: dict = {}
        for (i, j), c in self.terms.items():
            by_i.setdefault(i, []).append((j, c))
        for i, row in by_i.items():
            inner = Jet2({}, order, not truncated)
            for j, c in row:
                inner = inner + yp[j] * c
            acc = acc + xp[i] * inner
        return acc

    def __call__(self, X, Y):
        return self.substitute(X, Y)

    def restrict_x_axis(self) -> Jet1:
        """The jet of ``s(x, 0)`` as a Jet1 (exact data truncated at its degree)."""
        n = self.order if not self.exact else max(self.degree(), 0)
        return Jet1([self.coeff(i, 0) for i in range(n + 1)])

    def restrict_y_axis(self) -> Jet1:
        n = self.order if not self.exact else max(self.degree(), 0)
        return Jet1([self.coeff(0, j) for j in range(n + 1)])

    def along_curve(self, s: Jet1, parametrize: str = "y") -> Jet1:
        """Restriction to ``y = s(x)`` (``parametrize='y'``) or ``x = s(y)``."""
        n = s.order if self.exact else min(s.order, self.order)
        s = s.truncate(n) if s.order > n else s
        if not self.terms:
            return Jet1([ZERO], n)
        # the parameter itself enters through shifts; group by its power
        pi = 0 if parametrize == "y" else 1
        rows: dict = {}
        for m, c in self.terms.items():
            rows.setdefault(m[pi], []).append((m[1 - pi], c))
        max_o = max(o for row in rows.values() for o, _ in row)
        one = Jet1.constant(ONE, n)
        pw = [one]
        for _ in range(max_o):
            pw.append(pw[-1] * s)
        acc = [ZERO] * (n + 1)
        for e, row in rows.items():
            if e > n:
                continue
            for o, c in row:
                for k, v in enumerate(pw[o].coeffs[: n + 1 - e]):
                    if v:
                        acc[k + e] = acc[k + e] + c * v
        return Jet1(acc)

    def evaluate_at_origin(self) -> ExactScalar:
        return self.constant_term()

    def translate(self, x0, y0) -> "Jet2":
        """``self(x + x0, y + y0)`` for exact polynomials."""
        if not self.exact:
            raise PreconditionError("translation needs exact polynomial data")
        X = Jet2({(1, 0): 1, (0, 0): x0}, self.order, True)
        Y = Jet2({(0, 1): 1, (0, 0): y0}, self.order, True)
        return self.substitute(X, Y)

    def common_monomial(self) -> tuple[int, int]:
        return (self.x_valuation() or 0, self.y_valuation() or 0)
