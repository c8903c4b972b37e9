"""Jets of plane maps fixing the origin: composition, inversion, pullback of forms."""

from __future__ import annotations

from .errors import PreconditionError
from .germ import FoliationGerm
from .scalar import as_scalar
from .series import Jet2


class Map2:
    """``(x, y) -> (X(x, y), Y(x, y))`` with ``X(0) = Y(0) = 0``."""

    __slots__ = ("X", "Y")

    def __init__(self, X: Jet2, Y: Jet2):
        if X.constant_term() or Y.constant_term():
            raise PreconditionError("maps must fix the origin")
        self.X, self.Y = X, Y

    @classmethod
    def identity(cls, order: int = 12, exact: bool = True) -> "Map2":
        return cls(Jet2.x(order, exact), Jet2.y(order, exact))

    @classmethod
    def linear(cls, m, order: int = 12) -> "Map2":
        """``(x, y) -> (m00 x + m01 y, m10 x + m11 y)``."""
        (a, b), (c, d) = [[as_scalar(v) for v in row] for row in m]
        return cls(Jet2({(1, 0): a, (0, 1): b}, order, True), Jet2({(1, 0): c, (0, 1): d}, order, True))

    @property
    def order(self) -> int:
        return min(self.X.order, self.Y.order)

    @property
    def exact(self) -> bool:
        return self.X.exact and self.Y.exact

    def linear_part(self):
        return ((self.X.coeff(1, 0), self.X.coeff(0, 1)), (self.Y.coeff(1, 0), self.Y.coeff(0, 1)))

    def __call__(self, other: "Map2") -> "Map2":
        return self.compose(other)

    def compose(self, inner: "Map2") -> "Map2":
        """``self o inner``."""
        return Map2(self.X.substitute(inner.X, inner.Y), self.Y.substitute(inner.X, inner.Y))

    def truncate(self, order: int) -> "Map2":
        return Map2(Jet2(self.X.terms, order, False), Jet2(self.Y.terms, order, False))

    def agrees_with(self, other: "Map2", order: int) -> bool:
        return self.X.agrees_with(other.X, order) and self.Y.agrees_with(other.Y, order)

    def is_identity(self, order: int | None = None) -> bool:
        n = self.order if order is None else order
        return self.agrees_with(Map2.identity(n), n)

    def inverse(self, order: int | None = None) -> "Map2":
        """Compositional inverse through ``order`` by fixed-point iteration."""
        n = self.order if order is None else order
        (a, b), (c, d) = self.linear_part()
        det = a * d - b * c
        if not det:
            raise PreconditionError("map is not invertible at the origin")
        inv = ((d / det, -b / det), (-c / det, a / det))
        L_inv = Map2.linear(inv, n)
        lin = Map2.linear(((a, b), (c, d)), n)
        hx = Jet2(self.X.terms, n, False) - lin.X
        hy = Jet2(self.Y.terms, n, False) - lin.Y
        x, y = Jet2.x(n, False), Jet2.y(n, False)
        N = L_inv.compose(Map2(x, y))
        for _ in range(n):
            rx = x - hx.substitute(N.X, N.Y)
            ry = y - hy.substitute(N.X, N.Y)
            N = Map2(L_inv.X.substitute(rx, ry), L_inv.Y.substitute(rx, ry))
        return N

    def pullback(self, F: FoliationGerm) -> FoliationGerm:
        return F.pullback(self.X, self.Y)

    def __repr__(self):
        return f"Map2({self.X.to_text()}, {self.Y.to_text()})"


def same_foliation(F: FoliationGerm, G: FoliationGerm, order: int) -> bool:
    """``omega_F ^ omega_G`` vanishes through ``order``."""
    w = F.wedge(G)
    return all(i + j > order for (i, j) in w.terms)


__all__ = ["Map2", "same_foliation"]
