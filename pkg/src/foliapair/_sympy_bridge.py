"""Conversions between exact jets and sympy, used for polynomial factorization and roots."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .errors import UnresolvedLocusError
from .scalar import ExactScalar, sqrt_exact
from .series import Jet2

X, Y, T = sympy.symbols("x y t")


def scalar_to_sympy(c: ExactScalar):
    g = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
        c.im.numerator, c.im.denominator)
    if c.D is not None:
        s = sympy.Rational(c.sre.numerator, c.sre.denominator) + sympy.I * sympy.Rational(
            c.sim.numerator, c.sim.denominator)
        g += s * sympy.sqrt(c.D)
    return g


def sympy_to_scalar(expr, D=None) -> ExactScalar:
    expr = sympy.nsimplify(sympy.expand(expr)) if not expr.is_Rational else expr
    re_part, im_part = sympy.expand(expr).as_real_imag()
    out = []
    for part in (re_part, im_part):
        part = sympy.expand(part)
        rational, surd = Fraction(0), Fraction(0)
        for term in sympy.Add.make_args(part):
            if term.is_Rational:
                rational += Fraction(int(term.p), int(term.q))
                continue
            coeff, rest = term.as_coeff_Mul()
            if D is not None and rest == sympy.sqrt(abs(D)):
                surd += Fraction(int(coeff.p), int(coeff.q))
                continue
            raise UnresolvedLocusError(f"cannot represent {expr} exactly")
        out.append((rational, surd))
    (re_r, re_s), (im_r, im_s) = out
    if D is None or (re_s == 0 and im_s == 0):
        return ExactScalar(re_r, im_r)
    if D > 0:
        return ExactScalar(re_r, im_r, re_s, im_s, D)
    # sqrt(D) = i*sqrt|D|; re_s*sqrt|D| = -i*re_s*sqrt(D), i*im_s*sqrt|D| = im_s*sqrt(D)
    return ExactScalar(re_r, im_r, im_s, -re_s, D)


def jet_to_sympy(j: Jet2, x=X, y=Y):
    return sympy.Add(*[scalar_to_sympy(c) * x ** i * y ** k for (i, k), c in j.terms.items()])


def sympy_to_jet(expr, order: int, D=None, x=X, y=Y) -> Jet2:
    poly = sympy.Poly(sympy.expand(expr), x, y)
    terms = {m: sympy_to_scalar(c, D) for m, c in poly.terms()}
    return Jet2(terms, order, True)


def _extension(D):
    return [sympy.I] if D is None else [sympy.I, sympy.sqrt(D)]


def factor_jet(j: Jet2):
    """Irreducible factors (over Q(i) or Q(i)(sqrt D)) with multiplicities."""
    D = j.D
    expr = jet_to_sympy(j)
    if expr == 0:
        return []
    _, factors = sympy.factor_list(expr, X, Y, extension=_extension(D))
    return [(sympy_to_jet(f, j.order, D), int(m)) for f, m in factors]


def polynomial_gcd(a: Jet2, b: Jet2) -> Jet2:
    D = a.D if a.D is not None else b.D
    g = sympy.gcd(jet_to_sympy(a), jet_to_sympy(b), extension=_extension(D))
    return sympy_to_jet(g, max(a.order, b.order), D)


def exact_quotient(a: Jet2, b: Jet2) -> Jet2:
    D = a.D if a.D is not None else b.D
    q, r = sympy.div(jet_to_sympy(a), jet_to_sympy(b), X, Y, extension=_extension(D))
    if sympy.expand(r) != 0:
        raise ValueError("inexact polynomial division")
    return sympy_to_jet(q, a.order, D)


def univariate_roots(coeffs, D=None):
    """Exact roots with multiplicity of ``sum coeffs[k] t^k``.

    Linear factors over the current field give roots directly; an irreducible
    quadratic over Q(i) with rational discriminant is split by promoting to
    Q(i)(sqrt D').  Anything else raises UnresolvedLocusError.
    """
    expr = sympy.Add(*[scalar_to_sympy(c) * T ** k for k, c in enumerate(coeffs) if c])
    if expr == 0:
        raise ValueError("roots of the zero polynomial")
    _, factors = sympy.factor_list(expr, T, extension=_extension(D))
    roots = []
    for f, mult in factors:
        mult = int(mult)
        p = sympy.Poly(f, T)
        deg = p.degree()
        if deg == 0:
            continue
        cs = [sympy_to_scalar(c, D) for c in p.all_coeffs()]
        if deg == 1:
            roots.append((-cs[1] / cs[0], mult))
        elif deg == 2 and D is None:
            a, b, c = cs
            disc = b * b - 4 * a * c
            s = sqrt_exact(disc)
            for sign in (1, -1):
                roots.append(((-b + s * sign) / (2 * a), mult))
        else:
            raise UnresolvedLocusError(f"singular point locus {f} is beyond one quadratic extension")
    roots.sort(key=lambda rm: rm[0].key())
    return roots
