import sympy
from hypothesis import settings, strategies as st

from foliapair.scalar import ExactScalar
from foliapair.series import Jet2
from foliapair._sympy_bridge import X, Y, jet_to_sympy

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussians = st.builds(lambda a, b: ExactScalar(a, b), small, small)


@st.composite
def polys(draw, max_deg=3, order=8, exact=True):
    terms = {}
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            if draw(st.booleans()):
                terms[(i, j)] = draw(gaussians)
    return Jet2(terms, order, exact)


def as_expr(j):
    return sympy.expand(jet_to_sympy(j))


def truncate_expr(expr, order):
    """Drop monomials of total degree > order."""
    p = sympy.Poly(sympy.expand(expr), X, Y)
    return sympy.expand(sympy.Add(*[c * X ** i * Y ** k for (i, k), c in p.terms() if i + k <= order]))


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
