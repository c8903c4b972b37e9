"""Named inputs used by the test-suite, the acceptance checks and the README.

Expressions are plain text in the input grammar so that they double as a
parse/print round-trip corpus.
"""

# germs of degree <= 4; every one resolves within the default depth limit
SEIDENBERG_GERMS = (
    "2*y*dy - 3*x^2*dx",  # cusp differential
    "x*Dx + 2*y*Dy",
    "x*dy + y*dx",
    "x*dy - y*dx",  # radial, one dicritical blow-up
    "x*dy - 3*y*dx",
    "x*dy + 3*y*dx",
    "x*dy - i*y*dx",
    "x*dy + (1/2)*y*dx",
    "x^2*dy - y*dx",
    "x*dy - y^2*dx",
    "y*dy - x^3*dx",
    "x*dy - (2*y + x^2)*dx",
    "d(x^2 - y^3)",
    "d(x*y*(x - y))",
    "d(y^2 - x^4)",
    "x^2*dy - y^2*dx",
    "x*y*dy - (x^2 + y^2)*dx",
    "y^2*dy - x^3*dx",
    "(x^2 + y^3)*dx + x*y*dy",
    "y*dx + (x + y^2)*dy",
    "(x - y)*dx + (x + y)*dy",
    "x^3*dy - y^3*dx",
    "2*x*y*dx + (x^2 - y^2)*dy",
    "x*(1 + x)*dy - y*dx",
    "d(y^2 - x^3 + x^4)",
    "y*(y - x^2)*dx - x^3*dy",
    "x*Dx + (x + y)*Dy",
    "(y + x^3)*Dx + x^2*y*Dy",
    "y^3*dx - x^4*dy",
    "x*dy - (y + y^2 + x*y)*dx",
)

# (first germ, second germ, tags of the leaves in tree order)
PAIRS = (
    ("dy", "dx", ("T1",)),
    ("dx", "d(x + y)", ("T1",)),
    ("dy", "d(x + y^2)", ("T1",)),
    ("dy", "d(y + x^2)", ("T2",)),
    ("dy", "d(y + x^3)", ("T2",)),
    ("d(y - x^2)", "d(y + x^2)", ("T2",)),
    ("dy", "d(y + x*y^2)", ("T3",)),
    ("dy", "d(y + x*y^3)", ("T3",)),
    ("dy", "d(y + x^3*y^2)", ("T4",)),
    ("dy", "d(y + x^2*y^2)", ("T4",)),
    ("dx", "x*dy - i*y*dx", ("T5_1",)),
    ("dy", "x*dy - i*y*dx", ("T5_1",)),
    ("dx", "x*dy + (1/2)*y*dx", ("T5_2",)),
    ("dy", "x*dy + y*dx", ("T5_2",)),
    ("dy", "x^2*dy - y*dx", ("T5_2",)),
    ("dy", "x*dy - y^3*dx", ("T5_3",)),
    ("dx", "x^2*dy - y*dx", ("T5_3",)),
    ("x*dy + y*dx", "x*dy + 2*y*dx", ("T6",)),
    ("x*dy + y*dx", "x*dy - i*y*dx", ("T6",)),
    ("x*dy - y^2*dx", "x*dy + y*dx", ("T6",)),
    ("x*dy - y^2*dx", "y*dx - x^2*dy", ("T6", "T6")),  # opposite saddle-nodes
    ("dx", "2*y*dy - 3*x^2*dx", ("T5_2", "T4", "T6", "T5_2", "T6")),
    ("dy", "d(y^2 - x^3)", ("T4", "T5_2", "T6", "T5_2", "T6")),
    ("dy", "x*dy - 3*y*dx", ("T5_2", "T6", "T5_2", "T5_2")),
    ("dx", "x*Dx + 2*y*Dy", ("T6", "T5_2")),
)

OPPOSITE_SADDLE_NODES = ("x*dy - y^2*dx", "y*dx - x^2*dy")

# short inputs exercising the grammar itself
GRAMMAR_SAMPLES = (
    "x*dy - 2*y*dx",
    "x*dy - (-1/2 + x*y)*y*dx",
    "x dy + y dx",
    "-x^2y dx + dy",
    "x ∂x - y ∂y",
    "(1/2 + i)*x^2*dy - sqrt(5)*y*dx + x*dx",
    "x**2*dy - (3/4)*y*dx",
    "x*(x*dy - y*dx) + y^3*dx",
    "d((x - y)^3)",
)


def all_expressions():
    out = list(SEIDENBERG_GERMS)
    for a, b, _ in PAIRS:
        out += [a, b]
    out += list(GRAMMAR_SAMPLES)
    return list(dict.fromkeys(out))
