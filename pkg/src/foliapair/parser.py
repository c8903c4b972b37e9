"""Reading and printing polynomial 1-forms and vector fields.

Grammar (Pratt, binding powers low to high)::

    expr   := expr ('+' | '-') expr | expr ('*' | '/' | juxtaposition) expr
            | ('-' | '+') expr | expr '^' int | atom
    atom   := number | 'x' | 'y' | 'i' | 'dx' | 'dy' | 'Dx' | 'Dy'
            | 'd' '(' expr ')' | 'sqrt' '(' int ')' | '(' expr ')'

A value is a polynomial, a 1-form ``A dx + B dy`` or a vector field
``P Dx + Q Dy``; the whole input must be a form or a field.  ``**`` is
accepted for ``^`` and ``∂x``/``∂y`` for ``Dx``/``Dy``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonPolynomialError, ParseError, ZeroFormError
from .scalar import ExactScalar, I, ONE, ZERO, as_scalar
from .series import DEFAULT_ORDER, Jet2

__all__ = [
    "parse_expression", "parse_polynomial", "format_polynomial", "format_form",
    "format_scalar", "tokenize",
]

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>∂[xy]|[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
""", re.VERBOSE)

_NAMES = {"x", "y", "i", "dx", "dy", "Dx", "Dy", "d", "sqrt"}


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    out, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind != "ws":
            if kind == "name":
                lexeme = {"∂x": "Dx", "∂y": "Dy"}.get(lexeme, lexeme)
                if lexeme not in _NAMES:
                    raise NonPolynomialError(f"unknown name {lexeme!r}", line, col)
            if lexeme == "**":
                lexeme = "^"
            out.append(Token(kind, lexeme, line, col))
        for ch in m.group():
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("end", "", line, col))
    return out


# ---------------------------------------------------------------------------
# values


POLY, FORM, FIELD = "polynomial", "1-form", "vector field"


class _Value:
    __slots__ = ("kind", "parts")

    def __init__(self, kind, parts):
        self.kind = kind
        self.parts = parts  # (p,) or (first, second)

    @classmethod
    def poly(cls, p: Jet2):
        return cls(POLY, (p,))

    def constant(self):
        if self.kind != POLY:
            return None
        p = self.parts[0]
        if any(m != (0, 0) for m in p.terms):
            return None
        return p.constant_term()


class _Parser:
    def __init__(self, text: str, order: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.order = order

    # -- helpers ---------------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.line, tok.column)
        return tok

    def fail(self, tok: Token, msg: str, cls=ParseError):
        raise cls(msg, tok.line, tok.column)

    def poly(self, terms) -> Jet2:
        return Jet2(terms, self.order, True)

    # -- Pratt loop ------------------------------------------------------
    _BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}

    @staticmethod
    def _starts_atom(tok: Token) -> bool:
        return tok.kind in ("num", "name") or tok.text == "("

    def expression(self, rbp: int = 0) -> _Value:
        tok = self.next()
        left = self.nud(tok)
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in self._BP:
                bp = self._BP[tok.text]
            elif self._starts_atom(tok):
                bp = 20  # juxtaposition multiplies
            else:
                break
            if bp <= rbp:
                break
            if tok.kind == "op" and tok.text in self._BP:
                self.next()
            else:
                tok = Token("op", "*", tok.line, tok.column)
            left = self.led(tok, left)
        return left

    def nud(self, tok: Token) -> _Value:
        if tok.kind == "num":
            return _Value.poly(self.poly({(0, 0): Fraction(tok.text)}))
        if tok.kind == "name":
            name = tok.text
            if name == "x":
                return _Value.poly(self.poly({(1, 0): ONE}))
            if name == "y":
                return _Value.poly(self.poly({(0, 1): ONE}))
            if name == "i":
                return _Value.poly(self.poly({(0, 0): I}))
            one, zero = self.poly({(0, 0): ONE}), self.poly({})
            if name == "dx":
                return _Value(FORM, (one, zero))
            if name == "dy":
                return _Value(FORM, (zero, one))
            if name == "Dx":
                return _Value(FIELD, (one, zero))
            if name == "Dy":
                return _Value(FIELD, (zero, one))
            if name == "d":
                self.expect("(")
                inner = self.expression()
                self.expect(")")
                if inner.kind != POLY:
                    self.fail(tok, "d(...) applies to a polynomial")
                p = inner.parts[0]
                return _Value(FORM, (p.dx(), p.dy()))
            if name == "sqrt":
                self.expect("(")
                sign = -1 if self.peek().text == "-" and self.next() else 1
                arg = self.next()
                if arg.kind != "num" or "." in arg.text:
                    self.fail(arg, "sqrt takes an integer literal", NonPolynomialError)
                self.expect(")")
                return _Value.poly(self.poly({(0, 0): _sqrt_scalar(sign * int(arg.text))}))
        if tok.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.text in ("-", "+"):
            operand = self.expression(25)
            return operand if tok.text == "+" else _scale(operand, -ONE)
        found = tok.text or "end of input"
        self.fail(tok, f"unexpected {found!r}")

    def led(self, tok: Token, left: _Value) -> _Value:
        op = tok.text
        if op == "^":
            right = self.expression(29)  # right associative
            e = right.constant()
            if e is None or not e.is_rational() or e.re.denominator != 1 or e.re < 0:
                self.fail(tok, "exponents must be non-negative integers", NonPolynomialError)
            if left.kind != POLY:
                self.fail(tok, f"cannot raise a {left.kind} to a power")
            return _Value.poly(left.parts[0] ** int(e.re))
        right = self.expression(self._BP[op])
        if op in "+-":
            if left.kind != right.kind:
                self.fail(tok, f"cannot add a {left.kind} and a {right.kind}")
            if op == "-":
                right = _scale(right, -ONE)
            return _Value(left.kind, tuple(a + b for a, b in zip(left.parts, right.parts)))
        if op == "*":
            if left.kind != POLY and right.kind != POLY:
                self.fail(tok, f"cannot multiply a {left.kind} by a {right.kind}")
            if left.kind != POLY:
                left, right = right, left
            f = left.parts[0]
            return _Value(right.kind, tuple(f * p for p in right.parts))
        # division by a nonzero constant only
        c = right.constant()
        if c is None:
            self.fail(tok, "division by a non-constant", NonPolynomialError)
        if not c:
            self.fail(tok, "division by zero")
        return _scale(left, c.inverse())

    def parse(self) -> _Value:
        if self.peek().kind == "end":
            self.fail(self.peek(), "empty expression")
        value = self.expression()
        tok = self.peek()
        if tok.kind != "end":
            self.fail(tok, f"unexpected {tok.text!r}")
        return value


def _scale(v: _Value, c) -> _Value:
    return _Value(v.kind, tuple(p * c for p in v.parts))


def _sqrt_scalar(n: int) -> ExactScalar:
    from .scalar import sqrt_exact
    return sqrt_exact(as_scalar(n))


def _saturate(a: Jet2, b: Jet2):
    """Divide out a non-constant common factor of the coefficients."""
    from ._sympy_bridge import exact_quotient, polynomial_gcd
    if a.is_zero() or b.is_zero():
        return a, b
    g = polynomial_gcd(a, b)
    if g.degree() <= 0:
        return a, b
    return exact_quotient(a, g), exact_quotient(b, g)


def parse_polynomial(text: str, order: int = DEFAULT_ORDER) -> Jet2:
    value = _Parser(text, order).parse()
    if value.kind != POLY:
        raise ParseError(f"expected a polynomial, got a {value.kind}")
    return value.parts[0]


def parse_expression(text: str, order: int = DEFAULT_ORDER):
    """Parse a 1-form or a vector field into a FoliationGerm.

    Coefficients are saturated (their gcd divided out), so the germ has an
    isolated singularity whenever the form does after saturation.
    """
    from .germ import FoliationGerm
    value = _Parser(text, order).parse()
    if value.kind == POLY:
        raise ParseError("expected a 1-form (.. dx + .. dy) or a vector field (.. Dx + .. Dy)")
    first, second = value.parts
    if first.is_zero() and second.is_zero():
        raise ZeroFormError("the expression is the zero form")
    if value.kind == FORM:
        a, b = first, second
    else:
        a, b = second, -first
    a, b = _saturate(a, b)
    deg = max(a.degree(), b.degree(), order)
    return FoliationGerm(Jet2(a.terms, deg, True), Jet2(b.terms, deg, True))


# ---------------------------------------------------------------------------
# printing


def _fmt_rational(r: Fraction) -> str:
    return str(r)


def format_scalar(c: ExactScalar) -> str:
    """Parseable text such as ``1/2+3*i`` or ``1+2*sqrt(5)``."""
    c = as_scalar(c)
    parts = []
    if c.re or (not c.im and c.D is None):
        parts.append(_fmt_rational(c.re))
    if c.im:
        parts.append(f"{c.im}*i")
    if c.D is not None:
        root = f"sqrt({c.D})"
        if c.sre:
            parts.append(f"{c.sre}*{root}")
        if c.sim:
            parts.append(f"{c.sim}*i*{root}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _monomial(i: int, j: int, xs: str, ys: str) -> str:
    bits = []
    if i:
        bits.append(xs if i == 1 else f"{xs}^{i}")
    if j:
        bits.append(ys if j == 1 else f"{ys}^{j}")
    return "*".join(bits)


def format_polynomial(j, xs: str = "x", ys: str = "y") -> str:
    """Terms by increasing total degree, then decreasing x-exponent."""
    items = sorted(((m, c) for m, c in j.terms.items() if c), key=lambda t: (sum(t[0]), -t[0][0]))
    out = ""
    for (a, b), c in items:
        mono = _monomial(a, b, xs, ys)
        negative = c.is_rational() and c.re < 0
        mag = -c if negative else c
        if mag.is_rational():
            coeff = "" if mono and mag == ONE else format_scalar(mag)
        else:
            coeff = f"({format_scalar(mag)})"
        term = coeff + ("*" if coeff and mono else "") + mono
        if not out:
            out = ("-" if negative else "") + term
        else:
            out += (" - " if negative else " + ") + term
    if not out:
        out = "0"
    if not getattr(j, "exact", True):
        out += f" + O({j.order + 1})"
    return out


def format_form(F) -> str:
    parts = []
    for p, d in ((F.a, "dx"), (F.b, "dy")):
        if p.is_zero():
            continue
        parts.append(f"({format_polynomial(p)})*{d}")
    return " + ".join(parts) or "0"
