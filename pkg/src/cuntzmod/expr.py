"""Textual element format: parser and deterministic renderer.

Grammar (UTF-8 text, whitespace insignificant between tokens):

    element  := term ( ('+' | '-') term )*
    term     := [ coeff '*' ] factor ( '.' factor )*     -- '.' is the product
    factor   := 'I' | gen | gen "'"                      -- ' = adjoint of the block
    gen      := 'S[' index ( ',' index )* ']'
    index    := decimal integer in 1..n
    coeff    := rational [ 'r' ]                         -- 'r' = sqrt(n)
    rational := [ '-' ] digits [ '/' digits ]

"0" denotes the zero element.  The parser additionally accepts a unary
minus in front of the first term; the renderer never emits one (a leading
negative sign is folded into an explicit coefficient), so rendered text
always stays inside the grammar above.

Rendering is deterministic: terms are ordered by (gauge degree, |nu|,
mu lexicographic, nu lexicographic) and a coefficient a + b*sqrt(n) with
both parts nonzero is emitted as two adjacent terms (the rational part
first).  ``parse(render(a), a.n)`` reproduces ``a`` exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraElement, adjoint, monomial, multiply, one, term_sort_key, zero
from .errors import ExprSyntaxError, UsageError
from .scalars import QSqrt, _frac_str


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise ExprSyntaxError(message, _byte_offset(self.text, self.pos if pos is None else pos))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, char: str):
        if self.peek() != char:
            self.error(f"expected {char!r}")
        self.pos += 1

    def digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected digits", start)
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        negative = False
        if self.peek() == "-":
            negative = True
            self.pos += 1
        num = self.digits()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            den = self.digits()
            if den == 0:
                self.error("malformed rational: zero denominator", start)
        value = Fraction(num, den)
        return -value if negative else value

    def index(self) -> int:
        self.skip_ws()
        start = self.pos
        value = self.digits()
        if not 1 <= value <= self.n:
            self.error(f"index {value} outside 1..{self.n}", start)
        return value

    def factor(self) -> AlgebraElement:
        c = self.peek()
        if c == "I":
            self.pos += 1
            return one(self.n)
        if c != "S":
            self.error("expected a factor ('I' or 'S[...]')")
        self.pos += 1
        self.take("[")
        letters = [self.index()]
        while self.peek() == ",":
            self.pos += 1
            letters.append(self.index())
        self.take("]")
        el = monomial(self.n, tuple(letters), ())
        if self.peek() == "'":
            self.pos += 1
            el = adjoint(el)
        return el

    def term(self) -> AlgebraElement:
        c = self.peek()
        coeff = None
        if c == "-" or c.isdigit():
            rat = self.rational()
            if self.peek() == "r":
                self.pos += 1
                coeff = QSqrt(self.n, 0, rat)
            else:
                coeff = QSqrt(self.n, rat)
            self.take("*")
        el = self.factor()
        while self.peek() == ".":
            self.pos += 1
            el = multiply(el, self.factor())
        if coeff is not None:
            el = el.scale(coeff)
        return el

    def element(self) -> AlgebraElement:
        # bare "0" (optionally signed) denotes the zero element
        mark = self.pos
        c = self.peek()
        if c == "-" or c.isdigit():
            try:
                rat = self.rational()
            except ExprSyntaxError:
                rat = None
                self.pos = mark
            if rat is not None:
                if self.peek() == "" and rat == 0:
                    return zero(self.n)
                self.pos = mark
        acc = zero(self.n)
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        acc = acc + self.term().scale(sign)
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                acc = acc + self.term()
            elif c == "-":
                self.pos += 1
                acc = acc - self.term()
            elif c == "":
                return acc
            else:
                self.error("unexpected input after element")


def parse(text: str, n: int) -> AlgebraElement:
    """Parse element text over O_n (exact backend)."""
    return _Parser(text, n).element()


def _mono_text(mu, nu) -> str:
    if not mu and not nu:
        return "I"
    parts = []
    if mu:
        parts.append("S[" + ",".join(map(str, mu)) + "]")
    if nu:
        parts.append("S[" + ",".join(map(str, nu)) + "]'")
    return ".".join(parts)


def render(a: AlgebraElement) -> str:
    """Deterministic text for an exact element; inverse of :func:`parse`
    up to semantic equality (in fact up to the exact term map)."""
    if not a.exact:
        raise UsageError("render is defined for the exact backend only")
    if a.is_zero:
        return "0"
    pieces: list[tuple[Fraction, bool, str]] = []  # (signed coeff, is_root, monomial text)
    for key in sorted(a.terms, key=term_sort_key):
        c = a.terms[key]
        text = _mono_text(*key)
        rat = c.rational_part()
        root = c.root_part()
        if rat != 0:
            pieces.append((rat, False, text))
        if root != 0:
            pieces.append((root, True, text))
    out: list[str] = []
    for i, (coeff, is_root, text) in enumerate(pieces):
        mag = abs(coeff)
        if i == 0:
            value = coeff  # fold a leading sign into the coefficient
            explicit = value != 1 or is_root
        else:
            out.append(" - " if coeff < 0 else " + ")
            value = mag
            explicit = mag != 1 or is_root
        if text == "I":
            out.append(f"{_frac_str(value)}{'r' if is_root else ''}*I" if explicit else "I")
        elif explicit:
            out.append(f"{_frac_str(value)}{'r' if is_root else ''}*{text}")
        else:
            out.append(text)
    return "".join(out)
