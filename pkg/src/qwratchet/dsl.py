"""Text format for walk schedules.

Grammar (whitespace allowed between tokens)::

    schedule := term (";" term)*
    term     := kind ("^" INT)?
    kind     := "F(" angle ")" | "D" | "PF(" angle ")" | "PD" | "PM(" angle ")"
    angle    := DECIMAL | "pi" | "pi/" INT | INT "pi/" INT

Terms are listed in time order: the leftmost term acts first.  The operator
product ``W2^50 W1^50`` (W1 first) is therefore written
``PF(pi/30)^50 ; PD^50``.  Angles are folded into ``[0, 2*pi)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .engine import (
    CoinFieldKind,
    Disordered,
    Fixed,
    PawlConfig,
    PawlDisordered,
    PawlFixed,
    PawlMixed,
    Schedule,
    Term,
    fold_angle,
)


class ParseError(ValueError):
    def __init__(self, offset: int, expected: str, found: str, source: str = ""):
        self.offset = offset
        self.expected = expected
        self.found = found
        self.source = source
        super().__init__(f"at offset {offset}: expected {expected}, found {found}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, DECIMAL, NAME, PUNCT, EOF
    text: str
    offset: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<DECIMAL>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<INT>\d+)
  | (?P<NAME>[A-Za-z]+)
  | (?P<PUNCT>[()^;/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(pos, "a schedule token", repr(text[pos]), text)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def fail(self, expected: str) -> ParseError:
        tok = self.peek
        return ParseError(tok.offset, expected, tok.describe(), self.text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        tok = self.peek
        if tok.kind != kind or (text is not None and tok.text != text):
            raise self.fail(what or (repr(text) if text else kind))
        return self.advance()

    def positive_int(self, what: str) -> int:
        tok = self.expect("INT", what=what)
        value = int(tok.text)
        if value < 1:
            raise ParseError(tok.offset, what, tok.describe(), self.text)
        return value

    def schedule(self) -> list[Term]:
        if self.peek.kind == "EOF":
            raise self.fail("a schedule term")
        terms = [self.term()]
        while self.peek.kind == "PUNCT" and self.peek.text == ";":
            self.advance()
            terms.append(self.term())
        if self.peek.kind != "EOF":
            raise self.fail("';' or end of input")
        return terms

    def term(self) -> Term:
        kind = self.kind()
        reps = 1
        if self.peek.kind == "PUNCT" and self.peek.text == "^":
            self.advance()
            reps = self.positive_int("a positive repetition count")
        return Term(kind, reps)

    def kind(self) -> CoinFieldKind:
        tok = self.peek
        if tok.kind != "NAME" or tok.text not in ("F", "D", "PF", "PD", "PM"):
            raise self.fail("a coin kind (F, D, PF, PD or PM)")
        self.advance()
        if tok.text == "D":
            return Disordered()
        if tok.text == "PD":
            return PawlDisordered()
        self.expect("PUNCT", "(", what="'('")
        theta = self.angle()
        self.expect("PUNCT", ")", what="')'")
        return {"F": Fixed, "PF": PawlFixed, "PM": PawlMixed}[tok.text](theta)

    def angle(self) -> float:
        tok = self.peek
        if tok.kind == "DECIMAL":
            self.advance()
            return fold_angle(float(tok.text))
        if tok.kind == "INT":
            self.advance()
            if self.peek.kind == "NAME" and self.peek.text == "pi":
                if int(tok.text) < 1:
                    raise ParseError(tok.offset, "a positive integer numerator", tok.describe(), self.text)
                self.advance()
                self.expect("PUNCT", "/", what="'/'")
                den = self.positive_int("a positive integer denominator")
                return fold_angle(int(tok.text) * math.pi / den)
            return fold_angle(float(tok.text))
        if tok.kind == "NAME" and tok.text == "pi":
            self.advance()
            if self.peek.kind == "PUNCT" and self.peek.text == "/":
                self.advance()
                den = self.positive_int("a positive integer denominator")
                return fold_angle(math.pi / den)
            return math.pi
        raise self.fail("angle")


def parse_schedule(
    text: str, seed: int = 0, pawl: PawlConfig | None = None
) -> Schedule:
    """Parse schedule text into a :class:`Schedule`.

    >>> [t.reps for t in parse_schedule("PF(pi/30)^50 ; PD^50").terms]
    [50, 50]
    """
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError(bad, "ASCII input", repr(text[bad]), text)
    terms = _Parser(text).schedule()
    return Schedule(tuple(terms), pawl if pawl is not None else PawlConfig(), seed)


def parse_angle(text: str) -> float:
    """Parse a single angle literal (``"pi"``, ``"pi/30"``, ``"3pi/2"``, ``"0.5"``)."""
    parser = _Parser(text)
    value = parser.angle()
    if parser.peek.kind != "EOF":
        raise parser.fail("end of input")
    return value


def format_angle(theta: float) -> str:
    for n in range(1, 1001):
        if abs(theta - math.pi / n) <= 1e-12:
            return "pi" if n == 1 else f"pi/{n}"
    return f"{theta:.17g}"


def format_kind(kind: CoinFieldKind) -> str:
    if isinstance(kind, Disordered):
        return "D"
    if isinstance(kind, PawlDisordered):
        return "PD"
    name = {Fixed: "F", PawlFixed: "PF", PawlMixed: "PM"}[type(kind)]
    return f"{name}({format_angle(kind.theta)})"


def format_schedule(schedule: Schedule) -> str:
    """Canonical text for ``schedule``; ``parse_schedule`` inverts it."""
    parts = []
    for term in schedule.terms:
        text = format_kind(term.kind)
        if term.reps != 1:
            text += f"^{term.reps}"
        parts.append(text)
    return " ; ".join(parts)
