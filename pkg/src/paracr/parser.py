"""Model files and the expression language.

Expression grammar (explicit products only; ``xa`` is one identifier)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('+' | '-')* base ('^' nonneg-int)?
    base    := rational-literal | identifier | '(' expr ')'
    rational-literal := int ('/' posint)?

A literal ``p/q`` binds tighter than ``^`` (``3/2^2`` is ``9/4``).  Division
is allowed only by units (series with a nonzero constant term).

Model file: UTF-8 lines ``key = value`` with keys ``n``, ``m``,
``truncation`` and exactly one of ``Q``, ``P``, ``R``; ``#`` starts a comment.
All syntax errors report a byte offset into the text that was parsed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import gmpy2

from .naming import Names, standard_names
from .series import NonUnitDivisor, Series, UnknownVariable, VarSpace


class ExpressionSyntaxError(SyntaxError):
    """Malformed expression or model file; ``byte_offset`` locates the problem."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (at byte {byte_offset})")
        self.message = message
        self.byte_offset = byte_offset


class ModelError(ValueError):
    """A well-formed model file with unusable contents (bad n, m, truncation...)."""


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(text: str, base_offset: int) -> list[_Tok]:
    tokens = []
    pos = 0
    byte_pos = base_offset
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            skip = len(rest) - len(stripped)
            off = byte_pos + len(rest[:skip].encode("utf-8"))
            raise ExpressionSyntaxError(f"unexpected character {stripped[0]!r}", off)
        kind = m.lastgroup
        start = m.start(kind)
        off = byte_pos + len(text[pos:start].encode("utf-8"))
        tokens.append(_Tok(kind, m.group(kind), off))
        byte_pos += len(text[pos:m.end()].encode("utf-8"))
        pos = m.end()
    tokens.append(_Tok("end", "", base_offset + len(text.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, text: str, space: VarSpace, trunc: int, base_offset: int):
        self.tokens = _tokenize(text, base_offset)
        self.i = 0
        self.space = space
        self.trunc = trunc

    def peek(self) -> _Tok:
        return self.tokens[self.i]

    def take(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> _Tok:
        tok = self.take()
        if tok.kind != "op" or tok.text != op:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExpressionSyntaxError(f"expected {op!r}, found {what}", tok.offset)
        return tok

    def parse(self) -> Series:
        if self.peek().kind == "end":
            raise ExpressionSyntaxError("empty expression", self.peek().offset)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return value

    def expr(self) -> Series:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Series:
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.take()
            rhs = self.factor()
            if tok.text == "*":
                value = value * rhs
            else:
                if not rhs.constant_term():
                    raise NonUnitDivisor(f"divisor at byte {tok.offset} has zero constant term")
                value = value * rhs.reciprocal()
        return value

    def factor(self) -> Series:
        sign = 1
        while self.peek().kind == "op" and self.peek().text in "+-":
            if self.take().text == "-":
                sign = -sign
        value = self.base()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "num":
                what = "end of input" if tok.kind == "end" else repr(tok.text)
                raise ExpressionSyntaxError(f"exponent must be a nonnegative integer, found {what}", tok.offset)
            value = value ** int(tok.text)
        return value if sign > 0 else -value

    def base(self) -> Series:
        tok = self.take()
        if tok.kind == "num":
            num = int(tok.text)
            den = 1
            nxt, after = self.peek(), self.tokens[self.i + 1] if self.i + 1 < len(self.tokens) else None
            if nxt.kind == "op" and nxt.text == "/" and after is not None and after.kind == "num":
                self.take()
                den_tok = self.take()
                den = int(den_tok.text)
                if den == 0:
                    raise ExpressionSyntaxError("zero denominator in rational literal", den_tok.offset)
            return Series.constant(self.space, gmpy2.mpq(num, den), self.trunc)
        if tok.kind == "ident":
            if tok.text not in self.space:
                raise UnknownVariable(f"unknown variable {tok.text!r} at byte {tok.offset}")
            return Series.variable(self.space, tok.text, self.trunc)
        if tok.kind == "op" and tok.text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"expected a number, variable or '(', found {what}", tok.offset)


def parse_expression(text: str, space: VarSpace, trunc: int, *, base_offset: int = 0) -> Series:
    """Expand ``text`` as a series in ``space`` through degree ``trunc`` (reliable = trunc)."""
    return _Parser(text, space, trunc, base_offset).parse()


# ----------------------------------------------------------------- model files
@dataclass(frozen=True)
class ModelFile:
    n: int
    m: int
    trunc: int
    side: str  # "Q", "P" or "R"
    expr: str
    expr_offset: int = 0
    source: str = ""

    def names(self) -> Names:
        indexed = re.search(r"\b[xa]\d+\b", self.expr) is not None
        return standard_names(self.n, self.m, indexed=indexed)

    def space(self) -> VarSpace:
        names = self.names()
        return {"Q": names.qspace, "P": names.pspace, "R": names.full}[self.side]()

    def series(self, trunc: int | None = None) -> Series:
        return parse_expression(self.expr, self.space(), self.trunc if trunc is None else trunc, base_offset=self.expr_offset)


_KEYS = ("n", "m", "truncation", "Q", "P", "R")


def parse_model(text: str | bytes, source: str = "", default_trunc: int = 8) -> ModelFile:
    """Parse the ``key = value`` model format (the expression itself is parsed lazily)."""
    raw = text if isinstance(text, bytes) else text.encode("utf-8")
    try:
        decoded = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ExpressionSyntaxError("model file is not valid UTF-8", exc.start) from None
    values: dict[str, tuple[str, int]] = {}
    offset = 0
    for line in decoded.splitlines(keepends=True):
        line_bytes = len(line.encode("utf-8"))
        body = line.split("#", 1)[0].rstrip("\r\n")
        if body.strip():
            if "=" not in body:
                lead = len(body) - len(body.lstrip())
                raise ExpressionSyntaxError("expected 'key = value'", offset + len(body[:lead].encode("utf-8")))
            key_part, value_part = body.split("=", 1)
            key = key_part.strip()
            key_off = offset + len(key_part[: len(key_part) - len(key_part.lstrip())].encode("utf-8"))
            if key not in _KEYS:
                raise ExpressionSyntaxError(f"unknown key {key!r}", key_off)
            if key in values:
                raise ExpressionSyntaxError(f"duplicate key {key!r}", key_off)
            value_off = offset + len((key_part + "=").encode("utf-8"))
            values[key] = (value_part, value_off)
        offset += line_bytes

    def integer(key: str, default: int | None = None) -> int:
        if key not in values:
            if default is None:
                raise ExpressionSyntaxError(f"missing key {key!r}", offset)
            return default
        text_value, off = values[key]
        stripped = text_value.strip()
        if not re.fullmatch(r"\d+", stripped):
            lead = len(text_value) - len(text_value.lstrip())
            raise ExpressionSyntaxError(f"{key} must be a nonnegative integer", off + len(text_value[:lead].encode("utf-8")))
        return int(stripped)

    n = integer("n")
    m = integer("m")
    trunc = integer("truncation", default_trunc)
    sides = [k for k in ("Q", "P", "R") if k in values]
    if len(sides) != 1:
        raise ExpressionSyntaxError("exactly one of Q, P, R must be given", offset)
    if n < 1 or m < 1:
        raise ModelError("n and m must be at least 1")
    if trunc < 3:
        raise ModelError("truncation must be at least 3")
    side = sides[0]
    expr, expr_off = values[side]
    model = ModelFile(n, m, trunc, side, expr, expr_off, source)
    # parse once now so that syntax errors surface with their offsets
    _tokenize(expr, expr_off)
    _Parser(expr, model.space(), 0, expr_off).parse()
    return model


def load_model(path: str | Path, default_trunc: int = 8) -> ModelFile:
    p = Path(path)
    return parse_model(p.read_bytes(), source=str(p), default_trunc=default_trunc)
