"""Polynomial expression parsing/printing and certificate document IO.

Expression grammar (recursive descent, explicit ``*`` required between
factors, no implicit multiplication):

    expr   := ('+' | '-')? term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := rational | ident | '(' expr ')'
    rational := digits ('/' digits)?

Certificates are JSON documents with a fixed top-level key set; every
rational inside is a decimal-free "num/den" string and every polynomial
an expression string in the grammar above, so documents round-trip
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import GREVLEX, MonomialOrder, Polynomial


class ParseError(ValueError):
    """Syntax or validation error in a polynomial expression, with position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER | IDENT | OP | END
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            if i < len(text) and text[i] == "/":
                j = i + 1
                if j < len(text) and text[j].isdigit():
                    i = j
                    while i < len(text) and text[i].isdigit():
                        i += 1
                else:
                    raise ParseError("expected digits after '/' in rational literal", j)
            tokens.append(Token("NUMBER", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("IDENT", text[start:i], start))
            continue
        if ch in "+-*^()":
            tokens.append(Token("OP", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], variables: Sequence[str], n: int):
        self.tokens = tokens
        self.pos = 0
        self.var_index = {name: i + 1 for i, name in enumerate(variables)}
        self.n = n

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> Token:
        tok = self.peek()
        if tok.kind != "OP" or tok.text != op:
            raise ParseError(f"expected {op!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return self.advance()

    def parse_expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok.kind == "OP" and tok.text in "+-":
            self.advance()
            sign = -1 if tok.text == "-" else 1
        result = self.parse_term()
        if sign < 0:
            result = -result
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in "+-":
                self.advance()
                term = self.parse_term()
                result = result + term if tok.text == "+" else result - term
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text == "*":
                self.advance()
                result = result * self.parse_factor()
            elif tok.kind in ("NUMBER", "IDENT") or (tok.kind == "OP" and tok.text == "("):
                raise ParseError("missing '*' between factors", tok.pos)
            else:
                return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok.kind == "OP" and exp_tok.text == "-":
                raise ParseError("negative exponent", exp_tok.pos)
            if exp_tok.kind != "NUMBER" or "/" in exp_tok.text:
                raise ParseError("exponent must be a non-negative integer", exp_tok.pos)
            self.advance()
            return base ** int(exp_tok.text)
        return base

    def parse_base(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Polynomial.constant(self.n, Fraction(tok.text))
        if tok.kind == "IDENT":
            self.advance()
            idx = self.var_index.get(tok.text)
            if idx is None:
                raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
            return Polynomial.variable(self.n, idx)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"expected a number, variable or '(', found {tok.text or 'end of input'!r}", tok.pos)


def parse_poly(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression over the given ordered variable names."""
    names = list(variables)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable names in {names}")
    parser = _Parser(_tokenize(text), names, len(names))
    result = parser.parse_expr()
    end = parser.peek()
    if end.kind != "END":
        raise ParseError(f"unexpected trailing input {end.text!r}", end.pos)
    return result


def format_poly(p: Polynomial, variables: Sequence[str], order: MonomialOrder = GREVLEX) -> str:
    """Render p with terms in descending monomial order; parses back to p."""
    if len(variables) != p.n:
        raise ValueError(f"{len(variables)} names for {p.n} variables")
    if p.is_zero():
        return "0"
    pieces = []
    for exp, coeff in order.sorted_terms(p):
        factors = []
        if abs(coeff) != 1 or not any(exp):
            c = abs(coeff)
            factors.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        for name, e in zip(variables, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not pieces:
            pieces.append(mono if coeff > 0 else f"-{mono}")
        else:
            pieces.append(f" + {mono}" if coeff > 0 else f" - {mono}")
    return "".join(pieces)


def format_fraction(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


# -- certificate documents ---------------------------------------------

SCHEMA_NAME = "nakai-witness-certificate"
SCHEMA_VERSION = 1

REQUIRED_KEYS = (
    "schema",
    "input",
    "change_of_coordinates",
    "candidate_tuple",
    "adjustments",
    "symmetric_tuple",
    "lifted_operator",
    "membership_tests",
    "verdict",
)


class CertificateError(ValueError):
    """Malformed or version-incompatible certificate document."""


def write_certificate(document: dict) -> bytes:
    """Serialize a certificate document to canonical JSON bytes."""
    _validate_document(document)
    text = json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def read_certificate(data: bytes) -> dict:
    """Parse and validate certificate bytes; raises CertificateError."""
    try:
        document = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CertificateError(f"not a valid certificate document: {exc}") from exc
    if not isinstance(document, dict):
        raise CertificateError("certificate document must be a JSON object")
    _validate_document(document)
    return document


def _validate_document(document: dict) -> None:
    missing = [k for k in REQUIRED_KEYS if k not in document]
    if missing:
        raise CertificateError(f"certificate missing required keys: {missing}")
    schema = document["schema"]
    if not isinstance(schema, dict) or schema.get("name") != SCHEMA_NAME:
        raise CertificateError(f"unknown certificate schema: {schema!r}")
    if schema.get("version") != SCHEMA_VERSION:
        raise CertificateError(
            f"unsupported schema version {schema.get('version')!r}; this build reads version {SCHEMA_VERSION}"
        )
