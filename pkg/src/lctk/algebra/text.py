"""Text grammar for polynomials and transfer functions.

Expressions use ``+ - * / ^`` and parentheses over decimal or integer
literals, parameter identifiers and the Laplace variable ``s``, e.g.
``(0.25*K1 + 3.207)*s^2 + s + 1`` or ``1/(s*(s + 1))``.  A pure delay is
written as a factor ``exp(-d*s)``.  Printing then parsing gives back the
same object.
"""

import re
from fractions import Fraction

from ..errors import ParseError
from .poly import S_VAR, ParamPoly, SPoly
from .transfer import TransferFunction

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, "^" if value == "**" else value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def _fold(tf):
    # a numeric constant denominator is folded into the numerator
    if tf.den.degree == 0 and tf.den.leading.is_constant():
        c = tf.den.leading.constant_value()
        if c != 1:
            inv = 1 / c
            return TransferFunction(tf.num.map_coeffs(lambda p: p.scale(inv)), 1, tf.delay)
    return tf


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = _fold(value + rhs if op == "+" else value - rhs)
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = _fold(value * rhs)
            else:
                if rhs.num.is_zero():
                    raise ParseError("division by zero", pos)
                value = _fold(value / rhs)
        return value

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, value, pos = self.take()
            if kind != "num" or not value.isdigit():
                raise ParseError("exponent must be an integer literal", pos)
            n = int(value)
            result = TransferFunction(1)
            for _ in range(n):
                result = result * base
            if sign < 0:
                if base.num.is_zero():
                    raise ParseError("negative power of zero", pos)
                result = TransferFunction(1) / result
            return _fold(result)
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return TransferFunction(ParamPoly.const(Fraction(value)))
        if kind == "name":
            if value == S_VAR:
                return TransferFunction(SPoly.s())
            if value == "exp" and self.peek()[1] == "(":
                return self.delay_factor(pos)
            return TransferFunction(ParamPoly.symbol(value))
        if value == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {value or 'end of input'!r}", pos)

    def delay_factor(self, pos):
        self.take("(")
        arg = self.expr()
        self.take(")")
        ok = (
            arg.delay == 0
            and arg.den.degree == 0
            and arg.num.degree == 1
            and arg.num.coeff(0).is_zero()
            and arg.num.coeff(1).is_constant()
            and arg.num.coeff(1).constant_value() <= 0
        )
        if not ok:
            raise ParseError("exp() argument must be -d*s with numeric d >= 0", pos)
        return TransferFunction(1, 1, -arg.num.coeff(1).constant_value())


def parse_tf(text):
    return _Parser(text).parse()


def parse_spoly(text):
    tf = parse_tf(text)
    if tf.delay or tf.den.degree != 0 or tf.den.leading != 1:
        raise ParseError(f"{text!r} is not a polynomial")
    return tf.num


def parse_parampoly(text):
    p = parse_spoly(text)
    if p.degree > 0:
        raise ParseError(f"{text!r} depends on {S_VAR}")
    return p.coeff(0)


# -- printing ---------------------------------------------------------------

def format_rational(c):
    """Exact decimal when the denominator allows it, else ``p/q``."""
    c = Fraction(c)
    d = c.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{c.numerator}/{c.denominator}"
    if c.denominator == 1:
        return str(c.numerator)
    k = max(twos, fives)
    scaled = abs(c.numerator) * (10**k // c.denominator)
    digits = str(scaled).rjust(k + 1, "0")
    sign = "-" if c < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def format_number(x):
    if isinstance(x, float):
        return repr(x)
    return format_rational(x)


def _format_mono(mono):
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in mono)


def _format_term(mono, c):
    if not mono:
        return format_rational(c)
    body = _format_mono(mono)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{format_rational(c)}*{body}"


def _join(chunks):
    out = ""
    for chunk in chunks:
        if not out:
            out = chunk
        elif chunk.startswith("-"):
            out += " - " + chunk[1:]
        else:
            out += " + " + chunk
    return out or "0"


def format_parampoly(p):
    return _join(_format_term(m, c) for m, c in p.sorted_terms())


def _s_power(k):
    return S_VAR if k == 1 else f"{S_VAR}^{k}"


def _spoly_chunks(p):
    chunks = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c.is_zero():
            continue
        if k == 0:
            chunks.extend(_format_term(m, v) for m, v in c.sorted_terms())
        elif len(c) == 1:
            (m, v), = c.sorted_terms()
            mono = tuple(m) + ((S_VAR, k),)
            if not m:
                chunks.append(_format_term(((S_VAR, k),), v))
            else:
                chunks.append(_format_term(mono, v))
        else:
            chunks.append(f"({format_parampoly(c)})*{_s_power(k)}")
    return chunks


def format_spoly(p):
    return _join(_spoly_chunks(p))


def _is_simple_factor(p):
    chunks = _spoly_chunks(p)
    if len(chunks) != 1:
        return False
    text = chunks[0]
    return re.fullmatch(r"\d+|[A-Za-z_][A-Za-z_0-9]*(\^\d+)?", text) is not None


def format_tf(tf):
    num = format_spoly(tf.num)
    one_den = tf.den.degree == 0 and tf.den.leading == 1
    if one_den:
        body = num
        single = len(_spoly_chunks(tf.num)) <= 1
    else:
        if len(_spoly_chunks(tf.num)) > 1:
            num = f"({num})"
        den = format_spoly(tf.den)
        if not _is_simple_factor(tf.den):
            den = f"({den})"
        body = f"{num}/{den}"
        single = False
    if tf.delay:
        if not single:
            body = f"({body})"
        return f"exp(-{format_number(tf.delay)}*{S_VAR})*{body}"
    return body
