"""Parser and serializer for ``.qid`` identity files.

Example::

    identity andrews_sum {
      vars a b;
      lhs phi[base q](q^-n, a, b, q^(1/2-n)/(a*b) ; q^(1-n)/a, q^(1-n)/b, q^(1/2)*a*b | z=q);
      rhs q^(-n/2) * pochfrac[base q, len n](a*b ; a, b)
          * pochfrac[base q^(1/2), len n](a, b, -q^(1/2) ; a*b);
    }

Half-integer powers are legal only on ``q`` (they become integer powers of
``p`` with ``q = p^2``); variables take integer exponents. ``#`` starts a
comment that runs to the end of the line.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from .closedform import Add, Const, Div, Mul, Neg, Poch, PochFrac, Phi, Sub, div, mul, neg
from .params import AffineExp, Mono, mono_pow
from .registry import Identity
from .series import MalformedSeries, SeriesSpec

KEYWORDS = {"identity", "vars", "lhs", "rhs", "usesk", "phi", "poch", "pochfrac", "q", "n", "k", "z"}


class ParseError(ValueError):
    def __init__(self, message, line=0, column=0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


class UnknownVariable(ParseError):
    pass


class BadExponent(ParseError):
    pass


@dataclass
class IdentityDoc:
    source: str
    identities: List[Identity] = field(default_factory=list)
    diagnostics: List[Tuple[int, int, str]] = field(default_factory=list)


# -- lexer ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[{}()\[\];,|=+\-*/^])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        self.declared = set()

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, cls=ParseError, tok=None):
        tok = tok or self.tok
        return cls(message, tok.line, tok.column)

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("sym", "name")

    def take(self, text=None, kind=None):
        tok = self.tok
        if text is not None and tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        if kind is not None and tok.kind != kind:
            raise self.error(f"expected {kind}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    # document structure

    def identity(self):
        start = self.take("identity")
        name = self.take(kind="name").text
        self.take("{")
        self.take("vars")
        names = []
        while self.tok.kind == "name" and not self.at(";"):
            tok = self.take(kind="name")
            if tok.text in KEYWORDS:
                raise self.error(f"{tok.text!r} is reserved", tok=tok)
            if tok.text in names:
                raise self.error(f"variable {tok.text!r} declared twice", tok=tok)
            names.append(tok.text)
        self.take(";")
        self.declared = set(names)
        self.take("lhs")
        lhs = self.expr()
        self.take(";")
        self.take("rhs")
        rhs = self.expr()
        self.take(";")
        with_k = False
        if self.accept("usesk"):
            self.take(";")
            with_k = True
        self.take("}")
        try:
            return Identity(name, lhs, rhs, tuple(names), with_k)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.column) from None

    # expressions

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op_tok = self.take()
            right = self.unary()
            if op_tok.text == "*":
                node = mul(node, right)
            else:
                if isinstance(right, Const) and right.mono.coeff == 0:
                    raise self.error("division by the constant 0", tok=op_tok)
                node = div(node, right)
        return node

    def unary(self):
        if self.accept("-"):
            return neg(self.unary())
        return self.power()

    def power(self):
        tok = self.tok
        if tok.text == "q" and tok.kind == "name":
            self.take()
            if self.accept("^"):
                exp_tok = self.tok
                c0, cn, ck = self.exponent()
                doubled = [2 * c for c in (c0, cn, ck)]
                if any(d.denominator != 1 for d in doubled):
                    raise self.error("q exponent must be a half-integer affine form", BadExponent, exp_tok)
                return Const(Mono(1, AffineExp(*(int(d) for d in doubled))))
            return Const(Mono(1, AffineExp(2)))
        base = self.primary()
        if self.at("^"):
            caret = self.take()
            c0, cn, ck = self.exponent()
            if not isinstance(base, Const):
                raise self.error("only monomials can be raised to a power", tok=caret)
            if cn or ck or c0.denominator != 1:
                raise self.error("exponents of variables must be integers", BadExponent, caret)
            if c0 < 0 and base.mono.coeff == 0:
                raise self.error("0 raised to a negative power", tok=caret)
            return Const(mono_pow(base.mono, int(c0)))
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            self.take()
            return Const(Mono(int(tok.text)))
        if self.accept("("):
            node = self.expr()
            self.take(")")
            return node
        if tok.kind == "name":
            if tok.text == "phi":
                return self.phi()
            if tok.text == "poch":
                return self.poch()
            if tok.text == "pochfrac":
                return self.pochfrac()
            if tok.text in KEYWORDS:
                raise self.error(f"{tok.text!r} cannot be used here")
            if tok.text not in self.declared:
                raise self.error(f"undeclared variable {tok.text!r}", UnknownVariable)
            self.take()
            return Const(Mono(1, AffineExp(), {tok.text: 1}))
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    # exponents and lengths: affine forms with rational coefficients

    def exponent(self):
        if self.accept("-"):
            c0, cn, ck = self.afactor()
            return -c0, -cn, -ck
        return self.afactor()

    def affine(self):
        acc = self.aterm()
        while self.at("+") or self.at("-"):
            sign = 1 if self.take().text == "+" else -1
            t = self.aterm()
            acc = tuple(x + sign * y for x, y in zip(acc, t))
        return acc

    def aterm(self):
        sign = -1 if self.accept("-") else 1
        acc = self.afactor()
        while self.at("*") or self.at("/"):
            op = self.take()
            rhs = self.afactor()
            if op.text == "*":
                if (acc[1] or acc[2]) and (rhs[1] or rhs[2]):
                    raise self.error("exponent must be affine in n and k", BadExponent, op)
                if acc[1] or acc[2]:
                    acc = tuple(x * rhs[0] for x in acc)
                else:
                    acc = tuple(acc[0] * y for y in rhs)
            else:
                if rhs[1] or rhs[2] or rhs[0] == 0:
                    raise self.error("can only divide an exponent by a nonzero number", BadExponent, op)
                acc = tuple(x / rhs[0] for x in acc)
        return tuple(sign * x for x in acc)

    def afactor(self):
        tok = self.tok
        if tok.kind == "int":
            self.take()
            return Fraction(int(tok.text)), Fraction(0), Fraction(0)
        if tok.text == "n":
            self.take()
            return Fraction(0), Fraction(1), Fraction(0)
        if tok.text == "k":
            self.take()
            return Fraction(0), Fraction(0), Fraction(1)
        if self.accept("("):
            value = self.affine()
            self.take(")")
            return value
        raise self.error(f"bad exponent near {tok.text or 'end of input'!r}", BadExponent)

    def length(self):
        tok = self.tok
        c0, cn, ck = self.exponent() if not self.at("(") else self.afactor()
        if any(c.denominator != 1 for c in (c0, cn, ck)):
            raise self.error("Pochhammer length must have integer coefficients", BadExponent, tok)
        return AffineExp(int(c0), int(cn), int(ck))

    # special forms

    def options(self):
        opts = {}
        self.take("[")
        while True:
            tok = self.take(kind="name")
            if tok.text == "base":
                opts["base"] = self.base_mono()
            elif tok.text == "len":
                opts["len"] = self.length()
            elif tok.text == "unbalanced":
                opts["unbalanced"] = True
            else:
                raise self.error(f"unknown option {tok.text!r}", tok=tok)
            if not self.accept(","):
                break
        self.take("]")
        return opts

    def base_mono(self):
        tok = self.tok
        node = self.power()
        if not isinstance(node, Const) or node.mono not in (Mono(1, AffineExp(2)), Mono(1, AffineExp(1))):
            raise self.error("base must be q or q^(1/2)", tok=tok)
        return node.mono

    def mono_list(self, stops):
        monos = []
        if any(self.at(s) for s in stops):
            return monos
        while True:
            monos.append(self.mono())
            if not self.accept(","):
                return monos

    def mono(self):
        tok = self.tok
        node = self.expr()
        if not isinstance(node, Const):
            raise self.error("parameter must be a monomial", tok=tok)
        return node.mono

    def _require(self, opts, keys, tok):
        for key in keys:
            if key not in opts:
                raise self.error(f"missing option {key!r}", tok=tok)

    def phi(self):
        tok = self.take("phi")
        opts = self.options()
        self._require(opts, ("base",), tok)
        self.take("(")
        upper = self.mono_list((";",))
        self.take(";")
        lower = self.mono_list(("|",))
        self.take("|")
        self.take("z")
        self.take("=")
        z = self.mono()
        self.take(")")
        try:
            spec = SeriesSpec(tuple(upper), tuple(lower), z, opts["base"], not opts.get("unbalanced"))
        except MalformedSeries as exc:
            raise self.error(str(exc), tok=tok) from None
        return Phi(spec)

    def poch(self):
        tok = self.take("poch")
        opts = self.options()
        self._require(opts, ("base", "len"), tok)
        self.take("(")
        arg = self.mono()
        self.take(")")
        return Poch(arg, opts["base"], opts["len"])

    def pochfrac(self):
        tok = self.take("pochfrac")
        opts = self.options()
        self._require(opts, ("base", "len"), tok)
        self.take("(")
        nums = self.mono_list((";",))
        self.take(";")
        dens = self.mono_list((")",))
        self.take(")")
        return PochFrac(tuple(nums), tuple(dens), opts["base"], opts["len"])


def parse_identities(text, strict=True):
    """Parse a ``.qid`` document.

    With ``strict`` the first problem raises :class:`ParseError`; otherwise
    problems are collected as diagnostics and parsing resumes at the next
    ``identity`` keyword.
    """
    doc = IdentityDoc(text)
    try:
        tokens = tokenize(text)
    except ParseError as exc:
        if strict:
            raise
        doc.diagnostics.append((exc.line, exc.column, exc.message))
        return doc
    parser = _Parser(tokens)
    seen = set()
    while parser.tok.kind != "eof":
        start = parser.tok
        try:
            ident = parser.identity()
            if ident.id in seen:
                raise ParseError(f"duplicate identity {ident.id!r}", start.line, start.column)
            seen.add(ident.id)
            doc.identities.append(ident)
        except ParseError as exc:
            if strict:
                raise
            doc.diagnostics.append((exc.line, exc.column, exc.message))
            parser.i += 1
            while parser.tok.kind != "eof" and not parser.at("identity"):
                parser.i += 1
    return doc


def load(path, strict=True):
    with open(path, encoding="ascii") as fh:
        return parse_identities(fh.read(), strict)


# -- serializer -----------------------------------------------------------------

def format_fraction(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_affine(coeffs):
    """Render ``c0 + cn*n + ck*k`` (Fractions), e.g. ``1/2-n`` or ``n/2``."""
    parts = []
    for c, sym in zip(coeffs, ("", "n", "k")):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not sym:
            body = format_fraction(mag)
        elif mag.numerator == 1:
            body = sym if mag.denominator == 1 else f"{sym}/{mag.denominator}"
        else:
            body = f"{mag.numerator}*{sym}" + ("" if mag.denominator == 1 else f"/{mag.denominator}")
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def _is_simple_nonneg(coeffs):
    c0, cn, ck = coeffs
    return (c0 >= 0 and c0.denominator == 1 and not cn and not ck) or (
        c0 == 0 and ck == 0 and cn == 1
    ) or (c0 == 0 and cn == 0 and ck == 1)


def format_mono(m):
    """Canonical text of a monomial, e.g. ``-q^(1/2)`` or ``q^(3/2-n)/(a*b)``."""
    coeff = m.coeff
    if coeff == 0:
        return "0"
    factors = []
    e = m.p_exp
    if e != AffineExp():
        coeffs = tuple(Fraction(c, 2) for c in (e.c0, e.cn, e.ck))
        if coeffs == (1, 0, 0):
            factors.append("q")
        elif _is_simple_nonneg(coeffs):
            factors.append("q^" + format_affine(coeffs))
        else:
            factors.append(f"q^({format_affine(coeffs)})")
    below = []
    for name, exp in m.var_exps:
        target = factors if exp > 0 else below
        target.append(name if abs(exp) == 1 else f"{name}^{abs(exp)}")
    mag = abs(coeff)
    if mag != 1 or not factors:
        factors.insert(0, format_fraction(mag))
    text = ("-" if coeff < 0 else "") + "*".join(factors)
    if below:
        text += "/" + (below[0] if len(below) == 1 else "(" + "*".join(below) + ")")
    return text


def _compound(m):
    """True unless the monomial prints as a single atom such as ``a`` or ``q^(-n/2)``."""
    text = format_mono(m)
    depth = 0
    for ch in text:
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and ch in "*/":
            return True
    return text.startswith("-")


def _format_length(e):
    coeffs = tuple(Fraction(c) for c in (e.c0, e.cn, e.ck))
    return format_affine(coeffs) if _is_simple_nonneg(coeffs) else f"({format_affine(coeffs)})"


def _format_base(m):
    return "q" if m.p_exp.c0 == 2 else "q^(1/2)"


def _prec(node):
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    return 4


def format_expr(node):
    if isinstance(node, Const):
        return format_mono(node.mono)
    if isinstance(node, Poch):
        return f"poch[base {_format_base(node.base)}, len {_format_length(node.length)}]({format_mono(node.arg)})"
    if isinstance(node, PochFrac):
        nums = ", ".join(map(format_mono, node.nums))
        dens = ", ".join(map(format_mono, node.dens))
        head = f"pochfrac[base {_format_base(node.base)}, len {_format_length(node.length)}]"
        return f"{head}({nums} ; {dens})".replace("( ;", "(;")
    if isinstance(node, Phi):
        s = node.spec
        opts = f"base {_format_base(s.base)}" + ("" if s.balanced else ", unbalanced")
        upper = ", ".join(map(format_mono, s.upper))
        lower = ", ".join(map(format_mono, s.lower))
        lower = f" {lower} " if lower else " "
        return f"phi[{opts}]({upper} ;{lower}| z={format_mono(s.argument)})"
    if isinstance(node, Neg):
        inner = node.operand
        text = format_expr(inner)
        if _prec(inner) < 4 or isinstance(inner, Const):
            text = f"({text})"
        return "-" + text
    if isinstance(node, (Add, Sub)):
        op = " + " if isinstance(node, Add) else " - "
        right = format_expr(node.right)
        if _prec(node.right) <= 1:
            right = f"({right})"
        return format_expr(node.left) + op + right
    if isinstance(node, (Mul, Div)):
        op = " * " if isinstance(node, Mul) else " / "
        left, right = format_expr(node.left), format_expr(node.right)
        if _prec(node.left) < 2 or (isinstance(node.left, Const) and _compound(node.left.mono)):
            left = f"({left})"
        if _prec(node.right) <= 2 or (isinstance(node.right, Const) and _compound(node.right.mono)):
            right = f"({right})"
        return left + op + right
    raise TypeError(f"cannot serialize {node!r}")


def serialize_identity(ident):
    lines = [
        f"identity {ident.id} {{",
        f"  vars {' '.join(ident.variables)};",
        f"  lhs {format_expr(ident.lhs)};",
        f"  rhs {format_expr(ident.rhs)};",
    ]
    if ident.uses_k:
        lines.append("  usesk;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_identities(identities):
    return "\n".join(serialize_identity(i) for i in identities)
