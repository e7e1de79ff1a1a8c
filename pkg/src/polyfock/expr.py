"""Parser and printer for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' uint)?
    atom   := 'z' | 'zbar' | 'pi' | 'i' | number | 'phi(' uint ',' uint ')' | '(' expr ')'

Numbers are decimal literals with an optional exponent. Every printed
polynomial parses back to the identical coefficients.
"""

import re
from math import pi

from .cpoly import CPolynomial
from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos]!r}", pos, ["number", "name", "'+'", "'-'", "'*'", "'^'", "'('", "')'"])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"found {val or 'end of input'!r}", pos, [repr(value)])

    def uint(self):
        kind, val, pos = self.take()
        if kind != "num" or not val.isdigit():
            raise ParseError(f"found {val or 'end of input'!r}", pos, ["non-negative integer"])
        return int(val)

    def parse(self):
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, ["'+'", "'-'", "'*'", "end of input"])
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek()[1] == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            base = base ** self.uint()
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return CPolynomial.constant(float(val))
        if kind == "name":
            if val == "z":
                return CPolynomial.z()
            if val == "zbar":
                return CPolynomial.zbar()
            if val == "pi":
                return CPolynomial.constant(pi)
            if val == "i":
                return CPolynomial.constant(1j)
            if val == "phi":
                from .fockbasis import phi_jk

                self.expect("(")
                j = self.uint()
                self.expect(",")
                k = self.uint()
                self.expect(")")
                return phi_jk(j, k)
            raise ParseError(f"unknown name {val!r}", pos, ["z", "zbar", "pi", "i", "phi"])
        if val == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise ParseError(
            f"found {val or 'end of input'!r}", pos, ["number", "z", "zbar", "pi", "i", "phi", "'('"]
        )


def parse_poly(text):
    """Parse an expression into a CPolynomial."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, ["expression"])
    return _Parser(text).parse()


def _real_text(x):
    """Shortest text for a real number that round-trips, preferring multiples of pi."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    for e in range(1, 7):
        r = x / pi**e
        for cand in (round(r), round(r * 2) / 2, round(r * 4) / 4):
            if cand == 0 or abs(cand - r) > 1e-12 * abs(r):
                continue
            power = "pi" if e == 1 else f"pi^{e}"
            text = power if cand == 1 else f"{_num(cand)}*{power}"
            if cand == -1:
                text = "-" + power
            try:
                if parse_poly(text).coeff(0, 0).real == x:
                    return text
            except ParseError:
                pass
    return repr(float(x))


def _num(x):
    return str(int(x)) if x == int(x) else repr(float(x))


def _coeff_text(c):
    if c.imag == 0:
        return _real_text(c.real), False
    if c.real == 0:
        t = _real_text(c.imag)
        if t == "1":
            return "i", False
        if t == "-1":
            return "-i", False
        return f"{t}*i", False
    im = c.imag
    sign = "+" if im > 0 else "-"
    t = _real_text(abs(im))
    t = "i" if t == "1" else f"{t}*i"
    return f"({_real_text(c.real)} {sign} {t})", True


def _mono_text(a, b):
    parts = []
    if a:
        parts.append("z" if a == 1 else f"z^{a}")
    if b:
        parts.append("zbar" if b == 1 else f"zbar^{b}")
    return "*".join(parts)


def format_poly(p):
    """Grammar-compatible text, ascending total degree, higher z power first within a degree."""
    if p.is_zero:
        return "0"
    pieces = []
    for (a, b), c in sorted(p.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0])):
        negative = False
        if (c.imag == 0 and c.real < 0) or (c.real == 0 and c.imag < 0):
            negative, c = True, -c
        ctext, _ = _coeff_text(c)
        mono = _mono_text(a, b)
        if not mono:
            body = ctext
        elif ctext == "1":
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    text = "".join(pieces)
    back = parse_poly(text)
    if back != p:
        # fall back to plain literals, always exact
        text = _format_plain(p)
    return text


def _format_plain(p):
    pieces = []
    for (a, b), c in sorted(p.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0])):
        mono = _mono_text(a, b)
        coeff = f"({repr(c.real)} + {repr(c.imag)}*i)" if c.imag else repr(c.real)
        pieces.append(coeff if not mono else f"{coeff}*{mono}")
    return " + ".join(pieces)


def parse_complex(text):
    """Parse a point such as '1+2i', '0.5-i', '1+1j' or any constant expression."""
    s = text.strip().replace("j", "i")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        pass
    p = parse_poly(s)
    if p.degree > 0:
        raise ParseError(f"expected a number, got a polynomial of degree {p.degree}", 0)
    return p.coeff(0, 0)


def format_diffop(op):
    """Readable text for a DiffOp, e.g. '1 + 0.31830988618379069*dz*dzbar'."""
    if op.is_zero:
        return "0"
    pieces = []
    for (a, b, l, m), c in sorted(op.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        factors = [_mono_text(a, b)] if (a or b) else []
        if l:
            factors.append("dz" if l == 1 else f"dz^{l}")
        if m:
            factors.append("dzbar" if m == 1 else f"dzbar^{m}")
        ctext, _ = _coeff_text(c)
        if not factors:
            pieces.append(ctext)
        elif ctext == "1":
            pieces.append("*".join(factors))
        elif ctext == "-1":
            pieces.append("-" + "*".join(factors))
        else:
            pieces.append(ctext + "*" + "*".join(factors))
    return " + ".join(pieces).replace("+ -", "- ")
