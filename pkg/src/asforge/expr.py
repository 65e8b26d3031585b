"""Parsing and rendering of function expressions in x, y and the generator a.

Grammar (loosest to tightest binding)::

    sum     := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | product
    product := power power*          # juxtaposition
    power   := atom ('^' '-'? INT)?
    atom    := INT | NAME | '(' sum ')'

Juxtaposition binds tighter than ``*`` and ``/``, so ``y/x(x+1)`` divides by
``x(x+1)``.  A name that is not a definition is split into definitions and
the letters x, y, a when possible (``xy`` is ``x*y``, ``g1g2`` is ``g1*g2``).
"""

from __future__ import annotations

import re

from . import poly as P
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _split_name(name, names):
    """Split a juxtaposed name into definitions and the letters x, y, a (longest first)."""
    if not name:
        return []
    cands = sorted((d for d in names if name.startswith(d)), key=len, reverse=True)
    if name[0] in "xya":
        cands.append(name[0])
    for c in cands:
        rest = _split_name(name[len(c):], names)
        if rest is not None:
            return [c] + rest
    return None


def _tokenize(text, names):
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        pos = m.end()
        if num is not None:
            out.append(("int", int(num), start))
        elif name is not None:
            parts = [name] if name in names else _split_name(name, names)
            if parts is None:
                out.append(("name", name, start))
            else:
                off = start
                for part in parts:
                    out.append(("name", part, off))
                    off += len(part)
        elif sym.strip():
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r} at column {start}")
            out.append(("sym", sym, start))
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, curve, text, defs):
        self.curve = curve
        self.defs = defs or {}
        self.toks = _tokenize(text, self.defs)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, sym):
        tok = self.take()
        if tok[:2] != ("sym", sym):
            raise ParseError(f"expected {sym!r} at column {tok[2]}")

    def parse(self):
        v = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r} at column {tok[2]}")
        return v

    def sum(self):
        v = self.term()
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("sym", "*"), ("sym", "/")):
            _, op, col = self.take()
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ParseError(f"division by zero at column {col}")
                v = v / w
        return v

    def unary(self):
        if self.peek()[:2] == ("sym", "-"):
            self.take()
            return -self.unary()
        return self.product()

    def _starts_atom(self):
        kind, val, _ = self.peek()
        return kind in ("int", "name") or (kind, val) == ("sym", "(")

    def product(self):
        v = self.power()
        while self._starts_atom():
            v = v * self.power()
        return v

    def power(self):
        v = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("sym", "-"):
                self.take()
                sign = -1
            kind, e, col = self.take()
            if kind != "int":
                raise ParseError(f"expected an integer exponent at column {col}")
            if sign < 0 and v.is_zero():
                raise ParseError(f"negative power of zero at column {col}")
            v = v ** (sign * e)
        return v

    def atom(self):
        kind, val, col = self.take()
        C = self.curve
        if kind == "int":
            return C.const(C.F.from_int(val))
        if kind == "name":
            if val in self.defs:
                return self.defs[val]
            if val == "x":
                return C.x()
            if val == "y":
                if C.kind == "rational":
                    raise ParseError(f"y used on the projective line at column {col}")
                return C.y()
            if val == "a":
                return C.const(C.F.gen.code)
            raise ParseError(f"unknown name {val!r} at column {col}")
        if (kind, val) == ("sym", "("):
            v = self.sum()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {val!r} at column {col}" if val else "unexpected end of input")


def parse(curve, text, defs=None):
    """Parse an expression into a FuncElt on ``curve``; ``defs`` maps names to FuncElts."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    return _Parser(curve, text, defs).parse()


def parse_defs(curve, items):
    """Evaluate (name, expression) pairs in order; later ones may use earlier ones."""
    defs = {}
    for name, text in items:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or set(name) <= set("xya"):
            raise ParseError(f"invalid definition name {name!r}")
        try:
            defs[name] = parse(curve, text, defs)
        except ParseError as e:
            raise ParseError(f"in definition {name}: {e}") from None
    return defs


def _coef(F, c):
    s = F.render(c)
    return f"({s})" if "+" in s else s


def _monomial(F, c, parts):
    parts = [p for p in parts if p]
    if not parts:
        return F.render(c) if "+" not in F.render(c) else f"({F.render(c)})"
    if c == 1:
        return "*".join(parts)
    return "*".join([_coef(F, c)] + parts)


def _xpow(k, var="x"):
    return "" if k == 0 else (var if k == 1 else f"{var}^{k}")


def render_poly(F, a, var="x"):
    if not a:
        return "0"
    terms = [_monomial(F, c, [_xpow(k, var)]) for k, c in reversed(list(enumerate(a))) if c]
    return "+".join(terms)


def render_ratfunc(F, R):
    if R.is_poly():
        return render_poly(F, R.num)
    return f"({render_poly(F, R.num)})/({render_poly(F, R.den)})"


def render(f):
    """A canonical string for f that ``parse`` reads back to f."""
    C = f.curve
    F = C.F
    terms = []
    for i in reversed(range(len(f.coeffs))):
        a = f.coeffs[i]
        if a.is_zero():
            continue
        ys = _xpow(i, "y")
        if a.is_poly():
            for k, c in reversed(list(enumerate(a.num))):
                if c:
                    terms.append(_monomial(F, c, [_xpow(k), ys]))
        else:
            frac = f"({render_poly(F, a.num)})/({render_poly(F, a.den)})"
            terms.append(frac + (f"*{ys}" if ys else ""))
    return "+".join(terms) if terms else "0"
