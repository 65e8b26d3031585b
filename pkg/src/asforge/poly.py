"""Univariate polynomials and rational functions over a FieldDesc.

Polynomials are tuples of field codes, constant term first, with no trailing
zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

from .errors import FieldError
from .gf import MAX_FIELD_SIZE, embedding, extension

ZERO = ()
ONE = (1,)
X = (0, 1)


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a):
    return len(a) - 1


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F, a):
    return tuple(F.neg(c) for c in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    if not c:
        return ZERO
    return tuple(F.mul(x, c) for x in a)


def mul(F, a, b):
    if not a or not b:
        return ZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def power(F, a, e):
    r = ONE
    while e:
        if e & 1:
            r = mul(F, r, a)
        a = mul(F, a, a)
        e >>= 1
    return r


def divmod_(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = F.inv(b[-1])
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv)
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] = F.sub(a[k + i], F.mul(c, bc))
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return trim(q), trim(a)


def monic(F, a):
    if not a:
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F, a):
    return trim([F.mul(F.from_int(i), c) for i, c in enumerate(a)][1:])


def map_coeffs(a, table):
    return tuple(table[c] for c in a)


def taylor_shift(F, a, theta):
    """Coefficients of a(theta + s) as a polynomial in s."""
    out = list(a)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = F.add(out[j], F.mul(theta, out[j + 1]))
    return trim(out)


def reverse(a, d=None):
    """s^d * a(1/s) for d >= deg a (default d = deg a)."""
    if d is None:
        d = deg(a)
    out = [0] * (d + 1)
    for i, c in enumerate(a):
        out[d - i] = c
    return trim(out)


def roots_in(F, a, E):
    """Roots of ``a`` (over F) lying in the extension E, in code order."""
    if E.q > MAX_FIELD_SIZE:
        raise FieldError("root scanning field too large")
    emb = embedding(F, E)
    ae = map_coeffs(a, emb)
    return [r for r in range(E.q) if evaluate(E, ae, r) == 0]


def is_irreducible(F, a):
    """Irreducibility over F by root scanning: a has no root in F_{q^k}, k <= deg/2."""
    d = deg(a)
    if d < 1:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        E, _ = extension(F, k)
        if roots_in(F, a, E):
            return False
    return True


def minimal_poly(E, r, F):
    """Minimal polynomial over F of r in E (codes in F)."""
    from .gf import restriction

    back = restriction(F, E)
    conj = [r]
    x = E.pow(r, F.q)
    while x != r:
        conj.append(x)
        x = E.pow(x, F.q)
    acc = ONE
    for c in conj:
        acc = mul(E, acc, (E.neg(c), 1))
    return tuple(back[c] for c in acc)


def factor_irreducibles(F, a):
    """Distinct monic irreducible factors of a over F (by root scanning)."""
    a = monic(F, a)
    out = []
    rest = a
    k = 1
    while deg(rest) >= 1:
        if deg(rest) < k:
            break
        E, _ = extension(F, k)
        seen = set()
        for r in roots_in(F, rest, E):
            if r in seen:
                continue
            mp = minimal_poly(E, r, F)
            if deg(mp) != k:
                continue
            x = r
            for _ in range(k):
                seen.add(x)
                x = E.pow(x, F.q)
            out.append(mp)
            while True:
                qq, rr = divmod_(F, rest, mp)
                if rr:
                    break
                rest = qq
        k += 1
    if deg(rest) >= 1:
        out.append(monic(F, rest))
    return sorted(set(out), key=lambda f: (len(f), f))


def irreducibles_of_degree(F, d):
    """All monic irreducible polynomials of degree d over F, sorted."""
    E, _ = extension(F, d)
    seen = set()
    out = []
    for r in range(E.q):
        if r in seen:
            continue
        x = r
        orb = []
        for _ in range(d):
            orb.append(x)
            x = E.pow(x, F.q)
        seen.update(orb)
        if len(set(orb)) != d:
            continue
        out.append(minimal_poly(E, r, F))
    return sorted(set(out), key=lambda f: (len(f), f))


class RatFunc:
    """A coprime pair num/den over F with monic den."""

    __slots__ = ("F", "num", "den", "_hash")

    def __init__(self, F, num, den=ONE, _reduced=False):
        self.F = F
        num, den = trim(num), trim(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = ONE
            else:
                g = gcd(F, num, den)
                if g != ONE:
                    num = divmod_(F, num, g)[0]
                    den = divmod_(F, den, g)[0]
                lead = den[-1]
                if lead != 1:
                    inv = F.inv(lead)
                    num, den = scale(F, num, inv), scale(F, den, inv)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, F, c):
        return cls(F, (c,) if c else ZERO, ONE, True)

    @classmethod
    def poly(cls, F, a):
        return cls(F, trim(a), ONE, True)

    def is_zero(self):
        return not self.num

    def is_poly(self):
        return self.den == ONE

    def __add__(self, o):
        F = self.F
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFunc(F, add(F, self.num, o.num), self.den)
        return RatFunc(F, add(F, mul(F, self.num, o.den), mul(F, o.num, self.den)),
                       mul(F, self.den, o.den))

    def __neg__(self):
        return RatFunc(self.F, neg(self.F, self.num), self.den, True)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        F = self.F
        if not self.num or not o.num:
            return RatFunc(F, ZERO, ONE, True)
        if self.den == ONE and o.den == ONE:
            return RatFunc(F, mul(F, self.num, o.num), ONE, True)
        return RatFunc(F, mul(F, self.num, o.num), mul(F, self.den, o.den))

    def scale(self, c):
        return RatFunc(self.F, scale(self.F, self.num, c), self.den, True) if c else \
            RatFunc(self.F, ZERO, ONE, True)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.F, self.den, self.num)

    def __truediv__(self, o):
        return self * o.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.F, power(self.F, self.num, e), power(self.F, self.den, e), True)

    def __eq__(self, o):
        return isinstance(o, RatFunc) and self.F is o.F and self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def map(self, G, table):
        return RatFunc(G, map_coeffs(self.num, table), map_coeffs(self.den, table), True)

    def __repr__(self):
        return f"RatFunc({self.num}/{self.den})"
