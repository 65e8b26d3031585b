"""Truncated Laurent series over finite fields and local Artin-Schreier reduction."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import (IndeterminatePrecision, InsufficientPrecision, NonSimpleRoot,
                     NoResidueRoot)

MAX_PRECISION = 4096


class LaurentSeries:
    """sum_{i} coeffs[i] * t^(val + i) + O(t^prec), immutable.

    ``coeffs`` has a nonzero first entry and no trailing zeros; the zero
    series (to precision) has empty coeffs and ``val == prec``.
    """

    __slots__ = ("F", "val", "coeffs", "prec")

    def __init__(self, F, val, coeffs, prec):
        coeffs = list(coeffs)[:max(0, prec - val)]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            val, coeffs = prec, []
        else:
            val += i
            coeffs = coeffs[i:]
            while coeffs[-1] == 0:
                coeffs.pop()
        self.F = F
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, F, prec):
        return cls(F, prec, (), prec)

    @classmethod
    def const(cls, F, c, prec):
        return cls(F, 0, (c,), prec)

    @classmethod
    def monomial(cls, F, c, k, prec):
        return cls(F, k, (c,), prec)

    @classmethod
    def from_poly(cls, F, poly, prec, shift=0):
        """The polynomial sum poly[i] t^(i+shift), known to precision ``prec``."""
        return cls(F, shift, poly, prec)

    # -- queries -------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, k):
        if k >= self.prec:
            raise InsufficientPrecision(f"coefficient of t^{k} beyond precision {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    @property
    def lead(self):
        return self.coeffs[0] if self.coeffs else 0

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LaurentSeries(self.F, self.val, self.coeffs, prec)

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries) and self.F is other.F and self.val == other.val
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.val, self.coeffs, self.prec))

    def __repr__(self):
        F = self.F
        terms = [f"({F.render(c)})*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms + [f"O(t^{self.prec})"])

    # -- arithmetic ----------------------------------------------------------

    def _dense(self, lo, hi):
        out = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            k = self.val + i - lo
            if 0 <= k < hi - lo:
                out[k] = c
        return out

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.const(self.F, self.F.from_int(other), self.prec)
        F = self.F
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val, prec)
        out = self._dense(lo, prec)
        for i, c in enumerate(other.coeffs):
            k = other.val + i - lo
            if k < prec - lo:
                out[k] = F.add(out[k], c)
        return LaurentSeries(F, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.F
        return LaurentSeries(F, self.val, [F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.const(self.F, self.F.from_int(other), self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        F = self.F
        if not c:
            return LaurentSeries.zero(F, self.prec)
        return LaurentSeries(F, self.val, [F.mul(x, c) for x in self.coeffs], self.prec)

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentSeries(self.F, self.val + k, self.coeffs, self.prec + k)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.F.from_int(other))
        F = self.F
        prec = min(self.val + other.prec, other.val + self.prec)
        val = self.val + other.val
        n = prec - val
        if n <= 0 or not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(F, prec)
        A = self.coeffs[:n]
        B = other.coeffs[:n]
        out = [0] * min(n, len(A) + len(B) - 1)
        log, exp = F._log, F._exp
        lb = [(j, log[b]) for j, b in enumerate(B) if b]
        m = len(out)
        if F.p == 2:
            for i, a in enumerate(A):
                if a:
                    la = log[a]
                    lim = m - i
                    for j, l in lb:
                        if j >= lim:
                            break
                        out[i + j] ^= exp[la + l]
        else:
            add = F.add
            for i, a in enumerate(A):
                if a:
                    la = log[a]
                    lim = m - i
                    for j, l in lb:
                        if j >= lim:
                            break
                        out[i + j] = add(out[i + j], exp[la + l])
        return LaurentSeries(F, val, out, prec)

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise IndeterminatePrecision("inverse of a series that is zero to precision")
        F = self.F
        rel = self.prec - self.val
        c0inv = F.inv(self.coeffs[0])
        A = self.coeffs
        out = [c0inv]
        for k in range(1, rel):
            acc = 0
            for j in range(1, min(k, len(A) - 1) + 1):
                if A[j] and out[k - j]:
                    acc = F.add(acc, F.mul(A[j], out[k - j]))
            out.append(F.neg(F.mul(acc, c0inv)))
        return LaurentSeries(F, -self.val, out, -self.val + rel)

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.scale(self.F.inv(self.F.from_int(other)))
        return self * other.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            rel = self.prec - self.val if self.coeffs else max(self.prec, 1)
            return LaurentSeries.const(self.F, 1, rel)
        base = self
        r = None
        while e:
            if e & 1:
                r = base if r is None else r * base
            e >>= 1
            if e:
                base = base * base
        return r

    def frobenius_power(self):
        """self^p computed coefficientwise (characteristic p)."""
        F, p = self.F, self.F.p
        out = [0] * (p * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[p * i] = F.pow(c, p)
        return LaurentSeries(F, p * self.val, out, p * self.prec)

    def map(self, G, table):
        """Push coefficients through a field embedding table into G."""
        return LaurentSeries(G, self.val, [table[c] for c in self.coeffs], self.prec)


def series_arith(a, b, kind):
    if a.F is not b.F:
        raise ValueError("series over different residue fields")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


def compose_poly(F, poly, s, prec):
    """poly(s) for a polynomial over F and a series s with val(s) >= 1."""
    if s.val < 1 and s.coeffs:
        raise ValueError("composition needs a series of positive valuation")
    acc = LaurentSeries.zero(F, prec)
    for c in reversed(poly):
        acc = (acc * s).truncate(prec) + LaurentSeries.const(F, c, prec)
    return acc.truncate(prec)


def eval_relation(relation, Y):
    acc = None
    for c in reversed(relation):
        acc = c if acc is None else acc * Y + c
    return acc


def hensel_root(relation, seed, N):
    """Newton-lift a simple residue root of sum relation[k] * Y^k to precision N.

    ``relation`` is a list of LaurentSeries (all over the same field) of
    nonnegative valuation; ``seed`` a residue-field code.
    """
    F = relation[0].F
    deriv = [c.scale(F.from_int(k)) for k, c in enumerate(relation)][1:]
    if not deriv:
        raise NoResidueRoot("constant relation")
    Y = LaurentSeries.const(F, seed, 1)
    r0 = eval_relation(relation, LaurentSeries.const(F, seed, N))
    if r0.val < 1:
        raise NoResidueRoot("seed is not a root of the residue relation")
    d0 = eval_relation(deriv, LaurentSeries.const(F, seed, N))
    if d0.val != 0:
        raise NonSimpleRoot("derivative at the seed is not a unit")
    known = 1
    while known < N:
        known = min(2 * known, N)
        Yk = LaurentSeries(F, Y.val, Y.coeffs, known)
        R = eval_relation(relation, Yk).truncate(known)
        D = eval_relation(deriv, Yk).truncate(known)
        Y = (Yk - R / D).truncate(known)
    if Y.prec < N:
        raise InsufficientPrecision("relation coefficients lack precision for the lift")
    check = eval_relation(relation, Y)
    if check.val < min(N, check.prec):
        raise NonSimpleRoot("lifted root fails verification")
    return Y


@dataclass(frozen=True)
class Ramified:
    m: int


@dataclass(frozen=True)
class Unramified:
    a: int


@dataclass(frozen=True)
class ASReduction:
    kind: object
    witness: LaurentSeries
    reduced: LaurentSeries


class SplitKind(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def as_reduce(f, p=None):
    """Strip p-divisible pole terms of f via w -> w^p - w substitutions.

    Returns ASReduction(kind, witness, reduced) with f - (witness^p - witness)
    == reduced; kind is Ramified(m) with p not dividing m, or Unramified(a)
    with ``a`` the constant coefficient of the reduced series.
    """
    F = f.F
    if p is None:
        p = F.p
    cur = f
    witness = {}
    m0 = None
    while True:
        if cur.is_zero() or cur.val >= 0:
            if cur.prec <= 0:
                raise InsufficientPrecision("series vanished before its constant term was known")
            kind = Unramified(cur.coefficient(0))
            break
        m = -cur.val
        if m0 is None:
            m0 = m
        if m % p:
            kind = Ramified(m)
            break
        u = F.pth_root(cur.lead)
        k = m // p
        witness[-k] = F.add(witness.get(-k, 0), u)
        # subtract u^p t^-m - u t^-k
        step = LaurentSeries(F, -m, [cur.lead] + [0] * (m - k - 1) + [F.neg(u)], cur.prec)
        cur = cur - step
    if witness:
        lo = min(witness)
        w = [witness.get(i, 0) for i in range(lo, 0)]
        wser = LaurentSeries(F, lo, w, MAX_PRECISION)
    else:
        wser = LaurentSeries.zero(F, MAX_PRECISION)
    if isinstance(kind, Ramified):
        assert kind.m % p and (m0 is None or kind.m <= m0)
    return ASReduction(kind, wser, cur)


def local_splitting(ty, residue, p=None):
    if isinstance(ty, Ramified):
        return SplitKind.RAMIFIED
    return SplitKind.SPLIT if residue.trace_fp(ty.a) == 0 else SplitKind.INERT
