"""Artin-Schreier covers C_f of the base curve and their fibre products C_F."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .curve import evaluate, expand
from .errors import (ConditionIViolated, CountMismatch, FitInconsistent, GuardExceeded,
                     InternalAssertion, PoleAtPoint, PoleOutsideSupport)
from .fplin import canonical_line, rref_coordinates
from .local import Ramified, SplitKind, as_reduce, local_splitting

_CONTRIB = {SplitKind.RAMIFIED: 1, SplitKind.INERT: 0}


def _local_type(f, Q):
    red = as_reduce(expand(f, Q, 1))
    return red.kind, local_splitting(red.kind, Q.K)


def _contribution(kind, p):
    return p if kind == SplitKind.SPLIT else _CONTRIB[kind]


@dataclass
class LineReport:
    f: object
    local: list
    eps: int
    genus: int
    points: int
    splits: bool
    q: int
    per_place: dict = field(default_factory=dict)
    coords: tuple = None

    @property
    def tau(self):
        return self.q + 1 - self.points

    def vstar(self):
        """Reduced pole order at each support place (0 when unramified)."""
        return {Q.label: (kind.m if isinstance(kind, Ramified) else 0)
                for Q, kind, _ in self.local}


def analyze_line(curve, f, D, ctx):
    """Genus, rational points and local data of C_f: z^p - z = f."""
    if f.is_zero():
        raise ValueError("analyze_line needs a nonzero function")
    p, q = curve.p, curve.q
    local = []
    ramified = 0
    eps = 0
    per_place = {}
    for Q in D.support:
        kind, sk = _local_type(f, Q)
        local.append((Q, kind, sk))
        if isinstance(kind, Ramified):
            ramified += (kind.m + 1) * Q.degree
        if Q.degree == 1:
            per_place[Q] = _contribution(sk, p)
            eps += per_place[Q]
    twice = p * (2 * curve.genus - 2) + (p - 1) * ramified
    if twice % 2 or twice < -2:
        raise InternalAssertion(f"Hurwitz-Zeuthen gives odd or negative 2g-2 = {twice}")
    genus = twice // 2 + 1
    supp = set(D.support)
    direct = eps
    splits = True
    for P in ctx.places:
        if P in supp:
            continue
        try:
            v = evaluate(f, P)
        except PoleAtPoint:
            raise PoleOutsideSupport(f"{f} has a pole at {P.label} outside Supp(D)") from None
        per_place[P] = p if curve.F.trace_fp(v.code) == 0 else 0
        direct += per_place[P]
        if not per_place[P] and P in ctx.split_set:
            splits = False
    if splits and ctx.complete:
        formula = p * (ctx.n - ctx.delta) + eps
        if formula != direct:
            raise CountMismatch(f"p(n-delta)+eps = {formula} but the direct count is {direct}")
    return LineReport(f, local, eps, genus, direct, splits and ctx.complete, q, per_place)


class LineTable:
    """Memoized line reports for the lines of a solution space (thread-safe cache)."""

    def __init__(self, curve, sol, ctx):
        self.curve = curve
        self.sol = sol
        self.ctx = ctx
        self.p = curve.p
        self._memo = {}
        self._lock = threading.Lock()

    def report(self, coords):
        """Report for the line through F_sol coordinate vector ``coords``."""
        c = tuple(int(x) for x in canonical_line(coords, self.p))
        with self._lock:
            hit = self._memo.get(c)
        if hit is not None:
            return hit
        vec = (np.array(c, dtype=np.int64) @ self.sol.space.basis) % self.p
        f = self.sol.wt.L.to_func(vec)
        rep = analyze_line(self.curve, f, self.ctx.D, self.ctx)
        rep.coords = c
        with self._lock:
            return self._memo.setdefault(c, rep)

    def all_lines(self):
        return [self.report(M[0]) for M in rref_coordinates(self.sol.dim, 1, self.p)]

    def lines_of(self, M):
        """Reports for every line of the subspace spanned by the rows of M (coordinates)."""
        M = np.asarray(M, dtype=np.int64)
        out = []
        for cc in rref_coordinates(M.shape[0], 1, self.p):
            out.append(self.report((cc[0] @ M) % self.p))
        return out

    def __len__(self):
        return len(self._memo)


def line_table(curve, sol, ctx):
    t = LineTable(curve, sol, ctx)
    t.all_lines()
    return t


@dataclass
class FibreStats:
    basis: list
    r: int
    genus: int
    points: int
    q: int
    formula_points: int = None
    lines: list = field(default_factory=list)

    @property
    def tau(self):
        return self.q + 1 - self.points

    @property
    def weil_ok(self):
        return weil_check(self.genus, self.points, self.q)


def fibre_stats(curve, basis, reports, ctx, V=None, Fsp=None):
    """Genus and point count of the fibre product over the given lines."""
    p, q, n = curve.p, curve.q, ctx.n
    r = len(basis)
    if len(reports) != (p ** r - 1) // (p - 1):
        raise InternalAssertion("line reports do not cover P(F)")
    if V is not None and Fsp is not None and not Fsp.meets_trivially(V):
        raise ConditionIViolated("F meets the Artin-Schreier image")
    gC = curve.genus
    genus = gC + sum(rep.genus - gC for rep in reports)
    points = n + sum(rep.points - n for rep in reports)
    cor = None
    if all(rep.splits for rep in reports):
        d = ctx.delta
        cor = p ** r * (n - d) + d + sum(rep.eps - d for rep in reports)
        if cor != points:
            raise CountMismatch(f"split-formula count {cor} differs from trace count {points}")
    return FibreStats(list(basis), r, genus, points, q, cor, list(reports))


def weil_check(g, N, q):
    """N <= q + 1 + floor(2 g sqrt(q)), decided with integers."""
    if N <= q + 1:
        return True
    return (N - q - 1) ** 2 <= 4 * g * g * q


# -- zeta functions of small curves -------------------------------------------

def component_counts(curve, f, s_max):
    """N_s of C_f (or of the curve itself when f is None) for s = 1..s_max."""
    from .curve import count_points
    out = []
    for s in range(1, s_max + 1):
        if curve.q ** s > 2 ** 22:
            raise GuardExceeded(f"q^{s} exceeds the enumeration guard")
        if f is None:
            out.append(count_points(curve, s))
            continue
        C, emb = curve.base_change(s)
        fs = f.map(C, emb)
        total = 0
        for P in C.rational_places():
            _, sk = _local_type(fs, P)
            total += _contribution(sk, C.p)
        out.append(total)
    return out


class _QSqrt:
    """Numbers A + B sqrt(q) with rational A, B."""

    def __init__(self, A, B, q):
        self.A, self.B, self.q = Fraction(A), Fraction(B), q

    def __add__(self, o):
        return _QSqrt(self.A + o.A, self.B + o.B, self.q)

    def __mul__(self, o):
        return _QSqrt(self.A * o.A + self.q * self.B * o.B, self.A * o.B + self.B * o.A, self.q)

    def scale(self, c):
        return _QSqrt(self.A * c, self.B * c, self.q)

    def sign(self):
        a, b = self.A, self.B
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs, rhs = a * a, b * b * self.q
        return sa if lhs > rhs else (0 if lhs == rhs else sb)


def _peval(coeffs, x):
    acc = _QSqrt(0, 0, x.q)
    for c in reversed(coeffs):
        acc = acc * x + _QSqrt(c, 0, x.q)
    return acc


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a, b):
    a = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        a = _ptrim(a[:-1] if a[-1] == 0 else a)
    return _ptrim(q), _ptrim(a)


def _pderiv(a):
    return _ptrim([i * c for i, c in enumerate(a)][1:])


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return a


def _sturm_count(h, q):
    """Distinct real roots of h in the closed interval [-2 sqrt q, 2 sqrt q]."""
    seq = [h, _pderiv(h)]
    while seq[-1] and len(seq[-1]) > 1:
        r = _pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    lo, hi = _QSqrt(0, -2, q), _QSqrt(0, 2, q)

    def variations(x):
        signs = [s for s in (_peval(p, x).sign() for p in seq) if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    count = variations(lo) - variations(hi)
    if _peval(h, lo).sign() == 0:
        count += 1
    return count


@dataclass
class ZetaReport:
    counts: list
    coefficients: list
    genus_expected: int
    genus_fit: int
    integral: bool
    symmetric: bool
    riemann_ok: bool

    @property
    def consistent(self):
        return (self.integral and self.symmetric and self.riemann_ok
                and self.genus_fit == self.genus_expected)


def zeta_small(curve, f=None, genus=None, s_max=None):
    """Fit the numerator of the zeta function from point counts and check it."""
    if genus is None:
        if f is not None:
            raise ValueError("the genus of C_f must be supplied")
        genus = curve.genus
    q = curve.q
    if s_max is None:
        s_max = max(2 * genus, 1)
    counts = component_counts(curve, f, s_max)
    S = [q ** s + 1 - N for s, N in enumerate(counts, start=1)]
    a = [Fraction(1)]
    for k in range(1, s_max + 1):
        a.append(-sum(S[j - 1] * a[k - j] for j in range(1, k + 1)) / k)
    integral = all(c.denominator == 1 for c in a)
    ints = [int(c) for c in a] if integral else None
    fit = None
    if integral:
        for g in range(0, s_max // 2 + 1):
            if any(ints[k] for k in range(2 * g + 1, s_max + 1)):
                continue
            if all(ints[2 * g - i] == q ** (g - i) * ints[i] for i in range(g + 1)):
                fit = g
                break
    symmetric = fit is not None
    riemann = False
    if symmetric:
        g = fit
        D = [[2], [0, 1]]
        for j in range(1, g):
            nxt = [0] + D[j]
            prev = D[j - 1] + [0] * (len(nxt) - len(D[j - 1]))
            D.append([u - q * v for u, v in zip(nxt, prev)])
        h = [Fraction(0)] * (g + 1)
        h[0] = Fraction(ints[g])
        for j in range(1, g + 1):
            for k, c in enumerate(D[j]):
                h[k] += ints[g - j] * c
        h = _ptrim(h)
        if g == 0:
            riemann = True
        else:
            sf = _pdivmod(h, _pgcd(h, _pderiv(h)))[0]
            riemann = _sturm_count(sf, q) == len(sf) - 1
    rep = ZetaReport(counts, ints if integral else [str(c) for c in a], genus, fit,
                     integral, symmetric, riemann)
    if not rep.consistent:
        raise FitInconsistent(f"zeta fit inconsistent: {rep}")
    return rep
