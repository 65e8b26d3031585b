"""Riemann-Roch spaces, the Artin-Schreier image V, the complement W~ and the trace system.

L(D) is computed with the ansatz f = sum_i A_i(x) y^i / M(x).  M clears the
finite poles allowed by D and the conductor of F_q[x][y] at poles of h; the
degree bounds on A_i come from an integral basis at infinity, so the ansatz
always contains L(D).  Pole conditions are imposed on truncated expansions
and solved over F_p after flattening F_q coefficients in the power basis.
"""

from __future__ import annotations

import numpy as np

from . import poly as P
from .curve import ARTIN_SCHREIER, RATIONAL, XPlace, evaluate, valuation
from .errors import (ConditionIViolated, DimensionMismatch, IndeterminatePrecision,
                     PoleAtSplitPoint)
from .fplin import FpSubspace, complement, nullspace, rank
from .local import MAX_PRECISION
from .poly import RatFunc


def _ansatz_denominator(curve, D):
    """M(x) and the finite x-places whose fibres need pole conditions."""
    F = curve.F
    exps = {}
    for Q, n in D.mults.items():
        if not Q.xplace.is_infinite and n > 0:
            exps[Q.xplace] = max(exps.get(Q.xplace, 0), n)
    M = P.ONE
    for xp, e in exps.items():
        M = P.mul(F, M, P.power(F, xp.poly, e))
    xps = set(exps)
    if curve.kind == ARTIN_SCHREIER and P.deg(curve.h.den) > 0:
        M = P.mul(F, M, P.power(F, curve.h.den, curve.p * (curve.p - 1)))
        xps.update(XPlace(f) for f in P.factor_irreducibles(F, curve.h.den))
    return M, sorted(xps, key=lambda xp: (len(xp.poly), xp.poly))


def _degree_bounds(curve, D, M):
    inf_places = curve.places_above(XPlace.infinite())
    B = 0
    for Q in inf_places:
        n = D[Q]
        B = max(B, -(-(n + Q.e * P.deg(M)) // Q.e))
    if curve.kind == RATIONAL:
        return [B]
    p = curve.p
    kinf = max(0, P.deg(curve.h.num) - P.deg(curve.h.den))
    c = -(-kinf // p)
    return [B + c * p * (p - 1) - c * i for i in range(p)]


def _monomial_series(Q, M, bounds, target):
    """Expansions of x^k y^i / M at Q, each known below t^target."""
    W = max(target, 1) + 16 + 2 * Q.e * (P.deg(M) + max(bounds) + 1)
    while True:
        X = Q.x_series(W)
        Minv = Q.poly_series(M, W + 2 * Q.e * P.deg(M)).inverse()
        Y = Q.local_params(W)[1]
        out = {}
        ok = True
        ypow = Minv
        for i, bd in enumerate(bounds):
            if i:
                ypow = ypow * Y
            term = ypow
            for k in range(bd + 1):
                if k:
                    term = term * X
                if term.prec < target:
                    ok = False
                    break
                out[(i, k)] = term
            if not ok:
                break
        if ok:
            return out
        W *= 2
        if W > MAX_PRECISION:
            raise IndeterminatePrecision(f"monomial expansions at {Q.label} not certified")


class LSpace:
    """The Riemann-Roch space L(D) in ansatz coordinates over F_p."""

    def __init__(self, curve, D):
        if not all(n >= 0 for n in D.mults.values()):
            raise ValueError("only effective divisors are supported")
        self.curve = curve
        self.D = D
        F = curve.F
        self.m = F.s
        self.M, xps = _ansatz_denominator(curve, D)
        self.bounds = _degree_bounds(curve, D, self.M)
        self.monomials = [(i, k) for i, bd in enumerate(self.bounds) for k in range(bd + 1)]
        self._index = {mk: j for j, mk in enumerate(self.monomials)}
        checks = []
        for xp in [XPlace.infinite()] + xps:
            for Q in curve.places_above(xp):
                checks.append((Q, D[Q]))
        self.checks = checks
        rows = [self._condition_rows(Q, n) for Q, n in checks]
        ncols = len(self.monomials) * self.m
        A = np.vstack([r for r in rows if r.size]) if any(r.size for r in rows) \
            else np.zeros((0, ncols), dtype=np.int64)
        self.fp = nullspace(A, F.p, ncols) if A.shape[0] else FpSubspace.full(F.p, ncols)
        if self.fp.dim % self.m:
            raise DimensionMismatch("F_p dimension of L(D) is not a multiple of [F_q:F_p]")
        self.ell = self.fp.dim // self.m
        self._check_riemann_roch()
        self._basis = None

    def _condition_rows(self, Q, n):
        """F_p rows forcing the coefficients of t^j (j < -n) at Q to vanish."""
        F, K = self.curve.F, Q.K
        target = -n
        series = _monomial_series(Q, self.M, self.bounds, target)
        lo = min((s.val for s in series.values() if not s.is_zero()), default=target)
        if lo >= target:
            return np.zeros((0, len(self.monomials) * self.m), dtype=np.int64)
        alpha = [Q.emb[F.from_digits([0] * l + [1])] for l in range(self.m)]
        md = K.s
        rows = np.zeros(((target - lo) * md, len(self.monomials) * self.m), dtype=np.int64)
        for col, mk in enumerate(self.monomials):
            s = series[mk]
            for jj in range(target - lo):
                c = s.coefficient(lo + jj)
                if not c:
                    continue
                for l in range(self.m):
                    rows[jj * md:(jj + 1) * md, col * self.m + l] = K.digits(K.mul(c, alpha[l]))
        return rows

    def _check_riemann_roch(self):
        d, g = self.D.degree, self.curve.genus
        if d >= 2 * g - 1:
            ok = self.ell == d + 1 - g
        else:
            ok = max(1, d + 1 - g) <= self.ell <= d + 1
        if not ok:
            raise DimensionMismatch(f"l(D) = {self.ell} contradicts Riemann-Roch "
                                    f"(deg D = {d}, g = {g})")

    @property
    def dim_fp(self):
        return self.fp.dim

    def to_func(self, vec):
        """The function with F_p ansatz coordinates ``vec``."""
        F, C = self.curve.F, self.curve
        polys = [[0] * (bd + 1) if bd >= 0 else [] for bd in self.bounds]
        v = [int(x) for x in vec]
        for j, (i, k) in enumerate(self.monomials):
            polys[i][k] = F.from_digits(v[j * self.m:(j + 1) * self.m])
        return C.from_coeffs([RatFunc(F, tuple(a), self.M) for a in polys])

    def coords(self, f):
        """F_p ansatz coordinates of f, or None when f is outside the ansatz."""
        F = self.curve.F
        Mr = RatFunc.poly(F, self.M)
        out = np.zeros(len(self.monomials) * self.m, dtype=np.int64)
        for i, a in enumerate(f.coeffs):
            b = a * Mr
            if not b.is_poly():
                return None
            if P.deg(b.num) > self.bounds[i]:
                return None
            for k, c in enumerate(b.num):
                if c:
                    j = self._index[(i, k)]
                    out[j * self.m:(j + 1) * self.m] = F.digits(c)
        return out

    def contains(self, f):
        v = self.coords(f)
        return v is not None and self.fp.contains(v)

    def fp_basis(self):
        """F_p basis of L(D) as functions (canonical rref order)."""
        return [self.to_func(v) for v in self.fp.basis]

    def basis(self):
        """An F_q basis of L(D) chosen greedily from the F_p basis."""
        if self._basis is not None:
            return self._basis
        F = self.curve.F
        alpha = [F.from_digits([0] * l + [1]) for l in range(self.m)]
        chosen, span = [], np.zeros((0, self.fp.n), dtype=np.int64)
        for v in self.fp.basis:
            if span.shape[0] and rank(np.vstack([span, v]), F.p) == rank(span, F.p):
                continue
            f = self.to_func(v)
            chosen.append(f)
            span = np.vstack([span] + [self.coords(f.scale(a)) for a in alpha])
        self._basis = chosen
        return chosen


def lspace_basis(curve, D):
    return LSpace(curve, D)


def pglobal_image(curve, L, Lhalf):
    """(V, V0): span of wp(L([D/p])) plus constants, and the wp part alone."""
    F = curve.F
    rows = []
    for g in Lhalf.fp_basis():
        v = L.coords(g.wp())
        if v is None or not L.fp.contains(v):
            raise DimensionMismatch("wp(g) left L(D)")
        rows.append(v)
    n = L.fp.n
    V0 = FpSubspace(F.p, n, np.array(rows).reshape(-1, n))
    consts = [L.coords(curve.const(F.from_digits([0] * l + [1]))) for l in range(F.s)]
    V = FpSubspace(F.p, n, np.vstack([V0.basis] + consts))
    if V.dim != Lhalf.dim_fp:
        raise DimensionMismatch(f"dim V = {V.dim} but dim L([D/p]) = {Lhalf.dim_fp}")
    return V, V0


def first_nonzero_trace(F):
    return next(c for c in range(F.q) if F.trace_fp(c))


class WTilde:
    """W~ = F_p c + W with W a complement of V in L(D)."""

    def __init__(self, curve, D):
        from .curve import divisor_floor_div
        self.curve = curve
        self.L = LSpace(curve, D)
        self.Lhalf = LSpace(curve, divisor_floor_div(D, curve.p))
        self.V, self.V0 = pglobal_image(curve, self.L, self.Lhalf)
        U = self.L.fp
        self.W = complement(self.V, U)
        F = curve.F
        self.c = first_nonzero_trace(F)
        cvec = self.L.coords(curve.const(self.c))
        self.vectors = np.vstack([cvec.reshape(1, -1), self.W.basis]) % F.p
        self.elements = [self.L.to_func(v) for v in self.vectors]
        if self.W.dim != self.L.dim_fp - self.Lhalf.dim_fp:
            raise DimensionMismatch("dim W differs from dim L(D) - dim L([D/p])")

    @property
    def dim(self):
        return len(self.elements)


def build_wtilde(curve, D):
    return WTilde(curve, D)


class TraceSolution:
    """Solutions of Tr(f(P)) = 0 for P in the splitting set, inside W~."""

    def __init__(self, wt, ctx):
        self.wt = wt
        self.ctx = ctx
        curve = wt.curve
        F = curve.F
        p = F.p
        A = np.zeros((len(ctx.split_set), wt.dim), dtype=np.int64)
        for j, f in enumerate(wt.elements):
            for i, Pt in enumerate(ctx.split_set):
                if not f.is_zero() and valuation(f, Pt) < 0:
                    raise PoleAtSplitPoint(f"{f} has a pole at {Pt.label}")
                A[i, j] = F.trace_fp(evaluate(f, Pt).code)
        self.matrix = A
        self.coords = nullspace(A, p, wt.dim) if A.shape[0] else FpSubspace.full(p, wt.dim)
        self.space = FpSubspace(p, wt.L.fp.n, (self.coords.basis @ wt.vectors) % p)
        self.elements = [wt.L.to_func(v) for v in self.space.basis]
        self.closure = self.space + wt.V0
        if not verify_condition_i(self.space, wt.V):
            raise ConditionIViolated("solution space meets the Artin-Schreier image")

    @property
    def dim(self):
        return self.space.dim

    def lcoords(self, f):
        return self.wt.L.coords(f)

    def contains(self, f):
        """f lies in F_sol + wp(L([D/p])) (the trace conditions hold on L(D))."""
        v = self.lcoords(f)
        return v is not None and self.closure.contains(v)

    def in_span(self, f):
        v = self.lcoords(f)
        return v is not None and self.space.contains(v)


def trace_system(wt, ctx):
    return TraceSolution(wt, ctx)


def verify_condition_i(Fsp, V):
    return Fsp.meets_trivially(V)
