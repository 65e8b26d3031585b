"""Command implementations: solve, lspace, analyze, search, verify, zeta.

Every command returns a plain dict that ``emit`` can serialise; dict contents
are deterministic for a given config and seed.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import poly as P
from .cover import LineTable, analyze_line, fibre_stats, weil_check, zeta_small
from .curve import RATIONAL, evaluate
from .errors import (AnalyzeOutsideSolutionSpace, BasisMeetsASImage, BudgetExceeded, ConfigError,
                     NotSubspace, OracleMismatch, ParseError)
from .expr import render
from .fplin import FpSubspace, gaussian_binomial, rank, rref_coordinates
from .local import SplitKind
from .rrspace import TraceSolution, WTilde


class Session:
    """Lazily computed solve pipeline for one job."""

    def __init__(self, job, threads=1):
        self.job = job
        self.threads = max(1, threads or 1)
        self._wt = None
        self._sol = None
        self._lines = None

    @property
    def wt(self):
        if self._wt is None:
            self._wt = WTilde(self.job.curve, self.job.divisor)
        return self._wt

    @property
    def sol(self):
        if self._sol is None:
            self._sol = TraceSolution(self.wt, self.job.ctx)
        return self._sol

    @property
    def lines(self):
        if self._lines is None:
            self._lines = LineTable(self.job.curve, self.sol, self.job.ctx)
        return self._lines

    def map(self, fn, items):
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.threads) as pool:
            return list(pool.map(fn, items))


def _provenance(job, seed=None):
    return {"config_hash": job.config_hash, "tool_version": __version__, "seed": seed}


def _header(job, command):
    C = job.curve
    return {
        "command": command,
        "name": job.name,
        "field": repr(C.F),
        "curve": repr(C),
        "base_genus": C.genus,
        "base_points": job.ctx.n,
        "divisor": repr(job.divisor),
        "divisor_degree": job.divisor.degree,
        "delta": job.ctx.delta,
        "split_points": [Q.label for Q in job.ctx.split_set],
    }


def _wrap(label):
    return f"({label})" if any(ch in label for ch in "+-*/ ") else label


def combination_label(coeffs, labels):
    terms = []
    for c, lab in zip(coeffs, labels):
        c = int(c)
        if c == 0:
            continue
        terms.append((c, lab))
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return "+".join(_wrap(lab) if c == 1 else f"{c}*{_wrap(lab)}" for c, lab in terms) or "0"


def _combine(curve, coeffs, fs):
    acc = curve.const(0)
    for c, f in zip(coeffs, fs):
        c = int(c)
        if c:
            acc = acc + f * c
    return acc


def _line_dict(rep, label=None):
    return {
        "f": label if label is not None else render(rep.f),
        "vstar": rep.vstar(),
        "eps": rep.eps,
        "genus": rep.genus,
        "points": rep.points,
        "tau": rep.tau,
    }


def cmd_solve(job, session=None):
    s = session or Session(job)
    wt, sol = s.wt, s.sol
    out = _header(job, "solve")
    out.update({
        "provenance": _provenance(job),
        "dims": {
            "lspace_fq": wt.L.ell,
            "lspace_fp": wt.L.dim_fp,
            "lhalf_fp": wt.Lhalf.dim_fp,
            "V": wt.V.dim,
            "wtilde": wt.dim,
            "fsol": sol.dim,
        },
        "c": job.field.render(wt.c),
        "wtilde": [render(f) for f in wt.elements],
        "fsol": [render(f) for f in sol.elements],
        "rows": [],
    })
    return out


def cmd_lspace(job, session=None):
    s = session or Session(job)
    L = s.wt.L
    out = _header(job, "lspace")
    out.update({
        "provenance": _provenance(job),
        "ell": L.ell,
        "dim_fp": L.dim_fp,
        "basis": [render(f) for f in L.basis()],
        "V_dim": s.wt.V.dim,
        "rows": [],
    })
    return out


def resolve_basis(job, exprs):
    """Expressions (or names of config bases) -> (labels, FuncElts)."""
    if exprs is None:
        if not job.bases:
            raise ConfigError("no basis given and the config defines no bases")
        exprs = next(iter(job.bases.values()))
    elif len(exprs) == 1 and exprs[0] in job.bases:
        exprs = job.bases[exprs[0]]
    labels, fs = [], []
    for e in exprs:
        try:
            fs.append(job.parse(e))
        except ParseError as err:
            raise ConfigError(f"basis expression {e!r}: {err}") from None
        labels.append(e.strip())
    return labels, fs


def _check_basis(job, s, fs, allow_outside):
    L, V = s.wt.L, s.wt.V
    vecs = []
    for f in fs:
        v = L.coords(f)
        if v is None or not L.fp.contains(v):
            raise AnalyzeOutsideSolutionSpace(f"{render(f)} is not in L(D)")
        if not allow_outside and not s.sol.contains(f):
            raise AnalyzeOutsideSolutionSpace(
                f"{render(f)} violates the trace conditions at the splitting points")
        vecs.append(v)
    M = np.array(vecs).reshape(len(vecs), -1)
    if rank(M, job.field.p) != len(fs):
        raise ConfigError("basis functions are linearly dependent over F_p")
    Fsp = FpSubspace(job.field.p, L.fp.n, M)
    if not Fsp.meets_trivially(V):
        raise BasisMeetsASImage("the span meets the Artin-Schreier image plus constants")
    return Fsp


def _analyze(job, s, labels, fs, allow_outside):
    Fsp = _check_basis(job, s, fs, allow_outside)
    p = job.field.p
    coeffs = [M[0] for M in rref_coordinates(len(fs), 1, p)]
    funcs = [_combine(job.curve, c, fs) for c in coeffs]
    reps = s.map(lambda f: analyze_line(job.curve, f, job.divisor, job.ctx), funcs)
    stats = fibre_stats(job.curve, fs, reps, job.ctx, s.wt.V, Fsp)
    return coeffs, reps, stats


def cmd_analyze(job, exprs=None, allow_outside=False, session=None):
    s = session or Session(job)
    labels, fs = resolve_basis(job, exprs)
    coeffs, reps, stats = _analyze(job, s, labels, fs, allow_outside)
    span = "<" + ",".join(labels) + ">"
    note = job.annotations.get(span, job.annotations.get(",".join(labels), ""))
    lines = [_line_dict(rep, combination_label(c, labels)) for c, rep in zip(coeffs, reps)]
    rows = [{"r": 1, "basis": ln["f"], "genus": ln["genus"], "points": ln["points"],
             "weil_ok": weil_check(ln["genus"], ln["points"], job.curve.q), "annotation": ""}
            for ln in lines]
    rows.append({"r": stats.r, "basis": span, "genus": stats.genus, "points": stats.points,
                 "weil_ok": stats.weil_ok, "annotation": str(note)})
    out = _header(job, "analyze")
    out.update({
        "provenance": _provenance(job),
        "basis": labels,
        "r": stats.r,
        "genus": stats.genus,
        "points": stats.points,
        "tau": stats.tau,
        "formula_points": stats.formula_points,
        "weil_ok": stats.weil_ok,
        "lines": lines,
        "rows": rows,
    })
    return out


# -- search --------------------------------------------------------------------

def _greedy_subspaces(table, reports, k, r, p, rng, restarts):
    gC = table.curve.genus
    order = sorted(range(len(reports)),
                   key=lambda i: (reports[i].genus - gC, -reports[i].eps, i))
    line_vecs = [np.array(rep.coords, dtype=np.int64) for rep in reports]

    def grow(seq):
        rows = []
        for i in seq:
            trial = rows + [line_vecs[i]]
            if rank(np.array(trial), p) == len(trial):
                rows = trial
                if len(rows) == r:
                    return FpSubspace(p, k, np.array(rows)).basis
        return None

    seen, out = set(), []
    seqs = [order]
    for _ in range(restarts):
        seq = order[:]
        rng.shuffle(seq)
        seqs.append(seq)
    for seq in seqs:
        M = grow(seq)
        if M is not None and M.tobytes() not in seen:
            seen.add(M.tobytes())
            out.append(M)
    return out


def _random_subspaces(k, r, p, rng, tries):
    seen, out = set(), []
    for _ in range(tries):
        M = np.array([[rng.randrange(p) for _ in range(k)] for _ in range(r)], dtype=np.int64)
        if rank(M, p) != r:
            continue
        B = FpSubspace(p, k, M).basis
        if B.tobytes() not in seen:
            seen.add(B.tobytes())
            out.append(B)
    return out


def pareto(rows):
    """(genus, points) pairs not dominated by another row (fewer/equal genus, more/equal points)."""
    best = {}
    for row in rows:
        g, n = row["genus"], row["points"]
        best[g] = max(best.get(g, -1), n)
    out, top = [], -1
    for g in sorted(best):
        if best[g] > top:
            out.append({"genus": g, "points": best[g]})
            top = best[g]
    return out


def cmd_search(job, max_dim=None, budget=None, strategy=None, seed=None, session=None):
    s = session or Session(job)
    sp = job.search
    max_dim = max_dim or sp.max_dim
    budget = budget or sp.budget
    strategy = strategy or sp.strategy
    seed = sp.seed if seed is None else seed
    sol, table = s.sol, s.lines
    p, k = job.field.p, sol.dim
    line_coords = [M[0] for M in rref_coordinates(k, 1, p)]
    reports = s.map(table.report, line_coords)
    index = {rep.coords: i for i, rep in enumerate(reports)}
    rng = random.Random(seed)
    rows = []
    for r in range(1, min(max_dim, k) + 1):
        total = gaussian_binomial(k, r, p)
        mode = strategy
        if mode == "auto":
            mode = "exhaustive" if total <= budget else "greedy"
        if mode == "exhaustive":
            if total > budget:
                raise BudgetExceeded(f"{total} subspaces of dimension {r} exceed the budget {budget}")
            mats = list(rref_coordinates(k, r, p))
        elif mode == "greedy":
            mats = _greedy_subspaces(table, reports, k, r, p, rng, restarts=min(budget, 64))
            mats += _random_subspaces(k, r, p, rng, min(budget, 256))
            uniq = {}
            for M in mats:
                uniq.setdefault(M.tobytes(), M)
            mats = list(uniq.values())
        else:
            mats = _random_subspaces(k, r, p, rng, min(budget, 4 * total))

        def evaluate_row(M, r=r):
            reps = table.lines_of(M)
            idx = [index[rep.coords] for rep in reps]
            fs = [sol.wt.L.to_func((row @ sol.space.basis) % p) for row in M]
            st = fibre_stats(job.curve, fs, reps, job.ctx)
            return {"r": r, "coords": M.tolist(), "lines": idx,
                    "basis": [render(f) for f in fs], "genus": st.genus,
                    "points": st.points, "weil_ok": st.weil_ok, "mode": mode}

        rows.extend(s.map(evaluate_row, mats))
    out = _header(job, "search")
    out.update({
        "provenance": _provenance(job, seed),
        "fsol": [render(f) for f in sol.elements],
        "line_table": [dict(_line_dict(rep), index=i, coords=list(rep.coords))
                       for i, rep in enumerate(reports)],
        "rows": rows,
        "pareto": pareto(rows),
    })
    return out


# -- verification oracle -----------------------------------------------------

def _affine_points(curve):
    """(place, x0, y0) found by scanning F_q for x0 and y0 independently of place data."""
    F = curve.F
    by_label = {}
    for Q in curve.rational_places():
        by_label[Q.label] = Q
    out = []
    for x0 in range(F.q):
        xs = F.render(x0)
        if curve.kind == RATIONAL:
            out.append((by_label[f"({xs})"], x0, None))
            continue
        den = P.evaluate(F, curve.h.den, x0)
        if not den:
            continue
        v = F.div(P.evaluate(F, curve.h.num, x0), den)
        for y0 in range(F.q):
            if F.sub(F.pow(y0, curve.p), y0) == v:
                Q = by_label.get(f"({xs},{F.render(y0)})")
                if Q is None:
                    raise OracleMismatch(f"affine point ({xs},{F.render(y0)}) has no place")
                out.append((Q, x0, y0))
    return out


def cmd_verify(job, exprs=None, session=None, allow_outside=True):
    """Brute-force census of C_F(F_q) checked against the line formulas."""
    s = session or Session(job)
    curve, ctx, D = job.curve, job.ctx, job.divisor
    F, p = curve.F, curve.p
    labels, fs = resolve_basis(job, exprs)
    r = len(fs)
    in_solution = all(s.sol.contains(f) for f in fs)
    coeffs, reps, stats = _analyze(job, s, labels, fs, allow_outside)
    supp = set(D.support)

    traces = {}
    affine = _affine_points(curve)
    seen = set()
    for Q, x0, y0 in affine:
        if Q in supp:
            continue
        traces[Q] = [F.trace_fp(evaluate(f, Q).code) for f in fs]
        seen.add(Q)
    others = [Q for Q in ctx.places if Q not in supp and Q not in seen]
    for Q in others:
        traces[Q] = [F.trace_fp(evaluate(f, Q).code) for f in fs]
    census = sum(p ** r for Q in traces if not any(traces[Q]))
    affine_census = sum(p ** r for Q in seen if not any(traces[Q]))
    expected = p ** r * (ctx.n - ctx.delta) if in_solution and ctx.complete else None
    if expected is not None and census != expected:
        bad = next(Q for Q in traces if any(traces[Q]))
        raise OracleMismatch(f"census {census} != p^r(n-delta) = {expected}; first failing point "
                             f"{bad.label}")

    boundary = {}
    for Q in ctx.support_rational:
        kinds = [next(sk for QQ, _, sk in rep.local if QQ == Q) for rep in reps]
        unram = [np.array(c) for c, sk in zip(coeffs, kinds) if sk != SplitKind.RAMIFIED]
        split = [c for c, sk in zip(coeffs, kinds) if sk == SplitKind.SPLIT]
        u = rank(np.array(unram), p) if unram else 0
        if len(unram) != (p ** u - 1) // (p - 1):
            raise NotSubspace(f"unramified lines at {Q.label} do not form a subspace")
        boundary[Q.label] = p ** u if len(split) == len(unram) else 0
    total = census + sum(boundary.values())
    if total != stats.points:
        raise OracleMismatch(f"oracle total {total} != fibre_stats count {stats.points}")

    components = []
    for c, rep in zip(coeffs, reps):
        per = {}
        for Q, tr in traces.items():
            t = sum(int(ci) * ti for ci, ti in zip(c, tr)) % p
            per[Q] = p if t == 0 else 0
        for Q in ctx.support_rational:
            sk = next(sk for QQ, _, sk in rep.local if QQ == Q)
            per[Q] = p if sk == SplitKind.SPLIT else (1 if sk == SplitKind.RAMIFIED else 0)
        for Q in ctx.places:
            if per[Q] != rep.per_place[Q]:
                raise OracleMismatch(f"component {combination_label(c, labels)} differs at "
                                     f"{Q.label}: census {per[Q]} vs analysis {rep.per_place[Q]}")
        direct = sum(per.values())
        if direct != rep.points:
            raise OracleMismatch(f"component count {direct} != N_f = {rep.points}")
        components.append({"f": combination_label(c, labels), "census": direct,
                           "points": rep.points})

    out = _header(job, "verify")
    out.update({
        "provenance": _provenance(job),
        "basis": labels,
        "r": r,
        "in_solution_space": in_solution,
        "affine_census": affine_census,
        "census": census,
        "expected_census": expected,
        "boundary": boundary,
        "total": total,
        "fibre_stats": {"genus": stats.genus, "points": stats.points,
                        "formula_points": stats.formula_points},
        "components": components,
        "ok": True,
        "rows": [{"r": r, "basis": "<" + ",".join(labels) + ">", "genus": stats.genus,
                  "points": total, "weil_ok": stats.weil_ok, "annotation": "verified"}],
    })
    return out


def cmd_zeta(job, exprs=None, s_max=None, session=None):
    """Zeta numerators of the base curve and of C_f for each given function."""
    s = session or Session(job)
    curve = job.curve
    results = []
    base = zeta_small(curve, s_max=s_max)
    results.append({"component": "C", "genus": curve.genus, "counts": base.counts,
                    "numerator": base.coefficients, "genus_fit": base.genus_fit,
                    "consistent": base.consistent})
    if exprs is not None or job.bases:
        labels, fs = resolve_basis(job, exprs)
        for lab, f in zip(labels, fs):
            rep = analyze_line(curve, f, job.divisor, job.ctx)
            z = zeta_small(curve, f, genus=rep.genus, s_max=s_max)
            results.append({"component": lab, "genus": rep.genus, "counts": z.counts,
                            "numerator": z.coefficients, "genus_fit": z.genus_fit,
                            "consistent": z.consistent})
    out = _header(job, "zeta")
    out.update({
        "provenance": _provenance(job),
        "components": results,
        "rows": [{"r": 1, "basis": z["component"], "genus": z["genus"], "points": z["counts"][0],
                  "weil_ok": weil_check(z["genus"], z["counts"][0], curve.q),
                  "annotation": "zeta " + ("ok" if z["consistent"] else "inconsistent")}
                 for z in results],
    })
    return out
