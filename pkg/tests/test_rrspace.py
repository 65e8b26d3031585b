import copy
import random

import numpy as np
import pytest

from asforge.commands import Session
from asforge.curve import Divisor, SplittingContext, divisor_floor_div, evaluate, valuation
from asforge.errors import DimensionMismatch
from asforge.expr import parse
from asforge.fplin import FpSubspace, rank
from asforge.rrspace import (LSpace, TraceSolution, WTilde, first_nonzero_trace, lspace_basis,
                             pglobal_image, verify_condition_i)

from conftest import divisor, job, places

EXAMPLES = {
    # config, dim L([D/p]) over F_p, dim W~, dim F_sol, generators that must be members
    "ex1a": (1, 5, 3, ["f1", "f2", "f3"]),
    "ex1b": (2, 5, 2, ["f1", "f2"]),
    "ex1c": (3, 6, 3, ["h1", "h2", "h3"]),
    "ex2i": (2, 9, 4, ["f1", "f2", "f3", "f4"]),
    "ex2ii": (4, 9, 2, ["b1", "b2", "s1"]),
    "ex3": (10, 13, 5, ["f1", "f2", "f3", "f4", "f5"]),
}

_SESSIONS = {}


def session(name):
    if name not in _SESSIONS:
        _SESSIONS[name] = Session(job(name))
    return _SESSIONS[name]


def test_lspace_example1(e1):
    D, _ = divisor(e1, {"inf": 3, "(0,0)": 1, "(1,1)": 1})
    L = lspace_basis(e1, D)
    assert L.ell == 5
    for text in ["1", "x", "y", "x/(x+y)", "xy/(x+y)"]:
        assert L.contains(parse(e1, text)), text
    assert not L.contains(parse(e1, "1/(x+1)"))
    assert not L.contains(parse(e1, "x^2"))


def test_lspace_of_zero_divisor(e1):
    L = LSpace(e1, Divisor(e1, {}))
    assert L.ell == 1 and L.contains(e1.const(1))


def test_lspace_example3(e3):
    D, _ = divisor(e3, {"inf": 11})
    L = LSpace(e3, D)
    assert (L.ell, L.dim_fp) == (11, 22)


@pytest.mark.parametrize("k", range(0, 9))
def test_riemann_roch_multiples_of_infinity(e1, e2, k):
    for C in (e1, e2):
        D, _ = divisor(C, {"inf": k})
        assert LSpace(C, D).ell == (k if k >= 1 else 1)


def test_riemann_roch_degree4_place():
    L = session("ex2ii").wt.L
    assert L.D.degree == 12 and L.ell == 12


def test_pglobal_image_example2(e2):
    D, _ = divisor(e2, {"inf": 8, "(1,0)": 2})
    L = LSpace(e2, D)
    Lhalf = LSpace(e2, divisor_floor_div(D, 3))
    assert Lhalf.ell == 2
    V, V0 = pglobal_image(e2, L, Lhalf)
    assert V.dim == 2
    assert V.contains(L.coords(parse(e2, "x^2-1")))
    assert V.contains(L.coords(e2.const(1)))
    assert not V.contains(L.coords(parse(e2, "x")))


def test_pglobal_image_without_half_divisor(e1):
    D, _ = divisor(e1, {"inf": 1, "(0,0)": 1})
    L = LSpace(e1, D)
    V, V0 = pglobal_image(e1, L, LSpace(e1, divisor_floor_div(D, 2)))
    assert V.dim == e1.F.s and V0.dim == 0          # wp(1) = 0 contributes nothing


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_wtilde_and_solution_dimensions(name):
    half, wdim, sdim, members = EXAMPLES[name]
    s = session(name)
    wt, sol = s.wt, s.sol
    assert wt.Lhalf.dim_fp == half
    assert wt.V.dim == wt.Lhalf.dim_fp
    assert wt.W.dim == wt.L.dim_fp - wt.Lhalf.dim_fp
    assert wt.dim == wdim
    assert sol.dim == sdim
    assert sol.dim >= wt.dim - len(s.job.ctx.split_set)
    for g in members:
        assert sol.contains(s.job.parse(g)), g


def test_example3_constant_is_generator():
    wt = session("ex3").wt
    assert wt.c == 2 and wt.curve.F.render(wt.c) == "a"
    assert first_nonzero_trace(wt.curve.F) == 2


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_solution_elements_split_every_point(name):
    s = session(name)
    F = s.job.field
    for f in s.sol.elements:
        for P in s.job.ctx.split_set:
            assert F.trace_fp(evaluate(f, P).code) == 0


def test_verify_condition_i_examples(e2):
    assert verify_condition_i(FpSubspace.zero(3, 4), FpSubspace.full(3, 4))
    wt = session("ex2i").wt
    bad = FpSubspace(3, wt.L.fp.n, [wt.L.coords(parse(wt.curve, "x^2-1"))])
    assert not verify_condition_i(bad, wt.V)
    sol = session("ex3").sol
    assert verify_condition_i(sol.space, sol.wt.V)


@pytest.mark.parametrize("name", ["ex1a", "ex2i", "ex3"])
def test_pole_confinement(name):
    s = session(name)
    L, C, D = s.wt.L, s.job.curve, s.job.divisor
    rng = random.Random(1)
    supp = set(D.support)
    for _ in range(6):
        f = L.to_func(L.fp.combine([rng.randrange(C.p) for _ in range(L.fp.dim)]))
        if f.is_zero():
            continue
        for Q in C.rational_places():
            bound = -D[Q] if Q in supp else 0
            assert valuation(f, Q) >= bound


@pytest.mark.parametrize("name", ["ex1c", "ex2i", "ex3"])
def test_wp_of_half_space_lies_in_v(name):
    s = session(name)
    wt, ctx = s.wt, s.job.ctx
    F = s.job.field
    rng = random.Random(2)
    Lh = wt.Lhalf
    for _ in range(5):
        g = Lh.to_func(Lh.fp.combine([rng.randrange(F.p) for _ in range(Lh.fp.dim)]))
        w = g.wp()
        assert wt.V.contains(wt.L.coords(w))
        if not w.is_zero():
            assert all(F.trace_fp(evaluate(w, P).code) == 0 for P in ctx.split_set)


@pytest.mark.parametrize("name", ["ex1a", "ex2i", "ex3"])
def test_solution_independent_of_complement(name):
    s = session(name)
    wt, ctx = s.wt, s.job.ctx
    p = s.job.field.p
    rng = np.random.default_rng(5)
    U = wt.L.fp
    while True:
        T = rng.integers(0, p, size=(U.dim, U.dim))
        if FpSubspace(p, U.dim, T).dim == U.dim:
            break
    # greedy complement over a shuffled spanning set of L(D), kept as raw rows
    chosen, acc = [], wt.V.basis
    for row in (T @ U.basis) % p:
        trial = np.vstack([acc, row])
        if rank(trial, p) > rank(acc, p):
            acc = trial
            chosen.append(row)
    assert len(chosen) == wt.W.dim
    other = copy.copy(wt)
    other.vectors = np.vstack([wt.vectors[:1]] + chosen) % p
    other.elements = [wt.L.to_func(v) for v in other.vectors]
    sol2 = TraceSolution(other, ctx)
    assert sol2.dim == s.sol.dim
    assert (sol2.space + wt.V) == (s.sol.space + wt.V)


def test_divisor_with_degree2_place(e1):
    Q = e1.places_of_degree(2)[0]
    D = Divisor(e1, {Q: 2, places(e1)["inf"]: 1})
    assert D.degree == 2 * Q.degree + 1
    L = LSpace(e1, D)
    assert L.ell == D.degree
