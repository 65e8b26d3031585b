import os
import sys

import pytest

from asforge.config import load_config
from asforge.curve import ARTIN_SCHREIER, Divisor, SplittingContext, make_curve
from asforge.gf import GF
from asforge.poly import RatFunc

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def config_path(name):
    return os.path.abspath(os.path.join(CONFIG_DIR, f"{name}.json"))


def as_curve(p, s, h_num):
    F = GF(p, s)
    return make_curve(F, ARTIN_SCHREIER, RatFunc(F, tuple(h_num)))


@pytest.fixture(scope="session")
def e1():
    """y^2 + y = x^3 + x over F_2."""
    return as_curve(2, 1, (0, 1, 0, 1))


@pytest.fixture(scope="session")
def e2():
    """y^3 - y = x^2 - 1 over F_3."""
    return as_curve(3, 1, (2, 0, 1))


@pytest.fixture(scope="session")
def e3():
    """y^2 + y = x^3 over F_4."""
    return as_curve(2, 2, (0, 0, 0, 1))


def places(curve):
    return {Q.label: Q for Q in curve.rational_places()}


_JOBS = {}


def job(name):
    if name not in _JOBS:
        _JOBS[name] = load_config(config_path(name))
    return _JOBS[name]


def divisor(curve, mults):
    pl = places(curve)
    D = Divisor(curve, {pl[k]: n for k, n in mults.items()})
    return D, SplittingContext(curve, D)
