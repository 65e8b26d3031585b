"""Job configuration: JSON schema validation and resolution into curve objects."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import jsonschema

from . import poly as P
from .curve import ARTIN_SCHREIER, RATIONAL, Divisor, SplittingContext, XPlace, make_curve
from .errors import ConfigError, NotIrreducibleModulus, ParseError
from .expr import parse, parse_defs
from .gf import GF, is_irreducible_fp
from .poly import RatFunc

_COEF = {"oneOf": [{"type": "integer"},
                   {"type": "array", "items": {"type": "integer"}}]}
_POLY = {"type": "array", "items": _COEF, "minItems": 1}
_PLACE = {
    "type": "object",
    "required": ["x_place"],
    "properties": {
        "x_place": {"oneOf": [{"const": "infinite"}, _POLY]},
        "branch": {"oneOf": [{"type": "string"}, {"type": "integer", "minimum": 0}]},
        "multiplicity": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["field", "curve", "divisor"],
    "properties": {
        "name": {"type": "string"},
        "field": {
            "type": "object",
            "required": ["p"],
            "properties": {
                "p": {"type": "integer", "minimum": 2},
                "s": {"type": "integer", "minimum": 1},
                "modulus": {"type": "array", "items": {"type": "integer"}},
            },
            "additionalProperties": False,
        },
        "curve": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": [RATIONAL, ARTIN_SCHREIER]},
                "h_num": _POLY,
                "h_den": _POLY,
            },
            "additionalProperties": False,
        },
        "divisor": {"type": "array", "items": {**_PLACE, "required": ["x_place", "multiplicity"]}},
        "splitting": {"oneOf": [{"const": "all_rational_minus_support"},
                                {"type": "array", "items": _PLACE}]},
        "defs": {"type": "object", "additionalProperties": {"type": "string"}},
        "bases": {"type": "object",
                  "additionalProperties": {"type": "array", "items": {"type": "string"},
                                           "minItems": 1}},
        "search": {
            "type": "object",
            "properties": {
                "max_dim": {"type": "integer", "minimum": 1},
                "budget": {"type": "integer", "minimum": 1},
                "strategy": {"enum": ["auto", "exhaustive", "greedy", "random"]},
                "seed": {"type": "integer"},
                "target": {"const": "max_points_then_min_genus"},
            },
            "additionalProperties": False,
        },
        "precision": {"type": ["integer", "null"], "minimum": 1},
        "annotations": {"type": "object"},
    },
    "additionalProperties": False,
}


@dataclass
class SearchSpec:
    max_dim: int = 2
    budget: int = 10 ** 6
    strategy: str = "auto"
    seed: int = 0
    target: str = "max_points_then_min_genus"


@dataclass
class JobConfig:
    name: str
    field: object
    curve: object
    divisor: object
    ctx: object
    defs: dict
    def_sources: dict
    bases: dict
    search: SearchSpec
    precision: int
    annotations: dict
    config_hash: str
    document: dict = field(repr=False, default=None)

    def parse(self, text):
        return parse(self.curve, text, self.defs)


def config_hash(document):
    blob = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _path(err):
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def _coef(F, c, where):
    if isinstance(c, int):
        return F.from_int(c)
    if len(c) > F.s or any(not 0 <= d < F.p for d in c):
        raise ConfigError(f"{where}: {c} is not an F_{F.p}-coefficient array of length <= {F.s}")
    return F.from_digits(list(c))


def _poly(F, coeffs, where):
    return P.trim([_coef(F, c, f"{where}/{i}") for i, c in enumerate(coeffs)])


def _resolve_place(curve, entry, where):
    F = curve.F
    xs = entry["x_place"]
    if xs == "infinite":
        xp = XPlace.infinite()
    else:
        pol = _poly(F, xs, f"{where}/x_place")
        if not pol or pol[-1] != 1:
            raise ConfigError(f"{where}/x_place: polynomial must be monic")
        if not P.is_irreducible(F, pol):
            raise ConfigError(f"{where}/x_place: polynomial is not irreducible")
        xp = XPlace(pol)
    places = curve.places_above(xp)
    branch = entry.get("branch")
    if branch is None:
        if len(places) != 1:
            raise ConfigError(f"{where}: {len(places)} places lie above this x-place; give a branch")
        return places[0]
    if isinstance(branch, int):
        if branch >= len(places):
            raise ConfigError(f"{where}/branch: index {branch} out of range ({len(places)} places)")
        return places[branch]
    if branch == "ram":
        hits = [Q for Q in places if Q.branch == "ram"]
        if not hits:
            raise ConfigError(f"{where}/branch: the place is not ramified")
        return hits[0]
    line = make_curve(F, RATIONAL)
    try:
        val = parse(line, branch)
    except ParseError as e:
        raise ConfigError(f"{where}/branch: {e}") from None
    R = val.coeffs[0]
    for Q in places:
        if Q.branch in (None, "ram"):
            continue
        K = Q.K
        if Q.theta is None:
            if not (P.deg(R.num) <= 0 and R.den == P.ONE):
                raise ConfigError(f"{where}/branch: branch at infinity must be a constant")
            v = Q.emb[R.num[0]] if R.num else 0
        else:
            den = P.evaluate(K, P.map_coeffs(R.den, Q.emb), Q.theta)
            if not den:
                raise ConfigError(f"{where}/branch: expression has a pole at the x-place")
            v = K.div(P.evaluate(K, P.map_coeffs(R.num, Q.emb), Q.theta), den)
        if v == Q.branch:
            return Q
    raise ConfigError(f"{where}/branch: no place above the x-place has y-residue {branch!r}")


def parse_config(document):
    """Validate a config document (dict or JSON text) and resolve it into a JobConfig."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(f"{_path(err)}: {err.message}")
    fs = document["field"]
    p, s = fs["p"], fs.get("s", 1)
    modulus = fs.get("modulus")
    if modulus is not None:
        if len(modulus) != s + 1 or modulus[-1] % p != 1:
            raise NotIrreducibleModulus("field/modulus: expected a monic polynomial of degree s")
        if not is_irreducible_fp(tuple(c % p for c in modulus), p):
            raise NotIrreducibleModulus("field/modulus: polynomial is not irreducible")
    try:
        F = GF(p, s, tuple(modulus) if modulus is not None else None)
    except Exception as e:
        raise ConfigError(f"field: {e}") from None
    cs = document["curve"]
    if cs["kind"] == ARTIN_SCHREIER:
        if "h_num" not in cs:
            raise ConfigError("curve: h_num is required for an Artin-Schreier curve")
        num = _poly(F, cs["h_num"], "curve/h_num")
        den = _poly(F, cs.get("h_den", [1]), "curve/h_den")
        if not den:
            raise ConfigError("curve/h_den: zero denominator")
        curve = make_curve(F, ARTIN_SCHREIER, RatFunc(F, num, den))
    else:
        curve = make_curve(F, RATIONAL)
    mults = {}
    for i, entry in enumerate(document["divisor"]):
        Q = _resolve_place(curve, entry, f"divisor/{i}")
        mults[Q] = mults.get(Q, 0) + entry["multiplicity"]
    D = Divisor(curve, mults)
    sp = document.get("splitting", "all_rational_minus_support")
    split_set = None
    if sp != "all_rational_minus_support":
        split_set = []
        for i, entry in enumerate(sp):
            Q = _resolve_place(curve, entry, f"splitting/{i}")
            if Q.degree != 1:
                raise ConfigError(f"splitting/{i}: not a rational point")
            if Q in D.mults:
                raise ConfigError(f"splitting/{i}: point lies in the support of the divisor")
            split_set.append(Q)
    ctx = SplittingContext(curve, D, split_set)
    srcs = dict(document.get("defs", {}))
    try:
        defs = parse_defs(curve, list(srcs.items()))
    except ParseError as e:
        raise ConfigError(f"defs: {e}") from None
    bases = {k: list(v) for k, v in document.get("bases", {}).items()}
    for name, items in bases.items():
        for j, text in enumerate(items):
            try:
                parse(curve, text, defs)
            except ParseError as e:
                raise ConfigError(f"bases/{name}/{j}: {e}") from None
    search = SearchSpec(**document.get("search", {}))
    return JobConfig(document.get("name", "job"), F, curve, D, ctx, defs, srcs, bases, search,
                     document.get("precision"), dict(document.get("annotations", {})),
                     config_hash(document), document)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None
    return parse_config(text)
