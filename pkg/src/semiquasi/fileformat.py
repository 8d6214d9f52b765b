"""Problem files (YAML) and machine-readable reports (JSON).

A problem file looks like::

    format-version: 1
    variables: [x, y, z]
    weights: [7, 7, 3]
    degree: 21
    f0: "x^3 + y^3 + z^7"          # or a term list [[coeff, [exps]], ...]
    conductor: 21                  # optional, for roots of unity z21
    generators:                    # optional, images per variable
      alpha: ["y", "x", "z"]
    dual_generators: [...]         # optional, strings over x and t1..tk
    points: [[0, 0, 0, 0, 1]]      # optional, scalars as ints or strings
    polynomial: "x^3+y^3+z^7+z^8"  # optional, input for `reduce`
    seed: 20240607

Scalars are always written as exact strings ("10/7", "z21^7").
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from .polynomial import ParseError, Polynomial, WeightSystem, is_quasihomogeneous, parse_polynomial
from .scalars import Cyclotomic, format_scalar

FORMAT_VERSION = 1


class InputError(ValueError):
    """Malformed problem file."""


@dataclass
class ProblemInput:
    variables: tuple
    w: WeightSystem
    f0: Polynomial
    conductor: int = 1
    generators: dict = field(default_factory=dict)  # name -> list of image Polynomials
    dual_generators: list | None = None  # strings, parsed once t names are known
    points: list = field(default_factory=list)
    polynomial: Polynomial | None = None
    seed: int | None = None
    truncation: int | None = None
    max_orbit: int | None = None
    invariant_degree: int | None = None


def parse_scalar(value):
    if isinstance(value, bool):
        raise InputError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(f"floating point value {value!r} not allowed; write it as a fraction string")
    if isinstance(value, str):
        p = parse_polynomial(value, ())
        return p.constant_term()
    raise InputError(f"not a scalar: {value!r}")


def parse_poly_field(value, variables, what: str) -> Polynomial:
    if isinstance(value, str):
        try:
            return parse_polynomial(value, variables)
        except ParseError as exc:
            raise InputError(f"{what}: {exc}") from exc
    if isinstance(value, list):
        terms = {}
        for entry in value:
            if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
                raise InputError(f"{what}: term {entry!r} is not a [coefficient, exponents] pair")
            coeff, exps = entry
            if not isinstance(exps, list) or len(exps) != len(variables):
                raise InputError(f"{what}: term {entry!r} needs {len(variables)} exponents")
            if any(not isinstance(e, int) or e < 0 for e in exps):
                raise InputError(f"{what}: term {entry!r} has a bad exponent")
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + parse_scalar(coeff)
        return Polynomial(variables, terms)
    raise InputError(f"{what}: expected a string or a term list")


def load_problem(text: str, overrides: dict | None = None) -> ProblemInput:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InputError(f"invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("problem file must be a mapping")
    version = data.get("format-version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported format-version {version}")
    for key in ("variables", "weights", "degree", "f0"):
        if key not in data:
            raise InputError(f"missing key '{key}'")
    variables = tuple(str(v) for v in data["variables"])
    weights = data["weights"]
    if len(weights) != len(variables):
        raise InputError("weights and variables differ in length")
    w = WeightSystem(tuple(weights), int(data["degree"]))
    f0 = parse_poly_field(data["f0"], variables, "f0")
    if f0.is_zero():
        raise InputError("f0 is zero")
    if not is_quasihomogeneous(f0, w):
        bad = [e for e in f0.terms if w.degree_of(e) != w.degree]
        raise NotQuasihomogeneousInput(
            f"f0 is not quasihomogeneous of degree {w.degree}: term with exponents {bad[0]} has degree {w.degree_of(bad[0])}"
        )
    gens = {}
    for name, imgs in (data.get("generators") or {}).items():
        if len(imgs) != len(variables):
            raise InputError(f"generator {name}: {len(imgs)} images for {len(variables)} variables")
        gens[str(name)] = [parse_poly_field(g, variables, f"generator {name}") for g in imgs]
    points = [[parse_scalar(c) for c in p] for p in data.get("points") or []]
    poly = data.get("polynomial")
    prob = ProblemInput(
        variables=variables,
        w=w,
        f0=f0,
        conductor=int(data.get("conductor", 1)),
        generators=gens,
        dual_generators=data.get("dual_generators"),
        points=points,
        polynomial=parse_poly_field(poly, variables, "polynomial") if poly is not None else None,
        seed=data.get("seed"),
        truncation=data.get("truncation"),
        max_orbit=data.get("max_orbit"),
        invariant_degree=data.get("invariant_degree"),
    )
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(prob, key, value)
    return prob


class NotQuasihomogeneousInput(ValueError):
    pass


# -- encoding ---------------------------------------------------------------------------


def encode_scalar(c, conductor: int = 1) -> str:
    return format_scalar(lift_scalar(c, conductor))


def lift_scalar(c, conductor: int):
    if isinstance(c, Cyclotomic) and conductor % c.n == 0 and conductor != c.n:
        return c.lift(conductor)
    return c


def encode_polynomial(p: Polynomial, weights=None, conductor: int = 1) -> dict:
    p = p.map_coefficients(lambda c: lift_scalar(c, conductor))
    terms = [[encode_scalar(c, conductor), list(e)] for e, c in p.sorted_terms(weights)]
    return {"variables": list(p.variables), "terms": terms, "text": p.format(weights)}


def decode_polynomial(doc: dict) -> Polynomial:
    variables = tuple(doc["variables"])
    return parse_poly_field([[c, e] for c, e in doc["terms"]], variables, "report")
