"""Sparse multivariate polynomials with exact coefficients and weighted gradings."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import Cyclotomic, Scalar, as_scalar, format_scalar

Exps = tuple  # tuple[int, ...]

_MAX_EXP = 2**31 - 1


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightSystem:
    """Positive integer weights w_1..w_n together with the degree d.

    Normalized weights w_i/d must lie in (0, 1/2]; pass ``validate=False`` to
    build degenerate systems (d = w_1 for a single linear form, say).
    """

    weights: tuple
    degree: int
    validate: bool = True

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w <= 0 for w in self.weights):
            raise WeightError(f"weights must be positive, got {self.weights}")
        if self.degree <= 0:
            raise WeightError(f"degree must be positive, got {self.degree}")
        if self.validate:
            for w in self.weights:
                if 2 * w > self.degree:
                    raise WeightError(
                        f"normalized weight {w}/{self.degree} exceeds 1/2"
                    )

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def w_min(self) -> int:
        return min(self.weights)

    @property
    def w_max(self) -> int:
        return max(self.weights)

    @property
    def normalized(self) -> tuple:
        return tuple(Fraction(w, self.degree) for w in self.weights)

    @property
    def socle_degree(self) -> int:
        """n*d - 2*sum(w): degree of the hessian of a quasihomogeneous f0."""
        return self.n * self.degree - 2 * sum(self.weights)

    def degree_of(self, exps: Exps) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))


def mono_degree(exps: Exps, weights: Sequence[int]) -> int:
    return sum(w * e for w, e in zip(weights, exps))


def _check_exps(exps: Exps) -> Exps:
    for e in exps:
        if e > _MAX_EXP:
            raise OverflowError("monomial exponent exceeds machine width")
    return exps


class Polynomial:
    """Immutable sparse polynomial: a map exponent-tuple -> nonzero scalar."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        clean = {}
        if terms:
            n = len(self.variables)
            for e, c in terms.items():
                if c:
                    if len(e) != n:
                        raise ValueError(
                            f"monomial {e} does not match {n} variables"
                        )
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, c, variables) -> "Polynomial":
        variables = tuple(variables)
        c = as_scalar(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def monomial(cls, exps, variables, coeff=1) -> "Polynomial":
        coeff = as_scalar(coeff)
        variables = tuple(variables)
        return cls._raw(variables, {_check_exps(tuple(exps)): coeff} if coeff else {})

    @classmethod
    def var(cls, name_or_index, variables) -> "Polynomial":
        variables = tuple(variables)
        i = variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    @classmethod
    def parse(cls, text: str, variables) -> "Polynomial":
        return parse_polynomial(text, variables)

    # -- basic protocol ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def _other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}"
                )
            return other
        return Polynomial.constant(other, self.variables)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.terms == Polynomial.constant(other, self.variables).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._other(other)
        return Polynomial._raw(self.variables, add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        return Polynomial._raw(self.variables, add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            other = self._other(other)
            return Polynomial._raw(self.variables, mul_terms(self.terms, other.terms))
        c = as_scalar(other)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {e: v * c for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_scalar(other)
        return self * (1 / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus / substitution -------------------------------------------
    def diff(self, var) -> "Polynomial":
        i = self.variables.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ne] = c * e[i]
        return Polynomial._raw(self.variables, out)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence) -> Scalar:
        powers = [[Fraction(1), x] for x in point]

        def pw(i, k):
            row = powers[i]
            while len(row) <= k:
                row.append(row[-1] * row[1])
            return row[k]

        total: Scalar = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    if not point[i]:
                        v = 0
                        break
                    v = v * pw(i, k)
            if v:
                total = total + v
        return total

    def compose(self, images: Sequence, variables=None, weights=None, max_degree=None):
        """Substitute ``images[i]`` for variable i.

        Images are Polynomials over ``variables`` (or scalars).  With weights
        and max_degree, every intermediate product is truncated above
        max_degree.
        """
        if len(images) != self.nvars:
            raise ValueError("one image per variable required")
        if variables is None:
            variables = next(
                (im.variables for im in images if isinstance(im, Polynomial)),
                self.variables,
            )
        variables = tuple(variables)
        imgs = [
            im.terms if isinstance(im, Polynomial) else Polynomial.constant(im, variables).terms
            for im in images
        ]
        return Polynomial._raw(
            variables, compose_terms(self.terms, imgs, len(variables), weights, max_degree)
        )

    def substitute(self, values: Mapping) -> "Polynomial":
        """Replace selected variables (by name) by scalars or polynomials, keep the rest."""
        images = []
        for i, name in enumerate(self.variables):
            if name in values:
                v = values[name]
                images.append(v if isinstance(v, Polynomial) else Polynomial.constant(v, self.variables))
            else:
                images.append(Polynomial.var(i, self.variables))
        return self.compose(images, self.variables)

    def rename(self, variables) -> "Polynomial":
        """Re-embed into a variable list that contains all used variables."""
        variables = tuple(variables)
        idx = []
        for i, name in enumerate(self.variables):
            try:
                idx.append(variables.index(name))
            except ValueError:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise ValueError(f"variable {self.variables[i]} not in target")
                    ne[idx[i]] += k
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return Polynomial(variables, out)

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial(self.variables, {e: fn(c) for e, c in self.terms.items()})

    # -- gradings ----------------------------------------------------------
    def degrees(self, weights: Sequence[int]) -> set:
        return {mono_degree(e, weights) for e in self.terms}

    def min_degree(self, weights) -> float:
        return min((mono_degree(e, weights) for e in self.terms), default=math.inf)

    def max_degree(self, weights) -> float:
        return max((mono_degree(e, weights) for e in self.terms), default=-math.inf)

    def homogeneous_part(self, weights, degree: int) -> "Polynomial":
        return Polynomial._raw(
            self.variables,
            {e: c for e, c in self.terms.items() if mono_degree(e, weights) == degree},
        )

    def truncate(self, weights, max_degree) -> "Polynomial":
        return Polynomial._raw(
            self.variables,
            {e: c for e, c in self.terms.items() if mono_degree(e, weights) <= max_degree},
        )

    def is_homogeneous(self, weights) -> bool:
        return len(self.degrees(weights)) <= 1

    # -- printing ------------------------------------------------------------
    def sorted_terms(self, weights=None) -> list:
        """Terms in canonical order: ascending weighted degree, ties reverse-lex."""
        w = weights or (1,) * self.nvars
        return sorted(self.terms.items(), key=lambda ec: order_key(ec[0], w))

    def format(self, weights=None) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms(weights):
            mono = format_monomial(e, self.variables)
            if isinstance(c, Cyclotomic):
                cs = format_scalar(c)
                body = f"({cs})" if mono == "1" else f"({cs})*{mono}"
                sign = "+"
            else:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                if mono == "1":
                    body = str(a)
                elif a == 1:
                    body = mono
                else:
                    body = f"{a}*{mono}"
            pieces.append((sign, body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r}, vars={self.variables})"


def order_key(exps: Exps, weights) -> tuple:
    """Sort key of the local order: smaller key = larger monomial.

    Ascending weighted degree; within a degree, reverse-lexicographic with
    the last variable weakest.
    """
    return (mono_degree(exps, weights), tuple(reversed(exps)))


def format_monomial(exps: Exps, variables) -> str:
    parts = []
    for name, k in zip(variables, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


# -- raw term-dict kernels (hot paths) -----------------------------------------


def add_terms(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        nv = (c if sign == 1 else -c) if v is None else (v + c if sign == 1 else v - c)
        if nv:
            out[e] = nv
        elif v is not None:
            del out[e]
    return out


def mul_terms(a: dict, b: dict, weights=None, max_degree=None) -> dict:
    out: dict = {}
    if not a or not b:
        return out
    if max_degree is not None:
        bl = [(e, c, mono_degree(e, weights)) for e, c in b.items()]
        for ea, ca in a.items():
            da = mono_degree(ea, weights)
            for eb, cb, db in bl:
                if da + db > max_degree:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
    else:
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def compose_terms(terms: dict, images: list, nvars: int, weights=None, max_degree=None) -> dict:
    powers: list = [dict() for _ in images]
    one = {(0,) * nvars: Fraction(1)}

    def power(i: int, k: int) -> dict:
        cache = powers[i]
        if k == 0:
            return one
        if k not in cache:
            prev = power(i, k - 1)
            cache[k] = mul_terms(prev, images[i], weights, max_degree)
        return cache[k]

    out: dict = {}
    for e, c in terms.items():
        acc = {(0,) * nvars: c}
        for i, k in enumerate(e):
            if k:
                acc = mul_terms(acc, power(i, k), weights, max_degree)
                if not acc:
                    break
        for ee, cc in acc.items():
            v = out.get(ee)
            out[ee] = cc if v is None else v + cc
    return {e: c for e, c in out.items() if c}


# -- core-algebra operations -----------------------------------------------------


def _check_arity(f: Polynomial, w: WeightSystem):
    if f.nvars != w.n:
        raise ValueError(f"{f.nvars} variables but {w.n} weights")


def weighted_degree(f: Polynomial, w: WeightSystem):
    """Minimal weighted degree over the terms of f; ``math.inf`` for f = 0."""
    _check_arity(f, w)
    return f.min_degree(w.weights)


def is_quasihomogeneous(f: Polynomial, w: WeightSystem) -> bool:
    _check_arity(f, w)
    if f.is_zero():
        raise ValueError("zero polynomial has no type")
    return f.degrees(w.weights) == {w.degree}


def principal_part(f: Polynomial, w: WeightSystem) -> Polynomial:
    _check_arity(f, w)
    if f.is_zero():
        raise ValueError("zero polynomial has no principal part")
    return f.homogeneous_part(w.weights, f.min_degree(w.weights))


def nu_C(f: Polynomial, w: WeightSystem):
    """Normalized order deg(f)/d as an exact rational (``math.inf`` for 0)."""
    deg = weighted_degree(f, w)
    if deg == math.inf:
        return math.inf
    return Fraction(deg, w.degree)


def split_by(f: Polynomial, n_first: int) -> dict:
    """Group the terms by the exponents of the first ``n_first`` variables.

    Returns {head exponents: term dict over the remaining variables}.
    """
    out: dict = {}
    for e, c in f.terms.items():
        out.setdefault(e[:n_first], {})[e[n_first:]] = c
    return out


# -- small expression parser --------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    pass


def parse_polynomial(text: str, variables) -> Polynomial:
    """Parse '+', '-', '*', '/', '^' expressions with rational coefficients.

    Identifiers are variable names; ``zN`` (N an integer) not shadowed by a
    variable denotes the primitive root of unity exp(2 pi i/N).
    """
    variables = tuple(variables)
    tokens = []
    for num, ident, other in _TOKEN.findall(text):
        if num:
            tokens.append(("num", int(num)))
        elif ident:
            tokens.append(("id", ident))
        elif other.strip():
            tokens.append(("op", "**" if other == "^" else other))
    # fold '**' written as two '*'
    merged = []
    for tok in tokens:
        if tok == ("op", "*") and merged and merged[-1] == ("op", "*"):
            merged[-1] = ("op", "**")
        else:
            merged.append(tok)
    tokens = merged
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "*":
                val = val * rhs
            else:
                if len(rhs.terms) != 1 or rhs.constant_term() == 0:
                    raise ParseError(f"division by non-scalar in {text!r}")
                val = val / rhs.constant_term()
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "**"):
            take()
            kind, val = take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {text!r}")
            return base**val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(val, variables)
        if kind == "id":
            if val in variables:
                return Polynomial.var(val, variables)
            m = re.fullmatch(r"z(\d+)", val)
            if m:
                return Polynomial.constant(Cyclotomic.root(int(m.group(1))), variables)
            raise ParseError(f"unknown symbol {val!r} in {text!r}")
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ParseError(f"unbalanced parenthesis in {text!r}")
            return inner
        raise ParseError(f"unexpected token {val!r} in {text!r}")

    if not tokens:
        raise ParseError("empty polynomial expression")
    result = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return result
