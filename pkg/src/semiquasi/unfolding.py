"""Semiuniversal unfolding of negative weight and reduction to its parameters."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .polynomial import (
    Polynomial,
    WeightSystem,
    compose_terms,
    is_quasihomogeneous,
    mono_degree,
    principal_part,
)
from .standard_basis import (
    StandardBasis,
    Staircase,
    TruncationError,
    default_truncation,
    milnor_basis,
    monomial_basis,
    monomials_of_degree,
)


class PrincipalPartError(ValueError):
    pass


@dataclass(frozen=True)
class MilnorData:
    f0: Polynomial
    w: WeightSystem
    sb: StandardBasis
    basis: Staircase

    @property
    def mu(self) -> int:
        return self.basis.dimension

    @property
    def variables(self) -> tuple:
        return self.f0.variables


def milnor_data(f0: Polynomial, w: WeightSystem, D: int | None = None) -> MilnorData:
    if not is_quasihomogeneous(f0, w):
        raise PrincipalPartError(f"{f0} is not quasihomogeneous of type {w.degree}; {w.weights}")
    sb = milnor_basis(f0, w, D)
    return MilnorData(f0, w, sb, monomial_basis(sb))


class GradedJacobian:
    """Per-degree splitting P_e = j(f0)_e + span(staircase_e).

    ``decompose`` writes a homogeneous x-polynomial of degree e as
    sum_i a_i * df0/dx_i + r with r supported on staircase monomials.  The
    a_i are not unique; a fixed choice of independent columns makes them
    deterministic.
    """

    def __init__(self, md: MilnorData):
        self.md = md
        self.w = md.w
        self.grads = [dict(g.terms) for g in md.f0.gradient()]
        self._cache: dict = {}

    def _setup(self, e: int):
        if e in self._cache:
            return self._cache[e]
        wts = self.w.weights
        rows = monomials_of_degree(wts, e)
        row_index = {m: i for i, m in enumerate(rows)}
        cols = []  # ("s", monomial) or ("j", i, gamma)
        vecs = []
        for m in self.md.basis.monomials:
            if mono_degree(m, wts) == e:
                cols.append(("s", m))
                v = [Fraction(0)] * len(rows)
                v[row_index[m]] = Fraction(1)
                vecs.append(v)
        for i, g in enumerate(self.grads):
            for gamma in monomials_of_degree(wts, e - self.w.degree + wts[i]):
                cols.append(("j", i, gamma))
                v = [Fraction(0)] * len(rows)
                for ex, c in g.items():
                    v[row_index[tuple(a + b for a, b in zip(ex, gamma))]] += c
                vecs.append(v)
        if not rows:
            self._cache[e] = (rows, row_index, [], None)
            return self._cache[e]
        # matrix with columns vecs: rows x cols
        mat = [[vecs[c][r] for c in range(len(vecs))] for r in range(len(rows))]
        chosen = linalg.column_basis(mat, len(vecs))
        if len(chosen) != len(rows):
            raise AssertionError(f"degree {e} piece not spanned by jacobian and staircase")
        square = [[mat[r][c] for c in chosen] for r in range(len(rows))]
        inv = linalg.inverse(square)
        entry = (rows, row_index, [cols[c] for c in chosen], inv)
        self._cache[e] = entry
        return entry

    def decompose(self, terms: dict, e: int):
        """Split a degree-e term dict; returns (list of n a_i dicts, r dict)."""
        rows, row_index, chosen, inv = self._setup(e)
        n = self.w.n
        a = [dict() for _ in range(n)]
        r: dict = {}
        if not terms:
            return a, r
        vec = [Fraction(0)] * len(rows)
        for m, c in terms.items():
            vec[row_index[m]] = c
        coeffs = linalg.mat_vec(inv, vec)
        for col, c in zip(chosen, coeffs):
            if not c:
                continue
            if col[0] == "s":
                r[col[1]] = c
            else:
                a[col[1]][col[2]] = c
        return a, r


@dataclass(frozen=True)
class NegativeUnfolding:
    milnor: MilnorData
    upper: tuple  # exponent tuples m_1..m_k
    t_weights: tuple  # w(t_i) = d - deg(m_i) < 0
    t_names: tuple
    F: Polynomial  # over x variables + t variables

    @property
    def k(self) -> int:
        return len(self.upper)

    @property
    def f0(self) -> Polynomial:
        return self.milnor.f0

    @property
    def w(self) -> WeightSystem:
        return self.milnor.w

    @property
    def x_names(self) -> tuple:
        return self.milnor.variables

    @property
    def all_weights(self) -> tuple:
        return self.w.weights + self.t_weights

    @property
    def upper_degrees(self) -> tuple:
        return tuple(mono_degree(m, self.w.weights) for m in self.upper)

    @cached_property
    def jacobian(self) -> GradedJacobian:
        return GradedJacobian(self.milnor)

    def t_var(self, j: int) -> Polynomial:
        return Polynomial.var(j, self.t_names)

    def upper_polynomials(self) -> list:
        return [Polynomial.monomial(m, self.x_names) for m in self.upper]


def negative_unfolding(f0: Polynomial, w: WeightSystem, D: int | None = None) -> NegativeUnfolding:
    md = milnor_data(f0, w, D)
    d = w.degree
    upper = tuple(m for m in md.basis.monomials if mono_degree(m, w.weights) > d)
    t_weights = tuple(d - mono_degree(m, w.weights) for m in upper)
    t_names = tuple(f"t{i + 1}" for i in range(len(upper)))
    clash = set(t_names) & set(f0.variables)
    if clash:
        raise ValueError(f"variable names {sorted(clash)} are reserved for parameters")
    names = f0.variables + t_names
    n = w.n
    terms = {e + (0,) * len(upper): c for e, c in f0.terms.items()}
    for j, m in enumerate(upper):
        te = [0] * len(upper)
        te[j] = 1
        terms[m + tuple(te)] = Fraction(1)
    return NegativeUnfolding(md, upper, t_weights, t_names, Polynomial._raw(names, terms))


def specialize(u: NegativeUnfolding, t: Sequence) -> Polynomial:
    if len(t) != u.k:
        raise ValueError(f"expected {u.k} parameters, got {len(t)}")
    out = dict(u.f0.terms)
    for m, c in zip(u.upper, t):
        c = Fraction(c) if isinstance(c, (int, str)) else c
        if c:
            out[m] = out.get(m, 0) + c
    return Polynomial(u.x_names, out)


@dataclass(frozen=True)
class Substitution:
    """x_i -> x_i - a_i, with every a_i of weighted degree > w_i."""

    degree: int
    shifts: tuple  # Polynomials over the working variables


@dataclass(frozen=True)
class ReductionResult:
    t: tuple
    transcript: tuple  # Substitutions in application order
    degree_reached: int
    variables: tuple

    def replay(self, f: Polynomial, weights) -> Polynomial:
        return apply_transcript(f, self.transcript, weights, self.degree_reached)


def _substitution_images(shifts: Sequence[dict], nvars: int) -> list:
    images = []
    for i in range(nvars):
        e = [0] * nvars
        e[i] = 1
        img = {tuple(e): Fraction(1)}
        if i < len(shifts):
            for ex, c in shifts[i].items():
                v = img.get(ex, 0) - c
                if v:
                    img[ex] = v
                else:
                    img.pop(ex, None)
        images.append(img)
    return images


def apply_transcript(f: Polynomial, transcript, weights, max_degree) -> Polynomial:
    terms = {e: c for e, c in f.terms.items() if mono_degree(e, weights) <= max_degree}
    for sub in transcript:
        images = _substitution_images([dict(p.terms) for p in sub.shifts], f.nvars)
        terms = compose_terms(terms, images, f.nvars, weights, max_degree)
    return Polynomial(f.variables, terms)


def normalize_graded(G: Polynomial, u: NegativeUnfolding, max_degree: int):
    """Core loop shared by numeric reduction and the symbolic induced action.

    G lives in the variables x followed by any number of parameters; grading
    is by x-degree only.  Returns (coefficient dicts over the parameters, one
    per upper monomial, transcript).
    """
    n = u.w.n
    wx = u.w.weights
    d = u.w.degree
    nv = G.nvars
    terms = {e: c for e, c in G.terms.items() if mono_degree(e, wx) <= max_degree}
    transcript = []
    result = {m: {} for m in u.upper}
    upper_set = set(u.upper)
    jac = u.jacobian
    for e in range(d + 1, max_degree + 1):
        part = {ex: c for ex, c in terms.items() if mono_degree(ex, wx) == e}
        if not part:
            continue
        groups: dict = {}
        for ex, c in part.items():
            groups.setdefault(ex[n:], {})[ex[:n]] = c
        shifts = [dict() for _ in range(n)]
        residue: dict = {}
        for tail, xpart in groups.items():
            a, r = jac.decompose(xpart, e)
            for i in range(n):
                for g, c in a[i].items():
                    shifts[i][g + tail] = c
            for m, c in r.items():
                residue[m + tail] = c
                if m not in upper_set:
                    raise AssertionError("staircase monomial above degree d outside upper set")
                result[m][tail] = c
        if any(shifts):
            images = _substitution_images(shifts, nv)
            terms = compose_terms(terms, images, nv, wx, max_degree)
            transcript.append(Substitution(e, tuple(Polynomial(G.variables, s) for s in shifts)))
            now = {ex: c for ex, c in terms.items() if mono_degree(ex, wx) == e}
            if now != residue:
                raise AssertionError(f"degree {e} not normalized by the substitution")
    low = {ex: c for ex, c in terms.items() if mono_degree(ex, wx) <= d}
    return result, transcript, low


def reduce_to_T_minus(f: Polynomial, u: NegativeUnfolding, D: int | None = None) -> ReductionResult:
    """Unique t with f right-equivalent to F_t by an Aut_{>0} coordinate change."""
    if f.variables != u.x_names:
        f = f.rename(u.x_names) if f.nvars == len(u.x_names) else f
        if f.variables != u.x_names:
            raise ValueError("variables do not match the unfolding")
    w = u.w
    if f.is_zero() or principal_part(f, w) != u.f0:
        raise PrincipalPartError("principal part of the input differs from f0")
    D = default_truncation(w) if D is None else D
    if u.k and D < max(u.upper_degrees):
        raise TruncationError(f"truncation {D} below the largest upper degree")
    coeffs, transcript, low = normalize_graded(f, u, D)
    if Polynomial(f.variables, low) != u.f0:
        raise AssertionError("coordinate changes disturbed the principal part")
    t = tuple(coeffs[m].get((), Fraction(0)) for m in u.upper)
    result = ReductionResult(t, tuple(transcript), D, f.variables)
    # replay check: the logged changes turn f into F_t up to degree D
    if result.replay(f, w.weights) != specialize(u, t).truncate(w.weights, D):
        raise AssertionError("transcript replay does not reproduce F_t")
    return result
