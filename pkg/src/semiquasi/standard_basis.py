"""Standard bases in the local ring for a weighted local ordering.

Everything is computed modulo the monomials of weighted degree > D (the
truncation degree).  For a zero-dimensional ideal I this is harmless once the
lead ideal contains every monomial in a band of weighted degrees [e, D] of
width at least max(w): then all monomials of degree >= e lie in I (Nakayama),
so I + H_{>D} = I in the local ring.  That check is what "certified" means
below.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polynomial import (
    Polynomial,
    WeightSystem,
    is_quasihomogeneous,
    mono_degree,
    order_key,
)


class StandardBasisError(ArithmeticError):
    pass


class NotZeroDimensionalError(StandardBasisError):
    """Some variable has no pure power in the lead ideal up to the truncation."""


class TruncationError(StandardBasisError):
    """The truncation degree is too small for the requested computation."""


class SingularInputError(ValueError):
    """f0 does not have an isolated singularity."""


@dataclass(frozen=True)
class LocalOrder:
    """Weighted local order: higher degree is smaller, revlex tie-break."""

    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))

    @classmethod
    def of(cls, w) -> "LocalOrder":
        return cls(w.weights if isinstance(w, WeightSystem) else tuple(w))

    def key(self, exps) -> tuple:
        return _key(exps, self.weights)

    def degree(self, exps) -> int:
        return mono_degree(exps, self.weights)

    def lead(self, terms: dict):
        return min(terms, key=lambda e: _key(e, self.weights))

    def sorted(self, monomials) -> list:
        return sorted(monomials, key=lambda e: _key(e, self.weights))

    def greater(self, a, b) -> bool:
        return self.key(a) < self.key(b)


@lru_cache(maxsize=1 << 18)
def _key(exps, weights):
    return order_key(exps, weights)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Elt:
    """Working polynomial: term dict with cached lead data."""

    __slots__ = ("terms", "lead", "lc", "ecart")

    def __init__(self, terms: dict, order: LocalOrder):
        self.terms = terms
        self.lead = order.lead(terms)
        self.lc = terms[self.lead]
        top = max(order.degree(e) for e in terms)
        self.ecart = top - order.degree(self.lead)


def _shift_sub(h: dict, c, shift, g: dict, weights, D) -> dict:
    """h - c * x^shift * g, dropping terms of degree > D."""
    out = dict(h)
    sd = mono_degree(shift, weights)
    for e, v in g.items():
        ne = tuple(a + b for a, b in zip(e, shift))
        if sd + mono_degree(e, weights) > D:
            continue
        old = out.get(ne)
        nv = -c * v if old is None else old - c * v
        if nv:
            out[ne] = nv
        elif old is not None:
            del out[ne]
    return out


def _mora_nf(h: dict, basis: list, order: LocalOrder, D: int) -> dict:
    """Lead-reduce h with Mora's ecart rule (tail untouched)."""
    T = list(basis)
    while h:
        cur = _Elt(h, order)
        cands = [g for g in T if _divides(g.lead, cur.lead)]
        if not cands:
            return h
        g = min(cands, key=lambda g: g.ecart)
        if g.ecart > cur.ecart:
            T.append(cur)
        h = _shift_sub(h, cur.lc / g.lc, _sub(cur.lead, g.lead), g.terms, order.weights, D)
    return h


def _truncate(terms: dict, weights, D) -> dict:
    return {e: c for e, c in terms.items() if mono_degree(e, weights) <= D}


@dataclass(frozen=True)
class Staircase:
    monomials: tuple
    weights: tuple

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def index(self, exps) -> int:
        return self.monomials.index(tuple(exps))

    def degrees(self) -> list:
        return [mono_degree(m, self.weights) for m in self.monomials]


@dataclass(frozen=True)
class StandardBasis:
    generators: tuple  # Polynomials, lead coefficient 1, fully reduced
    leads: tuple
    ideal: tuple  # the input generators
    order: LocalOrder
    truncation: int
    variables: tuple
    _staircase: list = field(default_factory=list, compare=False, repr=False)

    def staircase(self) -> Staircase:
        if not self._staircase:
            self._staircase.append(_enumerate_staircase(self.leads, self.order, self.truncation))
        return self._staircase[0]

    @property
    def dimension(self) -> int:
        return self.staircase().dimension


def _monomials_up_to(weights, D):
    """All exponent vectors with weighted degree <= D."""
    n = len(weights)

    def rec(i, budget):
        if i == n:
            yield ()
            return
        for k in range(budget // weights[i] + 1):
            for rest in rec(i + 1, budget - k * weights[i]):
                yield (k,) + rest

    return rec(0, D)


def monomials_of_degree(weights, e: int) -> list:
    n = len(weights)
    out = []

    def rec(i, budget, acc):
        if i == n - 1:
            if budget % weights[i] == 0:
                out.append(tuple(acc) + (budget // weights[i],))
            return
        for k in range(budget // weights[i] + 1):
            acc.append(k)
            rec(i + 1, budget - k * weights[i], acc)
            acc.pop()

    if e < 0:
        return []
    rec(0, e, [])
    return out


def _enumerate_staircase(leads, order: LocalOrder, D) -> Staircase:
    mons = [m for m in _monomials_up_to(order.weights, D) if not any(_divides(l, m) for l in leads)]
    return Staircase(tuple(order.sorted(mons)), order.weights)


def _certify(leads, order: LocalOrder, D: int):
    w = order.weights
    for i in range(len(w)):
        if not any(all(l[j] == 0 for j in range(len(w)) if j != i) for l in leads):
            raise NotZeroDimensionalError(
                f"no power of variable {i + 1} lies in the lead ideal up to degree {D}"
            )
    stair = _enumerate_staircase(leads, order, D)
    top = max(stair.degrees(), default=-1)
    if D - top < max(w):
        raise TruncationError(
            f"truncation degree {D} too small: staircase reaches degree {top}"
        )
    return stair


def default_truncation(w: WeightSystem) -> int:
    return w.socle_degree + w.degree


def standard_basis(gens: Sequence[Polynomial], order, D: int | None = None) -> StandardBasis:
    """Reduced standard basis of (gens) + H_{>D} in the local ring."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise NotZeroDimensionalError("zero ideal")
    order = order if isinstance(order, LocalOrder) else LocalOrder.of(order)
    variables = gens[0].variables
    w = order.weights
    if D is None:
        raise ValueError("truncation degree required")

    basis: list = []
    pairs: list = []

    def add(terms):
        new = _Elt(terms, order)
        for i, g in enumerate(basis):
            pairs.append((i, len(basis)))
        basis.append(new)

    for g in gens:
        t = _truncate(dict(g.terms), w, D)
        t = _mora_nf(t, basis, order, D)
        if t:
            add(t)
    while pairs:
        # process pairs with the smallest lcm degree first
        pairs.sort(key=lambda p: order.degree(_lcm(basis[p[0]].lead, basis[p[1]].lead)))
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        l = _lcm(a.lead, b.lead)
        if order.degree(l) > D:
            continue
        if all(x == 0 or y == 0 for x, y in zip(a.lead, b.lead)):
            continue  # coprime leads (product criterion)
        s = {}
        s = _shift_sub(s, -1 / a.lc, _sub(l, a.lead), a.terms, w, D)
        s = _shift_sub(s, 1 / b.lc, _sub(l, b.lead), b.terms, w, D)
        s = _mora_nf(s, basis, order, D)
        if s:
            add(s)

    # minimalize
    keep = []
    for i, g in enumerate(basis):
        dominated = False
        for j, h in enumerate(basis):
            if j == i:
                continue
            if _divides(h.lead, g.lead) and (h.lead != g.lead or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    keep.sort(key=lambda g: order.key(g.lead))
    leads = tuple(g.lead for g in keep)
    _certify(leads, order, D)

    # tail-reduce and normalize
    reduced = []
    for g in keep:
        others = [h for h in keep if h is not g]
        tail = {e: c for e, c in g.terms.items() if e != g.lead}
        tail = _full_reduce(tail, others, order, D)[0]
        terms = {e: c / g.lc for e, c in tail.items()}
        terms[g.lead] = Fraction(1)
        reduced.append(Polynomial._raw(variables, terms))
    return StandardBasis(tuple(reduced), leads, tuple(gens), order, D, variables)


def _full_reduce(h: dict, basis: list, order: LocalOrder, D: int, transcript=None):
    """Reduce every term; returns (remainder, quotient dicts per basis element).

    Terminates because each step strictly lowers the lead in a well order on
    the finitely many monomials of degree <= D.
    """
    w = order.weights
    h = _truncate(h, w, D)
    rem: dict = {}
    while h:
        lm = order.lead(h)
        c = h[lm]
        for idx, g in enumerate(basis):
            gl = g.lead if isinstance(g, _Elt) else g[0]
            if _divides(gl, lm):
                gt = g.terms if isinstance(g, _Elt) else g[1]
                glc = gt[gl]
                q = c / glc
                sh = _sub(lm, gl)
                h = _shift_sub(h, q, sh, gt, w, D)
                if transcript is not None:
                    transcript[idx][sh] = transcript[idx].get(sh, 0) + q
                break
        else:
            rem[lm] = c
            del h[lm]
    return rem, transcript


@dataclass(frozen=True)
class Reduction:
    remainder: Polynomial
    quotients: tuple  # one Polynomial per basis generator


def mora_reduce(f: Polynomial, sb: StandardBasis, transcript: bool = False):
    """Normal form of f modulo the standard basis.

    With ``transcript=True`` returns a :class:`Reduction` whose quotients q_i
    satisfy f = sum q_i g_i + r modulo degree > D; this identity is
    re-multiplied and checked before returning.
    """
    if f.variables != sb.variables:
        raise ValueError("variable mismatch between polynomial and standard basis")
    w = sb.order.weights
    D = sb.truncation
    if not f.is_zero() and f.min_degree(w) > D:
        raise TruncationError(f"input has weighted degree {f.min_degree(w)} > truncation {D}")
    pairs = [(g.lead_exps, g.terms) for g in map(_Marked.of(sb), sb.generators)]
    tr = [dict() for _ in pairs] if transcript else None
    rem, tr = _full_reduce(dict(f.terms), pairs, sb.order, D, tr)
    r = Polynomial._raw(f.variables, rem)
    if not transcript:
        return r
    qs = tuple(Polynomial(f.variables, q) for q in tr)
    acc = r
    for q, g in zip(qs, sb.generators):
        acc = acc + q * g
    diff = (f - acc).truncate(w, D)
    if not diff.is_zero():
        raise AssertionError("division transcript does not re-multiply to the input")
    return Reduction(r, qs)


class _Marked:
    __slots__ = ("lead_exps", "terms")

    def __init__(self, lead_exps, terms):
        self.lead_exps = lead_exps
        self.terms = terms

    @staticmethod
    def of(sb: StandardBasis):
        return lambda g: _Marked(sb.order.lead(g.terms), g.terms)


def monomial_basis(sb: StandardBasis, certify: bool = True) -> Staircase:
    stair = sb.staircase()
    if certify:
        inside = set(stair.monomials)
        n = len(sb.variables)
        for m in stair.monomials:
            for i in range(n):
                e = list(m)
                e[i] += 1
                p = Polynomial._raw(sb.variables, {tuple(e): Fraction(1)})
                if sb.order.degree(tuple(e)) > sb.truncation:
                    continue
                r = mora_reduce(p, sb)
                if any(t not in inside for t in r.terms):
                    raise AssertionError("staircase is not closed under multiplication")
    return stair


def hessian(f: Polynomial) -> Polynomial:
    grads = f.gradient()
    n = f.nvars
    H = [[grads[i].diff(j) for j in range(n)] for i in range(n)]
    return determinant(H, f.variables)


def determinant(mat: list, variables) -> Polynomial:
    """Leibniz expansion; matrices here are tiny."""
    n = len(mat)
    total = Polynomial.zero(variables)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        term = Polynomial.constant(sign, variables)
        for i, j in enumerate(perm):
            term = term * mat[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def jacobian_ideal(f: Polynomial) -> list:
    return f.gradient()


def milnor_basis(f0: Polynomial, w: WeightSystem, D: int | None = None) -> StandardBasis:
    default = default_truncation(w)
    D = default if D is None else D
    try:
        return standard_basis(jacobian_ideal(f0), LocalOrder.of(w), D)
    except NotZeroDimensionalError as exc:
        if D < default:
            # the default bound always suffices for an isolated singularity
            try:
                standard_basis(jacobian_ideal(f0), LocalOrder.of(w), default)
            except NotZeroDimensionalError:
                pass
            else:
                raise TruncationError(f"degree bound {D} is too small to certify the Milnor algebra") from exc
        raise SingularInputError(f"f0 does not have an isolated singularity: {exc}") from exc


def hessian_socle(f0: Polynomial, w: WeightSystem):
    """(hessian, socle monomial, scale) with hess f0 = scale * socle in the Milnor algebra."""
    if not is_quasihomogeneous(f0, w):
        raise ValueError("f0 must be quasihomogeneous")
    sb = milnor_basis(f0, w)
    stair = sb.staircase()
    top = [m for m in stair.monomials if mono_degree(m, w.weights) == w.socle_degree]
    if len(top) != 1:
        raise SingularInputError("socle degree piece of the staircase is not one-dimensional")
    h = hessian(f0)
    r = mora_reduce(h, sb)
    if r.is_zero():
        raise SingularInputError("hessian vanishes in the Milnor algebra")
    if set(r.terms) != {top[0]}:
        raise AssertionError("hessian does not reduce to a multiple of the socle monomial")
    return h, top[0], r.terms[top[0]]


def filtered_quotient_dim(gens: Sequence[Polynomial], m: int, w: WeightSystem, D: int | None = None) -> int:
    D = default_truncation(w) if D is None else D
    sb = standard_basis(gens, LocalOrder.of(w), D)
    return quotient_dim_below(sb, m * w.w_min)


def quotient_dim_below(sb: StandardBasis, bound: int) -> int:
    """Number of staircase monomials of weighted degree < bound."""
    return sum(1 for d in sb.staircase().degrees() if d < bound)
