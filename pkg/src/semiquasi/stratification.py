"""Hilbert functions of Tjurina algebras and the flattening strata of T_-."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import sympy

from . import linalg
from .kodaira_spencer import KSMatrix, VectorField, t_monomials_in_range
from .polynomial import Polynomial, mono_degree
from .standard_basis import LocalOrder, default_truncation, quotient_dim_below, standard_basis
from .unfolding import NegativeUnfolding, specialize

DEFAULT_SEED = 20240607


class ConsistencyError(AssertionError):
    """The standard-basis and rank computations of tau disagree."""


# -- levels and the mu vector --------------------------------------------------------


def lie_bound(u: NegativeUnfolding) -> int:
    w = u.w
    return ((w.n - 1) * w.degree - 2 * sum(w.weights)) // w.w_min


def level_cutoffs(u: NegativeUnfolding) -> list:
    """Degree cutoffs d + i*w_min, i = 1..s+1 (so m*w_min for m = d/w + i)."""
    s = lie_bound(u)
    return [u.w.degree + i * u.w.w_min for i in range(1, s + 2)]


def level_columns(u: NegativeUnfolding) -> list:
    """Column index sets {j : w(t_j) > d - m*w_min} per level."""
    d = u.w.degree
    return [[j for j, wt in enumerate(u.t_weights) if wt > d - c] for c in level_cutoffs(u)]


def mu_vector(u: NegativeUnfolding) -> tuple:
    return tuple(quotient_dim_below(u.milnor.sb, c) for c in level_cutoffs(u))


@dataclass(frozen=True)
class HilbertFunction:
    values: tuple
    ranks: tuple

    def __iter__(self):
        return iter(self.values)


def tau_at_point(u: NegativeUnfolding, t: Sequence, D: int | None = None):
    """(tau, Hilbert function) from a standard basis of (F_t, dF_t)."""
    Ft = specialize(u, t)
    D = default_truncation(u.w) if D is None else D
    sb = standard_basis([Ft] + Ft.gradient(), LocalOrder.of(u.w), D)
    values = tuple(quotient_dim_below(sb, c) for c in level_cutoffs(u))
    mu = mu_vector(u)
    return sb.dimension, HilbertFunction(values, tuple(m - v for m, v in zip(mu, values)))


def rank_tau_at_point(M: KSMatrix, u: NegativeUnfolding, t: Sequence) -> HilbertFunction:
    vals = M.evaluate(t)
    ranks = []
    for cols in level_columns(u):
        sub = [[row[j] for j in cols] for row in vals]
        ranks.append(linalg.rank(sub) if cols else 0)
    mu = mu_vector(u)
    return HilbertFunction(tuple(m - r for m, r in zip(mu, ranks)), tuple(ranks))


# -- t-polynomial normalization and sympy bridges -------------------------------------


def t_order_key(e) -> tuple:
    """Ordinary degree ascending, reverse lex: the canonical order for t-polynomials."""
    return (sum(e), tuple(reversed(e)))


def normalize_poly(p: Polynomial) -> Polynomial:
    """Clear denominators, remove integer content, make the leading coefficient positive."""
    if p.is_zero():
        return p
    coeffs = list(p.terms.values())
    if not all(isinstance(c, Fraction) for c in coeffs):
        return p
    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    lead = min(p.terms, key=t_order_key)
    sign = -1 if p.terms[lead] < 0 else 1
    scale = Fraction(den * sign, g)
    return Polynomial(p.variables, {e: c * scale for e, c in p.terms.items()})


def format_t(p: Polynomial) -> str:
    return p.format(tuple(1 for _ in p.variables))


def _gens(names):
    return sympy.symbols(names) if len(names) > 1 else (sympy.Symbol(names[0]),)


def to_sympy(p: Polynomial, gens) -> sympy.Poly:
    data = {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(data, *gens, domain=sympy.QQ) if data else sympy.Poly(0, *gens, domain=sympy.QQ)


def from_sympy(q, names) -> Polynomial:
    q = sympy.Poly(q, *_gens(names), domain=sympy.QQ)
    return Polynomial(
        names, {tuple(e): Fraction(int(c.p), int(c.q)) for e, c in q.terms() if c != 0}
    )


def _groebner(polys: list, names) -> list:
    gens = _gens(names)
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    G = sympy.groebner([to_sympy(p, gens).as_expr() for p in polys], *gens, order="grevlex", domain=sympy.QQ)
    return [from_sympy(g, names) for g in G.exprs]


def _reduce(p: Polynomial, basis: list, names) -> Polynomial:
    if not basis or p.is_zero():
        return p
    gens = _gens(names)
    _, r = sympy.reduced(to_sympy(p, gens).as_expr(), [to_sympy(b, gens).as_expr() for b in basis], *gens, order="grevlex", domain=sympy.QQ)
    return from_sympy(r, names)


def _in_radical(p: Polynomial, basis: list, names) -> bool:
    if p.is_zero():
        return True
    if not basis:
        return False
    gens = _gens(names)
    y = sympy.Symbol("_rabinowitsch")
    eqs = [to_sympy(b, gens).as_expr() for b in basis] + [1 - y * to_sympy(p, gens).as_expr()]
    G = sympy.groebner(eqs, *gens, y, order="grevlex", domain=sympy.QQ)
    return list(G.exprs) == [1]


def _poly_gcd(polys: list, names) -> Polynomial:
    gens = _gens(names)
    g = None
    for p in polys:
        sp = to_sympy(p, gens)
        g = sp if g is None else sympy.gcd(g, sp)
    return from_sympy(g, names)


def _sqf(p: Polynomial, names) -> Polynomial:
    return normalize_poly(from_sympy(sympy.sqf_part(to_sympy(p, _gens(names))), names))


def _poly_div(p: Polynomial, q: Polynomial, names) -> Polynomial:
    gens = _gens(names)
    quo, rem = sympy.div(to_sympy(p, gens), to_sympy(q, gens))
    assert rem.is_zero
    return from_sympy(quo, names)


# -- minors ------------------------------------------------------------------------------


def _det(mat: list, names) -> Polynomial:
    n = len(mat)
    if n == 0:
        return Polynomial.constant(1, names)
    if n == 1:
        return mat[0][0]
    total = Polynomial.zero(names)
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(sub, names)
        total = total + term if j % 2 == 0 else total - term
    return total


def minors(rows: list, cols: Sequence[int], size: int, names) -> list:
    """All size x size minors of the column submatrix, row-major order, nonzero only."""
    out = []
    if size == 0:
        return [Polynomial.constant(1, names)]
    for rs in itertools.combinations(range(len(rows)), size):
        for cs in itertools.combinations(cols, size):
            m = _det([[rows[r][c] for c in cs] for r in rs], names)
            if not m.is_zero():
                out.append(m)
    return out


def _dedupe(polys: list) -> list:
    seen, out = set(), []
    for p in polys:
        p = normalize_poly(p)
        key = tuple(sorted(p.terms.items()))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return sorted(out, key=lambda p: (len(p.terms), [t_order_key(e) for e in sorted(p.terms, key=t_order_key)]))


# -- strata ------------------------------------------------------------------------------


@dataclass
class Stratum:
    ranks: tuple
    hilbert: tuple
    equations: list  # reduced Groebner basis (grevlex) of the minor ideal
    inequations: list  # each must be nonzero
    alternatives: list  # lists; in each, at least one entry is nonzero
    samples: list = field(default_factory=list)
    status: str = "witnessed"  # or "undetermined"

    def contains(self, t: Sequence) -> bool:
        if any(e.evaluate(t) for e in self.equations):
            return False
        if any(not q.evaluate(t) for q in self.inequations):
            return False
        return all(any(a.evaluate(t) for a in alt) for alt in self.alternatives)


@dataclass
class StrataReport:
    sigma: list
    strata: list
    mu: tuple
    discovered_by_sampling: list
    empty_candidates: list

    def stratum(self, ranks) -> Stratum:
        for s in self.strata:
            if s.ranks == tuple(ranks):
                return s
        raise KeyError(ranks)

    def locate(self, t) -> Stratum | None:
        hits = [s for s in self.strata if s.contains(t)]
        return hits[0] if len(hits) == 1 else None


def sample_points(k: int, seed: int = DEFAULT_SEED, n_random: int = 500, corner_limit: int = 8) -> list:
    rng = random.Random(seed)
    pts = []
    if k <= corner_limit:
        pts.extend(tuple(Fraction(v) for v in p) for p in itertools.product((0, 1, -1), repeat=k))
    for _ in range(n_random):
        pts.append(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(k)))
    return pts


def _rank_vector(M: KSMatrix, cols_per_level, t) -> tuple:
    vals = M.evaluate(t)
    out = []
    for cols in cols_per_level:
        out.append(linalg.rank([[row[j] for j in cols] for row in vals]) if cols else 0)
    return tuple(out)


def _describe(M: KSMatrix, cols_per_level, ranks, names):
    rows = [list(r) for r in M.entries]
    raw_eq = []
    for cols, r in zip(cols_per_level, ranks):
        raw_eq.extend(minors(rows, cols, r + 1, names))
    eqs = _dedupe(_groebner(raw_eq, names))
    ineqs, alts = [], []
    for cols, r in zip(cols_per_level, ranks):
        if r == 0:
            continue
        ms = [_reduce(m, eqs, names) for m in minors(rows, cols, r, names)]
        ms = [m for m in ms if not m.is_zero()]
        if not ms:
            return eqs, None, None  # the level cannot reach rank r on V(eqs)
        g = normalize_poly(_poly_gcd(ms, names))
        if g.terms and not (len(g.terms) == 1 and not any(next(iter(g.terms)))):
            ineqs.append(_sqf(g, names))
            rest = _dedupe([_sqf(_poly_div(m, g, names), names) for m in ms])
            if not any(_is_unit(p) for p in rest):
                alts.append(rest)
        else:
            alts.append(_dedupe([_sqf(m, names) for m in ms]))
    ineqs = _dedupe(ineqs)
    return eqs, ineqs, _prune_alternatives(eqs, ineqs, alts, names)


def _is_unit(p: Polynomial) -> bool:
    return len(p.terms) == 1 and not any(next(iter(p.terms)))


def _prune_alternatives(eqs, ineqs, alts, names) -> list:
    """Drop "one of these is nonzero" lists implied by the remaining conditions.

    A list A is implied by a condition C when, on V(eqs), the vanishing of all
    of A forces C to fail; checked by radical membership.
    """
    prod = Polynomial.constant(1, names)
    for q in ineqs:
        prod = prod * q
    kept = []
    for i, A in enumerate(alts):
        if any(set(map(_key, A)) == set(map(_key, B)) for B in kept):
            continue
        base = list(eqs) + list(A)
        if ineqs and _in_radical(prod, _groebner(base, names), names):
            continue
        others = kept + [B for B in alts[i + 1:]]
        if any(B is not A and len(B) <= len(A) and all(_in_radical(b, _groebner(base, names), names) for b in B)
               for B in others):
            continue
        kept.append(A)
    return kept


def _key(p: Polynomial):
    return tuple(sorted(p.terms.items()))


def _is_empty(eqs, ineqs, alts, names) -> bool:
    """V(eqs) minus the zero sets of the inequations is empty (Nullstellensatz)."""
    for choice in itertools.product(*alts) if alts else [()]:
        prod = Polynomial.constant(1, names)
        for p in list(ineqs) + list(choice):
            prod = prod * p
        if not _in_radical(prod, eqs, names):
            return False
    return True


def strata_symbolic(M: KSMatrix, u: NegativeUnfolding, seed: int = DEFAULT_SEED, n_random: int = 500) -> StrataReport:
    names = u.t_names
    mu = mu_vector(u)
    cols = level_columns(u)
    k = u.k
    if k == 0:
        st = Stratum(tuple(0 for _ in cols), mu, [], [], [], [()], "witnessed")
        return StrataReport([st.ranks], [st], mu, [st.ranks], [])
    found: dict = {}
    for t in sample_points(k, seed, n_random):
        found.setdefault(_rank_vector(M, cols, t), []).append(t)
    top = [max(r[i] for r in found) for i in range(len(cols))]
    candidates = set(found)
    for r in itertools.product(*(range(m + 1) for m in top)):
        ok = all(r[i] <= r[i + 1] <= r[i] + len(cols[i + 1]) - len(cols[i]) for i in range(len(r) - 1))
        if ok:
            candidates.add(r)
    strata, empty = [], []
    for r in sorted(candidates):
        eqs, ineqs, alts = _describe(M, cols, r, names)
        hil = tuple(m - x for m, x in zip(mu, r))
        if ineqs is None:
            empty.append(r)
            continue
        if r in found:
            generic = max(found[r], key=lambda t: sum(1 for c in t if c))
            samples = found[r][:4] + ([generic] if generic not in found[r][:4] else [])
            st = Stratum(r, hil, eqs, ineqs, alts, samples, "witnessed")
            for t in st.samples:
                if not st.contains(t):
                    raise ConsistencyError(f"sample {t} violates the description of stratum {r}")
            strata.append(st)
        elif _is_empty(eqs, ineqs, alts, names):
            empty.append(r)
        else:
            strata.append(Stratum(r, hil, eqs, ineqs, alts, [], "undetermined"))
    sigma = [s.ranks for s in strata if s.status == "witnessed"]
    return StrataReport(sigma, strata, mu, sorted(found), empty)


# -- invariants of L_+ -------------------------------------------------------------------


_INVARIANT_CACHE: dict = {}


def lplus_invariants(M: KSMatrix, Dinv: int | None = None) -> list:
    """Minimal algebra generators of the L_+-invariants down to degree -Dinv."""
    key = (M.entries, M.t_weights, Dinv)
    if key not in _INVARIANT_CACHE:
        _INVARIANT_CACHE[key] = _lplus_invariants(M, Dinv)
    return list(_INVARIANT_CACHE[key])


def _lplus_invariants(M: KSMatrix, Dinv: int | None) -> list:
    tw = M.t_weights
    names = M.t_names
    k = len(tw)
    if k == 0:
        return []
    Dinv = 2 * abs(min(tw)) if Dinv is None else Dinv
    fields = [f for f in M.fields()[1:] if not f.is_zero()]
    invariants: dict = {}  # degree -> list of Polynomials (basis of the kernel)
    gens: list = []
    for D in range(1, Dinv + 1):
        mons = t_monomials_in_range(tw, -D - 1, -D)
        if not mons:
            continue
        polys = [Polynomial.monomial(m, names) for m in mons]
        images = [[f.apply(p) for f in fields] for p in polys]
        keys = sorted({(i, e) for img in images for i, q in enumerate(img) for e in q.terms})
        mat = [[img[i].coeff(e) for img in images] for i, e in keys]
        kernel = linalg.nullspace(mat, len(mons)) if keys else [
            [Fraction(int(a == b)) for a in range(len(mons))] for b in range(len(mons))
        ]
        basis = [
            Polynomial(names, {m: c for m, c in zip(mons, vec) if c}) for vec in kernel
        ]
        invariants[-D] = basis
        # products of lower generators landing in this degree
        products = []
        for g in gens:
            dg = next(iter(g.degrees(tw)))
            for q in invariants.get(-D - dg, []):
                products.append(g * q)
        vecs = [[p.coeff(m) for m in mons] for p in products]
        for b in basis:
            v = [b.coeff(m) for m in mons]
            if not linalg.in_span(vecs, v):
                gens.append(normalize_poly(b))
                vecs.append(v)
    return gens


# -- point classification -----------------------------------------------------------------


@dataclass
class Classification:
    t: tuple
    ranks: tuple
    hilbert: tuple
    tau: int
    normal_form: Polynomial
    invariant_values: list
    stratum_confirmed: bool | None


def classify_point(u: NegativeUnfolding, M: KSMatrix, t: Sequence, strata: StrataReport | None = None,
                   invariants: list | None = None) -> Classification:
    t = tuple(Fraction(c) if isinstance(c, (int, str)) else c for c in t)
    tau, hf = tau_at_point(u, t)
    hr = rank_tau_at_point(M, u, t)
    if hf.values != hr.values:
        raise ConsistencyError(f"tau via standard basis {hf.values} differs from rank formula {hr.values}")
    if tau != u.milnor.mu - linalg.rank(M.evaluate(t)):
        raise ConsistencyError("tau differs from mu - rank M(t)")
    confirmed = None
    if strata is not None:
        try:
            confirmed = strata.stratum(hf.ranks).contains(t)
        except KeyError:
            confirmed = False
    inv = invariants if invariants is not None else lplus_invariants(M)
    return Classification(t, hf.ranks, hf.values, tau, specialize(u, t), [p.evaluate(t) for p in inv], confirmed)
