"""Graded symmetries of f0, their induced action on T_-, and orbit tests.

Conventions: an automorphism acts on functions by substitution,
phi(f) = f(phi_1(x), ..., phi_n(x)), so (phi o psi)(x_i) = psi_i(phi(x)).
The induced map is defined by phi(F_t) ~ F_{theta(phi)(t)} up to Aut_{>0},
which makes theta(phi o psi) = theta(phi) o theta(psi).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .kodaira_spencer import KSMatrix, VectorField, t_monomials_in_range
from .polynomial import Polynomial, WeightSystem, compose_terms, mono_degree
from .scalars import Cyclotomic, as_scalar
from .stratification import lplus_invariants, rank_tau_at_point, tau_at_point
from .unfolding import NegativeUnfolding, normalize_graded

UNDETERMINED = "undetermined"


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedAutomorphism:
    images: tuple  # Polynomials in the x variables
    name: str = ""

    @classmethod
    def diagonal(cls, factors: Sequence, variables, name: str = "") -> "GradedAutomorphism":
        imgs = []
        for i, c in enumerate(factors):
            imgs.append(Polynomial.var(i, variables) * as_scalar(c))
        return cls(tuple(imgs), name)

    @classmethod
    def identity(cls, variables) -> "GradedAutomorphism":
        return cls(tuple(Polynomial.var(i, variables) for i in range(len(variables))), "id")

    @property
    def variables(self) -> tuple:
        return self.images[0].variables

    def apply(self, f: Polynomial) -> Polynomial:
        n = len(self.images)
        if f.nvars == n:
            return Polynomial(f.variables, compose_terms(f.terms, [g.terms for g in self.images], n))
        # extra parameter variables are left alone
        nv = f.nvars
        imgs = []
        for i in range(nv):
            if i < n:
                imgs.append({e + (0,) * (nv - n): c for e, c in self.images[i].terms.items()})
            else:
                e = [0] * nv
                e[i] = 1
                imgs.append({tuple(e): Fraction(1)})
        return Polynomial(f.variables, compose_terms(f.terms, imgs, nv))

    def then(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """self o other: x_i -> other_i(self(x))."""
        return GradedAutomorphism(tuple(self.apply(g) for g in other.images))

    def format(self) -> str:
        return "(" + ", ".join(str(g) for g in self.images) + ")"


def check_graded(phi: GradedAutomorphism, w: WeightSystem):
    if len(phi.images) != w.n:
        raise GradingError(f"{len(phi.images)} images for {w.n} variables")
    for i, g in enumerate(phi.images):
        if g.is_zero() or g.degrees(w.weights) != {w.weights[i]}:
            raise GradingError(f"image of variable {i + 1} is not quasihomogeneous of degree {w.weights[i]}")
    for wt in sorted(set(w.weights)):
        idx = [i for i, v in enumerate(w.weights) if v == wt]
        block = []
        for i in idx:
            row = []
            for j in idx:
                e = [0] * w.n
                e[j] = 1
                row.append(phi.images[i].coeff(tuple(e)))
            block.append(row)
        if linalg.rank(block) != len(idx):
            raise GradingError(f"linear part on the weight-{wt} variables is singular")


def verify_automorphism(phi: GradedAutomorphism, f0: Polynomial, w: WeightSystem) -> bool:
    check_graded(phi, w)
    return phi.apply(f0) == f0


# -- induced action ------------------------------------------------------------------


@dataclass(frozen=True)
class InducedAction:
    components: tuple  # t-polynomials

    @property
    def k(self) -> int:
        return len(self.components)

    def __call__(self, t: Sequence) -> tuple:
        return tuple(c.evaluate(t) for c in self.components)

    def then(self, other: "InducedAction") -> "InducedAction":
        """self o other as maps: apply other first."""
        if not self.components:
            return self
        return InducedAction(tuple(c.compose(other.components) for c in self.components))

    @classmethod
    def identity(cls, names) -> "InducedAction":
        return cls(tuple(Polynomial.var(j, names) for j in range(len(names))))


def theta(phi: GradedAutomorphism, u: NegativeUnfolding) -> InducedAction:
    if not verify_automorphism(phi, u.f0, u.w):
        raise ValueError("map does not preserve f0")
    if u.k == 0:
        return InducedAction(())
    G = phi.apply(u.F)
    top = max(u.upper_degrees)
    coeffs, _, low = normalize_graded(G, u, top)
    comps = []
    for m in u.upper:
        comps.append(Polynomial(u.t_names, coeffs[m]))
    for j, c in enumerate(comps):
        if not c.is_zero() and c.degrees(u.t_weights) != {u.t_weights[j]}:
            raise ArithmeticError(f"component {j + 1} of the induced action is not quasihomogeneous")
    return InducedAction(tuple(comps))


# -- diagonal symmetries ------------------------------------------------------------------


def diagonal_exponent(f0: Polynomial) -> int:
    """Exponent of the group of diagonal symmetries of f0 (0 if infinite)."""
    import sympy
    from sympy.matrices.normalforms import smith_normal_form

    rows = [list(e) for e in f0.terms]
    mat = sympy.Matrix(rows)
    if mat.rank() < f0.nvars:
        return 0
    snf = smith_normal_form(mat, domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    return max(diag) if diag else 1


def enumerate_diagonal(f0: Polynomial, w: WeightSystem, N: int) -> list:
    ex = diagonal_exponent(f0)
    if ex == 0:
        raise ValueError("f0 has infinitely many diagonal symmetries")
    if N % ex:
        raise ValueError(f"conductor {N} is not a multiple of the required exponent {ex}")
    n = f0.nvars
    mons = list(f0.terms)
    out = []
    for e in _solutions(mons, n, N):
        factors = [Cyclotomic.root(N, k) for k in e]
        out.append(GradedAutomorphism.diagonal(factors, f0.variables, name=f"diag{e}"))
    return out


def _solutions(mons, n, N):
    """All e in (Z/N)^n with sum(alpha_i e_i) = 0 mod N for every alpha."""
    sols = []

    def rec(i, acc):
        if i == n:
            if all(sum(a * b for a, b in zip(m, acc)) % N == 0 for m in mons):
                sols.append(tuple(acc))
            return
        for v in range(N):
            acc.append(v)
            # prune monomials involving only the first i+1 variables
            if all(
                sum(a * b for a, b in zip(m, acc)) % N == 0
                for m in mons
                if not any(m[i + 1:])
            ):
                rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return sols


def diagonal_character(comps) -> list | None:
    """Per coordinate, the scalar c with t_j -> c t_j, or None if not diagonal."""
    out = []
    for j, p in enumerate(comps):
        e = tuple(1 if i == j else 0 for i in range(len(comps)))
        if set(p.terms) != {e}:
            return None
        out.append(p.terms[e])
    return out


def invariant_monomials(characters: list, k: int, max_degree: int) -> list:
    """Minimal generators of the monomials fixed by a diagonal group, total degree <= max_degree."""
    found = []
    for deg in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(k), deg):
            e = [0] * k
            for j in combo:
                e[j] += 1
            if any(all(a >= b for a, b in zip(e, g)) for g in found):
                if _decomposable(e, found):
                    continue
            if all(_char_value(ch, e) == 1 for ch in characters):
                found.append(tuple(e))
    return found


def _decomposable(e, found) -> bool:
    for g in found:
        rest = tuple(a - b for a, b in zip(e, g))
        if min(rest) < 0:
            continue
        if not any(rest) or rest in found or _decomposable(rest, found):
            return True
    return False


def _char_value(ch, e):
    v = Fraction(1)
    for c, a in zip(ch, e):
        v = v * c ** a if a else v
    return v


# -- group closure and right equivalence -------------------------------------------------------


@dataclass
class Closure:
    elements: list
    complete: bool


def group_closure(actions: Sequence[InducedAction], names, cap: int = 10_000) -> Closure:
    ident = InducedAction.identity(names)
    seen = {ident.components: ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for a in actions:
            h = a.then(g)
            if h.components not in seen:
                if len(seen) >= cap:
                    return Closure(list(seen.values()), False)
                seen[h.components] = h
                queue.append(h)
    return Closure(list(seen.values()), True)


def _as_point(t) -> tuple:
    return tuple(as_scalar(c) if isinstance(c, (int, str)) else c for c in t)


def orbit_equivalent_right(t, t2, gens: Sequence[GradedAutomorphism], u: NegativeUnfolding, cap: int = 10_000):
    t, t2 = _as_point(t), _as_point(t2)
    if t == t2:
        return True
    if _is_rational(t) and _is_rational(t2) and tau_at_point(u, t)[1] != tau_at_point(u, t2)[1]:
        return False
    cl = group_closure([theta(g, u) for g in gens], u.t_names, cap)
    if any(g(t) == t2 for g in cl.elements):
        return True
    return False if cl.complete else UNDETERMINED


def _is_rational(t) -> bool:
    return all(isinstance(c, Fraction) for c in t)


# -- contact equivalence -------------------------------------------------------------------------


def lplus_fields(M: KSMatrix, wmin: int) -> list:
    """C-basis of L_+: p * delta_i (i >= 2) of degree >= wmin, ordered by degree."""
    out = []
    names = M.t_names
    for i, f in enumerate(M.fields()):
        if i == 0 or f.is_zero():
            continue
        need = wmin - f.degree
        if need > 0:
            continue  # multipliers have degree <= 0
        mons = [(0,) * M.k] + t_monomials_in_range(M.t_weights, need - 1, -1)
        for m in mons:
            p = Polynomial.monomial(m, names)
            out.append(f.scale(p))
    out.sort(key=lambda v: v.degree)
    return out


def flow(v: VectorField, t: Sequence, c) -> tuple:
    """exp(c v) applied to the point t (a finite sum, v being nilpotent)."""
    return _apply_flow(_flow_series(v), tuple(t), c)


def _flow_series(v: VectorField) -> list:
    """Per coordinate, the list [t_j, v(t_j), v^2(t_j)/2!, ...] of t-polynomials."""
    out = []
    for j in range(v.k):
        term = Polynomial.var(j, v.components[0].variables)
        series = [term]
        n = 1
        while True:
            term = v.apply(term)
            if term.is_zero():
                break
            series.append(term * Fraction(1, _factorial(n)))
            n += 1
        out.append(series)
    return out


def _factorial(n: int) -> int:
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


def _apply_flow(series, t, c) -> tuple:
    out = []
    for s in series:
        acc = Fraction(0)
        cp = Fraction(1)
        for p in s:
            acc = acc + p.evaluate(t) * cp
            cp = cp * c
        out.append(acc)
    return tuple(out)


def lplus_normal_form(t, M: KSMatrix, wmin: int, fields: list | None = None, series: list | None = None):
    """Greedy exp(L_+) normalization, coordinates in decreasing weight.

    A field is used at coordinate j only if, at the current point, its flow
    leaves every earlier coordinate constant and moves t_j linearly with a
    nonzero slope; the flow time is then chosen to make t_j vanish.
    """
    if series is None:
        fields = lplus_fields(M, wmin) if fields is None else fields
        series = [_flow_series(v) for v in fields]
    order = sorted(range(M.k), key=lambda j: (-M.t_weights[j], j))
    t = tuple(t)
    done = []
    for j in order:
        if t[j]:
            for s in series:
                if len(s[j]) < 2:
                    continue
                if any(p.evaluate(t) for i in done for p in s[i][1:]):
                    continue
                lin = [p.evaluate(t) for p in s[j][1:]]
                if lin[0] and not any(lin[1:]):
                    t = _apply_flow(s, t, -t[j] / lin[0])
                    break
        done.append(j)
    return t


def scaling_equivalent(p, q, weights):
    """Is q = lambda . p for some lambda in C*, (lambda . t)_j = lambda^{w_j} t_j?

    Returns (True, g, R) meaning lambda^g = R works, or (False, None, None).
    """
    supp = [j for j, v in enumerate(p) if v]
    if supp != [j for j, v in enumerate(q) if v]:
        return False, None, None
    if not supp:
        return True, 1, Fraction(1)
    ws = [weights[j] for j in supp]
    ratios = [q[j] / p[j] for j in supp]
    g, coeffs = _bezout(ws)
    R = Fraction(1)
    for r, a in zip(ratios, coeffs):
        R = R * (r ** a)
    for r, wj in zip(ratios, ws):
        if R ** (wj // g) != r:
            return False, None, None
    return True, g, R


def _bezout(nums):
    """g = gcd(nums) (sign of the first entry) and a with sum a_i nums_i = g."""
    g, coeffs = nums[0], [1]
    for x in nums[1:]:
        a, b, gg = _xgcd(g, x)
        coeffs = [c * a for c in coeffs] + [b]
        g = gg
    return g, coeffs


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, tt = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, tt = tt, old_t - q * tt
    return old_s, old_t, old_r


@dataclass(frozen=True)
class ContactWitness:
    group_index: int
    lam_power: int
    lam_value: object
    normal_form: tuple


def orbit_equivalent_contact(t, t2, gens: Sequence[GradedAutomorphism], u: NegativeUnfolding, M: KSMatrix,
                             cap: int = 10_000, return_witness: bool = False, invariants: list | None = None):
    """Contact equivalence of F_t and F_t2: True, False or UNDETERMINED.

    Search over the finite group and the C*-action for a match of L_+ normal
    forms.  L_+-invariants prune the search; a negative answer is only given
    when they separate every candidate.
    """
    t, t2 = _as_point(t), _as_point(t2)
    if t == t2:
        return (True, None) if return_witness else True
    if rank_tau_at_point(M, u, t).ranks != rank_tau_at_point(M, u, t2).ranks:
        return (False, None) if return_witness else False
    wmin = u.w.w_min
    series = [_flow_series(v) for v in lplus_fields(M, wmin)]
    target = lplus_normal_form(t2, M, wmin, series=series)
    cl = group_closure([theta(g, u) for g in gens], u.t_names, cap)
    inv = lplus_invariants(M) if invariants is None else invariants
    inv_deg = [next(iter(p.degrees(u.t_weights))) for p in inv]
    inv_target = tuple(p.evaluate(t2) for p in inv)
    separated = True
    for idx, g in enumerate(cl.elements):
        s = g(t)
        vals = tuple(p.evaluate(s) for p in inv)
        if not scaling_equivalent(vals, inv_target, inv_deg)[0]:
            continue
        nf = lplus_normal_form(s, M, wmin, series=series)
        ok, gpow, R = scaling_equivalent(nf, target, u.t_weights)
        if ok:
            wit = ContactWitness(idx, gpow, R, nf)
            return (True, wit) if return_witness else True
        separated = False
    result = False if (separated and cl.complete) else UNDETERMINED
    return (result, None) if return_witness else result
