"""Kodaira-Spencer kernel generators, the residue pairing and Lie filtrations.

Computations take place in I = A_-{x}/(dF/dx_1, ..., dF/dx_n), a free
A_- module on the staircase B of the Milnor algebra of f0.  Classes are
computed with the graded splitting of :mod:`unfolding`: a degree-e piece
sum a_i df0/dx_i + r is replaced by r - sum a_i (dF/dx_i - df0/dx_i),
which only produces terms of larger x-degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from . import linalg
from .polynomial import Polynomial, mono_degree, mul_terms
from .standard_basis import hessian_socle, mora_reduce
from .unfolding import MilnorData, NegativeUnfolding


class PairingError(ArithmeticError):
    pass


# -- classes in I --------------------------------------------------------------


def _correction_terms(u: NegativeUnfolding) -> list:
    """dF/dx_i - df0/dx_i as term dicts over (x, t)."""
    n = u.w.n
    out = []
    for i in range(n):
        g = {}
        for ex, c in u.F.terms.items():
            if any(ex[n:]) and ex[i]:
                e = list(ex)
                e[i] -= 1
                g[tuple(e)] = c * ex[i]
        out.append(g)
    return out


def class_in_I(h: Polynomial, u: NegativeUnfolding) -> dict:
    """Coordinates of h in I: {basis monomial: term dict over t}."""
    n = u.w.n
    wx = u.w.weights
    top = u.w.socle_degree
    corr = _correction_terms(u)
    jac = u.jacobian
    buckets: dict = {}
    for ex, c in h.terms.items():
        e = mono_degree(ex, wx)
        if e <= top:
            buckets.setdefault(e, {})[ex] = c
    result: dict = {}
    while buckets:
        e = min(buckets)
        part = buckets.pop(e)
        groups: dict = {}
        for ex, c in part.items():
            groups.setdefault(ex[n:], {})[ex[:n]] = c
        for tail, xpart in groups.items():
            a, r = jac.decompose(xpart, e)
            for m, c in r.items():
                slot = result.setdefault(m, {})
                v = slot.get(tail, 0) + c
                if v:
                    slot[tail] = v
                else:
                    slot.pop(tail, None)
            for i in range(n):
                if not a[i]:
                    continue
                ai = {g + tail: c for g, c in a[i].items()}
                for ex, c in mul_terms(ai, corr[i]).items():
                    de = mono_degree(ex, wx)
                    if de > top:
                        continue
                    b = buckets.setdefault(de, {})
                    v = b.get(ex, 0) - c
                    if v:
                        b[ex] = v
                    else:
                        b.pop(ex, None)
    return {m: t for m, t in result.items() if t}


def multiply_in_I(g: Polynomial, u: NegativeUnfolding) -> dict:
    """Class of g*F in I, keyed by basis monomial; values are t-polynomials."""
    g = _lift_to_xt(g, u)
    raw = class_in_I(g * u.F, u)
    return {m: Polynomial(u.t_names, t) for m, t in raw.items()}


def _lift_to_xt(g: Polynomial, u: NegativeUnfolding) -> Polynomial:
    names = u.x_names + u.t_names
    if g.variables == names:
        return g
    if g.variables == u.x_names:
        k = u.k
        return Polynomial._raw(names, {e + (0,) * k: c for e, c in g.terms.items()})
    raise ValueError(f"polynomial variables {g.variables} are not among {names}")


# -- residue pairing and dual generators ------------------------------------------


@dataclass(frozen=True)
class ResiduePairing:
    basis: tuple
    gram: tuple  # rows of Scalars
    socle: tuple
    scale: object


def residue_pairing(h: Polynomial, g: Polynomial, md: MilnorData):
    """<h, g>: coefficient of the hessian class in h*g."""
    _, socle, scale = hessian_socle(md.f0, md.w)
    # the Milnor algebra is graded, so only the socle-degree part contributes
    p = (h * g).homogeneous_part(md.w.weights, md.w.socle_degree)
    return mora_reduce(p, md.sb).coeff(socle) / scale


def pairing_matrix(md: MilnorData) -> ResiduePairing:
    _, socle, scale = hessian_socle(md.f0, md.w)
    basis = md.basis.monomials
    cache: dict = {}
    rows = []
    for a in basis:
        row = []
        for b in basis:
            s = tuple(x + y for x, y in zip(a, b))
            if mono_degree(s, md.w.weights) != md.w.socle_degree:
                cache[s] = Fraction(0)
            if s not in cache:
                p = Polynomial.monomial(s, md.variables)
                cache[s] = mora_reduce(p, md.sb).coeff(socle) / scale
            row.append(cache[s])
        rows.append(tuple(row))
    return ResiduePairing(basis, tuple(rows), socle, scale)


def _socle_of(u: NegativeUnfolding):
    top = [m for m in u.milnor.basis.monomials if mono_degree(m, u.w.weights) == u.w.socle_degree]
    return top[0]


def family_gram(u: NegativeUnfolding) -> list:
    """Gram matrix over A_- of P(a, b) = socle coefficient of the class of a*b in I.

    This equals the hessian pairing of F up to the constant factor by which
    hess(F) represents the socle monomial; the factor is absorbed so that the
    Euler row comes out with n_1 = -d.
    """
    basis = u.milnor.basis.monomials
    socle = _socle_of(u)
    names = u.x_names + u.t_names
    k = u.k
    cache: dict = {}
    gram = []
    for a in basis:
        row = []
        for b in basis:
            s = tuple(x + y for x, y in zip(a, b))
            if s not in cache:
                cls = class_in_I(Polynomial._raw(names, {s + (0,) * k: Fraction(1)}), u)
                cache[s] = cls.get(socle, {})
            row.append(cache[s])
        gram.append(row)
    return gram


def _solve_graded(gram: list, target: int, k: int) -> list:
    """Solve G c = e_target over A_- by the Neumann series around t = 0."""
    mu = len(gram)
    zero = (0,) * k
    g0 = [[gram[i][j].get(zero, Fraction(0)) for j in range(mu)] for i in range(mu)]
    nil = [[{e: c for e, c in gram[i][j].items() if e != zero} for j in range(mu)] for i in range(mu)]
    try:
        g0inv = linalg.inverse(g0)
    except ZeroDivisionError as exc:
        raise PairingError("residue pairing degenerate at t = 0") from exc

    def apply_g0inv(vec):
        out = []
        for i in range(mu):
            acc: dict = {}
            for j in range(mu):
                cij = g0inv[i][j]
                if cij:
                    for e, c in vec[j].items():
                        v = acc.get(e, 0) + cij * c
                        if v:
                            acc[e] = v
                        else:
                            acc.pop(e, None)
            out.append(acc)
        return out

    rhs = [dict() for _ in range(mu)]
    rhs[target] = {zero: Fraction(1)}
    c = apply_g0inv(rhs)
    for _ in range(10_000):
        vec = []
        for i in range(mu):
            acc = dict(rhs[i])
            for j in range(mu):
                if nil[i][j] and c[j]:
                    for e, v in mul_terms(nil[i][j], c[j]).items():
                        nv = acc.get(e, 0) - v
                        if nv:
                            acc[e] = nv
                        else:
                            acc.pop(e, None)
            vec.append(acc)
        nc = apply_g0inv(vec)
        if nc == c:
            return c
        c = nc
    raise PairingError("dual basis series did not terminate")


def dual_generators(u: NegativeUnfolding, shorten: bool = True) -> list:
    """n_i = -d * (A_- dual of m_{k-i+1}) as polynomials in (x, t).

    Only the class of n_i*F in I matters for the matrix.  With ``shorten``
    each dual is replaced by its lowest truncation in t-degree that has the
    same class, which turns e.g. the exact dual of yz^5 into -21x.
    """
    if u.k == 0:
        return []
    gram = family_gram(u)
    basis = u.milnor.basis.monomials
    names = u.x_names + u.t_names
    out = []
    for i in range(u.k):
        m = u.upper[u.k - 1 - i]
        c = _solve_graded(gram, basis.index(m), u.k)
        terms: dict = {}
        for beta, coeff in zip(basis, c):
            for e, v in coeff.items():
                terms[beta + e] = -u.w.degree * v
        n = Polynomial(names, terms)
        out.append(_shortest_equivalent(n, u) if shorten else n)
    return out


def _shortest_equivalent(n: Polynomial, u: NegativeUnfolding) -> Polynomial:
    nx = u.w.n
    target = multiply_in_I(n, u)
    depths = sorted({-mono_degree(e[nx:], u.t_weights) for e in n.terms})
    for p in depths:
        cand = Polynomial._raw(
            n.variables,
            {e: c for e, c in n.terms.items() if -mono_degree(e[nx:], u.t_weights) <= p},
        )
        if multiply_in_I(cand, u) == target:
            return cand
    return n


# -- vector fields ---------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    """sum_j components[j] * d/dt_j on A_- (components are t-polynomials)."""

    components: tuple
    degree: object  # int, or None for the zero field
    t_weights: tuple

    @classmethod
    def from_components(cls, comps: Sequence[Polynomial], t_weights) -> "VectorField":
        comps = tuple(comps)
        deg = None
        for c, wt in zip(comps, t_weights):
            if not c.is_zero():
                degs = c.degrees(t_weights)
                if len(degs) != 1:
                    raise ValueError("vector field component is not quasihomogeneous")
                dj = next(iter(degs)) - wt
                if deg is not None and dj != deg:
                    raise ValueError("vector field components have inconsistent degrees")
                deg = dj
        return cls(comps, deg, tuple(t_weights))

    @property
    def k(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def apply(self, p: Polynomial) -> Polynomial:
        out = Polynomial.zero(p.variables)
        for j, c in enumerate(self.components):
            if not c.is_zero():
                dp = p.diff(j)
                if not dp.is_zero():
                    out = out + c * dp
        return out

    def scale(self, p: Polynomial) -> "VectorField":
        return VectorField.from_components([p * c for c in self.components], self.t_weights)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField.from_components(
            [a + b for a, b in zip(self.components, other.components)], self.t_weights
        )

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)


def bracket(a: VectorField, b: VectorField) -> VectorField:
    if a.k != b.k:
        raise ValueError("vector fields on different parameter spaces")
    comps = [a.apply(bj) - b.apply(aj) for aj, bj in zip(a.components, b.components)]
    return VectorField.from_components(comps, a.t_weights)


def euler_field(u: NegativeUnfolding) -> VectorField:
    comps = [u.t_var(j) * wt for j, wt in enumerate(u.t_weights)]
    return VectorField(tuple(comps), 0, u.t_weights)


# -- the matrix ---------------------------------------------------------------------


@dataclass(frozen=True)
class KSMatrix:
    entries: tuple  # rows of t-Polynomials
    generators: tuple  # n_i over (x, t)
    degrees: tuple  # deg n_i
    t_weights: tuple
    t_names: tuple
    symmetric: bool

    @property
    def k(self) -> int:
        return len(self.entries)

    def row_field(self, i: int) -> VectorField:
        return VectorField(tuple(self.entries[i]), self.degrees[i], self.t_weights)

    def fields(self) -> list:
        return [self.row_field(i) for i in range(self.k)]

    def evaluate(self, t: Sequence) -> list:
        return [[e.evaluate(t) for e in row] for row in self.entries]


def _generator_degree(n: Polynomial, all_weights) -> int:
    degs = n.degrees(all_weights)
    if len(degs) != 1:
        raise ValueError(f"dual generator {n} is not quasihomogeneous in (x, t)")
    return next(iter(degs))


def is_symmetric(entries) -> bool:
    k = len(entries)
    return all(entries[i][j] == entries[k - 1 - j][k - 1 - i] for i in range(k) for j in range(k))


def ks_matrix(u: NegativeUnfolding, n: Sequence[Polynomial] | None = None) -> KSMatrix:
    auto = n is None
    gens = dual_generators(u) if auto else [_lift_to_xt(g, u) for g in n]
    if len(gens) != u.k:
        raise ValueError(f"expected {u.k} generators, got {len(gens)}")
    rows, degrees = [], []
    upper = set(u.upper)
    for g in gens:
        degrees.append(_generator_degree(g, u.all_weights) if not g.is_zero() else 0)
        cls = multiply_in_I(g, u)
        stray = [m for m in cls if m not in upper]
        if stray:
            raise ArithmeticError(f"n*F has components off the upper monomials: {stray}")
        rows.append(tuple(cls.get(m, Polynomial.zero(u.t_names)) for m in u.upper))
    for i, row in enumerate(rows):
        for j, h in enumerate(row):
            if not h.is_zero() and h.degrees(u.t_weights) != {degrees[i] + u.t_weights[j]}:
                raise ArithmeticError(f"entry ({i + 1},{j + 1}) has the wrong degree")
    sym = is_symmetric(rows)
    if auto and not sym:
        raise ArithmeticError("auto-computed Kodaira-Spencer matrix is not symmetric")
    return KSMatrix(tuple(rows), tuple(gens), tuple(degrees), u.t_weights, u.t_names, sym)


# -- Lie algebra data --------------------------------------------------------------


def t_monomials_in_range(t_weights, lo: int, hi: int) -> list:
    """Non-constant t-monomials p with lo < deg p <= hi (weights negative)."""
    k = len(t_weights)
    out = []

    def rec(i, deg, acc):
        if i == k:
            if any(acc) and lo < deg <= hi:
                out.append(tuple(acc))
            return
        e = 0
        while deg + e * t_weights[i] > lo:
            acc.append(e)
            rec(i + 1, deg + e * t_weights[i], acc)
            acc.pop()
            e += 1

    rec(0, 0, [])
    return sorted(out, key=lambda e: (-mono_degree(e, t_weights), tuple(reversed(e))))


def module_coefficients(v: VectorField, fields: Sequence[VectorField], t_names):
    """Homogeneous c_i in A_- with v = sum c_i fields[i], or None."""
    if v.is_zero():
        return [Polynomial.zero(t_names) for _ in fields]
    wts = v.t_weights
    unknowns = []  # (field index, monomial)
    for i, f in enumerate(fields):
        if f.degree is None:
            continue
        need = v.degree - f.degree
        if need > 0:
            continue
        mons = [()] if need == 0 else None
        if need == 0:
            unknowns.append((i, (0,) * len(wts)))
        else:
            for m in t_monomials_in_range(wts, need - 1, need):
                unknowns.append((i, m))
    columns = []
    for i, m in unknowns:
        mono = Polynomial.monomial(m, t_names)
        columns.append([mono * c for c in fields[i].components])
    keys = set()
    for col in columns:
        for j, c in enumerate(col):
            keys.update((j, e) for e in c.terms)
    for j, c in enumerate(v.components):
        keys.update((j, e) for e in c.terms)
    keys = sorted(keys)
    mat = [[col[j].coeff(e) for col in columns] + [v.components[j].coeff(e)] for j, e in keys]
    if not columns:
        return None
    red, piv = linalg.rref(mat, len(columns) + 1)
    if len(columns) in piv:
        return None
    sol = [Fraction(0)] * len(columns)
    for row, pc in zip(red, piv):
        sol[pc] = row[-1]
    coeffs = [Polynomial.zero(t_names) for _ in fields]
    for (i, m), c in zip(unknowns, sol):
        if c:
            coeffs[i] = coeffs[i] + Polynomial.monomial(m, t_names, c)
    return coeffs


@dataclass(frozen=True)
class LieData:
    s: int
    filtration: tuple  # F^i monomial lists, i = 0..s
    r: tuple  # r_1..r_s
    z_sets: tuple  # Z_j generator indices (1-based), j = 1..s
    field_degrees: tuple
    lplus_basis: tuple  # (monomial, generator index) pairs spanning L_+ over C
    euler: VectorField
    condition_F: bool
    condition_Z: bool
    nilpotent: bool


def lie_filtrations(u: NegativeUnfolding, M: KSMatrix) -> LieData:
    w = u.w
    wmin = w.w_min
    s = ((w.n - 1) * w.degree - 2 * sum(w.weights)) // wmin
    k = u.k
    tw = u.t_weights
    fields = M.fields()
    degs = tuple(M.degrees)
    filtration = tuple(
        tuple(t_monomials_in_range(tw, -(i + 1) * wmin, -1)) for i in range(max(s, 0) + 1)
    )
    r = []
    for i in range(1, s + 1):
        level = s - i
        cands = [degs[j] for j in range(k) if tw[k - 1 - j] > -(level + 1) * wmin]
        r.append(min(cands) if cands else None)
    z_sets = tuple(
        tuple(i + 1 for i in range(1, k) if rj is not None and degs[i] >= rj) for rj in r
    )
    basis = []
    for i in range(1, k):
        need = wmin - degs[i]
        if need > 0:
            continue
        basis.append(((0,) * k, i + 1))
        for m in t_monomials_in_range(tw, need - 1, -1):
            basis.append((m, i + 1))

    # (F): delta F^i in F^{i-1}, on monomial spanning sets; by degree this is
    # the statement that every term of delta(q) has degree > -i*wmin
    tnames = u.t_names
    cond_f = True
    gens = [fields[i] for i in range(1, k) if degs[i] >= wmin]
    for i, level in enumerate(filtration):
        for q in level:
            qp = Polynomial.monomial(q, tnames)
            for f in gens:
                img = f.apply(qp)
                if any(mono_degree(e, tw) <= -i * wmin for e in img.terms):
                    cond_f = False

    # (Z): [L_+, Z_j] in A_- Z_{j+1}, with Z_{s+1} = 0
    cond_z = True
    for j, zs in enumerate(z_sets):
        nxt = [fields[i - 1] for i in z_sets[j + 1]] if j + 1 < len(z_sets) else []
        for a in range(1, k):
            for b in zs:
                v = bracket(fields[a], fields[b - 1])
                if not v.is_zero() and module_coefficients(v, nxt, tnames) is None:
                    cond_z = False

    # nilpotency of the positive part
    level = [f for f in fields[1:] if not f.is_zero()]
    steps = 0
    while level and steps <= k:
        nxt = []
        for a in fields[1:]:
            for b in level:
                v = bracket(a, b)
                if not v.is_zero() and v not in nxt:
                    nxt.append(v)
        level = nxt
        steps += 1
    return LieData(
        s, filtration, tuple(r), z_sets, degs, tuple(basis), euler_field(u), cond_f, cond_z, not level
    )
