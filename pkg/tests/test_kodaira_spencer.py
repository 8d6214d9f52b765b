"""Residue pairing, dual generators, the Kodaira-Spencer matrix and its Lie algebra."""
import random
from fractions import Fraction

import pytest

from corpus import CORPUS, SEED, corpus_id, random_point, running_example, unfolding_for
from semiquasi import linalg
from semiquasi.kodaira_spencer import (
    bracket,
    class_in_I,
    dual_generators,
    euler_field,
    is_symmetric,
    ks_matrix,
    lie_filtrations,
    pairing_matrix,
    residue_pairing,
)
from semiquasi.polynomial import Polynomial, parse_polynomial
from semiquasi.standard_basis import LocalOrder, hessian, mora_reduce, standard_basis
from semiquasi.unfolding import specialize

XT = ("x", "y", "z", "t1", "t2", "t3", "t4", "t5")
T = XT[3:]

PRINTED_MATRIX = [
    ["t1", "t2", "2*t3", "5*t4", "8*t5"],
    ["0", "0", "0", "2*t3 - 10/7*t1*t2", "5*t4"],
    ["0", "0", "0", "0", "2*t3"],
    ["0", "0", "0", "0", "t2"],
    ["0", "0", "0", "0", "t1"],
]

# n_2 with the two sign corrections recorded in the decisions ledger
CORRECTED_DUALS = [
    "-21",
    "-21*z + (250/49*t1^3*t2 - 55/7*t1^2*t3 + 250/49*t2^4)*y - 55/7*t2^2*t3*x",
    "-21*z^2 - 30*t2*y",
    "-21*x",
    "-21*y",
]


def printed():
    return [[parse_polynomial(e, T) for e in row] for row in PRINTED_MATRIX]


@pytest.fixture(scope="module")
def auto_matrix():
    return ks_matrix(running_example())


def test_residue_pairing_normalized_on_hessian():
    u = running_example()
    one = Polynomial.constant(1, u.x_names)
    # [TRIVIAL] <1, hess f0> = 1 by normalization
    assert residue_pairing(one, hessian(u.f0), u.milnor) == 1


def test_residue_pairing_perfect():
    # the Gram matrix on the monomial basis is invertible
    md = running_example().milnor
    P = pairing_matrix(md)
    assert linalg.rank([list(r) for r in P.gram]) == md.mu


def test_residue_pairing_symmetric_and_graded():
    md = running_example().milnor
    P = pairing_matrix(md)
    mons = md.basis.monomials
    w = md.w.weights
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            assert P.gram[i][j] == P.gram[j][i]
            deg = sum(x * (p + q) for x, p, q in zip(w, a, b))
            if deg != md.w.socle_degree:
                assert P.gram[i][j] == 0


def test_class_of_upper_monomial():
    u = running_example()
    m = Polynomial.monomial(u.upper[2] + (0,) * 5, XT)
    cls = class_in_I(m, u)
    assert cls == {u.upper[2]: {(0,) * 5: 1}}


def test_corrected_duals_give_printed_matrix():
    u = running_example()
    M = ks_matrix(u, [parse_polynomial(s, XT) for s in CORRECTED_DUALS])
    # [PAPER] the printed matrix
    assert [list(r) for r in M.entries] == printed()
    assert M.symmetric


def test_auto_duals_give_printed_matrix(auto_matrix):
    assert [list(r) for r in auto_matrix.entries] == printed()
    assert auto_matrix.symmetric


def test_auto_duals_shortened():
    gens = ks_matrix(running_example()).generators
    assert gens[0] == parse_polynomial("-21", XT)
    assert gens[3] == parse_polynomial("-21*x", XT)
    assert gens[4] == parse_polynomial("-21*y", XT)


def test_ks_rows_lie_in_relative_jacobian(auto_matrix):
    # [DERIVED] n_i(t) F_t - sum_j h_ij(t) m_j reduces to 0 modulo (dF_t), checked by an
    # independent standard basis at rational points
    u = running_example()
    rng = random.Random(SEED)
    for _ in range(3):
        t = random_point(rng, u.k)
        Ft = specialize(u, t)
        sb = standard_basis(Ft.gradient(), LocalOrder.of(u.w), 60)
        vals = auto_matrix.evaluate(t)
        for i, n in enumerate(auto_matrix.generators):
            nt = n.compose([Polynomial.var(j, u.x_names) for j in range(3)] + [Polynomial.constant(c, u.x_names) for c in t])
            g = nt * Ft
            for j, m in enumerate(u.upper):
                g = g - Polynomial.monomial(m, u.x_names, vals[i][j])
            assert mora_reduce(g, sb).is_zero()


@pytest.mark.parametrize("entry", CORPUS, ids=corpus_id)
def test_auto_matrix_symmetric(entry):
    u = unfolding_for(*entry)
    M = ks_matrix(u)
    assert is_symmetric(M.entries)


def test_first_row_is_euler_field(auto_matrix):
    u = running_example()
    e = euler_field(u)
    assert all(a == -b for a, b in zip(auto_matrix.row_field(0).components, e.components))


def test_rows_are_homogeneous_under_euler(auto_matrix):
    # [DERIVED] [E, v] = deg(v) v for a quasihomogeneous field v
    u = running_example()
    e = euler_field(u)
    for v in auto_matrix.fields():
        if v.is_zero():
            continue
        b = bracket(e, v)
        assert b.components == tuple(c * v.degree for c in v.components)


def test_jacobi_identity(auto_matrix):
    f = auto_matrix.fields()
    for a, b, c in [(f[0], f[1], f[2]), (f[1], f[2], f[3]), (f[1], f[3], f[4])]:
        s = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        assert s.is_zero()


def test_lie_data(auto_matrix):
    L = lie_filtrations(running_example(), auto_matrix)
    # [PAPER] s = 2, r = (3, 6), Z_2 spanned by delta_3..delta_5
    assert L.s == 2
    assert L.r == (3, 6)
    assert L.z_sets[1] == (3, 4, 5)
    assert L.condition_F and L.condition_Z and L.nilpotent


def test_wrong_number_of_generators():
    with pytest.raises(ValueError):
        ks_matrix(running_example(), [parse_polynomial("-21", XT)])
