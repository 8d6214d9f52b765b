"""Graded symmetries of f0, the induced action on T_-, and orbit equivalence."""
import itertools
import random
from fractions import Fraction

import pytest

from corpus import CORPUS, SEED, corpus_id, random_point, running_example, unfolding_for
from semiquasi.kodaira_spencer import ks_matrix
from semiquasi.polynomial import Polynomial, WeightSystem, parse_polynomial
from semiquasi.scalars import Cyclotomic
from semiquasi.symmetry import (
    UNDETERMINED,
    GradedAutomorphism,
    GradingError,
    InducedAction,
    diagonal_character,
    diagonal_exponent,
    enumerate_diagonal,
    group_closure,
    invariant_monomials,
    lplus_normal_form,
    orbit_equivalent_contact,
    orbit_equivalent_right,
    scaling_equivalent,
    theta,
    verify_automorphism,
)
from semiquasi.unfolding import reduce_to_T_minus, specialize

XYZ = ("x", "y", "z")
T = ("t1", "t2", "t3", "t4", "t5")


def auto(images, name):
    return GradedAutomorphism(tuple(parse_polynomial(s, XYZ) for s in images), name)


ALPHA = auto(["y", "x", "z"], "alpha")
BETA = auto(["z21^7*x", "z21^14*y", "z"], "beta")
GAMMA = auto(["z21^7*x", "z21^7*y", "z"], "gamma")
DELTA = auto(["x", "y", "z21^3*z"], "delta")
GENERATORS = [ALPHA, BETA, GAMMA, DELTA]

# [PAPER] xi = zeta_21^7, zeta = zeta_21^3
EXPECTED = {
    "alpha": ["t2", "t1", "t3", "t4", "t5"],
    "beta": ["z21^7*t1", "z21^14*t2", "t3", "t4", "t5"],
    "gamma": ["z21^7*t1", "z21^7*t2", "z21^14*t3", "z21^14*t4", "z21^14*t5"],
    "delta": ["z21^15*t1", "z21^15*t2", "z21^9*t3", "z21^12*t4", "z21^15*t5"],
}


@pytest.fixture(scope="module")
def actions():
    u = running_example()
    return {g.name: theta(g, u) for g in GENERATORS}


@pytest.mark.parametrize("phi", GENERATORS, ids=lambda g: g.name)
def test_theta_matches_printed_formulas(phi, actions):
    expected = tuple(parse_polynomial(s, T) for s in EXPECTED[phi.name])
    assert actions[phi.name].components == expected


def test_generators_preserve_f0():
    u = running_example()
    assert all(verify_automorphism(g, u.f0, u.w) for g in GENERATORS)


def test_non_symmetry_detected():
    u = running_example()
    assert not verify_automorphism(auto(["2*x", "y", "z"], "bad"), u.f0, u.w)
    with pytest.raises(ValueError):
        theta(auto(["2*x", "y", "z"], "bad"), u)


def test_non_graded_map_rejected():
    u = running_example()
    with pytest.raises(GradingError):
        verify_automorphism(auto(["x + z", "y", "z"], "bad"), u.f0, u.w)


def test_theta_is_homomorphism(actions):
    # theta(phi o psi) = theta(phi) o theta(psi) as maps of T_-
    u = running_example()
    for a, b in itertools.product(GENERATORS, repeat=2):
        lhs = theta(a.then(b), u)
        rhs = actions[a.name].then(actions[b.name])
        assert lhs.components == rhs.components


def test_closure_order(actions):
    # [PAPER] 6 * 3 * 7 = 126 elements
    cl = group_closure(list(actions.values()), T)
    assert cl.complete and len(cl.elements) == 126


def test_closure_cap_reports_incomplete(actions):
    cl = group_closure(list(actions.values()), T, cap=10)
    assert not cl.complete


def test_diagonal_symmetries_running_example():
    u = running_example()
    assert diagonal_exponent(u.f0) == 21
    # [DERIVED] 3 * 3 * 7 diagonal solutions
    assert len(enumerate_diagonal(u.f0, u.w, 21)) == 63


def test_diagonal_symmetries_x4y5():
    f0 = parse_polynomial("x^4 + y^5", ("x", "y"))
    gens = enumerate_diagonal(f0, WeightSystem((5, 4), 20), 20)
    assert len(gens) == 20


def test_x4y5_invariant_ring():
    # [PAPER] invariants of the diagonal group on T_- are generated by t^10
    f0 = parse_polynomial("x^4 + y^5", ("x", "y"))
    w = WeightSystem((5, 4), 20)
    u = unfolding_for("x^4 + y^5", ("x", "y"), (5, 4), 20)
    chars = [diagonal_character(theta(g, u).components) for g in enumerate_diagonal(f0, w, 20)]
    assert invariant_monomials(chars, 1, 10) == [(10,)]


def test_invariant_monomials_minimal():
    # group Z/2 x Z/2 acting by signs on two coordinates
    chars = [[Fraction(-1), Fraction(1)], [Fraction(1), Fraction(-1)]]
    assert invariant_monomials(chars, 2, 6) == [(2, 0), (0, 2)]


@pytest.mark.parametrize("entry", CORPUS[1:6], ids=corpus_id)
def test_theta_commutes_with_reduction(entry):
    # [DERIVED] phi(F_t) reduces to theta(phi)(t)
    u = unfolding_for(*entry)
    N = diagonal_exponent(u.f0)
    rng = random.Random(SEED)
    gens = enumerate_diagonal(u.f0, u.w, N)
    for g in rng.sample(gens, min(3, len(gens))):
        th = theta(g, u)
        t = random_point(rng, u.k)
        assert reduce_to_T_minus(g.apply(specialize(u, t)), u).t == th(t)


def test_right_equivalence():
    u = running_example()
    t = (Fraction(1), Fraction(2), Fraction(3), Fraction(4), Fraction(5))
    assert orbit_equivalent_right(t, (2, 1, 3, 4, 5), GENERATORS, u) is True
    assert orbit_equivalent_right(t, (1, 2, 3, 4, 6), GENERATORS, u) is False


def test_scaling_equivalence():
    w = (-1, -1, -2, -5, -8)
    p = (Fraction(1), Fraction(1), 0, 0, 0)
    assert scaling_equivalent(p, (Fraction(2), Fraction(2), 0, 0, 0), w)[0]
    # lambda^-1 = 2 and lambda^-1 = 3 cannot both hold
    assert not scaling_equivalent(p, (Fraction(2), Fraction(3), 0, 0, 0), w)[0]


@pytest.fixture(scope="module")
def matrix():
    return ks_matrix(running_example())


def test_lplus_normal_form(matrix):
    u = running_example()
    nf = lplus_normal_form(tuple(Fraction(c) for c in (1, 2, 3, 4, 5)), matrix, u.w.w_min)
    assert nf == (1, 2, 3, 0, 0)


def test_contact_equivalence(matrix):
    u = running_example()
    # [PAPER] U_(0,0,1) is a single orbit
    assert orbit_equivalent_contact((0, 0, 0, 0, 1), (0, 0, 0, 0, 2), GENERATORS, u, matrix) is True
    # different Hilbert functions
    assert orbit_equivalent_contact((0, 0, 0, 1, 0), (0, 0, 0, 0, 1), GENERATORS, u, matrix) is False
    # generic stratum: swapped t1, t2 after moving along L_+
    ok, wit = orbit_equivalent_contact((1, 2, 3, 4, 5), (2, 1, 3, 0, 7), GENERATORS, u, matrix,
                                       return_witness=True)
    assert ok is True and wit is not None
    assert orbit_equivalent_contact((1, 2, 3, 4, 5), (1, 2, 4, 7, -1), GENERATORS, u, matrix) in (False, UNDETERMINED)
