"""The induced action of the symmetry group of x^3 + y^3 + z^7 on T_-."""
from fractions import Fraction

from semiquasi import GradedAutomorphism, group_closure, ks_matrix, negative_unfolding, theta
from semiquasi.polynomial import WeightSystem, parse_polynomial
from semiquasi.stratification import format_t
from semiquasi.symmetry import lplus_normal_form, orbit_equivalent_contact

X = ("x", "y", "z")
f0 = parse_polynomial("x^3 + y^3 + z^7", X)
u = negative_unfolding(f0, WeightSystem((7, 7, 3), 21))

# xi = z21^7 is a cube root of unity, z21^3 a seventh root
gens = {
    "alpha": ["y", "x", "z"],
    "beta": ["z21^7*x", "z21^14*y", "z"],
    "gamma": ["z21^7*x", "z21^7*y", "z"],
    "delta": ["x", "y", "z21^3*z"],
}
phis = [GradedAutomorphism(tuple(parse_polynomial(s, X) for s in v), k) for k, v in gens.items()]
acts = []
for phi in phis:
    th = theta(phi, u)
    acts.append(th)
    print(f"theta({phi.name}): t ->", "(" + ", ".join(format_t(c) for c in th.components) + ")")

cl = group_closure(acts, u.t_names)
print("\ninduced group has", len(cl.elements), "elements")

M = ks_matrix(u)
t = tuple(Fraction(c) for c in (1, 2, 3, 4, 5))
nf = lplus_normal_form(t, M, u.w.w_min)
print("\nL_+ normal form of", [str(c) for c in t], "->", [str(c) for c in nf])

for a, b in [((0, 0, 0, 0, 1), (0, 0, 0, 0, 3)), ((1, 2, 3, 4, 5), (2, 1, 3, 0, 9)), ((1, 2, 3, 4, 5), (1, 2, 4, 0, 0))]:
    print(f"{a} ~ {b}:", orbit_equivalent_contact(a, b, phis, u, M))
