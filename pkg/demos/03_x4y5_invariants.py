"""x^4 + y^5: one modulus t of weight -2, invariants of the diagonal group."""
from semiquasi import enumerate_diagonal, negative_unfolding, theta
from semiquasi.polynomial import WeightSystem, parse_polynomial
from semiquasi.scalars import format_scalar
from semiquasi.symmetry import diagonal_character, invariant_monomials

f0 = parse_polynomial("x^4 + y^5", ("x", "y"))
w = WeightSystem((5, 4), 20)   # x has weight 5, y weight 4
u = negative_unfolding(f0, w)
print("F =", u.F, "  w(t) =", u.t_weights[0])

group = enumerate_diagonal(f0, w, 20)
chars = []
for g in group:
    c = diagonal_character(theta(g, u).components)
    chars.append(c)
print(len(group), "diagonal symmetries; t is multiplied by")
print("  ", sorted({format_scalar(c[0]) for c in chars}))

print("invariant monomials up to degree 10:", invariant_monomials(chars, 1, 10))
