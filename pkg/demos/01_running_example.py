"""x^3 + y^3 + z^7: unfolding, Kodaira-Spencer matrix and strata."""
from semiquasi import ks_matrix, lie_filtrations, mu_vector, negative_unfolding, strata_symbolic
from semiquasi.polynomial import WeightSystem, format_monomial, parse_polynomial
from semiquasi.stratification import format_t

f0 = parse_polynomial("x^3 + y^3 + z^7", ("x", "y", "z"))
w = WeightSystem((7, 7, 3), 21)

u = negative_unfolding(f0, w)
print("mu =", u.milnor.mu)
for name, m, wt in zip(u.t_names, u.upper, u.t_weights):
    print(f"  {name}: {format_monomial(m, u.x_names):10s} weight {wt}")
print("F =", u.F.format(u.all_weights))

# dual generators are computed from the residue pairing
M = ks_matrix(u)
print("\ndual generators")
for n in M.generators:
    print("  ", n.format(u.all_weights))
print("\nmatrix (symmetric: %s)" % M.symmetric)
for row in M.entries:
    print("  ", " | ".join(format_t(e) for e in row))

L = lie_filtrations(u, M)
print("\ns =", L.s, " r =", L.r, " Z =", L.z_sets)
print("mu vector", mu_vector(u))

S = strata_symbolic(M, u)
print("\nstrata")
for s in S.strata:
    eqs = ", ".join(format_t(e) for e in s.equations) or "-"
    neq = ", ".join(format_t(e) for e in s.inequations) or "-"
    alt = " ; ".join("one of " + ", ".join(format_t(a) for a in alt) for alt in s.alternatives)
    print(f"  {s.ranks}  tau={s.hilbert}  = 0: {eqs}   != 0: {neq}  {alt}")
print("empty rank vectors:", S.empty_candidates)
