"""Bring a perturbed x^3 + y^3 + z^7 to its normal form and classify it."""
from semiquasi import classify_point, ks_matrix, negative_unfolding, reduce_to_T_minus, strata_symbolic
from semiquasi.polynomial import WeightSystem, parse_polynomial

X = ("x", "y", "z")
u = negative_unfolding(parse_polynomial("x^3 + y^3 + z^7", X), WeightSystem((7, 7, 3), 21))

f = parse_polynomial("x^3 + y^3 + z^7 + x*z^5 + 2*y*z^5 + x^2*z^3 + 3*z^8 + x*y*z^4", X)
res = reduce_to_T_minus(f, u)
print("f   =", f.format(u.w.weights))
print("t   =", [str(c) for c in res.t])
print(len(res.transcript), "coordinate changes, checked up to degree", res.degree_reached)

M = ks_matrix(u)
S = strata_symbolic(M, u)
c = classify_point(u, M, res.t, S)
print("tau =", c.tau, " Hilbert function", c.hilbert, " ranks", c.ranks)
print("normal form:", c.normal_form.format(u.w.weights))
