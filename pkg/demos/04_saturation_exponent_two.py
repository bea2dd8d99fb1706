"""A nonlinear column forces a second colon: L : p != L : p^2 = L : p^inf."""

from reesalg import PolyMatrix, RingSpec, ideal_equal, validate_presentation
from reesalg.idealops import census, colon
from reesalg.rees import classify_shape, residual_rank, saturation_oracle, symmetric_ideal

rows = [["x1^2", "x1", "x2", "0"],
        ["0", "0", "x1", "x1"],
        ["x2^2", "x2", "x1", "0"],
        ["0", "x1", "x2", "x2"],
        ["x2^2", "x1", "x3", "x4"]]
p = validate_presentation(PolyMatrix.from_strings(rows, RingSpec(4, 5)), rank_e=1, allow_nonlinear=True)
print("linear presentation?", p.linear)
print("residual rank modulo (x1, x2):", residual_rank(p, 2), "->", classify_shape(p, 2).kind)

L, P = symmetric_ideal(p), p.prime(2)
first, second = colon(L, P), colon(L, P * P)
J, k = saturation_oracle(p, 2)
print("\nL : p  == L : p^2 ?", ideal_equal(first, second))
print("L : p^2 == L : p^inf ?", ideal_equal(second, J))
print("saturation exponent:", k)
print("census of J:", census(J))
