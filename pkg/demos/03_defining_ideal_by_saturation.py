"""The defining ideal of a Rees algebra as a saturation, and where its fiber equation comes from.

The 5x4 presentation below satisfies G_2 but not G_3; modulo (x1, x2) it has
rank 2, so neither matrix formula applies.  The saturation still gives the
defining ideal: the symmetric-algebra equations plus one fiber equation, which
turns out to be a 2x2 minor of the Jacobian dual.
"""

from reesalg import Ideal, PolyMatrix, RingSpec, gs_profile, ideal_equal, validate_presentation
from reesalg.idealops import census, minor_list
from reesalg.polyring import bidegree
from reesalg.rees import classify_shape, jacobian_dual, saturation_oracle, symmetric_ideal

rows = [["x2", "0", "x2", "0"],
        ["x2", "x1", "x4", "x2"],
        ["0", "x1", "x2", "x3"],
        ["0", "x2", "x3", "x1"],
        ["x1", "x2", "x1", "x4"]]
R = RingSpec(4, 5)
p = validate_presentation(PolyMatrix.from_strings(rows, R), rank_e=1)

print("G_s profile:", gs_profile(p))
print("shape modulo (x1, x2):", classify_shape(p, 2))

L = symmetric_ideal(p)
J, k = saturation_oracle(p, 2)
print(f"\nJ = L : (x1, x2)^inf, stable at exponent {k}")
print("bidegree census of J:", census(J))
print("is J = L?", ideal_equal(J, L))

(fiber,) = [g for g in J.trimmed() if bidegree(g) == (0, 2)]
print("\nfiber equation:", fiber)
B = jacobian_dual(p)
print("Jacobian dual B(phi):")
for r in B.to_strings():
    print("   ", r)
hits = [m for m in minor_list(B, 2) if m and ideal_equal(Ideal([m], R), Ideal([fiber], R))]
print("2x2 minors of B(phi) equal to it up to a scalar:", [str(m) for m in hits])
