"""Colon, saturation (with its exponent), intersection, elimination and dimension."""

from reesalg import Ideal, RingSpec, colon, dimension, eliminate, height, intersect, saturate

R = RingSpec(3)
I = Ideal.parse(["x1^3*x3", "x2^2*x3"], R)
m = Ideal.parse(["x1", "x2"], R)

print("I =", I.to_strings())
print("I : (x1, x2)   =", colon(I, m).to_strings())
S, k = saturate(I, m)
print(f"I : (x1, x2)^inf = {S.to_strings()}  reached at exponent {k}")

print("\n(x1^2, x2) ∩ (x1, x2^3) =", intersect(Ideal.parse(["x1^2", "x2"], R), Ideal.parse(["x1", "x2^3"], R)).to_strings())

# implicitize the twisted cubic: x4 is the parameter
P = RingSpec(4)
curve = Ideal.parse(["x1 - x4", "x2 - x4^2", "x3 - x4^3"], P)
print("\ntwisted cubic, parameter eliminated:", eliminate(curve, {0, 1, 2}).to_strings())

C = Ideal.parse(["x1^2 - x2*x3", "x1*x2 - x3^2"], R)
print(f"\ndim R/C = {dimension(C)}, ht C = {height(C)}")
