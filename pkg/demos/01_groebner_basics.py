"""Parse polynomials, compute a reduced Gröbner basis, test membership, trim generators."""

from reesalg import RingSpec, buchberger, membership, trim
from reesalg.polyring import lex

R = RingSpec(3)  # Q[x1, x2, x3]
f = R.parse("x1^2*x2 - x3^2")
g = R.parse("x1*x2^2 - x1*x3")
print("f =", f)
print("g =", g)

gb = buchberger([f, g])
print(f"\ngrevlex basis ({len(gb)} elements, monic, sorted by leading term):")
for h in gb:
    print("   ", h)

probe = R.parse("x2") * f - R.parse("x1") * g
print(f"\n{probe} in (f, g)? {membership(probe, gb)}")
print(f"x3 in (f, g)? {membership(R.x(3), gb)}")

print("\nlex basis of (x1^2 - x2, x2^2 - x1):")
for h in buchberger([R.parse("x1^2 - x2"), R.parse("x2^2 - x1")], lex(R)):
    print("   ", h)

redundant = [R.parse("x1*x2"), R.parse("x1*x2*x3"), R.parse("x1^2 + x1*x2"), R.parse("x1*x3^2")]
print("\nminimal generators of", [str(h) for h in redundant])
print("   ", [str(h) for h in trim(redundant)])
