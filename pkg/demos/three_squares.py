# # Sums of three squares from a quaternion order
#
# The Hamilton quaternions (-1,-1) ramify at 2 and at infinity.  The
# trace-zero part of their maximal order, with the reduced norm as
# quadratic form, is the cube lattice, so its theta series counts
# representations as sums of three squares.

from quatlat.identities import lattice, r_series
from quatlat.orders import maximalize, standard_order, trace_zero_lattice
from quatlat.quatalg import algebra_with_discriminant

A = algebra_with_discriminant(2)
print("algebra:", (A.a, A.b), "ramified at", A.ramified_finite, "and oo" if A.ramified_at_infinity else "")

O = maximalize(standard_order(A))
print("maximal order basis:")
for e in O.basis:
    print("  ", e)

L = trace_zero_lattice(O)
print("trace-zero Gram:", L.gram, "det", L.det)

# The genus has one class, so the genus average is just the theta series.

rs = r_series(2, 1, 20)
for m, r in enumerate(rs):
    print(f"r3({m:2}) = {r}")

# Seven is the first number that is not a sum of three squares.
assert rs[7] == 0
assert lattice(2, 1).det == 8
