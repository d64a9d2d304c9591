# # Heegner degrees on the Shimura curve of discriminant 6
#
# r_{6,1}(m) has no counting definition here, since the lattice is
# indefinite.  It is computed from definite data at discriminant 2 (or 3),
# and the curve volume turns it into a degree.

from quatlat.identities import heegner_degrees, volume

print("vol X_0^6(1) =", volume(6, 1))

via2 = heegner_degrees(6, 1, 12, split_prime=2)
via3 = heegner_degrees(6, 1, 12, split_prime=3)
print(" m        r      deg")
for a, b in zip(via2, via3):
    assert a.deg == b.deg
    print(f"{a.m:2} {str(a.r):>8} {str(a.deg):>8}")

# m = 1 and m = 3 pick out the elliptic points of order 2 and 3.  The
# identity-defined values carry a negative sign for m > 0; the magnitudes
# are the stabilizer-weighted counts.
print("|deg Z(1)| =", abs(via2[1].deg), " |deg Z(3)| =", abs(via2[3].deg))
