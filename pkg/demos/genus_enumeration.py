# # Walking a genus with p-neighbors
#
# Level 10 inside the algebra of discriminant 3 gives a ternary lattice
# whose genus has two classes.  Both have determinant 2 * 30^2, but their
# theta series differ, and only the mass-weighted average is canonical.

from quatlat.identities import lattice
from quatlat.ternary.genus import admissible_primes, closed_under, genus, genus_theta_coeffs, theta_coeffs
from quatlat.ternary.isometry import is_isometric

L = lattice(3, 10)
primes = admissible_primes(L.det, 2)
print("start:", L.gram, "det", L.det, "neighbor primes", primes)

G = genus(L, primes, tag=(3, 10))
print(f"{G.class_number} classes, mass {G.mass}")
for C, a in zip(G.classes, G.aut_orders):
    print("  ", C.gram, "|Aut| =", a)
    print("     theta:", theta_coeffs(C, 8))

# Different representatives, no isometry between them:
print("isometric?", is_isometric(*G.classes))

# A third prime finds nothing new.
third = admissible_primes(L.det, 3)[-1]
print(f"closed under p = {third}:", closed_under(G, third))

print("genus theta:", genus_theta_coeffs(G, 8))
