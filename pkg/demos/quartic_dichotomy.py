"""The Fermat quartic curve x_2^4 = x_0^4 + x_1^4 and its degree-0 Frobenius.

The top local cohomology H^2 has a 3-dimensional degree-0 piece.  Whether
Frobenius kills it depends only on p mod 4: for p = 3 mod 4 the matrix is
identically zero (the ring is F-nilpotent), for p = 1 mod 4 it is invertible
and degree 0 is the top non-nilpotent degree (b_2 = 0).

Run:  python3 demos/quartic_dichotomy.py
"""

from __future__ import annotations

from frobnil import HypersurfaceRing, basis_at_degree, classify_ring, frobenius_layer

ring = HypersurfaceRing.fermat(7, 2, 4)
print(ring.describe())
print("degree-0 Čech basis:")
for cls in basis_at_degree(ring, 0):
    print("   ", cls)

print()
print(f"{'p':>3}  {'p mod 4':>7}  {'rank':>4}  verdict")
for p in (5, 7, 11, 13, 17, 19, 23, 29):
    ring = HypersurfaceRing.fermat(p, 2, 4)
    mat = frobenius_layer(ring, 0).matrix
    prof = classify_ring(ring)
    verdict = "F-nilpotent" if prof.f_nilpotent else f"not F-nilpotent, b_2 = {prof.b_j(2)}"
    print(f"{p:>3}  {p % 4:>7}  {mat.rank():>4}  {verdict}")

print()
print("p = 13 matrix (columns are images of the basis above):")
for row in frobenius_layer(HypersurfaceRing.fermat(13, 2, 4), 0).matrix.to_lists():
    print("   ", row)
