"""Segre product of the Fermat quartic with the plane k[y_0, y_1].

The Künneth splitting says which pieces of R and S contribute to H^j(T).
For p = 13 the degree-0 part of H^2(R) survives into H^2(T), so
F-depth T = 2 while the generalized F-depth reaches 3.  For p = 7 that
piece is nilpotent and T is weakly F-nilpotent.

Run:  python3 demos/segre_pipeline.py
"""

from __future__ import annotations

from frobnil import HypersurfaceRing, classify_ring, polynomial_ring_profile
from frobnil import construction_calculus as cc

for p in (13, 7):
    R = classify_ring(HypersurfaceRing.fermat(p, 2, 4))
    S = polynomial_ring_profile(p, 2)
    T, reports = cc.segre_profile(R, S)
    print(f"== p = {p}: T = R # S, dim T = {T.dim}")
    for rep in reports:
        labels = rep.labels()
        print(f"   H^{rep.index}(T) = {' + '.join(labels) if labels else '0'}")
    for calc in (cc.segre_fdepth_bounds, cc.segre_gfdepth, cc.segre_wfn_verdict):
        print("  ", calc(R, S).describe())
    print(f"   b(T) = {T.b_ring}")
    print()
