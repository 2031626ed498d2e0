"""Diagonal subalgebras of a quartic and a cubic curve at p = 7.

R is the Fermat quartic (b(R) infinite, a(R) = 1), S the Fermat cubic
(b_2(S) = 0, a(S) = 0).  For Delta = (g, h) with g > 1 the diagonal
subalgebra T_Delta has dimension 3 but F-depth only 2.  With f = x_0 y_0 of
bidegree (1, 1) and Delta = (2, 2) the numerical conditions on b and the
bidegree all hold, so the hypersurface (T/fT)_Delta is weakly F-nilpotent.

Run:  python3 demos/diagonal_example.py
"""

from __future__ import annotations

from frobnil import HypersurfaceRing, classify_ring
from frobnil import construction_calculus as cc

R = classify_ring(HypersurfaceRing.fermat(7, 2, 4))
S = classify_ring(HypersurfaceRing.fermat(7, 2, 3))
print(f"b(R) = {R.b_ring}, a(R) = {R.record(2).a}; b_2(S) = {S.b_j(2)}, a(S) = {S.record(2).a}")
print()

for g, h in ((2, 1), (2, 2), (3, 1)):
    spec = cc.DiagonalSpec(g, h)
    rep = cc.diagonal_fdepth(R, S, spec)
    print(f"Delta = ({g},{h}): {rep.describe()}")
    print(f"    clauses {rep.inputs['clauses']}")
print()

rep = cc.diagonal_quotient_from_profiles(R, S, cc.DiagonalSpec(2, 2, 1, 1))
for bullet, holds in rep.inputs["bullets"].items():
    print(f"  [{'x' if holds else ' '}] {bullet}")
for key, value in rep.value.items():
    print(f"  {key}: {value}")
