"""Upper bounds for the Frobenius test exponent of parameter ideals.

All bounds are built from HSL numbers of the local cohomology modules:
the binomial sum over H^0..H^d, the extra annihilator exponent for a
generalized weakly F-nilpotent ring, and the coarse Segre bound.

Run:  python3 demos/fte_arithmetic.py
"""

from __future__ import annotations

from frobnil import construction_calculus as cc
from frobnil.fmodule_calculus import UNKNOWN, UpperBound

h = (0, 0, 1, 2)
print(f"HSL numbers of H^0..H^3: {h}")
print(f"  weakly F-nilpotent bound:            {cc.quy_fte_bound(h, 3)}")
print(f"  annihilator exponent e_1 (N=2, p=3): {cc.maddox_e1(3, 3, 2)}")
print(f"  generalized bound:                   {cc.maddox_fte_bound(h, 3, 2, 3)}")
print(f"  Segre coarse bound (d_T=3, max 2):   {cc.segre_coarse_fte(3, 2)}")
print()
print("Bounds propagate through partial information:")
print(f"  HSL (1, <=3):      {cc.format_value(cc.quy_fte_bound((1, UpperBound(3)), 1))}")
print(f"  HSL (1, unknown):  {cc.format_value(cc.quy_fte_bound((1, UNKNOWN), 1))}")
