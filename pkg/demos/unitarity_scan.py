"""Which highest weights survive the su(2) triple constraints?

For one central charge the constraints reduce to the affine level bound
x >= sum p_i q^i with x integral.  With two charges any nonzero c_1 is
fatal: the scan finds a positive root where c.m - psi.mu0 < 0.
"""

from gkmalg.lie_core import build_algebra, marks
from gkmalg.unitarity import HighestWeightSpec, level_bound, unitarity_constraints

for name in ("su2", "su3", "g2"):
    L = build_algebra(name)
    print(f"{name}: marks {marks(L)}")
    for p in [(0,) * L.rank, (1,) * L.rank, (2,) + (0,) * (L.rank - 1)]:
        for x in (1, 2, 3):
            c = x * L.dot(L.highest_root, L.highest_root) / 2
            _, bound, ok = level_bound(L, p, c)
            scan = unitarity_constraints(L, HighestWeightSpec(p, (c,)), 6)
            print(f"  p={p} level {x}: bound {bound}, level_bound {'ok' if ok else 'no'}, scan {scan.verdict}")

su2 = build_algebra("su2")
rep = unitarity_constraints(su2, HighestWeightSpec((1,), (2.0, 3.0)), 10)
print("two charges (2, 3):", rep.verdict)
print("  witness:", rep.witnesses[0]["reason"])
print("  root:", rep.witnesses[0]["root"])
