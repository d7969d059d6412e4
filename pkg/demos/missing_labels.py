"""Counting labels: Casimirs, internal labels and missing labels.

The number of invariants is dim g minus the generic rank of the matrix
f_ij^k x_k.  For a chain g > g' the missing label count follows once the
invariants common to both are known.
"""

from gkmalg.labels import invariant_count, missing_labels, racah_counts
from gkmalg.lie_core import build_algebra

for name in ("su2", "su3", "so4", "g2"):
    rep = racah_counts(name)
    print(f"{name}: dim {rep.dim}, invariants {invariant_count(build_algebra(name))}, "
          f"labels {rep.total_labels}, internal {rep.internal_labels}")

for g, sub in [("g2", "su3"), ("so4", "so3"), ("so4", "so3L"), ("su3", "su3")]:
    rep = missing_labels(g, sub)
    print(f"{g} > {sub}: l0 = {rep.l0}, missing labels n0 = {rep.n0}")
