"""Products of spherical harmonics and the algebra on S^2.

The structure tensor c_IJ^K is computed by quadrature and compared with the
Clebsch-Gordan closed form.  Then the full invariant suite runs on the
closed sector.
"""

from gkmalg.coupling import structure_coefficients, eta_pairing, yy_coefficient
from gkmalg.gkm import (assemble, verify_antisymmetry, verify_cocycle, verify_grading, verify_jacobi,
                        verify_killing_invariance)
from gkmalg.harmonics import build_basis
from gkmalg.lie_core import build_algebra
from gkmalg.manifolds import build_grid

cap = 4
basis = build_basis("s2", cap)
grid = build_grid(basis.manifold, 3 * cap)
print(f"S^2 basis with l <= {cap}: {len(basis)} functions, grid of {len(grid)} nodes")

c = structure_coefficients(basis, grid, cap)
Y11, Y1m1 = basis.pos((1, 1)), basis.pos((1, -1))
print("Y_11 Y_1-1 =", {str(basis.indices[k]): round(v.real, 12) for k, v in c.product(Y11, Y1m1).items()})
print("closed form:", {f"({l}, 0)": round(yy_coefficient(1, 1, 1, -1, l), 12) for l in (0, 2)})

worst = 0.0
for (i, j), row in c.rows.items():
    (l1, m1), (l2, m2) = basis.indices[i].labels, basis.indices[j].labels
    for k, v in row.items():
        worst = max(worst, abs(v - yy_coefficient(l1, m1, l2, m2, basis.indices[k].labels[0])))
print(f"largest deviation from the closed form over {len(c)} pairs: {worst:.1e}")

G = assemble(build_algebra("su2"), basis, c, eta_pairing(basis, grid))
for rep in [verify_jacobi(G), *verify_cocycle(G), verify_killing_invariance(G), verify_antisymmetry(G),
            verify_grading(G)]:
    print(f"  {rep.check:20s} {rep.triples:6d} cases  residual {rep.residual:.1e}  {'ok' if rep.passed else 'FAIL'}")
