"""On the circle the construction gives back affine su(2).

Harmonics on T^1 are e^{i m phi}, products are exact, and the only grading
operator is D = -i d/dphi.  We assemble the algebra, look at a few brackets,
and read off the affine Cartan matrix from the simple roots.
"""

from gkmalg.coupling import eta_pairing, structure_coefficients
from gkmalg.gkm import assemble, verify_jacobi
from gkmalg.harmonics import build_basis
from gkmalg.lie_core import build_algebra
from gkmalg.manifolds import build_grid
from gkmalg.roots import simple_roots

cap = 4
basis = build_basis("torus", cap, n=1)
grid = build_grid(basis.manifold, 3 * cap)
G = assemble(build_algebra("su2"), basis, structure_coefficients(basis, grid, cap), eta_pairing(basis, grid))
print(f"{len(basis)} harmonics, modes m = {[I.labels[0] for I in basis.indices]}")

# loop algebra part: [T_0 t^1, T_1 t^1] = i T_2 t^2
Z = G.bracket(G.T(0, (1,)), G.T(1, (1,)))
print("[T0 t, T1 t]     =", Z.to_json(basis)["T"])

# the central term appears when the modes cancel: m g_ab k with g = 1/2
Z = G.bracket(G.T(2, (2,)), G.T(2, (-2,)))
print("[T2 t^2, T2 t^-2] central part =", Z.K[0].real)

# D counts modes
Z = G.bracket(G.D(0), G.T(0, (3,)))
print("[D, T0 t^3]      =", Z.to_json(basis)["T"])

rep = verify_jacobi(G)
print(f"Jacobi over {rep.triples} closed triples: residual {rep.residual:.1e}")

res = simple_roots(G)
print("simple roots:", res.roots)
print("affine Cartan matrix:", res.cartan.round(12).tolist())
