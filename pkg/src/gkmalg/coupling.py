"""Expansion tensors of products of harmonics: c_IJ^K, eta_IJ and d_AIJ.

All three are computed by projection on an exact-degree quadrature grid:

    c_IJ^K = (rho_K, rho_I rho_J),   eta_IJ = int rho_I rho_J,
    d_AIJ  = int rho_I d_A rho_J.

Closed forms used as cross-checks live here too: su(2) Clebsch-Gordan
coefficients (Racah sum, Condon-Shortley phase), the spherical harmonic
product rule and the top-sector coefficient on S3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .harmonics import HarmonicBasis
from .manifolds import QuadratureGrid

ZERO_TOL = 1e-12


class ExactnessError(ValueError):
    """Raised when a grid cannot integrate the requested products exactly."""


# ---------------------------------------------------------------------------
# closed forms (labels are doubled integers)


def _fact(n2: int) -> int:
    if n2 % 2:
        raise ValueError("half-integer factorial argument")
    return math.factorial(n2 // 2)


def su2_clebsch(l1: int, m1: int, l2: int, m2: int, l: int, m: int) -> float:
    """<l1 m1; l2 m2 | l m> with every argument doubled."""
    for j, mj in ((l1, m1), (l2, m2), (l, m)):
        if j < 0 or abs(mj) > j or (j - mj) % 2:
            raise ValueError(f"malformed angular momentum pair (2j, 2m) = ({j}, {mj})")
    if m1 + m2 != m:
        return 0.0
    if l < abs(l1 - l2) or l > l1 + l2 or (l1 + l2 - l) % 2:
        return 0.0
    pref = Fraction(
        (l + 1) * _fact(l1 + l2 - l) * _fact(l1 - l2 + l) * _fact(-l1 + l2 + l),
        _fact(l1 + l2 + l + 2),
    )
    pref *= _fact(l + m) * _fact(l - m) * _fact(l1 - m1) * _fact(l1 + m1) * _fact(l2 - m2) * _fact(l2 + m2)
    total = Fraction(0)
    k = 0
    while True:
        args = [l1 + l2 - l - 2 * k, l1 - m1 - 2 * k, l2 + m2 - 2 * k, l - l2 + m1 + 2 * k, l - l1 - m2 + 2 * k]
        if args[0] < 0 or args[1] < 0 or args[2] < 0:
            break
        if args[3] >= 0 and args[4] >= 0:
            den = math.factorial(k)
            for a in args:
                den *= _fact(a)
            total += Fraction((-1) ** k, den)
        k += 1
    return float(math.copysign(math.sqrt(pref), 1) * total)


def yy_coefficient(l1: int, m1: int, l2: int, m2: int, l: int) -> float:
    """Coefficient of rho_{l, m1+m2} in rho_{l1 m1} rho_{l2 m2} on the unit-volume S2.

    Plain integer labels.  With the round-measure Y_lm the same number gets
    an extra factor 1/sqrt(4 pi).
    """
    if abs(m1 + m2) > l:
        return 0.0
    pre = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (2 * l + 1))
    return pre * su2_clebsch(2 * l1, 0, 2 * l2, 0, 2 * l, 0) * su2_clebsch(2 * l1, 2 * m1, 2 * l2, 2 * m2, 2 * l, 2 * (m1 + m2))


def lambda_top(m1p: int, m2p: int, l1: int, l2: int) -> float:
    """Top-sector factor lambda(m1', m2', l1+l2, l1, l2), arguments doubled."""
    for j, mj in ((l1, m1p), (l2, m2p)):
        if j < 0 or abs(mj) > j or (j - mj) % 2:
            raise ValueError(f"label out of range: (2l, 2m') = ({j}, {mj})")
    L, M = l1 + l2, m1p + m2p
    num = math.factorial(l1 + 1) * math.factorial(l2 + 1) * _fact(L + M) * _fact(L - M)
    den = math.factorial(L + 1) * _fact(l1 + m1p) * _fact(l1 - m1p) * _fact(l2 + m2p) * _fact(l2 - m2p)
    return math.sqrt(num / den)


# ---------------------------------------------------------------------------
# tensors


@dataclass
class StructureTensor:
    basis: HarmonicBasis
    degree_cap: int
    exactness: int
    rows: dict[tuple[int, int], dict[int, complex]] = field(default_factory=dict)  # i <= j

    def product(self, i: int, j: int) -> dict[int, complex]:
        return self.rows.get((i, j) if i <= j else (j, i), {})

    def closed(self, i: int, j: int) -> bool:
        d = self.basis.indices
        return d[i].degree + d[j].degree <= self.degree_cap

    def in_cap(self, i: int) -> bool:
        return self.basis.indices[i].degree <= self.degree_cap

    def entries(self):
        """(i, j, k, c) over all ordered pairs i <= j, sorted."""
        for (i, j) in sorted(self.rows):
            for k, c in sorted(self.rows[(i, j)].items()):
                yield i, j, k, c

    def __len__(self) -> int:
        return sum(len(r) for r in self.rows.values())


@dataclass
class EtaMatrix:
    basis: HarmonicBasis
    forward: dict[int, tuple[int, complex]]  # i -> (j, eta_ij), the single nonzero entry of row i
    inverse: dict[int, tuple[int, complex]]  # i -> (j, eta^ij)

    def __call__(self, i: int, j: int) -> complex:
        k, v = self.forward.get(i, (-1, 0j))
        return v if k == j else 0j

    def inv(self, i: int, j: int) -> complex:
        k, v = self.inverse.get(i, (-1, 0j))
        return v if k == j else 0j

    def entries(self):
        for i in sorted(self.forward):
            j, v = self.forward[i]
            yield i, j, v


@dataclass
class DTensor:
    basis: HarmonicBasis
    axis: int
    axis_name: str
    periodic: bool
    rows: dict[tuple[int, int], complex]
    antisymmetric: bool

    def __call__(self, i: int, j: int) -> complex:
        return self.rows.get((i, j), 0j)

    def entries(self):
        for (i, j) in sorted(self.rows):
            yield i, j, self.rows[(i, j)]


def _check_exact(basis: HarmonicBasis, grid: QuadratureGrid, needed: int) -> None:
    if grid.manifold != basis.manifold:
        raise ValueError("grid and basis live on different manifolds")
    if grid.exactness_degree < needed:
        raise ExactnessError(f"grid exactness {grid.exactness_degree} < required {needed}")


def basis_values(basis: HarmonicBasis, grid: QuadratureGrid, positions=None) -> np.ndarray:
    pos = range(len(basis)) if positions is None else positions
    amb = grid.ambient
    return np.array([basis.polys[k].evaluate(amb) for k in pos])


def structure_coefficients(basis: HarmonicBasis, grid: QuadratureGrid, degree_cap: int) -> StructureTensor:
    """All c_IJ^K with deg I, deg J, deg K <= degree_cap, by exact projection."""
    _check_exact(basis, grid, 3 * degree_cap)
    sub = [k for k, I in enumerate(basis.indices) if I.degree <= degree_cap]
    V = basis_values(basis, grid, sub)
    W = (V.conj() * grid.weights).T  # (N, n)
    eig = basis.eigen[sub]
    out = StructureTensor(basis, degree_cap, grid.exactness_degree)
    for a, i in enumerate(sub):
        P = V[a] * V[a:]  # products with partners b >= a
        C = P @ W  # (n - a, n)
        target = eig[a] + eig[a:]
        for b in range(C.shape[0]):
            allowed = np.all(np.abs(eig - target[b]) < 1e-9, axis=1)
            row = {}
            for kk in np.nonzero(allowed & (np.abs(C[b]) > ZERO_TOL))[0]:
                row[sub[kk]] = complex(C[b, kk])
            if row:
                out.rows[(i, sub[a + b])] = row
    return out


def eta_pairing(basis: HarmonicBasis, grid: QuadratureGrid) -> EtaMatrix:
    """eta_IJ = int rho_I rho_J, checked against the basis conjugation map."""
    dmax = max(I.degree for I in basis.indices)
    _check_exact(basis, grid, 2 * dmax)
    V = basis_values(basis, grid)
    E = (V * grid.weights) @ V.T
    fwd, inv = {}, {}
    for i in range(len(basis)):
        nz = np.nonzero(np.abs(E[i]) > ZERO_TOL)[0]
        j, ph = basis.conj[i]
        if len(nz) != 1 or nz[0] != j or abs(E[i, j] - np.conj(ph)) > 1e-10:
            raise ArithmeticError(f"eta row {basis.indices[i]} disagrees with the conjugation map")
        fwd[i] = (j, complex(np.conj(ph)))
    for i, (j, v) in fwd.items():
        inv[j] = (i, 1 / v)
    return EtaMatrix(basis, fwd, inv)


def eta_from_conjugation(basis: HarmonicBasis) -> EtaMatrix:
    fwd = {i: (j, complex(np.conj(ph))) for i, (j, ph) in enumerate(basis.conj)}
    inv = {j: (i, 1 / v) for i, (j, v) in fwd.items()}
    return EtaMatrix(basis, fwd, inv)


def derivative_values(basis: HarmonicBasis, grid: QuadratureGrid, axis: int) -> np.ndarray:
    """d rho / d y_axis at the grid nodes, by the chain rule through the ambient variables."""
    M = basis.manifold
    jac = M.ambient_jacobian(grid.nodes)[:, axis, :]
    amb = grid.ambient
    out = np.zeros((len(basis), len(grid)), dtype=complex)
    for b, p in enumerate(basis.polys):
        for k in range(M.nvars):
            dk = p.derivative(k)
            if dk.terms:
                out[b] += dk.evaluate(amb) * jac[k]
    return out


def d_coefficients(basis: HarmonicBasis, grid: QuadratureGrid, axis) -> DTensor:
    """d_AIJ = int rho_I d_A rho_J.

    Exact on periodic axes.  On a non-periodic axis the integrand is not a
    polynomial in the ambient variables, the boundary term need not vanish,
    and the result is flagged as not antisymmetric when that shows.
    """
    M = basis.manifold
    if isinstance(axis, str):
        names = [a.name for a in M.axes]
        if axis not in names:
            raise ValueError(f"unknown axis {axis!r}; expected one of {names}")
        axis = names.index(axis)
    if not 0 <= axis < M.dim:
        raise ValueError(f"axis index {axis} out of range")
    dmax = max(I.degree for I in basis.indices)
    _check_exact(basis, grid, 2 * dmax)
    V = basis_values(basis, grid)
    dV = derivative_values(basis, grid, axis)
    Dm = (V * grid.weights) @ dV.T
    rows = {}
    for i, j in zip(*np.nonzero(np.abs(Dm) > ZERO_TOL)):
        rows[(int(i), int(j))] = complex(Dm[i, j])
    anti = bool(np.abs(Dm + Dm.T).max() <= 1e-10)
    return DTensor(basis, axis, M.axes[axis].name, M.axes[axis].periodic, rows, anti)


def closure_defect(basis: HarmonicBasis, grid: QuadratureGrid, c: StructureTensor, i: int, j: int) -> float:
    """L2(grid) norm of rho_I rho_J - sum_K c_IJ^K rho_K."""
    amb = grid.ambient
    prod = basis.polys[i].evaluate(amb) * basis.polys[j].evaluate(amb)
    for k, v in c.product(i, j).items():
        prod = prod - v * basis.polys[k].evaluate(amb)
    return float(math.sqrt(max(np.sum(grid.weights * np.abs(prod) ** 2), 0.0)))
