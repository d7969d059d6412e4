"""Compact simple Lie algebra data: structure constants, Killing form, roots.

Generators are Hermitian matrices ``T_a`` with ``[T_a, T_b] = i f_ab^c T_c``.
Bases are chosen so that every ``f_ab^c`` is rational, which lets the Jacobi
identity be checked in exact arithmetic:

* su2: ``T_a = sigma_a / 2``.
* su3: Gell-Mann ``lambda_a / 2`` except that ``lambda_8`` is replaced by
  ``diag(1, 1, -2)``, i.e. ``T_8 = sqrt(3) lambda_8 / 2``.
* so4: ``(N_0, N_1, N_2, N_0', N_1', N_2')``, two commuting su2 copies with
  ``N_0``, ``N_0'`` diagonal; ``N_pm = N_1 +- i N_2``.
* g2: derivations of the octonions inside so(7), from the rational null
  space of the action on the associative three-form.

Root data is numeric.  The invariant form ``<,>_0`` is the Killing form
rescaled so that long roots have length squared 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy as sp

ALGEBRAS = ("su2", "su3", "so4", "g2")

# Associative three-form of the octonions, lines i, i+1, i+3 (mod 7).
FANO_LINES = tuple(tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7))


@dataclass(eq=False)
class LieAlgebraSpec:
    name: str
    rank: int
    dim: int
    matrices: list[sp.Matrix] = field(repr=False)  # Hermitian T_a, exact
    f_exact: dict[tuple[int, int], dict[int, Fraction]] = field(repr=False)
    f: np.ndarray = field(repr=False)  # f[a, b, c]
    killing: np.ndarray = field(repr=False)  # Tr(ad T_a ad T_b)
    metric: np.ndarray = field(repr=False)  # normalized <T_a, T_b>_0
    metric_scale: Fraction = Fraction(1)  # metric = scale * killing
    cartan: np.ndarray = field(default=None, repr=False)  # (rank, dim) real coefficients of H^i
    cartan_metric: np.ndarray = field(default=None, repr=False)  # h_ij = <H^i, H^j>_0
    root_metric: np.ndarray = field(default=None, repr=False)  # inverse of cartan_metric
    roots: np.ndarray = field(default=None, repr=False)  # (nroots, rank), alpha^i = alpha(H^i)
    root_vectors: np.ndarray = field(default=None, repr=False)  # (nroots, dim) complex E_alpha
    positive: np.ndarray = field(default=None, repr=False)  # bool per root
    simple_roots: np.ndarray = field(default=None, repr=False)  # (rank, rank)
    simple_coords: np.ndarray = field(default=None, repr=False)  # (nroots, rank) integers
    fundamental_weights: np.ndarray = field(default=None, repr=False)
    highest_root: np.ndarray | None = field(default=None, repr=False)
    blocks: tuple[tuple[int, ...], ...] = ()

    # -- geometry of the root space ----------------------------------------
    def dot(self, x, y) -> float:
        return float(np.asarray(x) @ self.root_metric @ np.asarray(y))

    @property
    def simple(self) -> bool:
        return len(self.blocks) <= 1

    @property
    def cartan_matrix(self) -> np.ndarray:
        """a_ij = 2 alpha_i.alpha_j / alpha_i.alpha_i (the g2 table reads [[2,-1],[-3,2]])."""
        S = self.simple_roots
        A = np.array([[2 * self.dot(S[i], S[j]) / self.dot(S[i], S[i]) for j in range(self.rank)] for i in range(self.rank)])
        return np.rint(A).astype(int)

    def root_index(self, alpha, tol: float = 1e-9) -> int:
        d = np.abs(self.roots - np.asarray(alpha)).max(axis=1)
        k = int(np.argmin(d))
        if d[k] > tol:
            raise KeyError(f"{alpha} is not a root")
        return k

    def coords(self, vec) -> np.ndarray:
        """Coordinates of a root-space vector in the simple-root basis."""
        return np.linalg.solve(self.simple_roots.T, np.asarray(vec, dtype=float))

    def height(self, vec) -> float:
        return float(self.coords(vec).sum())

    def is_positive_finite(self, vec, tol: float = 1e-9) -> bool:
        c = self.coords(vec)
        for x in c[::-1]:
            if x > tol:
                return True
            if x < -tol:
                return False
        raise ValueError("zero vector has no sign")

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[sum x_a T_a, sum y_b T_b] = i sum x_a y_b f_ab^c T_c, coefficient vectors."""
        return 1j * np.einsum("a,b,abc->c", x, y, self.f)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad(sum x_a T_a) acting on coefficient vectors."""
        return 1j * np.einsum("a,abc->cb", x, self.f)

    def inner0(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.metric @ np.asarray(y))

    def E(self, alpha) -> np.ndarray:
        return self.root_vectors[self.root_index(alpha)]

    def N(self, alpha, beta) -> complex:
        """Structure constant in [E_alpha, E_beta] = N_{alpha,beta} E_{alpha+beta} (0 if not a root)."""
        gamma = np.asarray(alpha) + np.asarray(beta)
        try:
            k = self.root_index(gamma)
        except KeyError:
            return 0.0
        br = self.bracket(self.E(alpha), self.E(beta))
        minus = self.root_vectors[self.root_index(-gamma)]
        return complex(br @ self.metric @ minus)

    def casimir_degrees(self) -> list[int]:
        """Degrees of primitive Casimirs from the height distribution of positive roots."""
        heights = [int(round(h)) for h in self.simple_coords[self.positive].sum(axis=1)]
        top = max(heights, default=0)
        count = [sum(1 for h in heights if h == k) for k in range(1, top + 2)]
        count[0] = self.rank if not heights else count[0]
        degs = []
        for k in range(1, top + 1):
            degs += [k + 1] * (count[k - 1] - count[k])
        return sorted(degs)

    def to_json(self) -> dict:
        trip = []
        for (a, b), row in sorted(self.f_exact.items()):
            for c, v in sorted(row.items()):
                trip.append([a, b, c, str(v)])
        return {
            "name": self.name,
            "rank": self.rank,
            "dim": self.dim,
            "f": trip,
            "roots": self.roots.tolist(),
            "simple_roots": self.simple_roots.tolist(),
            "fundamental_weights": self.fundamental_weights.tolist(),
            "cartan_matrix": self.cartan_matrix.tolist(),
        }


# ---------------------------------------------------------------------------
# exact matrix bases


def _su2_mats():
    s1 = sp.Matrix([[0, 1], [1, 0]])
    s2 = sp.Matrix([[0, -sp.I], [sp.I, 0]])
    s3 = sp.Matrix([[1, 0], [0, -1]])
    return [m / 2 for m in (s1, s2, s3)]


def _su3_mats():
    I = sp.I
    lam = [
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, -I, 0], [I, 0, 0], [0, 0, 0]],
        [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, -I], [0, 0, 0], [I, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 0], [0, 0, -I], [0, I, 0]],
        [[1, 0, 0], [0, 1, 0], [0, 0, -2]],
    ]
    return [sp.Matrix(m) / 2 for m in lam]


def _so4_mats():
    s = _su2_mats()
    order = (2, 0, 1)  # N_0 first
    z = sp.zeros(2, 2)
    left = [sp.diag(s[k], z) for k in order]
    right = [sp.diag(z, s[k]) for k in order]
    return left + right


def _g2_mats():
    phi = {}
    for (i, j, k) in FANO_LINES:
        for p, sgn in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1), ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            phi[p] = sgn
    pairs = [(i, j) for i in range(7) for j in range(i + 1, 7)]
    rows = []
    for i in range(7):
        for j in range(7):
            for k in range(7):
                row = []
                for (p, q) in pairs:
                    A = sp.zeros(7, 7)
                    A[p, q], A[q, p] = 1, -1
                    v = 0
                    for l in range(7):
                        v += A[l, i] * phi.get((l, j, k), 0) + A[l, j] * phi.get((i, l, k), 0) + A[l, k] * phi.get((i, j, l), 0)
                    row.append(v)
                rows.append(row)
    null = sp.Matrix(rows).nullspace()
    mats = []
    for vec in null:
        A = sp.zeros(7, 7)
        for val, (p, q) in zip(vec, pairs):
            A[p, q], A[q, p] = val, -val
        mats.append(sp.I * A)  # Hermitian
    return mats


def _structure_constants(mats):
    dim = len(mats)
    X = [-sp.I * m for m in mats]  # anti-Hermitian, [X_a, X_b] = f_ab^c X_c
    G = sp.Matrix(dim, dim, lambda c, d: sp.nsimplify((X[c].H * X[d]).trace()))
    Ginv = G.inv()
    f_exact: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            comm = X[a] * X[b] - X[b] * X[a]
            if comm.is_zero_matrix:
                continue
            rhs = sp.Matrix([sp.nsimplify((X[d].H * comm).trace()) for d in range(dim)])
            sol = Ginv * rhs
            row = {}
            for c in range(dim):
                v = sp.nsimplify(sp.expand(sol[c]))
                if v != 0:
                    if not v.is_rational:
                        raise ArithmeticError("structure constant is not rational in this basis")
                    row[c] = Fraction(int(v.p), int(v.q))
            # exactness check of the expansion
            recon = sp.zeros(*comm.shape)
            for c, v in row.items():
                recon += sp.Rational(v.numerator, v.denominator) * X[c]
            if not (recon - comm).expand().is_zero_matrix:
                raise ArithmeticError("commutator is not in the span of the basis")
            if row:
                f_exact[(a, b)] = row
                f_exact[(b, a)] = {c: -v for c, v in row.items()}
    return f_exact


def jacobi_exact(f_exact, dim) -> bool:
    for a in range(dim):
        for b in range(a + 1, dim):
            for c in range(b + 1, dim):
                acc: dict[int, Fraction] = {}
                for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                    for d, v in f_exact.get((x, y), {}).items():
                        for e, w in f_exact.get((d, z), {}).items():
                            acc[e] = acc.get(e, Fraction(0)) + v * w
                if any(v != 0 for v in acc.values()):
                    return False
    return True


def _killing_exact(f_exact, dim) -> list[list[Fraction]]:
    # Tr(ad T_a ad T_b) = -sum_{c,d} f_ad^c f_bc^d
    K = [[Fraction(0)] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            acc = Fraction(0)
            for d in range(dim):
                for c, v in f_exact.get((a, d), {}).items():
                    w = f_exact.get((b, c), {}).get(d)
                    if w:
                        acc += v * w
            K[a][b] = -acc
    return K


def _cartan_choice(name, mats, f_exact, dim):
    if name == "su2":
        return [[0, 0, 1]]
    if name == "su3":
        e = [0] * 8
        H1, H2 = list(e), list(e)
        H1[2] = 1
        H2[7] = 1
        return [H1, H2]
    if name == "so4":
        return [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]]
    # g2: centralizer of a fixed regular element, exactly
    x = [Fraction(k + 1) if k % 3 else Fraction(-k - 2) for k in range(dim)]
    M = sp.zeros(dim, dim)
    for b in range(dim):
        for a in range(dim):
            for c, v in f_exact.get((a, b), {}).items():
                M[c, b] += sp.Rational(x[a].numerator, x[a].denominator) * sp.Rational(v.numerator, v.denominator)
    null = M.nullspace()
    if len(null) != 2:
        raise ArithmeticError("chosen g2 element is not regular")
    vecs = [[sp.Rational(v) for v in n] for n in null]
    return vecs


@lru_cache(maxsize=None)
def build_algebra(name: str) -> LieAlgebraSpec:
    name = name.lower()
    if name not in ALGEBRAS:
        raise ValueError(f"unknown algebra {name!r}; expected one of {ALGEBRAS}")
    mats = {"su2": _su2_mats, "su3": _su3_mats, "so4": _so4_mats, "g2": _g2_mats}[name]()
    dim = len(mats)
    f_exact = _structure_constants(mats)
    if not jacobi_exact(f_exact, dim):
        raise ArithmeticError(f"Jacobi identity fails for {name}")
    f = np.zeros((dim, dim, dim))
    for (a, b), row in f_exact.items():
        for c, v in row.items():
            f[a, b, c] = float(v)
    Kx = _killing_exact(f_exact, dim)
    killing = np.array([[float(v) for v in row] for row in Kx])
    cart = np.array([[float(v) for v in h] for h in _cartan_choice(name, mats, f_exact, dim)])
    spec = LieAlgebraSpec(
        name=name, rank=len(cart), dim=dim, matrices=mats, f_exact=f_exact, f=f,
        killing=killing, metric=killing.copy(), cartan=cart,
        blocks=((0, 1, 2), (3, 4, 5)) if name == "so4" else (tuple(range(dim)),),
    )
    _root_data(spec)
    _check(spec)
    return spec


def _root_data(spec: LieAlgebraSpec) -> None:
    dim, rank = spec.dim, spec.rank
    adH = [spec.ad(h) for h in spec.cartan]
    weights = np.array([1.0, math.sqrt(2) / 7, math.sqrt(3) / 31, math.sqrt(5) / 101][:rank])
    generic = sum(w * a for w, a in zip(weights, adH))
    vals, vecs = np.linalg.eig(generic)
    roots, rvecs = [], []
    for k in range(dim):
        if abs(vals[k]) < 1e-8:
            continue
        v = vecs[:, k]
        alpha = np.array([np.vdot(v, A @ v).real / np.vdot(v, v).real for A in adH])
        roots.append(alpha)
        rvecs.append(v)
    roots = np.array(roots)
    if len(roots) != dim - rank:
        raise ArithmeticError("root decomposition failed")
    # normalization of the invariant form: long roots have length^2 = 2
    HK = spec.cartan @ spec.killing @ spec.cartan.T
    GK = np.linalg.inv(HK)
    lens = np.einsum("ri,ij,rj->r", roots, GK, roots)
    scale = Fraction(float(lens.max() / 2)).limit_denominator(10000)
    spec.metric_scale = scale
    spec.metric = float(scale) * spec.killing
    spec.cartan_metric = float(scale) * HK
    spec.root_metric = np.linalg.inv(spec.cartan_metric)
    # positivity from a generic functional, then simple roots
    fun = weights
    pos = roots @ fun > 0
    order = np.lexsort((-(roots @ fun), np.round(np.einsum("ri,ij,rj->r", roots, spec.root_metric, roots), 9)))
    roots, pos = roots[order], pos[order]
    rvecs = [rvecs[k] for k in order]
    P = roots[pos]
    simple = []
    for a in P:
        decomposable = any(
            np.allclose(a - b, c, atol=1e-9) for b in P for c in P
        )
        if not decomposable:
            simple.append(a)
    simple = sorted(simple, key=lambda a: (-round(float(a @ spec.root_metric @ a), 9), -float(a @ fun)))
    spec.simple_roots = np.array(simple)
    spec.roots = roots
    spec.positive = pos
    coords = np.linalg.solve(spec.simple_roots.T, roots.T).T
    if np.abs(coords - np.rint(coords)).max() > 1e-8:
        raise ArithmeticError("roots are not integral in the simple-root basis")
    spec.simple_coords = np.rint(coords).astype(int)
    # root vectors: E_{-alpha} = conj(E_alpha), <E_alpha, E_-alpha>_0 = 1
    vec = np.zeros((len(roots), dim), dtype=complex)
    for k in range(len(roots)):
        if not pos[k]:
            continue
        v = rvecs[k]
        j = int(np.argmax(np.abs(v) > np.abs(v).max() - 1e-9))
        v = v * (abs(v[j]) / v[j])
        v = v / math.sqrt((v @ spec.metric @ np.conj(v)).real)
        vec[k] = v
        neg = int(np.argmin(np.abs(roots + roots[k]).max(axis=1)))
        vec[neg] = np.conj(v)
    spec.root_vectors = vec
    # fundamental weights: 2 mu^i . alpha_j / alpha_j . alpha_j = delta
    S = spec.simple_roots
    M = np.array([[2 * (spec.root_metric @ S[j])[k] / spec.dot(S[j], S[j]) for k in range(rank)] for j in range(rank)])
    spec.fundamental_weights = np.linalg.solve(M, np.eye(rank)).T
    if spec.simple:
        heights = spec.simple_coords.sum(axis=1)
        spec.highest_root = roots[int(np.argmax(heights))]


def marks(spec: LieAlgebraSpec, with_zero: bool = False) -> list[int]:
    """Integers q^i with psi/(psi.psi) = sum q^i alpha_i/(alpha_i.alpha_i); q^0 = 1 prepended on request."""
    if spec.highest_root is None:
        raise ValueError(f"{spec.name} is not simple; no highest root")
    psi = spec.highest_root
    k = spec.coords(psi)
    q = [k[i] * spec.dot(spec.simple_roots[i], spec.simple_roots[i]) / spec.dot(psi, psi) for i in range(spec.rank)]
    qi = [int(round(x)) for x in q]
    if max(abs(a - b) for a, b in zip(q, qi)) > 1e-9:
        raise ArithmeticError("marks are not integral")
    return ([1] if with_zero else []) + qi


def killing_form(spec: LieAlgebraSpec, a: int, b: int) -> float:
    """Tr(ad T_a ad T_b)."""
    if not (0 <= a < spec.dim and 0 <= b < spec.dim):
        raise IndexError("generator index out of range")
    return float(spec.killing[a, b])


def weyl_reflect(spec: LieAlgebraSpec, beta, alpha) -> np.ndarray:
    beta, alpha = np.asarray(beta), np.asarray(alpha)
    return beta - 2 * spec.dot(beta, alpha) / spec.dot(alpha, alpha) * alpha


def _check(spec: LieAlgebraSpec) -> None:
    dim = spec.dim
    if not np.allclose(spec.killing, spec.killing.T):
        raise ArithmeticError("Killing form is not symmetric")
    # dense ad-trace oracle
    ads = [spec.ad(np.eye(dim)[a]) for a in range(dim)]
    K = np.array([[np.trace(ads[a] @ ads[b]).real for b in range(dim)] for a in range(dim)])
    if not np.allclose(K, spec.killing, atol=1e-10):
        raise ArithmeticError("Killing form disagrees with ad traces")
    for k in range(len(spec.roots)):
        for s in spec.simple_roots:
            spec.root_index(weyl_reflect(spec, spec.roots[k], s))
        minus = spec.root_index(-spec.roots[k])
        val = spec.root_vectors[k] @ spec.metric @ spec.root_vectors[minus]
        if abs(val - 1) > 1e-9:
            raise ArithmeticError("root vectors are not normalized")
    degs = spec.casimir_degrees()
    if 2 * sum(degs) != dim + spec.rank:
        raise ArithmeticError("Casimir degree sum mismatch")
    S, mu = spec.simple_roots, spec.fundamental_weights
    D = np.array([[2 * spec.dot(mu[i], S[j]) / spec.dot(S[j], S[j]) for j in range(spec.rank)] for i in range(spec.rank)])
    if not np.allclose(D, np.eye(spec.rank), atol=1e-9):
        raise ArithmeticError("fundamental weights are not dual to the simple coroots")
    if spec.simple:
        marks(spec)
