"""Charts, normalized measures and exact-degree product quadrature.

Supported manifolds and their axis order (periodic axes first):

=========  ==================================  ===============================
id         chart axes                          ambient variables
=========  ==================================  ===============================
torus      phi_1 .. phi_n                      w_k = e^{i phi_k}
s2         phi, psi                            zeta = sin psi e^{i phi}, t
s3su2      phi1, phi2, theta in [0, pi/2]      alpha, beta
s3so4      phi, theta, psi                     w = x1 + i x2, u = x3 + i x4
s5         phi1, phi2, phi3, xi, theta         z1, z2, z3
s6         phi, theta1 .. theta5               z1, z2, z3, x0
=========  ==================================  ===============================

Complex ambient variables come with their conjugates as separate symbols.
On the spheres the ambient coordinates are Euclidean coordinates of the unit
sphere, so L2 inner products of polynomials follow from Gaussian moments
(:func:`sphere_moment`) without any quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from scipy import special

from .polynomial import Poly

DEFAULT_NODE_BUDGET = 10**7
PI = math.pi


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    periodic: bool
    rule: str  # periodic | gegenbauer | sin2_uniform | sin2_jacobi
    param: float = 0.0


@dataclass(frozen=True, eq=False)
class ManifoldSpec:
    id: str
    n: int | None
    axes: tuple[Axis, ...]
    var_names: tuple[str, ...]
    partner: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    reals: tuple[int, ...]
    kind: str  # sphere | torus
    euclid_dim: int
    _exprs: Callable[[tuple], tuple] = field(repr=False)
    _density: Callable[[tuple], sp.Expr] = field(repr=False)

    @property
    def name(self) -> str:
        return {
            "torus": f"TorusN({self.n})",
            "s2": "S2_SU2modU1",
            "s3su2": "S3_SU2",
            "s3so4": "S3_SO4modSO3",
            "s5": "S5_SU3modSU2",
            "s6": "S6_SO7modSO6",
        }[self.id]

    @property
    def key(self) -> str:
        return f"torus{self.n}" if self.id == "torus" else self.id

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def num_periodic(self) -> int:
        return sum(a.periodic for a in self.axes)

    @property
    def num_nonperiodic(self) -> int:
        return self.dim - self.num_periodic

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def __eq__(self, other):
        return isinstance(other, ManifoldSpec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # -- symbolic chart ------------------------------------------------
    @cached_property
    def symbols(self) -> tuple[sp.Symbol, ...]:
        return tuple(sp.Symbol(a.name, real=True) for a in self.axes)

    @cached_property
    def chart_exprs(self) -> tuple[sp.Expr, ...]:
        """Ambient variables as functions of the chart coordinates."""
        return tuple(self._exprs(self.symbols))

    @cached_property
    def density(self) -> sp.Expr:
        """Normalized measure density with respect to d(axes)."""
        return self._density(self.symbols)

    @cached_property
    def _value_fn(self):
        return sp.lambdify(self.symbols, list(self.chart_exprs), "numpy")

    @cached_property
    def _jac_fn(self):
        jac = [[sp.diff(e, s) for s in self.symbols] for e in self.chart_exprs]
        return sp.lambdify(self.symbols, jac, "numpy")

    def ambient_values(self, coords: np.ndarray) -> list[np.ndarray]:
        """Ambient variable values at chart points, coords of shape (N, dim)."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        cols = [coords[:, k] for k in range(self.dim)]
        shape = cols[0].shape
        return [np.broadcast_to(np.asarray(v, dtype=complex), shape) for v in self._value_fn(*cols)]

    def ambient_jacobian(self, coords: np.ndarray) -> np.ndarray:
        """Array (nvars, dim, N) of d(var)/d(axis) at chart points."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        cols = [coords[:, k] for k in range(self.dim)]
        raw = self._jac_fn(*cols)
        n = coords.shape[0]
        out = np.empty((self.nvars, self.dim, n), dtype=complex)
        for i in range(self.nvars):
            for a in range(self.dim):
                out[i, a] = np.broadcast_to(np.asarray(raw[i][a], dtype=complex), (n,))
        return out

    def from_euclidean(self, X: np.ndarray) -> list[np.ndarray]:
        """Ambient variable values from Euclidean coordinates, X of shape (N, euclid_dim)."""
        if self.kind != "sphere":
            raise ValueError(f"{self.name} has no Euclidean sphere embedding")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        vals: list[np.ndarray | None] = [None] * self.nvars
        col = 0
        for i, j in self.pairs:
            z = X[:, col] + 1j * X[:, col + 1]
            vals[i], vals[j] = z, np.conj(z)
            col += 2
        for r in self.reals:
            vals[r] = X[:, col].astype(complex)
            col += 1
        return vals  # type: ignore[return-value]

    def contains(self, coords: Sequence[float]) -> bool:
        return all(a.lo <= x <= a.hi for a, x in zip(self.axes, coords))

    # -- exact moments ---------------------------------------------------
    def moment(self, exps: Sequence[int]) -> float:
        if self.kind == "torus":
            return 1.0 if all(exps[i] == exps[j] for i, j in self.pairs) else 0.0
        return sphere_moment(exps, self.pairs, self.reals, self.euclid_dim)

    def inner(self, p: Poly, q: Poly) -> complex:
        """(p, q) = integral of conj(p) q over the normalized measure."""
        pc = p.conjugate(self.partner)
        acc = 0j
        for e1, c1 in pc.terms.items():
            for e2, c2 in q.terms.items():
                m = self.moment(tuple(a + b for a, b in zip(e1, e2)))
                if m:
                    acc += c1 * c2 * m
        return acc

    def gram(self, polys: Sequence[Poly]) -> np.ndarray:
        n = len(polys)
        G = np.zeros((n, n), dtype=complex)
        for a in range(n):
            for b in range(a, n):
                G[a, b] = self.inner(polys[a], polys[b])
                G[b, a] = np.conj(G[a, b])
        return G


def sphere_moment(exps, pairs, reals, d) -> float:
    """Average of a monomial over the unit sphere S^{d-1} in R^d.

    Complex pairs (z, conj z) contribute only through |z|^{2a}; real
    coordinates only through even powers.  The value is the Gaussian moment
    divided by the radial moment, which is a rational number.
    """
    num = Fraction(1)
    half_k = 0
    for i, j in pairs:
        a, b = exps[i], exps[j]
        if a != b:
            return 0.0
        num *= math.factorial(a)
        half_k += a
    for r in reals:
        c = exps[r]
        if c % 2:
            return 0.0
        # (c-1)!! / 2^{c/2}
        num *= Fraction(_double_factorial(c - 1), 2 ** (c // 2))
        half_k += c // 2
    den = Fraction(1)
    for j in range(half_k):
        den *= Fraction(d, 2) + j
    return float(num / den)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _conj_layout(ncomplex: int, nreal: int):
    names_idx = []
    partner = []
    pairs = []
    for k in range(ncomplex):
        pairs.append((2 * k, 2 * k + 1))
        partner += [2 * k + 1, 2 * k]
    base = 2 * ncomplex
    reals = tuple(range(base, base + nreal))
    partner += list(reals)
    return tuple(partner), tuple(pairs), reals


def _with_conj(zs: Sequence[sp.Expr]) -> list[sp.Expr]:
    out = []
    for z in zs:
        out += [z, sp.conjugate(z)]
    return out


def build_manifold(id: str, n: int | None = None) -> ManifoldSpec:
    """Build a chart by id: torus (with n), s2, s3su2, s3so4, s5, s6.

    Aliases from the long names (``TorusN``, ``S2_SU2modU1`` ...) are accepted.
    """
    key = _normalize_id(id)
    if key.startswith("torus"):
        if n is None:
            tail = key[len("torus"):]
            n = int(tail) if tail else 1
        if n < 1:
            raise ValueError("torus dimension must be >= 1")
        partner, pairs, reals = _conj_layout(n, 0)
        axes = tuple(Axis(f"phi{k + 1}", 0.0, 2 * PI, True, "periodic") for k in range(n))
        names = tuple(x for k in range(n) for x in (f"w{k + 1}", f"wb{k + 1}"))
        return ManifoldSpec(
            "torus", n, axes, names, partner, pairs, reals, "torus", 0,
            lambda s: _with_conj([sp.exp(sp.I * p) for p in s]),
            lambda s: sp.Integer(1) / (2 * sp.pi) ** len(s),
        )
    if key == "s2":
        partner, pairs, reals = _conj_layout(1, 1)
        axes = (Axis("phi", 0.0, 2 * PI, True, "periodic"), Axis("psi", 0.0, PI, False, "gegenbauer", 0.5))
        return ManifoldSpec(
            "s2", None, axes, ("zeta", "zetab", "t"), partner, pairs, reals, "sphere", 3,
            lambda s: _with_conj([sp.sin(s[1]) * sp.exp(sp.I * s[0])]) + [sp.cos(s[1])],
            lambda s: sp.sin(s[1]) / (4 * sp.pi),
        )
    if key == "s3su2":
        partner, pairs, reals = _conj_layout(2, 0)
        axes = (
            Axis("phi1", 0.0, 2 * PI, True, "periodic"),
            Axis("phi2", 0.0, 2 * PI, True, "periodic"),
            Axis("theta", 0.0, PI / 2, False, "sin2_uniform"),
        )
        return ManifoldSpec(
            "s3su2", None, axes, ("alpha", "alphab", "beta", "betab"), partner, pairs, reals, "sphere", 4,
            lambda s: _with_conj([sp.cos(s[2]) * sp.exp(sp.I * s[0]), sp.sin(s[2]) * sp.exp(sp.I * s[1])]),
            lambda s: sp.sin(s[2]) * sp.cos(s[2]) / (2 * sp.pi**2),
        )
    if key == "s3so4":
        partner, pairs, reals = _conj_layout(2, 0)
        axes = (
            Axis("phi", 0.0, 2 * PI, True, "periodic"),
            Axis("theta", 0.0, PI, False, "gegenbauer", 0.5),
            Axis("psi", 0.0, PI, False, "gegenbauer", 1.0),
        )

        def exprs(s):
            ph, th, ps = s
            w = sp.sin(ps) * sp.sin(th) * sp.exp(sp.I * ph)
            u = sp.sin(ps) * sp.cos(th) + sp.I * sp.cos(ps)
            return _with_conj([w, u])

        return ManifoldSpec(
            "s3so4", None, axes, ("w", "wb", "u", "ub"), partner, pairs, reals, "sphere", 4,
            exprs, lambda s: sp.sin(s[2]) ** 2 * sp.sin(s[1]) / (2 * sp.pi**2),
        )
    if key == "s5":
        partner, pairs, reals = _conj_layout(3, 0)
        axes = (
            Axis("phi1", 0.0, 2 * PI, True, "periodic"),
            Axis("phi2", 0.0, 2 * PI, True, "periodic"),
            Axis("phi3", 0.0, 2 * PI, True, "periodic"),
            Axis("xi", 0.0, PI / 2, False, "sin2_uniform"),
            Axis("theta", 0.0, PI / 2, False, "sin2_jacobi"),
        )

        def exprs(s):
            p1, p2, p3, xi, th = s
            return _with_conj([
                sp.sin(th) * sp.cos(xi) * sp.exp(sp.I * p1),
                sp.sin(th) * sp.sin(xi) * sp.exp(sp.I * p2),
                sp.cos(th) * sp.exp(sp.I * p3),
            ])

        return ManifoldSpec(
            "s5", None, axes, ("z1", "zb1", "z2", "zb2", "z3", "zb3"), partner, pairs, reals, "sphere", 6,
            exprs,
            lambda s: sp.sin(s[4]) ** 3 * sp.cos(s[4]) * sp.sin(s[3]) * sp.cos(s[3]) / sp.pi**3,
        )
    if key == "s6":
        partner, pairs, reals = _conj_layout(3, 1)
        axes = (Axis("phi", 0.0, 2 * PI, True, "periodic"),) + tuple(
            Axis(f"theta{k}", 0.0, PI, False, "gegenbauer", k / 2) for k in range(1, 6)
        )

        def exprs(s):
            ph, t1, t2, t3, t4, t5 = s
            S, C = sp.sin, sp.cos
            z1 = S(t1) * S(t2) * S(t3) * S(t4) * S(t5) * sp.exp(sp.I * ph)
            z2 = (C(t1) * S(t2) + sp.I * C(t2)) * S(t3) * S(t4) * S(t5)
            z3 = (C(t3) * S(t4) + sp.I * C(t4)) * S(t5)
            return _with_conj([z1, z2, z3]) + [C(t5)]

        def dens(s):
            out = sp.Rational(15, 16) / sp.pi**3
            for k in range(1, 6):
                out *= sp.sin(s[k]) ** k
            return out

        return ManifoldSpec(
            "s6", None, axes, ("z1", "zb1", "z2", "zb2", "z3", "zb3", "x0"), partner, pairs, reals, "sphere", 7,
            exprs, dens,
        )
    raise ValueError(f"unsupported manifold id {id!r}")


_ALIASES = {
    "s2_su2modu1": "s2", "s3_su2": "s3su2", "s3": "s3su2", "su2": "s3su2",
    "s3_so4modso3": "s3so4", "s5_su3modsu2": "s5", "s6_so7modso6": "s6",
}


def _normalize_id(id: str) -> str:
    k = id.strip().lower().replace("-", "_")
    if k.startswith("torusn(") and k.endswith(")"):
        return "torus" + k[7:-1]
    if k.startswith("torus"):
        return k
    if k[:1] == "t" and k[1:].isdigit():
        return "torus" + k[1:]
    return _ALIASES.get(k, k)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    manifold: ManifoldSpec
    nodes: np.ndarray  # (N, dim)
    weights: np.ndarray  # (N,)
    exactness_degree: int

    def __len__(self) -> int:
        return len(self.weights)

    def to_json(self) -> dict:
        return {
            "manifold": self.manifold.key,
            "exactness_degree": self.exactness_degree,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }

    @cached_property
    def ambient(self) -> list[np.ndarray]:
        return self.manifold.ambient_values(self.nodes)


def axis_rule(axis: Axis, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """One-dimensional nodes (as chart angles) and normalized weights."""
    if axis.rule == "periodic":
        n = degree + 1
        x = 2 * PI * (np.arange(n) + 0.5) / n
        return x, np.full(n, 1.0 / n)
    if axis.rule == "gegenbauer":
        n = max(1, math.ceil((degree + 1) / 2))
        if abs(axis.param - 0.5) < 1e-15:
            t, w = special.roots_legendre(n)
        else:
            t, w = special.roots_gegenbauer(n, axis.param)
        order = np.argsort(-t)  # ascending angle
        return np.arccos(t[order]), w[order] / w.sum()
    n = max(1, math.ceil((degree // 2 + 1) / 2))
    if axis.rule == "sin2_uniform":
        x, w = special.roots_legendre(n)
    elif axis.rule == "sin2_jacobi":
        x, w = special.roots_jacobi(n, 0.0, 1.0)
    else:
        raise ValueError(f"unknown axis rule {axis.rule}")
    s = (1 + x) / 2
    return np.arcsin(np.sqrt(s)), w / w.sum()


def build_grid(manifold: ManifoldSpec, exactness_degree: int, node_budget: int = DEFAULT_NODE_BUDGET) -> QuadratureGrid:
    """Tensor-product grid integrating every basis product of total degree <= exactness_degree."""
    if exactness_degree < 0:
        raise ValueError("exactness_degree must be >= 0")
    rules = [axis_rule(a, exactness_degree) for a in manifold.axes]
    total = math.prod(len(r[0]) for r in rules)
    if total > node_budget:
        raise ValueError(f"grid of {total} nodes exceeds node budget {node_budget}")
    mesh = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wmesh = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    weights = np.prod(np.stack([m.ravel() for m in wmesh], axis=1), axis=1)
    return QuadratureGrid(manifold, nodes, weights, exactness_degree)


def integrate(grid: QuadratureGrid, f) -> complex:
    """Sum of w_i f(node_i); f is a vectorized callable on (N, dim) or precomputed values."""
    vals = f(grid.nodes) if callable(f) else f
    vals = np.asarray(vals, dtype=complex)
    if vals.shape != grid.weights.shape:
        vals = np.broadcast_to(vals, grid.weights.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite at some node")
    return complex(np.sum(grid.weights * vals))
