"""The centrally extended algebra g^(M) = span{T_aI, D_j, k_j}.

Brackets::

    [T_aI, T_bJ] = i f_ab^c c_IJ^K T_cK + g_ab eta_IJ sum_j I(j) k_j
    [D_j, T_aI]  = I(j) T_aI
    k_j central

The central coefficient is attached to the first argument's eigenvalue.  It
is the only sign for which the extended Killing form with <D_i, k_j> = +delta
is invariant; the real cocycle omega_j = J(j) g_ab eta_IJ returned by
:func:`cocycle_value` is its negative.  Central charges stay symbolic: an
element stores one coefficient per k_j.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .coupling import EtaMatrix, StructureTensor, derivative_values, basis_values
from .harmonics import CartanOperator, HarmonicBasis, cartan_operators
from .lie_core import LieAlgebraSpec
from .manifolds import ManifoldSpec, QuadratureGrid

TOL = 1e-10
DROP = 1e-14


class TruncationError(ValueError):
    """A bracket needs products beyond the structure tensor's degree cap."""


class HermiticityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cocycle data


@dataclass(frozen=True)
class CocycleSpec:
    ops: tuple[CartanOperator, ...]
    charges: tuple[str, ...]
    values: tuple[float | None, ...] = ()

    @property
    def r(self) -> int:
        return len(self.ops)

    @classmethod
    def default(cls, manifold: ManifoldSpec, basis: HarmonicBasis | None = None, values=None) -> "CocycleSpec":
        ops = tuple(basis.cartan_ops if basis is not None else cartan_operators(manifold))
        names = tuple(f"k{j + 1}" for j in range(len(ops)))
        vals = tuple(values) if values is not None else (None,) * len(ops)
        if len(vals) != len(ops):
            raise ValueError(f"expected {len(ops)} charge values, got {len(vals)}")
        return cls(ops, names, vals)


@dataclass
class HermiticityReport:
    ok: bool
    divergence: list[str]
    boundary: list[tuple[str, str, float]]  # (operator, axis, worst flux near the boundary)
    commuting: bool
    method: str = "symbolic"

    def to_json(self) -> dict:
        return {"ok": self.ok, "divergence": self.divergence, "boundary": [list(b) for b in self.boundary],
                "commuting": self.commuting, "method": self.method}


def _is_zero(expr: sp.Expr, syms, rng) -> tuple[bool, str]:
    e = sp.simplify(expr)
    if e == 0:
        return True, "0"
    fn = sp.lambdify(syms, e, "numpy")
    worst = 0.0
    for _ in range(20):
        pt = rng.uniform(0.2, 1.2, len(syms))
        worst = max(worst, abs(complex(fn(*pt))))
    return worst < 1e-12, str(e)


def hermiticity_check(manifold: ManifoldSpec, ops) -> HermiticityReport:
    """Check that -i f^A d_A is Hermitian for the normalized measure rho dy.

    Conditions: d_A(rho f^A) = 0, the flux rho f^A vanishes at both ends of
    every non-periodic axis, and the vector fields commute pairwise.
    ``ops`` is a list of CartanOperator or of coefficient tuples.
    """
    syms = manifold.symbols
    rho = manifold.density
    rng = np.random.default_rng(3)
    fields, names = [], []
    for k, op in enumerate(ops):
        if isinstance(op, CartanOperator):
            fields.append(tuple(sp.sympify(x) for x in op.f))
            names.append(op.name)
        else:
            fields.append(tuple(sp.sympify(x) for x in op))
            names.append(f"X{k + 1}")
    div_report, bnd, ok = [], [], True
    for name, f in zip(names, fields):
        if len(f) != manifold.dim:
            raise ValueError(f"{name}: expected {manifold.dim} components, got {len(f)}")
        div = sum(sp.diff(rho * f[A], syms[A]) for A in range(manifold.dim))
        zero, shown = _is_zero(div, syms, rng)
        div_report.append(shown)
        ok &= zero
        for A, ax in enumerate(manifold.axes):
            if ax.periodic or f[A] == 0:
                continue
            flux = sp.lambdify(syms, rho * f[A], "numpy")
            worst = 0.0
            for end in (ax.lo + 1e-9, ax.hi - 1e-9):
                for _ in range(10):
                    pt = [rng.uniform(a.lo + 0.1 * (a.hi - a.lo), a.hi - 0.1 * (a.hi - a.lo)) for a in manifold.axes]
                    pt[A] = end
                    worst = max(worst, abs(complex(flux(*pt))))
            bnd.append((name, ax.name, worst))
            ok &= worst < 1e-6
    commuting = True
    for f, g in itertools.combinations(fields, 2):
        for B in range(manifold.dim):
            com = sum(f[A] * sp.diff(g[B], syms[A]) - g[A] * sp.diff(f[B], syms[A]) for A in range(manifold.dim))
            commuting &= _is_zero(com, syms, rng)[0]
    return HermiticityReport(bool(ok and commuting), div_report, bnd, bool(commuting))


# ---------------------------------------------------------------------------
# elements


@dataclass
class GKMElement:
    T: dict[tuple[int, int], complex] = field(default_factory=dict)  # (a, basis position) -> coefficient
    D: np.ndarray | None = None
    K: np.ndarray | None = None

    @classmethod
    def zero(cls, r: int) -> "GKMElement":
        return cls({}, np.zeros(r, dtype=complex), np.zeros(r, dtype=complex))

    def copy(self) -> "GKMElement":
        return GKMElement(dict(self.T), self.D.copy(), self.K.copy())

    def add(self, other: "GKMElement", s: complex = 1.0) -> "GKMElement":
        out = self.copy()
        for key, v in other.T.items():
            out.T[key] = out.T.get(key, 0) + s * v
        out.D = out.D + s * other.D
        out.K = out.K + s * other.K
        return out

    def scale(self, s: complex) -> "GKMElement":
        return GKMElement({k: s * v for k, v in self.T.items()}, s * self.D, s * self.K)

    def cleaned(self, tol: float = DROP) -> "GKMElement":
        return GKMElement({k: v for k, v in sorted(self.T.items()) if abs(v) > tol}, self.D, self.K)

    def norm(self) -> float:
        vals = [abs(v) for v in self.T.values()] + list(np.abs(self.D)) + list(np.abs(self.K))
        return float(max(vals, default=0.0))

    def is_zero(self, tol: float = TOL) -> bool:
        return self.norm() <= tol

    def central_value(self, values) -> complex:
        """Numeric view of the central part with k_j -> values[j]."""
        return complex(np.dot(self.K, np.asarray(values, dtype=float)))

    def to_json(self, basis: HarmonicBasis | None = None) -> dict:
        def key(a, i):
            return [a, list(basis.indices[i].labels)] if basis is not None else [a, i]
        return {
            "T": [[*key(a, i), float(v.real), float(v.imag)] for (a, i), v in sorted(self.T.items()) if abs(v) > DROP],
            "D": [[float(x.real), float(x.imag)] for x in self.D],
            "k": [[float(x.real), float(x.imag)] for x in self.K],
        }


# ---------------------------------------------------------------------------
# algebra


@dataclass
class JacobiReport:
    check: str
    sector: str
    residual: float
    worst: tuple | None
    triples: int
    tol: float = TOL

    @property
    def passed(self) -> bool:
        return self.triples > 0 and self.residual <= self.tol

    def to_json(self) -> dict:
        return {"check": self.check, "sector": self.sector, "residual": self.residual,
                "pass": self.passed, "triples": self.triples,
                "worst": None if self.worst is None else [str(x) for x in self.worst]}


@dataclass
class GKMAlgebra:
    lie: LieAlgebraSpec
    basis: HarmonicBasis
    c: StructureTensor
    eta: EtaMatrix
    cocycle: CocycleSpec
    hermiticity: HermiticityReport | None = None

    def __post_init__(self):
        self.r = self.cocycle.r
        self._f = {}
        for a in range(self.lie.dim):
            for b in range(self.lie.dim):
                nz = [(c, self.lie.f[a, b, c]) for c in range(self.lie.dim) if abs(self.lie.f[a, b, c]) > DROP]
                if nz:
                    self._f[(a, b)] = nz
        self.g = self.lie.metric
        self.eigen = self.basis.eigen

    @property
    def degree_cap(self) -> int:
        return self.c.degree_cap

    # generators
    def T(self, a: int, index, coeff: complex = 1.0) -> GKMElement:
        x = GKMElement.zero(self.r)
        x.T[(a, self.basis.pos(index))] = complex(coeff)
        return x

    def D(self, j: int) -> GKMElement:
        x = GKMElement.zero(self.r)
        x.D[j] = 1.0
        return x

    def k(self, j: int) -> GKMElement:
        x = GKMElement.zero(self.r)
        x.K[j] = 1.0
        return x

    def element_from_lie(self, vec, index) -> GKMElement:
        """sum_a vec[a] T_{a, index} for a complex vector of g."""
        i = self.basis.pos(index)
        x = GKMElement.zero(self.r)
        for a, v in enumerate(vec):
            if abs(v) > DROP:
                x.T[(a, i)] = complex(v)
        return x

    def degree(self, i: int) -> int:
        return self.basis.indices[i].degree

    def _tt(self, a: int, i: int, b: int, j: int, out: GKMElement, s: complex) -> None:
        fs = self._f.get((a, b))
        if fs:
            if not self.c.closed(i, j):
                raise TruncationError(
                    f"[T_{a}{self.basis.indices[i]}, T_{b}{self.basis.indices[j]}] needs degree "
                    f"{self.degree(i) + self.degree(j)} > cap {self.c.degree_cap}")
            for k, cv in self.c.product(i, j).items():
                for cc, fv in fs:
                    key = (cc, k)
                    out.T[key] = out.T.get(key, 0) + s * 1j * fv * cv
        gab = self.g[a, b]
        if gab != 0:
            e = self.eta(i, j)
            if e != 0:
                out.K += s * gab * e * self.eigen[i]

    def bracket(self, X: GKMElement, Y: GKMElement) -> GKMElement:
        out = GKMElement.zero(self.r)
        for (a, i), x in X.T.items():
            for (b, j), y in Y.T.items():
                self._tt(a, i, b, j, out, x * y)
        for j in range(self.r):
            if X.D[j] != 0:
                for (b, i), y in Y.T.items():
                    key = (b, i)
                    out.T[key] = out.T.get(key, 0) + X.D[j] * y * self.eigen[i, j]
            if Y.D[j] != 0:
                for (a, i), x in X.T.items():
                    key = (a, i)
                    out.T[key] = out.T.get(key, 0) - Y.D[j] * x * self.eigen[i, j]
        return out.cleaned()

    def killing(self, X: GKMElement, Y: GKMElement) -> complex:
        acc = 0j
        for (a, i), x in X.T.items():
            j, e = self.eta.forward[i]
            for b in range(self.lie.dim):
                y = Y.T.get((b, j))
                if y is not None and self.g[a, b] != 0:
                    acc += x * y * self.g[a, b] * e
        acc += np.dot(X.D, Y.K) + np.dot(X.K, Y.D)
        return complex(acc)

    def omega(self, X: GKMElement, Y: GKMElement) -> np.ndarray:
        """Real cocycle vector omega_j(X, Y) = J(j) g_ab eta_IJ on the T parts."""
        out = np.zeros(self.r, dtype=complex)
        for (a, i), x in X.T.items():
            j, e = self.eta.forward[i]
            for b in range(self.lie.dim):
                y = Y.T.get((b, j))
                if y is not None and self.g[a, b] != 0:
                    out += x * y * self.g[a, b] * e * self.eigen[j]
        return out

    def generators(self, degree_cap: int | None = None) -> list[tuple]:
        cap = self.c.degree_cap if degree_cap is None else degree_cap
        gens = [("T", a, i) for i in range(len(self.basis)) if self.degree(i) <= cap for a in range(self.lie.dim)]
        return gens + [("D", j) for j in range(self.r)]

    def element(self, gen: tuple) -> GKMElement:
        if gen[0] == "T":
            x = GKMElement.zero(self.r)
            x.T[(gen[1], gen[2])] = 1.0
            return x
        if gen[0] == "D":
            return self.D(gen[1])
        return self.k(gen[1])

    def gen_degree(self, gen: tuple) -> int:
        return self.degree(gen[2]) if gen[0] == "T" else 0

    def label(self, gen: tuple) -> str:
        if gen[0] == "T":
            return f"T_{gen[1]}{list(self.basis.indices[gen[2]].labels)}"
        return f"{gen[0]}_{gen[1] + 1}"


def assemble(lie: LieAlgebraSpec, basis: HarmonicBasis, c: StructureTensor, eta: EtaMatrix,
             cocycle: CocycleSpec | None = None, check_hermiticity: bool = True) -> GKMAlgebra:
    if c.basis is not basis or eta.basis is not basis:
        if c.basis.manifold != basis.manifold or eta.basis.manifold != basis.manifold:
            raise ValueError("structure tensor, eta and basis are on different manifolds")
    cocycle = cocycle or CocycleSpec.default(basis.manifold, basis)
    if [op.charges for op in cocycle.ops] != [op.charges for op in basis.cartan_ops]:
        raise ValueError("cocycle operators must be the Cartan operators of the basis")
    report = None
    if check_hermiticity:
        report = hermiticity_check(basis.manifold, cocycle.ops)
        if not report.ok:
            raise HermiticityError(f"grading operators are not Hermitian: {report.to_json()}")
    return GKMAlgebra(lie, basis, c, eta, cocycle, report)


def bracket(gkm: GKMAlgebra, X: GKMElement, Y: GKMElement) -> GKMElement:
    return gkm.bracket(X, Y)


def cocycle_value(gkm: GKMAlgebra, x: tuple[int, object], y: tuple[int, object]) -> np.ndarray:
    """omega_j(T_aI, T_bJ) = J(j) g_ab eta_IJ, one entry per charge k_j."""
    (a, I), (b, J) = x, y
    i, j = gkm.basis.pos(I), gkm.basis.pos(J)
    return np.real_if_close(gkm.lie.metric[a, b] * gkm.eta(i, j) * gkm.eigen[j])


def cocycle_quadrature(gkm: GKMAlgebra, grid: QuadratureGrid) -> np.ndarray:
    """W[j, I, J] = int rho_I D_j rho_J, with D_j = -i f_j^A d_A applied through the chart.

    Multiply by g_ab to get omega_j(T_aI, T_bJ).
    """
    basis = gkm.basis
    M = basis.manifold
    V = basis_values(basis, grid)
    dV = [derivative_values(basis, grid, A) for A in range(M.dim)]
    cols = [grid.nodes[:, A] for A in range(M.dim)]
    out = np.zeros((gkm.r, len(basis), len(basis)), dtype=complex)
    for j, op in enumerate(gkm.cocycle.ops):
        Dj = np.zeros_like(V)
        for A, fA in enumerate(op.f):
            fA = sp.sympify(fA)
            if fA == 0:
                continue
            val = sp.lambdify(M.symbols, fA, "numpy")(*cols)
            Dj += -1j * np.broadcast_to(val, (len(grid),)) * dV[A]
        out[j] = (V * grid.weights) @ Dj.T
    return out


def killing_extended(gkm: GKMAlgebra, X: GKMElement, Y: GKMElement) -> complex:
    return gkm.killing(X, Y)


def killing_integral(gkm: GKMAlgebra, grid: QuadratureGrid, a: int, I, b: int, J) -> complex:
    """<T_aI, T_bJ> = g_ab int rho_I rho_J, evaluated on the grid."""
    basis = gkm.basis
    amb = grid.ambient
    p = basis.poly(I).evaluate(amb) * basis.poly(J).evaluate(amb)
    return complex(gkm.lie.metric[a, b] * np.sum(grid.weights * p))


# ---------------------------------------------------------------------------
# verification


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GKMALG_THREADS", "1")))
    except ValueError:
        return 1


def closed_triples(gkm: GKMAlgebra, degree_cap: int | None = None, max_triples: int | None = 20000,
                   seed: int = 0, include_D: bool = True) -> list[tuple]:
    """Unordered triples of distinct generators whose degrees add up to at most the cap."""
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    if cap > gkm.c.degree_cap:
        raise TruncationError(f"sector cap {cap} exceeds structure tensor cap {gkm.c.degree_cap}")
    gens = [g for g in gkm.generators(cap) if include_D or g[0] != "D"]
    degs = [gkm.gen_degree(g) for g in gens]
    order = sorted(range(len(gens)), key=lambda k: (degs[k], gens[k]))
    gens = [gens[k] for k in order]
    degs = [degs[k] for k in order]
    out = []
    n = len(gens)
    for x in range(n):
        if 3 * degs[x] > cap:
            break
        for y in range(x + 1, n):
            if degs[x] + 2 * degs[y] > cap:
                break
            for z in range(y + 1, n):
                if degs[x] + degs[y] + degs[z] > cap:
                    break
                out.append((gens[x], gens[y], gens[z]))
    if max_triples is not None and len(out) > max_triples:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(len(out), size=max_triples, replace=False))
        out = [out[k] for k in keep]
    return out


def _run(fn, items):
    n = _threads()
    if n == 1:
        return [fn(t) for t in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=256))


def _worst(results, triples):
    best, where = 0.0, None
    for val, t in zip(results, triples):
        if val > best:
            best, where = val, t
    return best, where


def verify_jacobi(gkm: GKMAlgebra, degree_cap: int | None = None, max_triples: int | None = 20000,
                  seed: int = 0) -> JacobiReport:
    """max |[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]| over closed generator triples, central part included."""
    triples = closed_triples(gkm, degree_cap, max_triples, seed)
    if not triples:
        raise ValueError("sector too small: no closed triples")

    def one(t):
        X, Y, Z = (gkm.element(g) for g in t)
        s = gkm.bracket(gkm.bracket(X, Y), Z)
        s = s.add(gkm.bracket(gkm.bracket(Y, Z), X))
        s = s.add(gkm.bracket(gkm.bracket(Z, X), Y))
        return s.norm()

    res, where = _worst(_run(one, triples), triples)
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    return JacobiReport("jacobi", f"{gkm.basis.manifold.name} {gkm.lie.name} deg<={cap}", res,
                        None if where is None else tuple(gkm.label(g) for g in where), len(triples))


def verify_cocycle(gkm: GKMAlgebra, degree_cap: int | None = None, max_triples: int | None = 20000,
                   seed: int = 0) -> list[JacobiReport]:
    """Antisymmetry omega(X,Y) = -omega(Y,X) and the cocycle identity on closed triples."""
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    gens = [g for g in gkm.generators(cap) if g[0] == "T"]
    pairs = [(x, y) for x, y in itertools.combinations(gens, 2)]
    if max_triples is not None and len(pairs) > max_triples:
        rng = np.random.default_rng(seed)
        pairs = [pairs[k] for k in np.sort(rng.choice(len(pairs), size=max_triples, replace=False))]

    def anti(p):
        X, Y = (gkm.element(g) for g in p)
        return float(np.abs(gkm.omega(X, Y) + gkm.omega(Y, X)).max())

    r1, w1 = _worst(_run(anti, pairs), pairs)
    triples = closed_triples(gkm, degree_cap, max_triples, seed, include_D=False)

    def ident(t):
        X, Y, Z = (gkm.element(g) for g in t)
        s = gkm.omega(gkm.bracket(X, Y), Z) + gkm.omega(gkm.bracket(Y, Z), X) + gkm.omega(gkm.bracket(Z, X), Y)
        return float(np.abs(s).max())

    r2, w2 = _worst(_run(ident, triples), triples)
    sector = f"{gkm.basis.manifold.name} {gkm.lie.name} deg<={cap}"
    return [
        JacobiReport("cocycle_antisymmetry", sector, r1, None if w1 is None else tuple(gkm.label(g) for g in w1), len(pairs)),
        JacobiReport("cocycle_identity", sector, r2, None if w2 is None else tuple(gkm.label(g) for g in w2), len(triples)),
    ]


def verify_killing_invariance(gkm: GKMAlgebra, degree_cap: int | None = None, max_triples: int | None = 20000,
                              seed: int = 0) -> JacobiReport:
    """max |<[X,Y],Z> - <X,[Y,Z]>| over closed triples, in all orderings of each triple."""
    triples = closed_triples(gkm, degree_cap, max_triples, seed)

    def one(t):
        worst = 0.0
        for X, Y, Z in itertools.permutations([gkm.element(g) for g in t]):
            worst = max(worst, abs(gkm.killing(gkm.bracket(X, Y), Z) - gkm.killing(X, gkm.bracket(Y, Z))))
        return worst

    res, where = _worst(_run(one, triples), triples)
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    return JacobiReport("killing_invariance", f"{gkm.basis.manifold.name} {gkm.lie.name} deg<={cap}", res,
                        None if where is None else tuple(gkm.label(g) for g in where), len(triples))


def verify_antisymmetry(gkm: GKMAlgebra, degree_cap: int | None = None, max_pairs: int | None = 20000,
                        seed: int = 0) -> JacobiReport:
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    gens = [g for g in gkm.generators() if gkm.gen_degree(g) <= cap]
    pairs = [(x, y) for x, y in itertools.combinations_with_replacement(gens, 2)
             if gkm.gen_degree(x) + gkm.gen_degree(y) <= cap]
    if max_pairs is not None and len(pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        pairs = [pairs[k] for k in np.sort(rng.choice(len(pairs), size=max_pairs, replace=False))]

    def one(p):
        X, Y = (gkm.element(g) for g in p)
        return gkm.bracket(X, Y).add(gkm.bracket(Y, X)).norm()

    res, where = _worst(_run(one, pairs), pairs)
    return JacobiReport("antisymmetry", f"{gkm.basis.manifold.name} {gkm.lie.name} deg<={cap}", res,
                        None if where is None else tuple(gkm.label(g) for g in where), len(pairs))


def verify_grading(gkm: GKMAlgebra, degree_cap: int | None = None) -> JacobiReport:
    """Brackets of D-eigenvectors are eigenvectors with added eigenvalues; central terms only at zero total."""
    cap = gkm.c.degree_cap if degree_cap is None else degree_cap
    gens = [g for g in gkm.generators() if g[0] == "T" and gkm.gen_degree(g) <= cap]
    worst, where, count = 0.0, None, 0
    for x, y in itertools.combinations_with_replacement(gens, 2):
        if gkm.gen_degree(x) + gkm.gen_degree(y) > cap:
            continue
        count += 1
        Z = gkm.bracket(gkm.element(x), gkm.element(y))
        target = gkm.eigen[x[2]] + gkm.eigen[y[2]]
        bad = max((float(np.abs(gkm.eigen[i] - target).max()) for (_, i), v in Z.T.items() if abs(v) > TOL), default=0.0)
        if np.abs(Z.K).max() > TOL and np.abs(target).max() > TOL:
            bad = max(bad, 1.0)
        if bad > worst:
            worst, where = bad, (gkm.label(x), gkm.label(y))
    return JacobiReport("grading", f"{gkm.basis.manifold.name} {gkm.lie.name} deg<={cap}", worst, where, count)
