"""Label counting: Casimirs, internal labels and missing labels for a chain g > g'.

N(g) = dim g - sup_x rank A(x),  A_ij(x) = f_ij^k x_k,

is the number of functionally independent invariants.  For a subalgebra
spanned by s_1..s_m the matrix R_ij(x) = x([s_i, b_j]) over the full basis b
has generic rank r', and l0 = m - r' counts the invariants of g' that are
common with those of g.  Then

n0 = (dim g - l - dim g' - l') / 2 + l0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp

from .lie_core import LieAlgebraSpec, build_algebra

SVD_TOL = 1e-9
SAMPLES = 5


@dataclass
class LabelReport:
    algebra: str
    dim: int
    num_casimirs: int
    total_labels: int
    internal_labels: int
    group_manifold_operators: int
    subalgebra: str | None = None
    sub_dim: int | None = None
    sub_casimirs: int | None = None
    l0: int | None = None
    n0: int | None = None

    @property
    def chi(self) -> int | None:
        return None if self.n0 is None else 2 * self.n0

    def to_json(self) -> dict:
        out = {"algebra": self.algebra, "dim": self.dim, "num_casimirs": self.num_casimirs,
               "total_labels": self.total_labels, "internal_labels": self.internal_labels,
               "group_manifold_operators": self.group_manifold_operators}
        if self.subalgebra is not None:
            out.update({"subalgebra": self.subalgebra, "sub_dim": self.sub_dim, "sub_casimirs": self.sub_casimirs,
                        "l0": self.l0, "n0": self.n0, "chi": self.chi})
        return out


# ---------------------------------------------------------------------------
# generic ranks


def _structure_array(lie) -> np.ndarray:
    if isinstance(lie, LieAlgebraSpec):
        return lie.f
    f = np.asarray(lie, dtype=float)
    if f.ndim != 3 or f.shape[0] != f.shape[1] or f.shape[1] != f.shape[2]:
        raise ValueError("structure constants must have shape (d, d, d)")
    return f


def _exact_f(lie) -> dict | None:
    if isinstance(lie, LieAlgebraSpec):
        return lie.f_exact
    f = _structure_array(lie)
    out = {}
    for a, b, c in zip(*np.nonzero(f)):
        val = Fraction(float(f[a, b, c])).limit_denominator(10**6)
        if abs(float(val) - f[a, b, c]) > 1e-12:
            return None
        out.setdefault((int(a), int(b)), {})[int(c)] = val
    return out


def _float_rank(rows: np.ndarray, x: np.ndarray) -> int:
    """rank of M_ij = sum_k rows[i, j, k] x_k."""
    M = rows @ x
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > SVD_TOL * max(1.0, s[0])))


def _exact_rank(entries: list[list[dict[int, Fraction]]], x: list[int]) -> int:
    def q(e):
        v = sum((w * x[k] for k, w in e.items()), Fraction(0))
        return sp.Rational(v.numerator, v.denominator)
    return sp.Matrix([[q(e) for e in row] for row in entries]).rank()


def generic_rank(rows: np.ndarray, exact_rows=None, samples: int = SAMPLES, seed: int = 0) -> tuple[int, list[int]]:
    """Max rank of x -> rows @ x over random points, float SVD plus exact rank at integer points."""
    rng = np.random.default_rng(seed)
    d = rows.shape[-1]
    ranks = [_float_rank(rows, rng.standard_normal(d)) for _ in range(max(samples, SAMPLES))]
    if exact_rows is not None:
        prng = random.Random(seed)
        for _ in range(max(samples, SAMPLES)):
            x = [prng.randint(-97, 97) for _ in range(d)]
            ranks.append(_exact_rank(exact_rows, x))
    return max(ranks), ranks


def _commutator_rows(f: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """rows[i, j, k] = coefficient of T_k in [left_i, right_j]."""
    return np.einsum("ia,jb,abk->ijk", left, right, f)


def _exact_rows(f_exact, left: list[list[Fraction]], right: list[list[Fraction]], dim: int):
    out = []
    for s in left:
        row = []
        for t in right:
            acc: dict[int, Fraction] = {}
            for a, sa in enumerate(s):
                if sa == 0:
                    continue
                for b, tb in enumerate(t):
                    if tb == 0:
                        continue
                    for k, v in f_exact.get((a, b), {}).items():
                        acc[k] = acc.get(k, Fraction(0)) + sa * tb * v
            row.append({k: v for k, v in acc.items() if v != 0})
        out.append(row)
    return out


def invariant_count(lie, samples: int = SAMPLES, exact: bool = True) -> int:
    """N(g) = dim - generic rank of (f_ij^k x_k).  Accepts an algebra or an f array."""
    f = _structure_array(lie)
    d = f.shape[0]
    eye = np.eye(d)
    exact_rows = None
    if exact:
        fe = _exact_f(lie)
        if fe is not None:
            ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
            exact_rows = _exact_rows(fe, ident, ident, d)
    rank, _ = generic_rank(_commutator_rows(f, eye, eye), exact_rows, samples)
    return d - rank


def abelian(n: int) -> np.ndarray:
    return np.zeros((n, n, n))


# ---------------------------------------------------------------------------
# embeddings


def _to_fraction_rows(vecs) -> list[list[Fraction]]:
    out = []
    for v in vecs:
        out.append([Fraction(sp.Rational(x).p, sp.Rational(x).q) for x in v])
    return out


def subalgebra_basis(g: LieAlgebraSpec, sub: str) -> list[list[Fraction]]:
    """Exact coefficient vectors spanning a named subalgebra of g."""
    if sub == g.name:
        return [[Fraction(int(i == j)) for j in range(g.dim)] for i in range(g.dim)]
    if g.name == "so4" and sub in ("so3", "su2"):
        # diagonal so(3): N_a + N'_a
        a, b = g.blocks
        return [[Fraction(int(k in (a[i], b[i]))) for k in range(g.dim)] for i in range(3)]
    if g.name == "so4" and sub in ("so3L", "su2L"):
        return [[Fraction(int(k == g.blocks[0][i])) for k in range(g.dim)] for i in range(3)]
    if g.name == "g2" and sub == "su3":
        # stabilizer of the seventh imaginary unit in the 7-dimensional representation
        A = sp.zeros(7 * 1, g.dim)
        for a, T in enumerate(g.matrices):
            col = (-sp.I * T)[:, 6]
            for r in range(7):
                A[r, a] = sp.nsimplify(col[r])
        ns = A.nullspace()
        if len(ns) != 8:
            raise ArithmeticError(f"stabilizer has dimension {len(ns)}, expected 8")
        return _to_fraction_rows([list(v) for v in ns])
    raise ValueError(f"no embedding of {sub} in {g.name}")


def _sub_structure(g: LieAlgebraSpec, S: np.ndarray) -> np.ndarray:
    """Structure constants of span(S) in the basis S (rows), by least squares."""
    m = S.shape[0]
    brk = np.einsum("ia,jb,abk->ijk", S, S, g.f)
    coef, *_ = np.linalg.lstsq(S.T, brk.reshape(m * m, -1).T, rcond=None)
    if np.abs(S.T @ coef - brk.reshape(m * m, -1).T).max() > 1e-9:
        raise ValueError("subalgebra is not closed under the bracket")
    return coef.T.reshape(m, m, m)


def common_invariants(g: LieAlgebraSpec, sub_rows: list[list[Fraction]], samples: int = SAMPLES) -> int:
    """l0 = m - generic rank of R_ij(x) = x([s_i, T_j])."""
    S = np.array([[float(x) for x in row] for row in sub_rows])
    m = S.shape[0]
    eye = np.eye(g.dim)
    ident = [[Fraction(int(i == j)) for j in range(g.dim)] for i in range(g.dim)]
    exact_rows = _exact_rows(g.f_exact, sub_rows, ident, g.dim)
    rank, _ = generic_rank(_commutator_rows(g.f, S, eye), exact_rows, samples)
    return m - rank


def missing_label_count(g, g_sub, l0: int | None = None) -> int:
    """n0 = (dim g - l - dim g' - l')/2 + l0, l0 computed as m - r' unless given."""
    return missing_labels(g, g_sub, l0).n0


def missing_labels(g, g_sub, l0: int | None = None) -> LabelReport:
    g = build_algebra(g) if isinstance(g, str) else g
    if isinstance(g_sub, str):
        rows = subalgebra_basis(g, g_sub)
        name = g_sub
    else:
        rows = _to_fraction_rows(g_sub)
        name = "custom"
    S = np.array([[float(x) for x in row] for row in rows])
    if np.linalg.matrix_rank(S) != len(rows):
        raise ValueError("subalgebra vectors are linearly dependent")
    fsub = _sub_structure(g, S)
    l = invariant_count(g)
    lp = invariant_count(fsub, exact=False)
    if l0 is None:
        l0 = common_invariants(g, rows)
    twice = g.dim - l - len(rows) - lp + 2 * l0
    if twice < 0 or twice % 2:
        raise ValueError(f"invalid embedding data: 2 n0 = {twice}")
    rep = racah_counts(g)
    rep.subalgebra, rep.sub_dim, rep.sub_casimirs, rep.l0, rep.n0 = name, len(rows), lp, l0, twice // 2
    return rep


def racah_counts(lie) -> LabelReport:
    lie = build_algebra(lie) if isinstance(lie, str) else lie
    l = lie.rank
    if (lie.dim + l) % 2:
        raise ArithmeticError("dim + rank must be even")
    return LabelReport(lie.name, lie.dim, l, (lie.dim + l) // 2, (lie.dim - l) // 2, lie.dim)
