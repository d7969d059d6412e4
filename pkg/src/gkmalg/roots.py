"""Roots of g^(M): vectors (alpha, c, n), the lexicographic order, simple roots.

alpha is stored in the coordinates alpha(H^i) used by :mod:`lie_core`; the
pairing uses the algebra's root metric on that part and the Lorentzian form
sum_j (n_j c'_j + n'_j c_j) on the rest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .lie_core import LieAlgebraSpec

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RootVector:
    alpha: np.ndarray
    c: np.ndarray
    n: np.ndarray
    metric: np.ndarray = field(repr=False)

    @classmethod
    def make(cls, lie: LieAlgebraSpec, alpha=None, c=None, n=None, r: int | None = None) -> "RootVector":
        if r is None:
            r = len(n) if n is not None else (len(c) if c is not None else 1)
        a = np.zeros(lie.rank) if alpha is None else np.asarray(alpha, dtype=float)
        cc = np.zeros(r) if c is None else np.asarray(c, dtype=float)
        nn = np.zeros(r) if n is None else np.asarray(n, dtype=float)
        if a.shape != (lie.rank,) or cc.shape != (r,) or nn.shape != (r,):
            raise ValueError("root components have inconsistent lengths")
        return cls(a, cc, nn, lie.root_metric)

    @property
    def r(self) -> int:
        return len(self.n)

    def dot(self, other: "RootVector") -> float:
        return float(self.alpha @ self.metric @ other.alpha + self.n @ other.c + other.n @ self.c)

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(self.alpha + other.alpha, self.c + other.c, self.n + other.n, self.metric)

    def __sub__(self, other: "RootVector") -> "RootVector":
        return self + (-other)

    def __neg__(self) -> "RootVector":
        return RootVector(-self.alpha, -self.c, -self.n, self.metric)

    def __rmul__(self, s: float) -> "RootVector":
        return RootVector(s * self.alpha, s * self.c, s * self.n, self.metric)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RootVector) and self.r == other.r
                and np.allclose(self.alpha, other.alpha, atol=TOL)
                and np.allclose(self.c, other.c, atol=TOL) and np.allclose(self.n, other.n, atol=TOL))

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        return tuple(round(float(x), 9) + 0.0 for x in (*self.alpha, *self.c, *self.n))

    def is_zero(self) -> bool:
        return bool(np.abs(self.alpha).max(initial=0) < TOL and np.abs(self.c).max(initial=0) < TOL
                    and np.abs(self.n).max(initial=0) < TOL)

    def to_json(self) -> dict:
        return {"alpha": [float(x) for x in self.alpha], "c": [float(x) for x in self.c],
                "n": [float(x) for x in self.n]}

    def __repr__(self) -> str:
        fmt = lambda v: ",".join(f"{x:g}" for x in v)  # noqa: E731
        return f"({fmt(self.alpha)}; {fmt(self.c)}; {fmt(self.n)})"


def pairing(x: RootVector, y: RootVector) -> float:
    return x.dot(y)


def root_of(gkm, generator, index=None) -> RootVector:
    """Root of the generator a (x) rho_I.

    ``generator`` is ("H", i), ("E", alpha) or a complex vector of g; the
    vector must be a Cartan element or a root vector.
    """
    lie = gkm.lie
    if index is None:
        n = np.zeros(gkm.r)
    else:
        n = gkm.basis.eigen[gkm.basis.pos(index)]
    if isinstance(generator, tuple) and generator and generator[0] == "H":
        if not 0 <= int(generator[1]) < lie.rank:
            raise ValueError(f"no Cartan generator H^{generator[1]}")
        alpha = np.zeros(lie.rank)
    elif isinstance(generator, tuple) and generator and generator[0] == "E":
        alpha = np.asarray(generator[1], dtype=float)
        lie.root_index(alpha)  # raises when alpha is not a root
    else:
        alpha = weight_of_vector(lie, np.asarray(generator, dtype=complex))
    return RootVector.make(lie, alpha, None, n, r=gkm.r)


def weight_of_vector(lie: LieAlgebraSpec, v: np.ndarray) -> np.ndarray:
    """alpha with [H^i, v] = alpha^i v; raises if v is not a Cartan or root vector."""
    if np.abs(v).max() < TOL:
        raise ValueError("zero vector has no root")
    alpha = np.zeros(lie.rank)
    for i, h in enumerate(lie.cartan):
        w = lie.bracket(h.astype(complex), v)
        k = int(np.argmax(np.abs(v)))
        alpha[i] = (w[k] / v[k]).real
        if np.abs(w - alpha[i] * v).max() > 1e-8:
            raise ValueError("vector is not in Cartan-Weyl form")
    if np.abs(alpha).max() > TOL:
        lie.root_index(alpha)
    return alpha


def root_of_element(gkm, X) -> RootVector | None:
    """Common root of every T component of X, or None when X has no T part."""
    groups: dict[int, np.ndarray] = {}
    for (a, i), v in X.T.items():
        if abs(v) > 1e-10:
            groups.setdefault(i, np.zeros(gkm.lie.dim, dtype=complex))[a] += v
    roots = {root_of(gkm, vec, gkm.basis.indices[i]) for i, vec in groups.items()}
    if not roots:
        return None
    if len(roots) > 1:
        raise ValueError(f"element mixes roots {roots}")
    return roots.pop()


def is_positive(x: RootVector, lie: LieAlgebraSpec) -> bool:
    """Lexicographic order: the last nonzero n_k decides; otherwise alpha > 0 by height."""
    for nk in x.n[::-1]:
        if abs(nk) > TOL:
            return bool(nk > 0)
    if np.abs(x.alpha).max(initial=0) < TOL:
        raise ValueError("the zero root is neither positive nor negative")
    return lie.is_positive_finite(x.alpha)


def classify(x: RootVector) -> str:
    if x.is_zero():
        raise ValueError("zero root")
    s = x.dot(x)
    if s > TOL:
        return "real"
    if np.abs(x.alpha).max(initial=0) < TOL:
        return "imaginary"
    raise ValueError(f"{x} has non-positive norm but nonzero finite part")


def sector_roots(gkm, degree_cap: int | None = None) -> list[RootVector]:
    """All distinct nonzero roots (alpha or 0, 0, I) carried by the truncated basis."""
    cap = gkm.basis.cutoff if degree_cap is None else degree_cap
    lie = gkm.lie
    ns = sorted({tuple(np.round(gkm.basis.eigen[k], 9) + 0.0) for k, I in enumerate(gkm.basis.indices) if I.degree <= cap})
    alphas = [np.zeros(lie.rank)] + [a for a in lie.roots]
    out, seen = [], set()
    for n in ns:
        for a in alphas:
            x = RootVector.make(lie, a, None, n, r=gkm.r)
            if x.is_zero() or x.key() in seen:
                continue
            seen.add(x.key())
            out.append(x)
    return out


def affine_cartan_matrix(simple: list[RootVector]) -> np.ndarray:
    """a_ij = 2 x_i.x_j / x_i.x_i, the convention of LieAlgebraSpec.cartan_matrix."""
    A = np.array([[2 * x.dot(y) / x.dot(x) for y in simple] for x in simple])
    return np.rint(A).astype(int)


@dataclass
class SimpleRootResult:
    present: bool
    roots: list[RootVector]
    cartan: np.ndarray | None = None
    decompositions_ok: bool | None = None
    checked: int = 0
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"present": self.present, "roots": [x.to_json() for x in self.roots]}
        if self.present:
            out["cartan_matrix"] = self.cartan.tolist()
            out["decompositions_ok"] = self.decompositions_ok
            out["checked"] = self.checked
        else:
            out["witness"] = self.witness
        return out


def affine_simple_roots(lie: LieAlgebraSpec) -> list[RootVector]:
    """(-psi, 0, 1) followed by (alpha_i, 0, 0)."""
    out = [RootVector.make(lie, -lie.highest_root, [0.0], [1.0])]
    out += [RootVector.make(lie, a, [0.0], [0.0]) for a in lie.simple_roots]
    return out


def decompose_affine(lie: LieAlgebraSpec, x: RootVector) -> np.ndarray:
    """Coefficients of x on (alpha^_0, alpha^_1, ..): k_0 = n, k_i = coords(alpha + n psi)."""
    m = x.n[0]
    return np.concatenate([[m], lie.coords(x.alpha + m * lie.highest_root)])


def simple_roots(gkm=None, lie: LieAlgebraSpec | None = None, r: int | None = None,
                 depth: int = 5, roots: list[RootVector] | None = None) -> SimpleRootResult:
    """Simple roots for r = 1, or a witness that none exist for r >= 2.

    With a GKM algebra the positive roots of its truncated sector are checked
    to be non-negative integer combinations; without one, roots with
    |n| <= depth are used.
    """
    if gkm is not None:
        lie, r = gkm.lie, gkm.r
        if roots is None:
            roots = sector_roots(gkm)
    if lie is None or r is None:
        raise ValueError("need an algebra or (lie, r)")
    if r == 1:
        simple = affine_simple_roots(lie)
        if roots is None:
            alphas = [np.zeros(lie.rank)] + list(lie.roots)
            roots = [RootVector.make(lie, a, [0.0], [float(m)]) for m in range(-depth, depth + 1) for a in alphas]
            roots = [x for x in roots if not x.is_zero()]
        ok, count = True, 0
        for x in roots:
            if not is_positive(x, lie):
                continue
            k = decompose_affine(lie, x)
            count += 1
            if np.abs(k - np.rint(k)).max() > TOL or k.min() < -TOL:
                ok = False
        return SimpleRootResult(True, simple, affine_cartan_matrix(simple), ok, count)
    return SimpleRootResult(False, [], witness=no_simple_root_witness(lie, r, depth))


def no_simple_root_witness(lie: LieAlgebraSpec, r: int, depth: int = 5) -> dict:
    """Positive roots (-psi, 0, (-N, 0, .., 1)) for N = 0..depth.

    Positive roots with n_r = 0 have n_1 >= 0 when n_2..n_r vanish, so a
    decomposition of a root with n_r = 1 into positive roots has a summand
    with n_r = 1 and n_1 no larger than the total.  Any finite candidate
    set has a smallest n_1 among its n_r = 1 members, and the family below
    goes under it.
    """
    if r < 2:
        raise ValueError("witness only exists for r >= 2")
    fam = []
    for N in range(depth + 1):
        n = np.zeros(r)
        n[0], n[-1] = -N, 1
        x = RootVector.make(lie, -lie.highest_root, None, n)
        assert is_positive(x, lie) and classify(x) == "real"
        fam.append(x)
    return {
        "family": [x.to_json() for x in fam],
        "all_positive": True,
        "n1_unbounded_below": True,
        "reason": "positive roots (-psi,0,..,n1,..,1) exist for every integer n1, so no candidate "
                  "(-psi,0,..,-n_max,..,1) bounds them",
    }


def lattice_membership(x: RootVector, lie: LieAlgebraSpec, r: int | None = None) -> bool:
    """x in Lambda_R(g) + r copies of Pi^{1,1}, with x.e_i = c_i = 0."""
    if r is not None and x.r != r:
        return False
    k = lie.coords(x.alpha)
    if np.abs(k - np.rint(k)).max(initial=0) > TOL:
        return False
    if np.abs(x.n - np.rint(x.n)).max(initial=0) > TOL:
        return False
    return bool(np.abs(x.c).max(initial=0) < TOL)


def pi11_table() -> dict[str, int]:
    """Lorentzian products of e = (0, 1) and ebar = (1, 0)."""
    def dot(u, v):
        return u[0] * v[1] + u[1] * v[0]
    e, eb = (0, 1), (1, 0)
    return {"e.e": dot(e, e), "e.ebar": dot(e, eb), "ebar.ebar": dot(eb, eb)}


def torus_roots(lie: LieAlgebraSpec, r: int, depth: int) -> list[RootVector]:
    """All roots (alpha or 0, 0, n) of g^(T^r) with |n_i| <= depth."""
    alphas = [np.zeros(lie.rank)] + list(lie.roots)
    out = []
    for n in itertools.product(range(-depth, depth + 1), repeat=r):
        for a in alphas:
            x = RootVector.make(lie, a, None, np.array(n, dtype=float))
            if not x.is_zero():
                out.append(x)
    return out
