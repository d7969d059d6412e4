"""su(2) triples, the unitarity constraints and the affine level bound.

For a positive real root (-alpha, 0, m) and highest weight (mu0, c, m0)::

    v = 2/(alpha.alpha) * (-alpha.mu0 + sum_i c_i m_i)   must be an integer >= 0.

A finite scan certifies a pass only on the scanned sector.  A reject comes
with an explicit violating root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gkm import GKMAlgebra, GKMElement, TruncationError
from .lie_core import LieAlgebraSpec, marks
from .roots import RootVector, affine_simple_roots, is_positive

TOL = 1e-9


@dataclass(frozen=True)
class HighestWeightSpec:
    p: tuple[int, ...]
    c: tuple[float, ...]
    m: tuple[float, ...] = ()

    def __post_init__(self):
        if any((not float(x).is_integer()) or x < 0 for x in self.p):
            raise ValueError(f"p must be non-negative integers, got {self.p}")
        if self.m and len(self.m) != len(self.c):
            raise ValueError("m and c must have the same length")

    @property
    def r(self) -> int:
        return len(self.c)

    def mu0(self, lie: LieAlgebraSpec) -> np.ndarray:
        if len(self.p) != lie.rank:
            raise ValueError(f"{lie.name} needs {lie.rank} Dynkin labels, got {len(self.p)}")
        return np.asarray(self.p, dtype=float) @ lie.fundamental_weights


@dataclass
class ConstraintRow:
    alpha: list[float]
    m: list[int]
    value: float  # 2(-alpha.mu0 + c.m)/(alpha.alpha)
    slack: float  # c.m - alpha.mu0
    integral: bool
    nonnegative: bool

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "m": self.m, "value": self.value, "slack": self.slack,
                "integral": self.integral, "nonnegative": self.nonnegative}


@dataclass
class ConstraintReport:
    algebra: str
    p: list[int]
    c: list[float]
    scan_depth: int
    rows: list[ConstraintRow]
    verdict: str  # pass | reject
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, full: bool = False) -> dict:
        out = {"algebra": self.algebra, "p": self.p, "c": self.c, "scan_depth": self.scan_depth,
               "roots_scanned": len(self.rows), "verdict": self.verdict, "witnesses": self.witnesses,
               "violations": sum(1 for r in self.rows if not (r.integral and r.nonnegative))}
        if full:
            out["rows"] = [r.to_json() for r in self.rows]
        return out


def _lie_and_r(target, hw: HighestWeightSpec) -> tuple[LieAlgebraSpec, int]:
    if isinstance(target, GKMAlgebra):
        if target.r != hw.r:
            raise ValueError(f"algebra has {target.r} charges, weight gives {hw.r}")
        return target.lie, target.r
    return target, hw.r


def _row(lie, alpha, m, mu0, c) -> ConstraintRow:
    aa = lie.dot(alpha, alpha)
    slack = float(np.dot(c, m) - lie.dot(alpha, mu0))
    v = 2 * slack / aa
    return ConstraintRow([float(x) for x in alpha], [int(x) for x in m], v, slack,
                         abs(v - round(v)) < TOL, slack > -TOL)


def two_charge_witness(lie: LieAlgebraSpec, hw: HighestWeightSpec) -> dict | None:
    """Violating root when some c_j != 0 with j < r.

    Take m_r = 1, m_j = -N sign(c_j) and alpha = psi: (-psi, 0, m) is positive
    for every N, and c.m - psi.mu0 < 0 once N exceeds the explicit bound.
    """
    c = np.asarray(hw.c, dtype=float)
    r = len(c)
    lower = [j for j in range(r - 1) if abs(c[j]) > TOL]
    if not lower:
        return None
    j = lower[0]
    mu0 = hw.mu0(lie)
    psi = lie.highest_root
    rest = c[-1] - lie.dot(psi, mu0)
    N = max(1, math.floor(rest / abs(c[j])) + 1)
    m = np.zeros(r)
    m[-1] += 1
    m[j] = -N * np.sign(c[j])
    row = _row(lie, psi, m, mu0, c)
    x = RootVector.make(lie, -psi, None, m)
    assert is_positive(x, lie) and not row.nonnegative
    return {"root": x.to_json(), "N": int(N), "charge_index": j + 1, "slack": row.slack,
            "reason": f"c.m - psi.mu0 = {row.slack:.6g} < 0 for a positive root; grows without bound in N"}


def unitarity_constraints(target, hw: HighestWeightSpec, scan_depth: int) -> ConstraintReport:
    """Evaluate both constraint lines over positive real roots (-alpha, 0, m) with |m_i| <= scan_depth."""
    if scan_depth < 1:
        raise ValueError("scan_depth must be >= 1")
    lie, r = _lie_and_r(target, hw)
    mu0 = hw.mu0(lie)
    c = np.asarray(hw.c, dtype=float)
    rows = []
    rng = range(-scan_depth, scan_depth + 1)
    for m in np.array(np.meshgrid(*[list(rng)] * r, indexing="ij")).reshape(r, -1).T:
        for alpha in lie.roots:
            if not is_positive(RootVector.make(lie, -alpha, None, m.astype(float)), lie):
                continue
            rows.append(_row(lie, alpha, m, mu0, c))
    witnesses = []
    w = two_charge_witness(lie, hw)
    if w is not None:
        witnesses.append(w)
    bad = [row for row in rows if not (row.integral and row.nonnegative)]
    for row in bad[:5]:
        witnesses.append({"alpha": row.alpha, "m": row.m, "value": row.value, "slack": row.slack})
    verdict = "pass" if not bad and w is None else "reject"
    return ConstraintReport(lie.name, [int(x) for x in hw.p], [float(x) for x in c], scan_depth, rows, verdict, witnesses)


def level_bound(lie: LieAlgebraSpec, p, c: float) -> tuple[float, int, bool]:
    """x = 2c/(psi.psi) against sum p_i q^i; x must also be an integer."""
    p = [int(x) for x in p]
    if len(p) != lie.rank or min(p, default=0) < 0:
        raise ValueError("p must be rank-many non-negative integers")
    psi = lie.highest_root
    x = 2 * c / lie.dot(psi, psi)
    bound = int(sum(pi * qi for pi, qi in zip(p, marks(lie))))
    ok = abs(x - round(x)) < TOL and x >= bound - TOL
    return float(x), bound, bool(ok)


def affine_weights(lie: LieAlgebraSpec) -> list[RootVector]:
    """mu^0 = (0, psi.psi/2, 0) and mu^i = (mu^i, q^i psi.psi/2, 0)."""
    psi = lie.highest_root
    half = 0.5 * lie.dot(psi, psi)
    q = marks(lie)
    out = [RootVector.make(lie, None, [half], [0.0])]
    out += [RootVector.make(lie, mu, [qi * half], [0.0]) for mu, qi in zip(lie.fundamental_weights, q)]
    return out


def affine_duality(lie: LieAlgebraSpec) -> np.ndarray:
    """Matrix 2 mu^i.alpha_j / alpha_j.alpha_j; the identity when the weights are dual."""
    W, S = affine_weights(lie), affine_simple_roots(lie)
    return np.array([[2 * w.dot(s) / s.dot(s) for s in S] for w in W])


def affine_level(lie: LieAlgebraSpec, p_hat) -> float:
    """Level 2c/(psi.psi) of sum_i p_i mu^i, i = 0..rank."""
    W = affine_weights(lie)
    c = sum(pi * w.c[0] for pi, w in zip(p_hat, W))
    psi = lie.highest_root
    return float(2 * c / lie.dot(psi, psi))


# ---------------------------------------------------------------------------
# triples inside an assembled algebra


@dataclass
class TripleResult:
    alpha: list[float]
    index: str
    verified: bool
    X_plus: GKMElement | None
    X_minus: GKMElement | None
    h: GKMElement | None
    residual: float
    central: list[complex]
    reason: str = ""

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "index": self.index, "verified": self.verified,
                "residual": self.residual, "central": [[z.real, z.imag] for z in self.central],
                "reason": self.reason}


def su2_triple(gkm: GKMAlgebra, alpha, index) -> TripleResult:
    """X+ = s E_{-alpha} rho_I, X- = s E_alpha rho_{sigma(I)}, h = [X+, X-], s = sqrt(2/alpha.alpha).

    Verified when [h, X+-] = +-2 X+- holds on the closed sector.  When rho_I
    rho_sigma(I) is not constant the T part of h leaves the Cartan
    subalgebra and the triple is reported unverified.
    """
    lie = gkm.lie
    alpha = np.asarray(alpha, dtype=float)
    lie.root_index(alpha)
    i = gkm.basis.pos(index)
    I = gkm.basis.indices[i]
    x = RootVector.make(lie, -alpha, None, gkm.eigen[i], r=gkm.r)
    if not is_positive(x, lie):
        raise ValueError(f"(-alpha, 0, m) = {x} is not positive")
    s = math.sqrt(2 / lie.dot(alpha, alpha))
    j, _ = gkm.eta.forward[i]
    Xp = gkm.element_from_lie(s * lie.E(-alpha), I)
    Xm = gkm.element_from_lie(s * lie.E(alpha), gkm.basis.indices[j])
    try:
        h = gkm.bracket(Xp, Xm)
        r1 = gkm.bracket(h, Xp).add(Xp, -2.0).norm()
        r2 = gkm.bracket(h, Xm).add(Xm, 2.0).norm()
    except TruncationError as exc:
        return TripleResult(list(alpha), str(I), False, Xp, Xm, None, math.inf, [], f"outside closed sector: {exc}")
    res = max(r1, r2)
    ok = res <= 1e-10
    reason = "" if ok else "h has components outside the Cartan subalgebra (product of harmonics is not constant)"
    return TripleResult(list(alpha), str(I), ok, Xp, Xm, h, res, list(h.K), reason)


def triple_norm(gkm: GKMAlgebra, triple: TripleResult, hw: HighestWeightSpec) -> float:
    """<mu|h|mu>: Cartan part of h on the constant mode evaluated at mu0, central part at c."""
    lie = gkm.lie
    mu0 = hw.mu0(lie)
    const = next(k for k, I in enumerate(gkm.basis.indices) if I.degree == 0)
    vec = np.zeros(lie.dim, dtype=complex)
    for (a, i), v in triple.h.T.items():
        if i != const:
            raise ValueError("h is not in the Cartan subalgebra")
        vec[a] += v
    # coefficients on H^i; H^i acts on the highest weight by mu0(H^i)
    beta, *_ = np.linalg.lstsq(lie.cartan.T.astype(complex), vec, rcond=None)
    const_val = complex(gkm.basis.polys[const].terms.get((0,) * gkm.basis.manifold.nvars, 0))
    val = complex(beta @ mu0) * const_val
    val += complex(np.dot(triple.h.K, np.asarray(hw.c, dtype=float)))
    return float(val.real)
