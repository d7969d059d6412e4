"""Truncated orthonormal harmonic bases on the supported manifolds.

Each basis function is an exact :class:`Poly` in the ambient variables of its
manifold.  Bases coming from a highest weight are generated by applying the
lowering operators as derivations, so normalizations and phases follow the
ladder conventions of the corresponding Lie algebra.  Cartan eigenvalues and
the conjugation map are read off the constructed polynomials rather than
assigned from formulas.

Labels are integer tuples; half-integers are stored doubled:

=========  ======================  =======================================
manifold   labels                  meaning
=========  ======================  =======================================
torus      (m_1, .., m_n)          Fourier modes
s2         (l, m)                  spherical harmonics Y_lm
s3su2      (2m', 2l, 2m)           Wigner functions Phi_{m', l, m}
s3so4      (n, 2m1, 2m2)           mode "Phi": N_0, N_0' eigenvalues
s3so4      (n, l, m)               mode "Ynlm": Gegenbauer times Y_lm
s5         (n, m, n1, n2, 2I)      D_{n,m}, weight (n1, n2), isospin I
s6         (n, m1, m2, m3, b, d)   SO(7) > SO(5) > SO(3) chain
=========  ======================  =======================================
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import sympy as sp
from scipy import linalg as sla
from scipy import special

from .manifolds import ManifoldSpec, build_manifold
from .polynomial import Poly, diagonal_field, linear_combination, linear_field, substitute

S6_DEFAULT_MAX = 4
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class HarmonicIndex:
    manifold: str
    labels: tuple[int, ...]
    degree: int

    def __str__(self) -> str:
        return f"{self.manifold}{list(self.labels)}"


@dataclass(frozen=True, eq=False)
class CartanOperator:
    """Hermitian operator ``-i f^A d_A`` together with its ambient charges."""

    name: str
    f: tuple[sp.Expr, ...]
    charges: tuple[float, ...]

    def field(self, nvars: int) -> list[Poly | None]:
        return diagonal_field(nvars, self.charges)


class HarmonicBasis:
    def __init__(self, manifold: ManifoldSpec, cutoff: int, label_names: Sequence[str],
                 entries: Sequence[tuple[tuple[int, ...], int, Poly]],
                 cartan_ops: Sequence[CartanOperator], mode: str | None = None):
        self.manifold = manifold
        self.cutoff = cutoff
        self.mode = mode
        self.label_names = tuple(label_names)
        self.cartan_ops = tuple(cartan_ops)
        self.indices = [HarmonicIndex(manifold.key, tuple(lab), deg) for lab, deg, _ in entries]
        self.polys = [p.cleaned(1e-14) for _, _, p in entries]
        self.position = {I.labels: k for k, I in enumerate(self.indices)}
        if len(self.position) != len(self.indices):
            raise ValueError("duplicate labels in basis")
        self.eigen = np.array([[self._charge(p, op) for op in self.cartan_ops] for p in self.polys]).reshape(len(self.polys), len(self.cartan_ops))
        self.conj = self._conjugation()

    # -- lookup ------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def r(self) -> int:
        return len(self.cartan_ops)

    def pos(self, index) -> int:
        labels = index.labels if isinstance(index, HarmonicIndex) else tuple(index)
        try:
            return self.position[labels]
        except KeyError:
            raise KeyError(f"index {labels} is not in the basis") from None

    def poly(self, index) -> Poly:
        return self.polys[self.pos(index)]

    def cartan_eigenvalue(self, index, j: int) -> float:
        return float(self.eigen[self.pos(index), j])

    def conjugation(self, index) -> tuple[HarmonicIndex, complex]:
        k, ph = self.conj[self.pos(index)]
        return self.indices[k], ph

    def degree(self, index) -> int:
        return self.indices[self.pos(index)].degree

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, index, coords) -> np.ndarray:
        vals = self.manifold.ambient_values(np.atleast_2d(coords))
        return self.poly(index).evaluate(vals)

    def values(self, ambient: Sequence[np.ndarray]) -> np.ndarray:
        """Matrix (len(basis), N) of all basis functions at ambient values."""
        return np.array([p.evaluate(ambient) for p in self.polys])

    # -- derived data ----------------------------------------------------------
    def _charge(self, p: Poly, op: CartanOperator) -> float:
        vals = {round(sum(q * e for q, e in zip(op.charges, exps)), 9) for exps in p.terms}
        if len(vals) != 1:
            raise ArithmeticError(f"basis function is not an eigenfunction of {op.name}")
        return float(vals.pop())

    def _conjugation(self) -> list[tuple[int, complex]]:
        out = []
        groups: dict[tuple, list[int]] = {}
        for k, I in enumerate(self.indices):
            groups.setdefault((I.degree,) + tuple(np.round(self.eigen[k], 9)), []).append(k)
        for k, I in enumerate(self.indices):
            pc = self.polys[k].conjugate(self.manifold.partner)
            key = (I.degree,) + tuple(np.round(-self.eigen[k], 9) + 0.0)
            hits = []
            for j in groups.get(key, []):
                c = self.manifold.inner(self.polys[j], pc)
                if abs(c) > 1e-9:
                    hits.append((j, c))
            if len(hits) != 1 or abs(abs(hits[0][1]) - 1) > 1e-9:
                raise ArithmeticError(f"conjugate of {I} is not a single basis element: {hits}")
            j, c = hits[0]
            out.append((j, complex(_snap(c.real), _snap(c.imag))))
        return out

    @cached_property
    def manifest(self) -> dict:
        return {
            "manifold": self.manifold.key,
            "mode": self.mode,
            "cutoff": self.cutoff,
            "label_names": list(self.label_names),
            "cartan": [op.name for op in self.cartan_ops],
            "count": len(self),
            "indices": [
                {
                    "labels": list(I.labels),
                    "degree": I.degree,
                    "eigen": [float(x) for x in self.eigen[k]],
                    "conj": {"labels": list(self.indices[self.conj[k][0]].labels),
                             "phase": [self.conj[k][1].real, self.conj[k][1].imag]},
                }
                for k, I in enumerate(self.indices)
            ],
        }

    @cached_property
    def manifest_hash(self) -> str:
        blob = json.dumps(self.manifest, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def __repr__(self) -> str:
        return f"HarmonicBasis({self.manifold.key}, cutoff={self.cutoff}, size={len(self)})"


def _snap(x: float) -> float:
    for v in (0.0, 1.0, -1.0):
        if abs(x - v) < 1e-12:
            return v
    return float(x)


# ---------------------------------------------------------------------------
# ladder helpers


def _lower(p: Poly, field, norm2: float) -> Poly:
    return p.apply(field).scale(1.0 / math.sqrt(norm2))


def _ladder(j2: int, m2: int) -> float:
    """(j+m)(j-m+1) for doubled j and m: squared norm of J_- on |j m>."""
    return (j2 + m2) * (j2 - m2 + 2) / 4.0


def _phase_first(p: Poly) -> Poly:
    """Rotate so the first nonzero coefficient in sorted monomial order is real positive."""
    for _, c in p.sorted_terms():
        if abs(c) > 1e-10:
            return p.scale(abs(c) / c)
    raise ArithmeticError("zero polynomial")


# ---------------------------------------------------------------------------
# Cartan operators per manifold


def cartan_operators(manifold: ManifoldSpec, mode: str | None = None) -> list[CartanOperator]:
    s = manifold.symbols
    one, zero, half = sp.Integer(1), sp.Integer(0), sp.Rational(1, 2)
    mid = manifold.id
    if mid == "torus":
        ops = []
        for j in range(manifold.n):
            f = tuple(one if a == j else zero for a in range(manifold.n))
            ch = [0.0] * manifold.nvars
            ch[2 * j], ch[2 * j + 1] = 1.0, -1.0
            ops.append(CartanOperator(f"D{j + 1}", f, tuple(ch)))
        return ops
    if mid == "s2":
        return [CartanOperator("L3", (one, zero), (1.0, -1.0, 0.0))]
    if mid == "s3su2":
        return [
            CartanOperator("J3p", (half, half, zero), (0.5, -0.5, 0.5, -0.5)),
            CartanOperator("J3", (half, -half, zero), (0.5, -0.5, -0.5, 0.5)),
        ]
    if mid == "s3so4":
        ph, th, ps = s
        n0 = CartanOperator("N0", (half, half * sp.cot(ps) * sp.sin(th), -half * sp.cos(th)), (0.5, -0.5, 0.5, -0.5))
        n0p = CartanOperator("N0p", (half, -half * sp.cot(ps) * sp.sin(th), half * sp.cos(th)), (0.5, -0.5, -0.5, 0.5))
        if mode == "Ynlm":
            return [CartanOperator("N0+N0p", (one, zero, zero), (1.0, -1.0, 0.0, 0.0))]
        return [n0, n0p]
    if mid == "s5":
        return [
            CartanOperator("h1", (one, -one, zero, zero, zero), (1.0, -1.0, -1.0, 1.0, 0.0, 0.0)),
            CartanOperator("h2", (zero, one, -one, zero, zero), (0.0, 0.0, 1.0, -1.0, -1.0, 1.0)),
            CartanOperator("h", (one, one, one, zero, zero), (1.0, -1.0, 1.0, -1.0, 1.0, -1.0)),
        ]
    if mid == "s6":
        ph, t1, t2, t3, t4, t5 = s
        return [
            CartanOperator("h1", (one, zero, zero, zero, zero, zero), (1.0, -1.0, 0, 0, 0, 0, 0)),
            CartanOperator("h2", (zero, sp.cot(t2) * sp.sin(t1), -sp.cos(t1), zero, zero, zero), (0, 0, 1.0, -1.0, 0, 0, 0)),
            CartanOperator("h3", (zero, zero, zero, sp.cot(t4) * sp.sin(t3), -sp.cos(t3), zero), (0, 0, 0, 0, 1.0, -1.0, 0)),
        ]
    raise ValueError(f"no Cartan operators for {manifold.name}")


# ---------------------------------------------------------------------------
# ladder operators as derivations of the ambient polynomial ring


def ladder_fields(manifold: ManifoldSpec) -> dict[str, list[Poly | None]]:
    nv = manifold.nvars
    mid = manifold.id
    if mid == "s2":
        # zeta, zetab, t
        return {
            "L-": linear_field(nv, {0: {2: -2.0}, 2: {1: 1.0}}),
            "L+": linear_field(nv, {1: {2: -2.0}, 2: {0: 1.0}}),
        }
    if mid == "s3su2":
        # alpha, alphab, beta, betab
        return {
            "J-": linear_field(nv, {0: {2: 1.0}, 3: {1: -1.0}}),
            "J+": linear_field(nv, {2: {0: 1.0}, 1: {3: -1.0}}),
            "J'-": linear_field(nv, {0: {3: -1.0}, 2: {1: 1.0}}),
            "J'+": linear_field(nv, {3: {0: -1.0}, 1: {2: 1.0}}),
        }
    if mid == "s3so4":
        # w, wb, u, ub
        return {
            "N-": linear_field(nv, {0: {3: -1.0}, 2: {1: 1.0}}),
            "N+": linear_field(nv, {1: {2: 1.0}, 3: {0: -1.0}}),
            "N'-": linear_field(nv, {0: {2: -1.0}, 3: {1: 1.0}}),
            "N'+": linear_field(nv, {1: {3: 1.0}, 2: {0: -1.0}}),
        }
    if mid == "s5":
        # z1, zb1, z2, zb2, z3, zb3
        return {
            "E1+": linear_field(nv, {2: {0: 1.0}, 1: {3: -1.0}}),
            "E1-": linear_field(nv, {0: {2: 1.0}, 3: {1: -1.0}}),
            "E2+": linear_field(nv, {4: {2: 1.0}, 3: {5: -1.0}}),
            "E2-": linear_field(nv, {2: {4: 1.0}, 5: {3: -1.0}}),
        }
    if mid == "s6":
        return g2_fields()
    raise ValueError(f"no ladder operators for {manifold.name}")


# eq:diff variables: Z1 = z[1,-2], Z2 = z[-1,1], Z3 = z[0,1], B_k their conjugates, X = x0.
# They are sqrt(2)-rescaled relative to the S6 ambient z_k (q = x0^2 + 2 sum Z B).
_G2_VAR = {"Z1": 0, "B1": 1, "Z2": 2, "B2": 3, "Z3": 4, "B3": 5, "X": 6}
_R2 = math.sqrt(2)
_G2_TERMS = {
    "E_a1": [("Z1", "Z2", 1), ("B2", "B1", -1)],
    "E_-a1": [("Z2", "Z1", 1), ("B1", "B2", -1)],
    "E_a2": [("Z3", "B2", 1), ("Z2", "B3", -1), ("X", "Z1", _R2), ("B1", "X", -_R2)],
    "E_-a2": [("B3", "Z2", 1), ("B2", "Z3", -1), ("X", "B1", _R2), ("Z1", "X", -_R2)],
    "E_a1+a2": [("Z1", "B3", 1), ("Z3", "B1", -1), ("X", "Z2", _R2), ("B2", "X", -_R2)],
    "E_-a1-a2": [("B1", "Z3", 1), ("B3", "Z1", -1), ("X", "B2", _R2), ("Z2", "X", -_R2)],
    "E_a1+2a2": [("B2", "Z1", 1), ("B1", "Z2", -1), ("X", "B3", _R2), ("Z3", "X", -_R2)],
    "E_-a1-2a2": [("Z2", "B1", 1), ("Z1", "B2", -1), ("X", "Z3", _R2), ("B3", "X", -_R2)],
    "E_a1+3a2": [("Z3", "Z1", 1), ("B1", "B3", -1)],
    "E_-a1-3a2": [("Z1", "Z3", 1), ("B3", "B1", -1)],
    "E_2a1+3a2": [("Z3", "Z2", 1), ("B2", "B3", -1)],
    "E_-2a1-3a2": [("Z2", "Z3", 1), ("B3", "B2", -1)],
    "h1": [("Z1", "Z1", 1), ("Z2", "Z2", -1), ("B1", "B1", -1), ("B2", "B2", 1)],
    "h2": [("Z1", "Z1", -2), ("Z2", "Z2", 1), ("Z3", "Z3", 1), ("B1", "B1", 2), ("B2", "B2", -1), ("B3", "B3", -1)],
}


def g2_fields() -> dict[str, list[Poly | None]]:
    """The g2 differential realization acting on S6 ambient polynomials.

    A term ``a d_b`` in the rescaled variables becomes ``(s_a / s_b) a d_b`` in
    the ambient ones, with s = 1/sqrt(2) for complex and 1 for x0.
    """
    nv = 7
    scale = {k: (1.0 if k == "X" else 1 / _R2) for k in _G2_VAR}
    out = {}
    for name, terms in _G2_TERMS.items():
        images: dict[int, dict[int, float]] = {}
        for a, b, c in terms:
            row = images.setdefault(_G2_VAR[b], {})
            row[_G2_VAR[a]] = row.get(_G2_VAR[a], 0.0) + c * scale[a] / scale[b]
        out[name] = linear_field(nv, images)
    return out


# ---------------------------------------------------------------------------
# builders


def torus_basis(n: int, cutoff: int) -> HarmonicBasis:
    if n < 1 or cutoff < 0:
        raise ValueError("torus basis needs n >= 1 and cutoff >= 0")
    M = build_manifold("torus", n)
    entries = []
    for m in itertools.product(range(-cutoff, cutoff + 1), repeat=n):
        e = [0] * (2 * n)
        for j, mj in enumerate(m):
            e[2 * j + (0 if mj >= 0 else 1)] = abs(mj)
        entries.append((m, max((abs(x) for x in m), default=0), Poly.monomial(e)))
    return HarmonicBasis(M, cutoff, [f"m{j + 1}" for j in range(n)], entries, cartan_operators(M))


def _s2_polys(lmax: int) -> dict[tuple[int, int], Poly]:
    M = build_manifold("s2")
    Lm = ladder_fields(M)["L-"]
    out = {}
    for l in range(lmax + 1):
        c = (-1) ** l * math.sqrt(math.factorial(2 * l + 1)) / (2**l * math.factorial(l))
        p = Poly.monomial((l, 0, 0), c)
        out[(l, l)] = p
        for m in range(l, -l, -1):
            p = _lower(p, Lm, (l + m) * (l - m + 1))
            out[(l, m - 1)] = p
    return out


def s2_basis(cutoff: int) -> HarmonicBasis:
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    M = build_manifold("s2")
    polys = _s2_polys(cutoff)
    entries = [((l, m), l, polys[(l, m)]) for l in range(cutoff + 1) for m in range(-l, l + 1)]
    return HarmonicBasis(M, cutoff, ["l", "m"], entries, cartan_operators(M))


def su2_basis(cutoff: int) -> HarmonicBasis:
    """Wigner functions on S3 = SU(2); cutoff is 2*l_max."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    M = build_manifold("s3su2")
    Jm = ladder_fields(M)["J-"]
    entries = []
    for l2 in range(cutoff + 1):
        for mp2 in range(-l2, l2 + 1, 2):
            a, b = (l2 + mp2) // 2, (l2 - mp2) // 2
            c = math.sqrt(math.factorial(l2 + 1) / (math.factorial(a) * math.factorial(b))) * (-1) ** b
            p = Poly.monomial((a, 0, 0, b), c)
            col = {l2: p}
            for m2 in range(l2, -l2, -2):
                p = _lower(p, Jm, _ladder(l2, m2))
                col[m2 - 2] = p
            for m2 in range(-l2, l2 + 1, 2):
                entries.append(((mp2, l2, m2), l2, col[m2]))
    return HarmonicBasis(M, cutoff, ["2mp", "2l", "2m"], entries, cartan_operators(M))


def gegenbauer_poly_coeffs(lam: int, k: int) -> dict[int, float]:
    """Coefficients of C^lam_k(x) in powers of x (lam a positive integer)."""
    out: dict[int, float] = {}
    for j in range(k // 2 + 1):
        num = math.factorial(k - j + lam - 1)
        den = math.factorial(lam - 1) * math.factorial(j) * math.factorial(k - 2 * j)
        out[k - 2 * j] = (-1) ** j * num / den * 2 ** (k - 2 * j)
    return out


def gegenbauer_norm(n: int, l: int, printed: bool = False) -> float:
    """N_nl making H_nl unit normalized against (2/pi) sin^2(psi) d psi.

    The unit-norm prefactor is (-1)^l 2^l l! sqrt(...).  ``printed=True``
    returns the variant with (2l)! in place of 2^l l!, which agrees only for
    l <= 1 and is off by (2l-1)!! beyond.
    """
    lead = math.factorial(2 * l) if printed else 2**l * math.factorial(l)
    return (-1) ** l * lead * math.sqrt((n + 1) * math.factorial(n - l) / math.factorial(n + l + 1))


def gegenbauer_radial(n: int, l: int, psi, printed: bool = False) -> np.ndarray:
    """H_nl(psi) = N_nl sin^l(psi) C^{1+l}_{n-l}(cos psi)."""
    psi = np.asarray(psi, dtype=float)
    return gegenbauer_norm(n, l, printed) * np.sin(psi) ** l * special.eval_gegenbauer(n - l, 1 + l, np.cos(psi))


def s3_so4_basis(cutoff: int, mode: str = "Phi") -> HarmonicBasis:
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if mode not in ("Phi", "Ynlm"):
        raise ValueError(f"unknown mode {mode!r}; expected 'Phi' or 'Ynlm'")
    M = build_manifold("s3so4")
    nv = M.nvars
    entries = []
    if mode == "Phi":
        f = ladder_fields(M)
        for n in range(cutoff + 1):
            top = Poly.monomial((n, 0, 0, 0), math.sqrt(n + 1))
            for m2 in range(n, -n - 1, -2):
                p = top
                for m1 in range(n, -n - 1, -2):
                    entries.append(((n, m1, m2), n, p))
                    if m1 > -n:
                        p = _lower(p, f["N-"], _ladder(n, m1))
                if m2 > -n:
                    top = _lower(top, f["N'-"], _ladder(n, m2))
        entries.sort(key=lambda t: (t[0][0], -t[0][2], -t[0][1]))
        return HarmonicBasis(M, cutoff, ["n", "2m1", "2m2"], entries, cartan_operators(M), mode)
    s2 = _s2_polys(cutoff)
    w, wb = Poly.var(nv, 0), Poly.var(nv, 1)
    x3 = Poly(nv, {(0, 0, 1, 0): 0.5, (0, 0, 0, 1): 0.5})
    x4 = Poly(nv, {(0, 0, 1, 0): -0.5j, (0, 0, 0, 1): 0.5j})
    for n in range(cutoff + 1):
        for l in range(n + 1):
            g = Poly(nv)
            for k, c in gegenbauer_poly_coeffs(1 + l, n - l).items():
                g = g + (x4**k).scale(c)
            g = g.scale(gegenbauer_norm(n, l))
            for m in range(-l, l + 1):
                y = substitute(s2[(l, m)], [w, wb, x3])
                entries.append(((n, l, m), n, g * y))
    return HarmonicBasis(M, cutoff, ["n", "l", "m"], entries, cartan_operators(M, "Ynlm"), mode)


# -- S5 ------------------------------------------------------------------------


def su3_dim(n: int, m: int) -> int:
    return (n + 1) * (m + 1) * (n + m + 2) // 2


def _s5_weight(p: Poly) -> tuple[int, int]:
    e = next(iter(p.terms))
    h1 = e[0] - e[1] - e[2] + e[3]
    h2 = e[2] - e[3] - e[4] + e[5]
    return h1, h2


def _s5_rep(M: ManifoldSpec, n: int, m: int) -> list[tuple[tuple[int, ...], Poly]]:
    f = ladder_fields(M)
    c = math.sqrt(math.factorial(n + m + 2) / (2 * math.factorial(n) * math.factorial(m)))
    hw = Poly.monomial((n, 0, 0, 0, 0, m), c)
    spaces: dict[tuple[int, int], list[Poly]] = {}
    queue = [hw]
    while queue:
        p = queue.pop(0)
        wt = _s5_weight(p)
        basis = spaces.setdefault(wt, [])
        r = p
        for b in basis:
            r = r - b.scale(M.inner(b, r))
        nrm = math.sqrt(max(M.inner(r, r).real, 0.0))
        if nrm < 1e-9:
            continue
        basis.append(r.scale(1 / nrm).cleaned(1e-14))
        for name in ("E1-", "E2-"):
            q = p.apply(f[name]).cleaned(1e-14)
            if q.terms:
                queue.append(q)
    if sum(len(v) for v in spaces.values()) != su3_dim(n, m):
        raise ArithmeticError(f"D_{n},{m} lowering produced the wrong dimension")

    E1p, E1m = f["E1+"], f["E1-"]

    def Q(p: Poly) -> Poly:
        h1 = _s5_weight(p)[0] if p.terms else 0
        return p.scale(h1 * h1 / 4) + (p.apply(E1m).apply(E1p) + p.apply(E1p).apply(E1m)).scale(0.5)

    out = []
    for wt in sorted(spaces, key=lambda w: (-w[0], -w[1])):
        n1, _ = wt
        if n1 < 0:
            continue
        basis = spaces[wt]
        k = len(basis)
        A = np.array([[M.inner(basis[i], Q(basis[j])) for j in range(k)] for i in range(k)])
        vals, vecs = np.linalg.eigh(A)
        for v_idx in range(k):
            I2 = int(round(-1 + math.sqrt(1 + 4 * vals[v_idx].real)))  # 2I
            if abs(I2 * (I2 + 2) / 4 - vals[v_idx]) > 1e-8:
                raise ArithmeticError("Q eigenvalue is not of the form I(I+1)")
            if I2 != n1:
                continue
            top = linear_combination(basis, vecs[:, v_idx], M.nvars)
            ov = M.inner(basis[0], top)
            top = top.scale(abs(ov) / ov) if abs(ov) > 1e-8 else _phase_first(top)
            p, m1 = top, n1
            w1, w2 = wt
            while True:
                out.append(((n, m, w1, w2, I2), p))
                if m1 == -I2:
                    break
                p = _lower(p, E1m, _ladder(I2, m1))
                m1 -= 2
                w1, w2 = w1 - 2, w2 + 1
    if len(out) != su3_dim(n, m):
        raise ArithmeticError(f"isospin decomposition of D_{n},{m} is incomplete")
    return out


def s5_basis(cutoff: int) -> HarmonicBasis:
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    M = build_manifold("s5")
    entries = []
    for deg in range(cutoff + 1):
        for n in range(deg, -1, -1):
            for labels, p in _s5_rep(M, n, deg - n):
                entries.append((labels, deg, p))
    return HarmonicBasis(M, cutoff, ["n", "m", "n1", "n2", "2I"], entries, cartan_operators(M))


# -- S6 ------------------------------------------------------------------------


def harmonic_dim(n: int, d: int = 7) -> int:
    """Dimension of homogeneous harmonic polynomials of degree n in d variables."""
    return math.comb(n + d - 1, d - 1) - (math.comb(n + d - 3, d - 1) if n >= 2 else 0)


def _monomials(nvars: int, deg: int):
    for c in itertools.combinations_with_replacement(range(nvars), deg):
        e = [0] * nvars
        for k in c:
            e[k] += 1
        yield tuple(e)


def s6_laplacian(p: Poly) -> Poly:
    """4 sum d_z d_zb + d_x0^2 on the S6 ambient ring."""
    out = p.derivative(6).derivative(6)
    for k in range(3):
        out = out + p.derivative(2 * k).derivative(2 * k + 1).scale(4)
    return out


def _casimir(p: Poly, sub: Sequence[int], pairs: Sequence[tuple[int, int]], q: int) -> Poly:
    """E(E + q - 2) - r^2 Lap on the coordinates ``sub``; eigenvalue b(b+q-2) on degree-b harmonics."""
    nv = p.nvars
    ch = [1.0 if k in sub else 0.0 for k in range(nv)]
    field = diagonal_field(nv, ch)
    Ep = p.apply(field)
    lap = Poly(nv)
    r2 = Poly(nv)
    for i, j in pairs:
        lap = lap + p.derivative(i).derivative(j).scale(4)
        r2 = r2 + Poly.var(nv, i) * Poly.var(nv, j)
    for k in sub:
        if not any(k in pr for pr in pairs):
            lap = lap + p.derivative(k).derivative(k)
            r2 = r2 + Poly.var(nv, k) ** 2
    return Ep.apply(field) + Ep.scale(q - 2) - r2 * lap


def casimir_so5(p: Poly) -> Poly:
    return _casimir(p, (2, 3, 4, 5, 6), ((2, 3), (4, 5)), 5)


def casimir_so3(p: Poly) -> Poly:
    return _casimir(p, (4, 5, 6), ((4, 5),), 3)


def _poly_from_vec(monos, vec, nv) -> Poly:
    return Poly(nv, {e: c for e, c in zip(monos, vec) if abs(c) > 1e-14})


def _s6_level(M: ManifoldSpec, n: int) -> list[tuple[tuple[int, ...], Poly]]:
    nv = M.nvars
    by_wt: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
    for e in _monomials(nv, n):
        by_wt.setdefault((e[0] - e[1], e[2] - e[3], e[4] - e[5]), []).append(e)
    lower: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
    for e in (_monomials(nv, n - 2) if n >= 2 else ()):
        lower.setdefault((e[0] - e[1], e[2] - e[3], e[4] - e[5]), []).append(e)
    out = []
    weyl = 1 / math.sqrt(7)
    for wt in sorted(by_wt, key=lambda w: tuple(-x for x in w)):
        monos = by_wt[wt]
        low = lower.get(wt, [])
        if low:
            lidx = {e: i for i, e in enumerate(low)}
            D = np.zeros((len(low), len(monos)))
            for j, e in enumerate(monos):
                for ee, c in s6_laplacian(Poly.monomial(e)).terms.items():
                    D[lidx[ee], j] += c.real
            K = sla.null_space(D)
        else:
            K = np.eye(len(monos))
        if K.shape[1] == 0:
            continue
        polys = [_poly_from_vec(monos, K[:, j], nv) for j in range(K.shape[1])]
        G = M.gram(polys)
        L = np.linalg.cholesky(G)
        C = np.linalg.inv(L).conj().T  # columns give orthonormal combinations
        ortho = [linear_combination(polys, C[:, j], nv) for j in range(C.shape[1])]
        k = len(ortho)
        A5 = np.array([[M.inner(ortho[i], casimir_so5(ortho[j])) for j in range(k)] for i in range(k)])
        A3 = np.array([[M.inner(ortho[i], casimir_so3(ortho[j])) for j in range(k)] for i in range(k)])
        vals, vecs = np.linalg.eigh(A5 + weyl * A3)
        for v in range(k):
            vec = vecs[:, v]
            l5 = (vec.conj() @ A5 @ vec).real
            l3 = (vec.conj() @ A3 @ vec).real
            b = int(round((-3 + math.sqrt(9 + 4 * l5)) / 2))
            d = int(round((-1 + math.sqrt(1 + 4 * l3)) / 2))
            if abs(b * (b + 3) - l5) > 1e-7 or abs(d * (d + 1) - l3) > 1e-7:
                raise ArithmeticError("S6 Casimir eigenvalues are not integral labels")
            p = _phase_first(linear_combination(ortho, vec, nv).cleaned(1e-13))
            nrm = math.sqrt(M.inner(p, p).real)
            out.append(((n,) + wt + (b, d), p.scale(1 / nrm)))
    if len(out) != harmonic_dim(n):
        raise ArithmeticError("S6 level has the wrong dimension")
    return out


def s6_basis(cutoff: int, max_cutoff: int = S6_DEFAULT_MAX) -> HarmonicBasis:
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if cutoff > max_cutoff:
        raise ValueError(f"S6 cutoff {cutoff} exceeds the configured budget {max_cutoff}")
    M = build_manifold("s6")
    entries = []
    for n in range(cutoff + 1):
        for labels, p in _s6_level(M, n):
            entries.append((labels, n, p))
    return HarmonicBasis(M, cutoff, ["n", "m1", "m2", "m3", "b", "d"], entries, cartan_operators(M))


def s6_highest_weight_norm(n: int) -> float:
    return math.sqrt(math.factorial(2 * n + 5) / (60 * 4**n * math.factorial(n) * math.factorial(n + 2)))


# ---------------------------------------------------------------------------
# dispatch, evaluation, Laplacian


def build_basis(manifold: str, cutoff: int, n: int | None = None, mode: str | None = None) -> HarmonicBasis:
    M = build_manifold(manifold, n)
    if M.id == "torus":
        return torus_basis(M.n, cutoff)
    if M.id == "s2":
        return s2_basis(cutoff)
    if M.id == "s3su2":
        return su2_basis(cutoff)
    if M.id == "s3so4":
        return s3_so4_basis(cutoff, mode or "Phi")
    if M.id == "s5":
        return s5_basis(cutoff)
    return s6_basis(cutoff)


def eval(basis: HarmonicBasis, index, point) -> complex:  # noqa: A001 - public name
    pt = np.asarray(point, dtype=float).reshape(1, -1)
    if pt.shape[1] != basis.manifold.dim:
        raise ValueError(f"point must have {basis.manifold.dim} chart coordinates")
    val = complex(basis.evaluate(index, pt)[0])
    if not np.isfinite(val):
        raise ArithmeticError("non-finite value")
    return val


# central difference stencils, 8th order
_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
_OFF = np.arange(-4, 5)


def fd_partial(fn, x: np.ndarray, axis: int, h: float, order: int = 1) -> np.ndarray:
    """Central finite difference of a vectorized fn at points x (N, d) along one axis."""
    st = _D1 if order == 1 else _D2
    acc = 0
    for c, o in zip(st, _OFF):
        if c == 0:
            continue
        y = x.copy()
        y[:, axis] += o * h
        acc = acc + c * fn(y)
    return acc / h**order


def apply_cartan_fd(basis: HarmonicBasis, index, j: int, coords: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """(-i f^A d_A rho)(coords) with derivatives taken by finite differences."""
    op = basis.cartan_ops[j]
    M = basis.manifold
    coords = np.atleast_2d(coords)
    fvals = sp.lambdify(M.symbols, list(op.f), "numpy")(*[coords[:, a] for a in range(M.dim)])
    p = basis.poly(index)
    fn = lambda y: p.evaluate(M.ambient_values(y))  # noqa: E731
    out = np.zeros(len(coords), dtype=complex)
    for a in range(M.dim):
        fa = np.broadcast_to(np.asarray(fvals[a], dtype=float), (len(coords),))
        if np.all(fa == 0):
            continue
        out += fa * fd_partial(fn, coords, a, h)
    return -1j * out


def apply_cartan_exact(basis: HarmonicBasis, index, j: int, coords: np.ndarray) -> np.ndarray:
    """Same operator by the chain rule through the ambient Jacobian."""
    op = basis.cartan_ops[j]
    M = basis.manifold
    coords = np.atleast_2d(coords)
    fvals = sp.lambdify(M.symbols, list(op.f), "numpy")(*[coords[:, a] for a in range(M.dim)])
    fv = np.array([np.broadcast_to(np.asarray(v, dtype=float), (len(coords),)) for v in fvals])
    jac = M.ambient_jacobian(coords)
    vals = M.ambient_values(coords)
    p = basis.poly(index)
    out = np.zeros(len(coords), dtype=complex)
    for k in range(M.nvars):
        dk = p.derivative(k)
        if dk.terms:
            out += dk.evaluate(vals) * np.einsum("an,an->n", jac[k], fv)
    return -1j * out


def laplace_eigenvalue(basis: HarmonicBasis, index) -> float:
    M = basis.manifold
    I = basis.indices[basis.pos(index)]
    if M.kind == "torus":
        return -float(sum(m * m for m in I.labels))
    n = I.degree
    return -float(n * (n + M.euclid_dim - 2))


def sample_points(manifold: ManifoldSpec, count: int = 100, seed: int = 7) -> np.ndarray:
    """Deterministic interior chart points, away from coordinate singularities."""
    rng = np.random.default_rng(seed)
    pts = np.empty((count, manifold.dim))
    for a, ax in enumerate(manifold.axes):
        span = ax.hi - ax.lo
        pad = 0.0 if ax.periodic else 0.08 * span
        pts[:, a] = ax.lo + pad + (span - 2 * pad) * rng.random(count)
    return pts


def _sphere_euclid_points(d: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(count, d))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def laplacian_fd(basis: HarmonicBasis, index, count: int = 20, seed: int = 11, h: float = 2e-2):
    """Finite-difference Laplace-Beltrami of rho_I at sample points; returns (points, Lap rho, rho)."""
    M = basis.manifold
    p = basis.poly(index)
    if M.kind == "torus":
        x = sample_points(M, count, seed)
        fn = lambda y: p.evaluate(M.ambient_values(y))  # noqa: E731
        lap = sum(fd_partial(fn, x, a, h, 2) for a in range(M.dim))
        return x, lap, fn(x)
    X = _sphere_euclid_points(M.euclid_dim, count, seed)

    def fn(Y):
        Y = Y / np.linalg.norm(Y, axis=1, keepdims=True)
        return p.evaluate(M.from_euclidean(Y))

    lap = sum(fd_partial(fn, X, a, h, 2) for a in range(M.euclid_dim))
    return X, lap, fn(X)


def apply_laplacian(basis: HarmonicBasis, index, tol: float = 1e-8) -> float:
    """Laplace-Beltrami eigenvalue of rho_I, confirmed pointwise by finite differences."""
    lam = laplace_eigenvalue(basis, index)
    _, lap, val = laplacian_fd(basis, index)
    scale = max(1.0, float(np.abs(val).max()))
    resid = float(np.abs(lap - lam * val).max()) / scale
    if resid > tol:
        raise ArithmeticError(f"{index} is not a Laplace eigenfunction (residual {resid:.3e})")
    return lam
