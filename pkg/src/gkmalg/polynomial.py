"""Sparse complex polynomials in a fixed list of ambient variables.

Every harmonic in this package is a polynomial in the ambient coordinates of
its manifold (``z_k`` and ``conj(z_k)`` treated as independent symbols, plus
real coordinates).  Products, Lie derivatives and conjugation are therefore
exact operations on exponent dictionaries; only evaluation touches floats.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, complex] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, complex] = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[tuple(e)] = complex(c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c: complex = 1.0) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, k: int, c: complex = 1.0) -> "Poly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: complex = 1.0) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    # -- arithmetic -------------------------------------------------------
    def copy(self) -> "Poly":
        p = Poly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def __add__(self, other: "Poly") -> "Poly":
        out = self.copy()
        for e, c in other.terms.items():
            v = out.terms.get(e, 0) + c
            if v == 0:
                out.terms.pop(e, None)
            else:
                out.terms[e] = v
        return out

    def __neg__(self) -> "Poly":
        return self.scale(-1)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def scale(self, s: complex) -> "Poly":
        if s == 0:
            return Poly(self.nvars)
        return Poly(self.nvars, {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict[Exponent, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # -- structure ---------------------------------------------------------
    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def cleaned(self, tol: float = 1e-13) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > tol})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self) -> list[tuple[Exponent, complex]]:
        # highest total degree first, then reverse-lexicographic exponents
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    # -- calculus ----------------------------------------------------------
    def derivative(self, k: int) -> "Poly":
        out: dict[Exponent, complex] = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + c * e[k]
        return Poly(self.nvars, out)

    def apply(self, field: Sequence["Poly | None"]) -> "Poly":
        """Apply the derivation sending variable k to ``field[k]``."""
        out = Poly(self.nvars)
        for k, img in enumerate(field):
            if img is None or not img.terms:
                continue
            d = self.derivative(k)
            if d.terms:
                out = out + d * img
        return out

    def conjugate(self, partner: Sequence[int]) -> "Poly":
        """Complex conjugate, where variable k conjugates to variable partner[k]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for k, x in enumerate(e):
                ne[partner[k]] += x
            out[tuple(ne)] = np.conj(c)
        return Poly(self.nvars, out)

    # -- numerics ----------------------------------------------------------
    def evaluate(self, values: Sequence[np.ndarray]) -> np.ndarray:
        if not self.terms:
            return np.zeros(np.shape(values[0]), dtype=complex)
        maxpow = [max(e[k] for e in self.terms) for k in range(self.nvars)]
        powers = []
        for k in range(self.nvars):
            col = [np.ones_like(values[k], dtype=complex)]
            for _ in range(maxpow[k]):
                col.append(col[-1] * values[k])
            powers.append(col)
        acc = np.zeros(np.shape(values[0]), dtype=complex)
        for e, c in self.terms.items():
            term = np.full(np.shape(values[0]), c, dtype=complex)
            for k, x in enumerate(e):
                if x:
                    term = term * powers[k][x]
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {dict(self.sorted_terms())})"


def linear_combination(polys: Iterable[Poly], coeffs: Iterable[complex], nvars: int) -> Poly:
    acc: dict[Exponent, complex] = {}
    for p, s in zip(polys, coeffs):
        if s == 0:
            continue
        for e, c in p.terms.items():
            acc[e] = acc.get(e, 0) + c * s
    return Poly(nvars, acc)


def compose_fields(p: Poly, *fields: Sequence[Poly | None]) -> Poly:
    """Apply derivations right to left: fields[0](fields[1](...(p)))."""
    for f in reversed(fields):
        p = p.apply(f)
    return p


def diagonal_field(nvars: int, charges: Sequence[complex]) -> list[Poly | None]:
    """Derivation v_k -> charges[k] * v_k."""
    return [Poly.var(nvars, k, q) if q != 0 else None for k, q in enumerate(charges)]


def linear_field(nvars: int, images: Mapping[int, Mapping[int, complex]]) -> list[Poly | None]:
    """Derivation with v_k -> sum_j images[k][j] v_j."""
    field: list[Poly | None] = [None] * nvars
    for k, img in images.items():
        field[k] = Poly(nvars, {tuple(1 if i == j else 0 for i in range(nvars)): c for j, c in img.items()})
    return field


def substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    """Polynomial composition: variable k of ``p`` replaced by ``images[k]``."""
    nv = images[0].nvars
    cache: dict[tuple[int, int], Poly] = {}

    def power(k: int, e: int) -> Poly:
        if (k, e) not in cache:
            cache[(k, e)] = images[k] ** e
        return cache[(k, e)]

    out = Poly(nv)
    for e, c in p.terms.items():
        term = Poly.const(nv, c)
        for k, x in enumerate(e):
            if x:
                term = term * power(k, x)
        out = out + term
    return out
