"""Acceptance criteria 1-9.

Each criterion is a function returning (ok, detail).  Under pytest every
criterion is a test and a PASS/FAIL line per criterion is printed in the
terminal summary; ``python3 tests/test_acceptance.py`` prints the same lines.

Criterion 3 is reported FAIL: the printed Gegenbauer normalisation N_nl is
not unit-normalising for l >= 2.  The implementation uses the corrected
constant; the printed one is kept behind ``printed=True`` and checked here.
"""

import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from gkmalg.cli import main as cli_main
from gkmalg.coupling import eta_pairing, lambda_top, structure_coefficients, su2_clebsch, yy_coefficient
from gkmalg.gkm import (assemble, verify_antisymmetry, verify_cocycle, verify_grading, verify_jacobi,
                        verify_killing_invariance)
from gkmalg.harmonics import apply_laplacian, build_basis, gegenbauer_radial
from gkmalg.labels import invariant_count, missing_label_count, racah_counts
from gkmalg.lie_core import build_algebra
from gkmalg.manifolds import build_grid
from gkmalg.roots import RootVector, classify, is_positive, lattice_membership, simple_roots, torus_roots
from gkmalg.unitarity import HighestWeightSpec, level_bound, unitarity_constraints

TOL = 1e-10

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}


def report(key, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {key}: {title} | {detail}"
    ACCEPTANCE_LINES[key] = line
    return line


# ---------------------------------------------------------------------------
# 1 orthonormality

ORTHO_SECTORS = [("torus", 4, 2), ("s2", 6, None), ("s3su2", 6, None), ("s3so4", 4, None), ("s5", 3, None),
                 ("s6", 2, None)]


def criterion_1():
    worst = {}
    for mid, cut, n in ORTHO_SECTORS:
        b = build_basis(mid, cut, n=n)
        g = build_grid(b.manifold, 2 * cut)
        V = np.array([p.evaluate(g.ambient) for p in b.polys])
        G = (V.conj() * g.weights) @ V.T
        worst[f"{mid}({len(b)})"] = float(np.abs(G - np.eye(len(b))).max())
    ok = max(worst.values()) <= TOL
    return ok, "max |(rho_I, rho_J) - delta| " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


# ---------------------------------------------------------------------------
# 2 closed-form structure constants


def criterion_2():
    b = build_basis("s2", 8)
    c = structure_coefficients(b, build_grid(b.manifold, 24), 8)
    worst_yy, count = 0.0, 0
    for i, j in itertools.combinations_with_replacement(range(len(b)), 2):
        (l1, m1), (l2, m2) = b.indices[i].labels, b.indices[j].labels
        if l1 > 4 or l2 > 4:
            continue
        row = c.product(i, j)
        for k, K in enumerate(b.indices):
            l, m = K.labels
            ref = yy_coefficient(l1, m1, l2, m2, l) if m == m1 + m2 else 0.0
            worst_yy = max(worst_yy, abs(row.get(k, 0) - ref))
            count += 1

    b = build_basis("s3su2", 8)
    c = structure_coefficients(b, build_grid(b.manifold, 24), 8)
    worst_top, tops = 0.0, 0
    for i, j in itertools.combinations_with_replacement(range(len(b)), 2):
        a1, L1, m1 = b.indices[i].labels
        a2, L2, m2 = b.indices[j].labels
        if L1 > 4 or L2 > 4:
            continue
        k = b.position[(a1 + a2, L1 + L2, m1 + m2)]
        ref = lambda_top(a1, a2, L1, L2) * su2_clebsch(L1, m1, L2, m2, L1 + L2, m1 + m2)
        worst_top = max(worst_top, abs(c.product(i, j).get(k, 0) - ref))
        tops += 1
    ok = worst_yy <= TOL and worst_top <= TOL
    return ok, (f"S2 entries {count} max err {worst_yy:.1e}; "
                f"S3 top sector {tops} pairs max err vs lambda_top*CG {worst_top:.1e}")


# ---------------------------------------------------------------------------
# 3 Laplacian spectra and Gegenbauer normalisation


def _radial_error(printed):
    x, w = np.polynomial.legendre.leggauss(80)
    psi = (x + 1) * math.pi / 2
    w = w * math.pi / 2 * (2 / math.pi) * np.sin(psi) ** 2
    worst = 0.0
    for l in range(5):
        H = np.array([gegenbauer_radial(n, l, psi, printed) for n in range(l, 5)])
        worst = max(worst, float(np.abs((H * w) @ H.T - np.eye(len(H))).max()))
    return worst


def criterion_3_laplacian():
    worst = 0
    for mid in ("s3su2", "s3so4"):
        b = build_basis(mid, 4)
        for I in b.indices:
            lam = apply_laplacian(b, I, tol=1e-8)
            n = I.degree
            worst = max(worst, abs(lam + n * (n + 2)))
    corrected = _radial_error(printed=False)
    ok = worst == 0 and corrected <= TOL
    return ok, f"S3 eigenvalues -n(n+2) for n <= 4 confirmed by finite differences; corrected N_nl orthonormal {corrected:.1e}"


def criterion_3_printed():
    err = _radial_error(printed=True)
    return err <= TOL, f"printed N_nl, n <= 4: max |gram - 1| = {err:.3g} (fails for l >= 2)"


def criterion_3():
    ok1, d1 = criterion_3_laplacian()
    ok2, d2 = criterion_3_printed()
    return ok1 and ok2, f"{d1}; {d2}"


# ---------------------------------------------------------------------------
# 4 algebra verification

ALGEBRA_SECTORS = [("su2", "torus", 5, 1), ("su2", "s2", 3, None), ("su2", "s3su2", 4, None), ("su3", "s5", 2, None)]


def _algebra(lie, mid, cap, n):
    b = build_basis(mid, cap, n=n)
    g = build_grid(b.manifold, 3 * cap)
    return assemble(build_algebra(lie), b, structure_coefficients(b, g, cap), eta_pairing(b, g))


def criterion_4():
    worst, parts, ok = {}, [], True
    for sec in ALGEBRA_SECTORS:
        G = _algebra(*sec)
        reps = [verify_jacobi(G), *verify_cocycle(G), verify_killing_invariance(G), verify_antisymmetry(G),
                verify_grading(G)]
        for r in reps:
            ok &= r.passed
            worst[r.check] = max(worst.get(r.check, 0.0), r.residual)
        parts.append(f"({sec[0]},{sec[1]})")
    return ok, " ".join(parts) + ": " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


# ---------------------------------------------------------------------------
# 5 affine su(2) oracle
#
# Independent construction: J^a_m = sigma_a/2 t^m, d = t d/dt, central k, with
#   [J^a_m, J^b_n] = i eps_abc J^c_{m+n} + m tr(J^a J^b) delta_{m+n,0} k,  [d, J^a_m] = m J^a_m.
# Convention map: T_a rho_m -> J^a_m, D_1 -> d, k_1 -> k.

PAULI = [np.array([[0, 1], [1, 0]], complex), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]], complex)]


def _eps(a, b, c):
    return (a - b) * (b - c) * (c - a) / 2


def oracle_bracket(x, y):
    """x, y: ('J', a, m) | ('d',) | ('k',) -> dict of coefficients."""
    out = {}
    if x[0] == "J" and y[0] == "J":
        _, a, m = x
        _, b, n = y
        for c in range(3):
            e = _eps(a, b, c)
            if e:
                out[("J", c, m + n)] = 1j * e
        if m + n == 0:
            tr = np.trace(PAULI[a] @ PAULI[b]).real / 4
            if tr:
                out[("k",)] = m * tr
    elif x[0] == "d" and y[0] == "J":
        out[y] = y[2]
    elif x[0] == "J" and y[0] == "d":
        out[x] = -x[2]
    return {k: v for k, v in out.items() if v != 0}


def criterion_5():
    G = _algebra("su2", "torus", 10, 1)
    gens = [("J", a, m) for m in range(-5, 6) for a in range(3)] + [("d",), ("k",)]

    def element(g):
        if g[0] == "J":
            return G.T(g[1], (g[2],))
        return G.D(0) if g[0] == "d" else G.k(0)

    def as_dict(X):
        out = {("J", a, G.basis.indices[i].labels[0]): v for (a, i), v in X.T.items()}
        if X.D[0]:
            out[("d",)] = X.D[0]
        if X.K[0]:
            out[("k",)] = X.K[0]
        return out

    worst, pairs = 0.0, 0
    for x, y in itertools.product(gens, repeat=2):
        got, ref = as_dict(G.bracket(element(x), element(y))), oracle_bracket(x, y)
        for key in set(got) | set(ref):
            worst = max(worst, abs(got.get(key, 0) - ref.get(key, 0)))
        pairs += 1
    return worst <= 1e-12, f"{pairs} generator pairs with |m| <= 5, max deviation {worst:.1e}"


# ---------------------------------------------------------------------------
# 6 roots

AFFINE = {"su2": [[2, -2], [-2, 2]], "su3": [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]}


def criterion_6():
    msgs, ok = [], True
    for name, ref in AFFINE.items():
        res = simple_roots(lie=build_algebra(name), r=1)
        good = res.present and np.array_equal(np.rint(res.cartan), ref) and res.decompositions_ok
        good &= np.abs(res.cartan - np.rint(res.cartan)).max() < 1e-9
        ok &= good
        msgs.append(f"{name} affine Cartan {'ok' if good else 'WRONG'}")
    L = build_algebra("su2")
    res = simple_roots(lie=L, r=2, depth=6)
    fam = [RootVector.make(L, w["alpha"], w["c"], w["n"]) for w in res.witness["family"]] if not res.present else []
    wit = (not res.present and len(fam) == 7 and all(is_positive(x, L) and classify(x) == "real" for x in fam)
           and [x.n[0] for x in fam] == list(range(0, -7, -1)))
    ok &= wit
    msgs.append(f"r=2 absent with witness {'valid' if wit else 'INVALID'}")
    total = 0
    for name, r in (("su2", 2), ("su3", 2), ("g2", 2), ("su3", 3)):
        lie = build_algebra(name)
        roots = torus_roots(lie, r, 2)
        total += len(roots)
        ok &= all(lattice_membership(x, lie, r) for x in roots)
    msgs.append(f"Pi11 membership for {total} torus roots")
    return ok, "; ".join(msgs)


# ---------------------------------------------------------------------------
# 7 unitarity

# marks oracle: comarks of the highest coroot, long simple roots of g2 carry 2
MARKS = {"su2": lambda L: [1], "su3": lambda L: [1, 1],
         "g2": lambda L: [2 if L.dot(a, a) > 1.5 else 1 for a in L.simple_roots]}

LEVEL_CASES = [
    ("su2", (0,), 0), ("su2", (1,), 1), ("su2", (2,), 1), ("su2", (3,), 5), ("su2", (1,), 0.5),
    ("su2", (4,), 4), ("su3", (0, 0), 0), ("su3", (1, 1), 1), ("su3", (1, 1), 2), ("su3", (2, 1), 3),
    ("su3", (0, 3), 2), ("su3", (1, 0), 1.5), ("su3", (2, 2), 7), ("g2", (0, 0), 0), ("g2", (1, 0), 1),
    ("g2", (0, 1), 1), ("g2", (1, 1), 2), ("g2", (1, 1), 3), ("g2", (2, 0), 4), ("g2", (0, 2), 2.5),
]


def criterion_7():
    agree = 0
    for name, p, x in LEVEL_CASES:
        L = build_algebra(name)
        c = x * L.dot(L.highest_root, L.highest_root) / 2
        expect = float(x).is_integer() and x >= sum(pi * qi for pi, qi in zip(p, MARKS[name](L)))
        agree += level_bound(L, p, c)[2] == expect
    su2 = build_algebra("su2")
    rejects = 0
    two = [((1,), (2.0, 3.0)), ((0,), (1.0, 1.0)), ((2,), (-3.0, 5.0))]
    for p, c in two:
        rep = unitarity_constraints(su2, HighestWeightSpec(p, c), 10)
        rejects += rep.verdict == "reject" and any("root" in w for w in rep.witnesses)
    trivial = unitarity_constraints(su2, HighestWeightSpec((0,), (0.0,)), 10).passed
    ok = agree == len(LEVEL_CASES) and rejects == len(two) and trivial
    return ok, (f"level_bound agrees on {agree}/{len(LEVEL_CASES)} cases; {rejects}/{len(two)} two-charge "
                f"weights rejected with witness; trivial rep {'passes' if trivial else 'FAILS'}")


# ---------------------------------------------------------------------------
# 8 labels


def criterion_8():
    su3, g2 = racah_counts("su3"), racah_counts("g2")
    n0 = missing_label_count("g2", "su3")
    ranks = {n: invariant_count(build_algebra(n)) for n in ("su2", "su3", "so4", "g2")}
    ok = ((su3.total_labels, su3.internal_labels) == (5, 3) and g2.internal_labels == 6 and n0 == 1
          and ranks == {"su2": 1, "su3": 2, "so4": 2, "g2": 2})
    return ok, (f"su3 {su3.total_labels}/{su3.internal_labels}, g2 internal {g2.internal_labels}, "
                f"g2>su3 n0={n0}, invariant counts {ranks}")


# ---------------------------------------------------------------------------
# 9 determinism


def criterion_9(tmp):
    tmp = Path(tmp)
    args = ["coeffs", "--manifold", "s3su2", "--cutoff", "3"]
    for d in ("run1", "run2"):
        if cli_main(args + ["--out", str(tmp / d)]) != 0:
            return False, "coeffs failed"
    names = sorted(p.name for p in (tmp / "run1").iterdir())
    same = all((tmp / "run1" / n).read_bytes() == (tmp / "run2" / n).read_bytes() for n in names)
    return same, f"{len(names)} files byte-identical across two runs" if same else "files differ"


# ---------------------------------------------------------------------------
# pytest entry points

TITLES = {
    "1": "orthonormality", "2": "closed-form coefficients", "3": "Laplacian spectra and Gegenbauer norms",
    "4": "Jacobi, cocycle, Killing invariance", "5": "affine su(2) oracle", "6": "root system",
    "7": "unitarity", "8": "labels", "9": "determinism",
}


def _check(key, fn, *args):
    ok, detail = fn(*args)
    report(key, TITLES[key], ok, detail)
    assert ok, detail


def test_criterion_1():
    _check("1", criterion_1)


def test_criterion_2():
    _check("2", criterion_2)


def test_criterion_3_laplacian():
    ok, detail = criterion_3_laplacian()
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="printed N_nl is not normalised for l >= 2")
def test_criterion_3():
    _check("3", criterion_3)


def test_criterion_4():
    _check("4", criterion_4)


def test_criterion_5():
    _check("5", criterion_5)


def test_criterion_6():
    _check("6", criterion_6)


def test_criterion_7():
    _check("7", criterion_7)


def test_criterion_8():
    _check("8", criterion_8)


def test_criterion_9(tmp_path):
    _check("9", criterion_9, tmp_path)


if __name__ == "__main__":
    import tempfile
    failed = 0
    for key in TITLES:
        t = time.time()
        fn = globals()[f"criterion_{key}"]
        if key == "9":
            with tempfile.TemporaryDirectory() as tmp:
                ok, detail = fn(tmp)
        else:
            ok, detail = fn()
        failed += not ok
        print(report(key, TITLES[key], ok, detail) + f" ({time.time() - t:.1f}s)", flush=True)
    sys.exit(1 if failed else 0)
