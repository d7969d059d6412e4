import itertools
import math

import numpy as np
import pytest
from sympy import S
from sympy.physics.quantum.cg import CG

from gkmalg.coupling import (ExactnessError, closure_defect, d_coefficients, eta_from_conjugation, eta_pairing,
                             lambda_top, structure_coefficients, su2_clebsch, yy_coefficient)
from gkmalg.harmonics import build_basis
from gkmalg.manifolds import build_grid


def test_clebsch_matches_sympy():
    worst = 0.0
    for l1, l2, l in itertools.product(range(5), repeat=3):
        for m1 in range(-l1, l1 + 1, 2):
            for m2 in range(-l2, l2 + 1, 2):
                m = m1 + m2
                if abs(m) > l or (l - m) % 2:
                    continue
                ref = float(CG(S(l1) / 2, S(m1) / 2, S(l2) / 2, S(m2) / 2, S(l) / 2, S(m) / 2).doit())
                worst = max(worst, abs(ref - su2_clebsch(l1, m1, l2, m2, l, m)))
    assert worst < 1e-14


def test_clebsch_selection_rules():
    assert su2_clebsch(2, 0, 2, 0, 2, 0) == 0.0  # <1 0 1 0|1 0> vanishes
    assert su2_clebsch(2, 2, 2, 0, 2, 0) == 0.0  # m mismatch
    assert su2_clebsch(1, 1, 1, 1, 6, 2) == 0.0  # triangle
    with pytest.raises(ValueError):
        su2_clebsch(1, 0, 1, 1, 2, 1)


def test_lambda_top_value():
    assert lambda_top(1, 1, 1, 1) == pytest.approx(2 / math.sqrt(3), abs=1e-15)
    assert lambda_top(0, 0, 0, 0) == pytest.approx(1.0)


def test_s2_coefficients_match_closed_form():
    b = build_basis("s2", 4)
    c = structure_coefficients(b, build_grid(b.manifold, 12), 4)
    worst = 0.0
    for (i, j), row in c.rows.items():
        (l1, m1), (l2, m2) = b.indices[i].labels, b.indices[j].labels
        for k in range(len(b)):
            l, m = b.indices[k].labels
            ref = yy_coefficient(l1, m1, l2, m2, l) if m == m1 + m2 else 0.0
            worst = max(worst, abs(row.get(k, 0) - ref))
    assert worst < 1e-12


def test_constant_function_is_unit():
    b = build_basis("s5", 2)
    c = structure_coefficients(b, build_grid(b.manifold, 6), 2)
    for j in range(len(b)):
        row = c.product(0, j)
        assert set(row) == {j}
        assert abs(row[j] - 1) < 1e-12


@pytest.mark.parametrize("mid", ["s2", "s3su2", "s3so4", "torus"])
def test_closure_defect_small(mid):
    b = build_basis(mid, 2, n=2 if mid == "torus" else None)
    g = build_grid(b.manifold, 6)
    c = structure_coefficients(b, g, 2)
    for i in range(len(b)):
        for j in range(i, len(b)):
            if c.closed(i, j):
                assert closure_defect(b, g, c, i, j) < 1e-12


def test_exactness_guard():
    b = build_basis("s2", 3)
    with pytest.raises(ExactnessError):
        structure_coefficients(b, build_grid(b.manifold, 8), 3)


@pytest.mark.parametrize("mid", ["s2", "s3su2", "s3so4", "s5", "s6", "torus"])
def test_eta_matches_conjugation(mid):
    b = build_basis(mid, 2, n=1 if mid == "torus" else None)
    eta = eta_pairing(b, build_grid(b.manifold, 4))
    ref = eta_from_conjugation(b)
    for i, j, v in ref.entries():
        assert abs(eta(i, j) - v) < 1e-12
        assert abs(eta.inv(j, i) * v - 1) < 1e-12


def test_d_tensor_periodic_axes_antisymmetric():
    b = build_basis("s3su2", 2)
    g = build_grid(b.manifold, 6)
    flags = {d.axis_name: (d.periodic, d.antisymmetric) for d in (d_coefficients(b, g, a) for a in range(3))}
    assert flags["phi1"] == (True, True)
    assert flags["phi2"] == (True, True)
    assert flags["theta"] == (False, False)


def test_d_tensor_by_name():
    b = build_basis("torus", 2, n=1)
    d = d_coefficients(b, build_grid(b.manifold, 6), "phi1")
    # d/dphi e^{i m phi} = i m e^{i m phi}; with the conjugate pairing the entry sits at (-m, m)
    for (i, j), v in d.rows.items():
        m = b.indices[j].labels[0]
        assert b.indices[i].labels[0] == -m
        assert abs(v - 1j * m) < 1e-12
    assert len(d.rows) == 4
