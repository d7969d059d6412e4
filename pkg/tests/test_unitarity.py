import numpy as np
import pytest

from gkmalg.lie_core import build_algebra
from gkmalg.unitarity import (HighestWeightSpec, affine_duality, affine_level, level_bound, su2_triple,
                              triple_norm, two_charge_witness, unitarity_constraints)


def test_single_charge_pass_and_fail():
    su2 = build_algebra("su2")
    assert unitarity_constraints(su2, HighestWeightSpec((1,), (5.0,)), 10).passed
    # level below p: (-psi, 0, 1) gives c - psi.mu0 = 0.5 - 1 < 0
    rep = unitarity_constraints(su2, HighestWeightSpec((2,), (0.5,)), 10)
    assert not rep.passed
    assert rep.witnesses and rep.witnesses[0]["slack"] < 0
    # non-integral level
    assert not unitarity_constraints(su2, HighestWeightSpec((0,), (0.5,)), 10).passed


def test_trivial_representation_passes():
    for name in ("su2", "su3", "g2"):
        L = build_algebra(name)
        rep = unitarity_constraints(L, HighestWeightSpec((0,) * L.rank, (0.0,)), 10)
        assert rep.passed and rep.to_json()["violations"] == 0


@pytest.mark.parametrize("c", [(2.0, 3.0), (-1.0, 4.0), (1.0, 0.0), (0.5, 0.0, 2.0)])
def test_two_charges_rejected_with_witness(c):
    L = build_algebra("su2")
    hw = HighestWeightSpec((1,), c)
    rep = unitarity_constraints(L, hw, 10 if len(c) == 2 else 4)
    assert rep.verdict == "reject"
    w = two_charge_witness(L, hw)
    assert w is not None and w["slack"] < 0


def test_two_charges_only_last_nonzero():
    L = build_algebra("su2")
    assert unitarity_constraints(L, HighestWeightSpec((0,), (0.0, 4.0)), 6).passed
    assert not unitarity_constraints(L, HighestWeightSpec((1,), (0.0, 4.0)), 6).passed


def test_level_bound_examples():
    su3 = build_algebra("su3")
    assert level_bound(su3, (1, 1), 1.0) == (pytest.approx(1.0), 2, False)
    assert level_bound(su3, (1, 1), 2.0)[2]
    assert level_bound(build_algebra("su2"), (1,), 1.0)[2]
    assert not level_bound(build_algebra("su2"), (0,), 0.5)[2]
    with pytest.raises(ValueError):
        level_bound(su3, (1,), 1.0)


@pytest.mark.parametrize("name", ["su2", "su3", "g2"])
def test_affine_weights_are_dual(name):
    L = build_algebra(name)
    assert np.abs(affine_duality(L) - np.eye(L.rank + 1)).max() < 1e-12


def test_affine_level_of_basic_weights():
    g2 = build_algebra("g2")
    assert affine_level(g2, [1, 0, 0]) == pytest.approx(1.0)
    assert affine_level(g2, [0, 1, 1]) == pytest.approx(3.0)


def test_highest_weight_validation():
    with pytest.raises(ValueError):
        HighestWeightSpec((-1,), (1.0,))
    with pytest.raises(ValueError):
        HighestWeightSpec((1,), (1.0,), (0.0, 1.0))
    with pytest.raises(ValueError):
        unitarity_constraints(build_algebra("su2"), HighestWeightSpec((1,), (1.0,)), 0)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_triples_on_circle(make_algebra, m):
    G = make_algebra("su2", "torus", 4, 1)
    t = su2_triple(G, [1.0 if m else -1.0], (m,))
    assert t.verified and t.residual < 1e-12
    hw = HighestWeightSpec((1,), (3.0,))
    # 2/(alpha.alpha) (-alpha.mu0 + c m) with alpha.alpha = 2 and alpha.mu0 = +-1
    expected = (-1 if m else 1) + 3 * m
    assert triple_norm(G, t, hw) == pytest.approx(expected)


def test_triple_outside_cartan_is_unverified(make_algebra):
    G = make_algebra("su2", "s2", 2)
    t = su2_triple(G, [1.0], (1, 1))
    assert not t.verified and t.reason
    with pytest.raises(ValueError):
        su2_triple(G, [1.0], (0, 0))
