import pytest

from gkmalg.labels import (abelian, common_invariants, invariant_count, missing_label_count, missing_labels,
                           racah_counts, subalgebra_basis)
from gkmalg.lie_core import build_algebra


@pytest.mark.parametrize("name,rank", [("su2", 1), ("su3", 2), ("so4", 2), ("g2", 2)])
def test_invariant_count_is_rank(name, rank):
    assert invariant_count(build_algebra(name)) == rank
    assert invariant_count(build_algebra(name), exact=False) == rank


def test_abelian_invariants():
    assert invariant_count(abelian(3)) == 3


def test_racah_counts():
    su3 = racah_counts("su3")
    assert (su3.total_labels, su3.internal_labels) == (5, 3)
    g2 = racah_counts("g2")
    assert g2.internal_labels == 6 and g2.total_labels == 8


def test_g2_over_su3():
    rep = missing_labels("g2", "su3")
    assert rep.n0 == 1 and rep.l0 == 0 and rep.chi == 2
    assert rep.sub_dim == 8 and rep.sub_casimirs == 2
    assert missing_label_count("g2", "su3") == 1


@pytest.mark.parametrize("g,sub,n0", [("su3", "su3", 0), ("so4", "so3", 0), ("so4", "so3L", 1), ("su2", "su2", 0)])
def test_other_chains(g, sub, n0):
    assert missing_label_count(g, sub) == n0


def test_identity_embedding_shares_all_invariants():
    g = build_algebra("su3")
    assert common_invariants(g, subalgebra_basis(g, "su3")) == 2


def test_l0_override_and_bad_embedding():
    assert missing_label_count("g2", "su3", l0=1) == 2
    with pytest.raises(ValueError):
        subalgebra_basis(build_algebra("su3"), "g2")
    with pytest.raises(ValueError):
        missing_labels("su2", [[1, 0, 0], [0, 1, 0]])  # not closed


def test_report_json():
    out = missing_labels("g2", "su3").to_json()
    assert out["chi"] == 2 and out["subalgebra"] == "su3"
    assert "n0" not in racah_counts("su2").to_json()
