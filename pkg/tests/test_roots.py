import numpy as np
import pytest

from gkmalg.lie_core import build_algebra
from gkmalg.roots import (RootVector, affine_cartan_matrix, affine_simple_roots, classify, decompose_affine,
                          is_positive, lattice_membership, no_simple_root_witness, pairing, pi11_table,
                          root_of, root_of_element, sector_roots, simple_roots, torus_roots)

AFFINE = {
    "su2": [[2, -2], [-2, 2]],
    "su3": [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]],
    "g2": [[2, -1, 0], [-1, 2, -1], [0, -3, 2]],
}


@pytest.mark.parametrize("name", sorted(AFFINE))
def test_affine_cartan_matrix(name):
    L = build_algebra(name)
    res = simple_roots(lie=L, r=1)
    assert res.present
    assert np.array_equal(np.rint(res.cartan), AFFINE[name])
    assert np.abs(res.cartan - np.rint(res.cartan)).max() < 1e-9
    assert res.decompositions_ok and res.checked > 0


def test_pairing_is_lorentzian():
    L = build_algebra("su2")
    x = RootVector.make(L, [1.0], [2.0], [3.0])
    y = RootVector.make(L, [1.0], [0.5], [-1.0])
    # alpha.beta + c.n' + n.c'
    assert pairing(x, y) == pytest.approx(2.0 + 2.0 * -1.0 + 3.0 * 0.5)
    delta = RootVector.make(L, None, [0.0], [1.0])
    assert classify(delta) == "imaginary"
    assert classify(RootVector.make(L, [1.0], [0.0], [4.0])) == "real"


def test_positivity_order():
    L = build_algebra("su2")
    a = L.simple_roots[0]
    assert is_positive(RootVector.make(L, a, None, [0.0]), L)
    assert not is_positive(RootVector.make(L, -a, None, [0.0]), L)
    assert is_positive(RootVector.make(L, -a, None, [1.0]), L)
    with pytest.raises(ValueError):
        is_positive(RootVector.make(L, None, None, [0.0]), L)


def test_decomposition_over_simple_roots():
    L = build_algebra("su3")
    delta = RootVector.make(L, None, [0.0], [1.0])
    k = decompose_affine(L, delta)
    assert np.allclose(k, [1, 1, 1])
    S = affine_simple_roots(L)
    assert np.allclose(affine_cartan_matrix(S), AFFINE["su3"])


@pytest.mark.parametrize("r", [2, 3])
def test_no_simple_roots_for_higher_rank(r):
    L = build_algebra("su2")
    res = simple_roots(lie=L, r=r, depth=4)
    assert not res.present
    fam = res.witness["family"]
    assert len(fam) == 5
    n1 = [w["n"][0] for w in fam]
    assert n1 == sorted(n1, reverse=True)
    for w in fam:
        x = RootVector.make(L, w["alpha"], w["c"], w["n"])
        assert is_positive(x, L) and classify(x) == "real"
    with pytest.raises(ValueError):
        no_simple_root_witness(L, 1)


@pytest.mark.parametrize("name,r", [("su2", 1), ("su3", 2), ("g2", 2), ("su2", 3)])
def test_torus_roots_in_lattice(name, r):
    L = build_algebra(name)
    roots = torus_roots(L, r, 2)
    assert roots
    assert all(lattice_membership(x, L, r) for x in roots)
    off = RootVector.make(L, 0.5 * L.simple_roots[0], None, [0.0] * r)
    assert not lattice_membership(off, L, r)
    assert not lattice_membership(RootVector.make(L, None, [1.0] * r, [1.0] * r), L, r)


def test_pi11_table():
    t = pi11_table()
    assert t == {"e.e": 0, "e.ebar": 1, "ebar.ebar": 0}


def test_roots_of_generators_are_additive(make_algebra):
    G = make_algebra("su2", "torus", 3, 1)
    L = G.lie
    X = G.element_from_lie(L.E([1.0]), (1,))
    Y = G.element_from_lie(L.E([-1.0]), (2,))
    rx, ry = root_of_element(G, X), root_of_element(G, Y)
    assert rx + ry == root_of_element(G, G.bracket(X, Y))
    assert root_of(G, ("H", 0), (2,)) == RootVector.make(L, None, None, [2.0])


def test_sector_roots_s2(make_algebra):
    G = make_algebra("su2", "s2", 2)
    roots = sector_roots(G)
    assert len({x.key() for x in roots}) == len(roots)
    res = simple_roots(G)
    assert res.present and res.decompositions_ok
