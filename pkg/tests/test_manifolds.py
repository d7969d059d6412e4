import numpy as np
import pytest

from gkmalg.manifolds import build_grid, build_manifold, integrate, sphere_moment
from gkmalg.polynomial import Poly

IDS = ["torus", "s2", "s3su2", "s3so4", "s5", "s6"]


def test_poly_arithmetic_and_derivative():
    x = Poly.var(2, 0)
    y = Poly.var(2, 1)
    p = (x + y) ** 2
    assert p.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert p.derivative(0).terms == {(1, 0): 2, (0, 1): 2}
    vals = [np.array([2.0]), np.array([3.0])]
    assert p.evaluate(vals)[0] == pytest.approx(25.0)
    assert (p - p).is_zero()


@pytest.mark.parametrize("mid", IDS)
def test_grid_weights_sum_to_one(mid):
    g = build_grid(build_manifold(mid), 4)
    assert g.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(g.weights > 0)


@pytest.mark.parametrize("mid", ["s2", "s3su2", "s3so4", "s5", "s6"])
def test_grid_reproduces_exact_moments(mid):
    M = build_manifold(mid)
    deg = 6
    g = build_grid(M, deg)
    amb = g.ambient
    rng = np.random.default_rng(3)
    for _ in range(25):
        e = [0] * M.nvars
        for _ in range(int(rng.integers(0, deg + 1))):
            e[int(rng.integers(M.nvars))] += 1
        mono = Poly.monomial(e)
        assert abs(integrate(g, mono.evaluate(amb)) - M.moment(e)) < 1e-13


def test_sphere_moment_closed_forms():
    # <x^2> on S^2 is 1/3, <x^4> is 1/5, <|z|^2> on S^3 in C^2 is 1/2
    assert sphere_moment((0, 0, 2), ((0, 1),), (2,), 3) == pytest.approx(1 / 3)
    assert sphere_moment((0, 0, 4), ((0, 1),), (2,), 3) == pytest.approx(1 / 5)
    assert sphere_moment((1, 1, 0, 0), ((0, 1), (2, 3)), (), 4) == pytest.approx(1 / 2)
    assert sphere_moment((1, 0, 0, 0), ((0, 1), (2, 3)), (), 4) == 0.0


def test_torus_moment_and_aliases():
    M = build_manifold("torus", 2)
    assert M.moment((1, 1, 2, 2)) == 1.0
    assert M.moment((1, 0, 0, 0)) == 0.0
    assert build_manifold("S2_SU2modU1").key == build_manifold("s2").key


def test_bad_inputs():
    with pytest.raises(ValueError):
        build_manifold("s9")
    with pytest.raises(ValueError):
        build_grid(build_manifold("s6"), 40, node_budget=1000)
    with pytest.raises(ValueError):
        build_grid(build_manifold("s2"), -1)


def test_volume_element_density_normalised():
    M = build_manifold("s2")
    g = build_grid(M, 2)
    assert integrate(g, np.ones(len(g))).real == pytest.approx(1.0)
