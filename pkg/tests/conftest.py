import functools

import pytest

from gkmalg.coupling import eta_pairing, structure_coefficients
from gkmalg.gkm import assemble
from gkmalg.harmonics import build_basis
from gkmalg.lie_core import build_algebra
from gkmalg.manifolds import build_grid


@functools.lru_cache(maxsize=None)
def algebra(lie: str, manifold: str, cap: int, n: int | None = None):
    """Assembled algebra for (lie, manifold) with c computed up to degree cap."""
    b = build_basis(manifold, cap, n=n)
    g = build_grid(b.manifold, 3 * cap)
    return assemble(build_algebra(lie), b, structure_coefficients(b, g, cap), eta_pairing(b, g))


@pytest.fixture(scope="session")
def make_algebra():
    return algebra


ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split(".")[0]), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
