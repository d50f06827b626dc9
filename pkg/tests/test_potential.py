import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import cubic_turning_points
from tunnelkit.errors import DomainError
from tunnelkit.potential import CubicPotential


def test_natural_geometry():
    pot = CubicPotential.natural(lam=3.0)
    assert pot.x_s == pytest.approx(2 / 3)
    assert pot.eps_s == pytest.approx(2 / 27)
    assert pot.evaluate(1.0) == pytest.approx(0.0, abs=1e-15)
    assert pot.evaluate(pot.x_s) == pytest.approx(pot.eps_s)
    assert pot.derivative(pot.x_s) == pytest.approx(0.0, abs=1e-15)


def test_from_barrier_roundtrip():
    pot = CubicPotential.from_barrier(M=2.0, Omega0=3.0, eps_s=5.0, hbar=1.0)
    assert pot.eps_s == pytest.approx(5.0)


@pytest.mark.parametrize("frac", [1e-4, 0.01, 0.3, 0.5, 0.9, 1 - 1e-4])
def test_turning_points_vs_bisection(frac):
    pot = CubicPotential.natural(lam=0.6)
    E = frac * pot.eps_s
    got = pot.turning_points(E)
    ref = cubic_turning_points(pot.M, pot.Omega0, pot.lam, E)
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12 * pot.x_s)
    for x in got:
        assert pot.cubic(x) - E == pytest.approx(0.0, abs=1e-10 * E)


def test_turning_point_ordering():
    pot = CubicPotential.natural(lam=1.0)
    xl, xr, xo = pot.turning_points(0.2 * pot.eps_s)
    assert xl < 0 < xr < pot.x_s < xo <= pot.x_exit


def test_degenerate_limits():
    pot = CubicPotential.natural(lam=1.0)
    xl, xr, _ = pot.turning_points(1e-14 * pot.eps_s)
    assert abs(xl) < 1e-6 and abs(xr) < 1e-6
    _, xr, xo = pot.turning_points((1 - 1e-12) * pot.eps_s)
    assert xr == pytest.approx(pot.x_s, rel=1e-5)
    assert xo == pytest.approx(pot.x_s, rel=1e-5)


@pytest.mark.parametrize("E", [0.0, -1.0])
def test_below_bottom(E):
    with pytest.raises(DomainError, match="bottom"):
        CubicPotential.natural().turning_points(E)


def test_above_top():
    pot = CubicPotential.natural()
    with pytest.raises(DomainError, match="barrier top"):
        pot.turning_points(pot.eps_s)


@pytest.mark.parametrize("kw", [dict(M=0), dict(Omega0=-1), dict(lam=0), dict(U_inf=-1)])
def test_invalid_parameters(kw):
    args = dict(M=1.0, Omega0=1.0, lam=1.0)
    args.update(kw)
    with pytest.raises(DomainError):
        CubicPotential(**args)


def test_plateau_continuation():
    pot = CubicPotential.natural(lam=1.0, U_inf=0.5)
    far = pot.x_match + 2 * pot.blend_width
    assert pot.evaluate(far) == pytest.approx(-0.5)
    h = 1e-7
    for x0 in (pot.x_match, pot.x_match + pot.blend_width):
        assert pot.evaluate(x0 + h) == pytest.approx(pot.evaluate(x0 - h), abs=1e-4)
        left = (pot.evaluate(x0) - pot.evaluate(x0 - h)) / h
        right = (pot.evaluate(x0 + h) - pot.evaluate(x0)) / h
        assert left == pytest.approx(right, rel=1e-4, abs=1e-4)
        assert pot.derivative(x0) == pytest.approx(right, rel=1e-4, abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(1e-3, 0.999))
def test_roots_are_roots(lam, frac):
    pot = CubicPotential.natural(lam=lam)
    E = frac * pot.eps_s
    for x in pot.turning_points(E):
        assert abs(pot.cubic(x) - E) <= 1e-10 * pot.eps_s
