import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tunnelkit import wkb
from tunnelkit.errors import DomainError, LevelNotTrappedError
from tunnelkit.potential import CubicPotential

POT = CubicPotential.natural(lam=0.6)


def test_zeta_endpoints():
    assert wkb.zeta(0.0) == pytest.approx(0.0, abs=1e-15)
    assert wkb.zeta(1.0) == pytest.approx(0.5)


def test_action_factor_top():
    assert wkb.action_factor(1 - 1e-12) == pytest.approx(wkb.ACTION_FACTOR_TOP, rel=1e-6)
    with pytest.raises(DomainError):
        wkb.action_factor(1.0)


@pytest.mark.parametrize("k", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_elliptic_vs_quadrature_action(k):
    E = 2 * POT.eps_s * wkb.zeta(k)
    xl, xr, _ = POT.turning_points(E)
    S = wkb.action(POT, E, xl, xr)
    assert S == pytest.approx(wkb.action_factor(k) * POT.eps_s / POT.Omega0, rel=1e-6)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9])
def test_half_period(k):
    E = 2 * POT.eps_s * wkb.zeta(k)
    assert wkb.half_period(POT, E) == pytest.approx(math.pi / (POT.Omega0 * wkb.freq_factor(k)), rel=1e-9)


@pytest.mark.parametrize("frac", [0.1, 0.27, 0.45])
def test_reflection_property(frac):
    E = frac * POT.eps_s
    _, xr, xo = POT.turning_points(E)
    under = wkb.action(POT, E, xr, xo)
    xl2, xr2, _ = POT.turning_points(POT.eps_s - E)
    inside = wkb.action(POT, POT.eps_s - E, xl2, xr2)
    assert under == pytest.approx(inside, rel=1e-6)


def test_action_additive_across_turning_point():
    E = 0.3 * POT.eps_s
    xl, xr, xo = POT.turning_points(E)
    whole = wkb.action(POT, E, xl, xo)
    assert whole == pytest.approx(wkb.action(POT, E, xl, xr) + wkb.action(POT, E, xr, xo), rel=1e-10)


def test_action_argument_order():
    with pytest.raises(DomainError):
        wkb.action(POT, 0.1, 1.0, 0.0)
    assert wkb.action(POT, 0.1, 0.2, 0.2) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 0.49))
def test_zeta_inverse(z):
    assert wkb.zeta(wkb.zeta_inverse(z)) == pytest.approx(z, rel=1e-12)


@given(st.floats(0.01, 0.99))
def test_reflect_involution(k):
    kr = wkb.reflect(k)
    assert wkb.zeta(k) + wkb.zeta(kr) == pytest.approx(0.5, rel=1e-13)
    assert wkb.reflect(kr) == pytest.approx(k, rel=1e-8)


def test_ground_state_bohr_sommerfeld():
    gs = wkb.ground_state(POT)
    assert gs.F == pytest.approx(math.pi * POT.eps0 / POT.eps_s, rel=1e-12)


def test_excited_level_not_trapped():
    with pytest.raises(LevelNotTrappedError, match="n=2"):
        wkb.ground_state(POT, n=2)
    assert wkb.ground_state(POT, n=1).k > wkb.ground_state(POT, n=0).k


def test_resonance_conventions():
    anh = wkb.resonance(POT)
    har = wkb.resonance(POT, energy_convention=wkb.HARMONIC, tau_convention=wkb.HARMONIC)
    assert anh.E0 == har.E0
    assert har.tau == pytest.approx(math.pi / POT.Omega0)
    assert anh.eps == pytest.approx(POT.hbar / (4 * anh.tau) * math.exp(-anh.Lambda))
    # harmonic penetrability is the barrier action at the reflected energy
    E_ref = POT.eps_s - anh.E0
    xl, xr, _ = POT.turning_points(E_ref)
    assert har.Lambda == pytest.approx(POT.eps_s / POT.eps0 * wkb.action(POT, E_ref, xl, xr) * POT.Omega0 / POT.eps_s,
                                       rel=1e-6)
    with pytest.raises(DomainError):
        wkb.resonance(POT, energy_convention="other")


def test_phase_shift_profile():
    res = wkb.ResonanceData.from_pole(E0=1.0, eps=0.01)
    prof = wkb.PhaseShiftProfile.of(res)
    E = np.linspace(0.5, 1.5, 20001)
    delta = wkb.phase_shift(prof, E)
    assert delta[0] - delta[-1] == pytest.approx(math.pi - 2 * math.atan(1 / 50), rel=1e-12)
    num = np.gradient(delta, E)
    np.testing.assert_allclose(num[1:-1], wkb.phase_shift_derivative(prof, E)[1:-1], rtol=1e-3, atol=1e-3)
    assert np.trapezoid(wkb.norm_profile(res, E), E) == pytest.approx(2 / math.pi * math.atan(50), rel=1e-6)
