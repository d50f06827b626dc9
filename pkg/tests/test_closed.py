import math

import pytest
from hypothesis import given, strategies as st

from tunnelkit import closed
from tunnelkit.errors import DomainError
from tunnelkit.potential import CubicPotential
from tunnelkit.wkb import resonance

POT = CubicPotential.natural(lam=0.6)


def test_instanton_exponent():
    assert closed.instanton_exponent(POT) == pytest.approx(18 * POT.eps_s / (5 * POT.eps0))


def test_instanton_rate_parts():
    g, lam0, a_q = closed.instanton_rate(POT)
    assert a_q == pytest.approx(math.sqrt(120 * math.pi * lam0))
    assert g == pytest.approx(POT.Omega0 / (2 * math.pi) * a_q * math.exp(-lam0))


def test_shallow_barrier():
    with pytest.raises(DomainError, match="too shallow"):
        closed.instanton_rate(CubicPotential.natural(lam=3.0))


def test_wkb_rate_is_twice_width():
    res = resonance(POT)
    assert closed.wkb_rate(res) == pytest.approx(2 * res.eps / res.hbar, rel=1e-14)


@given(st.floats(0.01, 10.0))
def test_escape_temperature_inverse(T):
    tau, eps_s = 1.3, 2.0
    G = closed.rate_from_escape_temperature(T, eps_s, tau, k_B=1.0)
    assert closed.escape_temperature(G, eps_s, tau, k_B=1.0) == pytest.approx(T, rel=1e-10)


def test_escape_temperature_errors():
    with pytest.raises(DomainError, match="positive"):
        closed.escape_temperature(0.0, 1.0, 1.0)
    with pytest.raises(DomainError, match="above prefactor"):
        closed.escape_temperature(1.0, 1.0, 1.0)


def test_persistence_closed():
    res = resonance(POT)
    assert closed.persistence_closed(res, 0.0) == 1.0
    t = res.hbar / res.eps
    assert closed.persistence_closed(res, t) == pytest.approx(math.exp(-2))
    with pytest.raises(DomainError):
        closed.persistence_closed(res, -1.0)


def test_report_consistent():
    rep = closed.closed_report(POT, k_B=1.0)
    assert rep.T_esc_instanton > 0 and rep.T_esc_wkb > 0
    assert rep.Lambda0 - math.log(rep.a_q) > 0
