import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from noonloss import fock_oracle, optimal_search
from noonloss.analytics import (
    LossChannel,
    NoonProbe,
    OperatingPoint,
    d_log_precision_dN,
    d_precision_dN,
    log_min_phase_at,
    log_min_phase_opt,
    log_min_phase_opt_continuous,
    mean_detection,
    min_phase_at,
    min_phase_opt,
    min_phase_opt_continuous,
    precision_report,
    snr_lossy,
    variance_detection,
)

from _helpers import central_diff, derivative_grid


# ---------------------------------------------------------------------------
# domain types

def test_loss_channel_validation():
    for bad in (0.0, -0.1, 1.2, float("nan")):
        with pytest.raises(ValueError):
            LossChannel(bad)
    with pytest.raises(ValueError):
        LossChannel(0.5, math.inf)
    ch = LossChannel(0.25)
    assert ch.theta_t == 0.0
    assert ch.loss == 0.75
    assert LossChannel.from_loss(0.75).eta == 0.25


def test_noon_probe_validation():
    for bad in (0, -3):
        with pytest.raises(ValueError):
            NoonProbe(bad)
    with pytest.raises(TypeError):
        NoonProbe(2.5)
    assert NoonProbe(3).n == 3


def test_operating_point_validation():
    with pytest.raises(ValueError):
        OperatingPoint(math.nan, 0.01)
    with pytest.raises(ValueError):
        OperatingPoint(0.1, math.inf)


# ---------------------------------------------------------------------------
# mean and variance

def test_mean_detection_examples():
    assert mean_detection(NoonProbe(1), LossChannel(1.0), 0.0) == pytest.approx(1.0, rel=1e-15)
    assert mean_detection(NoonProbe(2), LossChannel(0.25), 0.0) == pytest.approx(0.25, rel=1e-15)
    # nonzero transmission phase, checked against the Fock-basis engine
    ch = LossChannel(0.5, 0.1)
    mean_o, _ = fock_oracle.oracle_moments(3, ch, 0.2)
    assert mean_detection(NoonProbe(3), ch, 0.2) == pytest.approx(mean_o, abs=1e-12)


def test_variance_detection_examples():
    assert variance_detection(NoonProbe(1), LossChannel(1.0), 0.0) == pytest.approx(0.0, abs=1e-15)
    # cos^2 = 0 pins the variance at its upper bound (1 + eta^N)/2
    assert variance_detection(NoonProbe(2), LossChannel(0.5), math.pi / 4) == pytest.approx(0.625, abs=1e-15)
    ch = LossChannel(0.5, 0.1)
    _, var_o = fock_oracle.oracle_moments(3, ch, 0.2)
    assert variance_detection(NoonProbe(3), ch, 0.2) == pytest.approx(var_o, abs=1e-12)


@given(
    n=st.integers(1, 16),
    eta=st.floats(0.01, 1.0),
    theta=st.floats(-3.0, 3.0),
    phi=st.floats(-7.0, 7.0),
)
def test_variance_bounds_property(n, eta, theta, phi):
    var = variance_detection(NoonProbe(n), LossChannel(eta, theta), phi)
    eta_n = eta ** n
    assert 0.5 * (1.0 - eta_n) - 1e-12 <= var <= 0.5 * (1.0 + eta_n) + 1e-12


# ---------------------------------------------------------------------------
# SNR

def test_snr_lossless_example():
    res = snr_lossy(NoonProbe(5), LossChannel(1.0), OperatingPoint(math.pi / 10, 0.01))
    assert not res.degenerate
    assert res.value == pytest.approx(25.0 * 1e-4, rel=1e-12)


def test_snr_lossy_example_with_fd_oracle():
    probe, ch = NoonProbe(1), LossChannel(0.5)
    op = OperatingPoint(math.pi / 2, 0.1)
    res = snr_lossy(probe, ch, op)
    assert res.value == pytest.approx(0.01 / 1.5, rel=1e-12)

    # independent route: slope of the oracle mean and the oracle variance
    h = 1e-6
    m_plus, _ = fock_oracle.oracle_moments(1, ch, op.phi0 + h)
    m_minus, _ = fock_oracle.oracle_moments(1, ch, op.phi0 - h)
    _, var_o = fock_oracle.oracle_moments(1, ch, op.phi0)
    slope = (m_plus - m_minus) / (2.0 * h)
    assert res.value == pytest.approx((slope * op.delta_phi) ** 2 / var_o, rel=1e-6)


def test_snr_degenerate_flag():
    res = snr_lossy(NoonProbe(2), LossChannel(0.9), OperatingPoint(0.0, 0.01))
    assert res.value == 0.0
    assert res.degenerate


# ---------------------------------------------------------------------------
# minimum detectable phase at a given operating point

def test_min_phase_at_examples():
    assert min_phase_at(NoonProbe(4), LossChannel(1.0), math.pi / 8) == pytest.approx(0.25, rel=1e-12)
    assert min_phase_at(NoonProbe(1), LossChannel(0.5), 0.0) == math.inf
    value = min_phase_at(NoonProbe(2), LossChannel(0.5), math.pi / 4)
    assert value == pytest.approx(math.sqrt(2.5) / 2.0, rel=1e-12)


def test_snr_is_unity_at_min_phase():
    for n in (1, 2, 3, 5, 8):
        for eta in (0.3, 0.7, 1.0):
            for offset in (0.15, 0.6, 1.1):
                probe, ch = NoonProbe(n), LossChannel(eta)
                phi0 = offset / n
                dphi = min_phase_at(probe, ch, phi0)
                if math.isinf(dphi):
                    continue
                res = snr_lossy(probe, ch, OperatingPoint(phi0, dphi))
                assert res.value == pytest.approx(1.0, rel=1e-10)


def test_log_min_phase_at_matches_linear():
    probe, ch = NoonProbe(3), LossChannel(0.4, 0.2)
    lin = min_phase_at(probe, ch, 0.3)
    assert math.exp(log_min_phase_at(probe, ch, 0.3)) == pytest.approx(lin, rel=1e-12)
    assert log_min_phase_at(probe, ch, -0.2) == math.inf  # sin(N(phi0+theta)) = 0


# ---------------------------------------------------------------------------
# optimal-phase precision

def test_min_phase_opt_examples():
    assert min_phase_opt(NoonProbe(10), 1.0) == 0.1
    # consistency with the general form at the optimal phase
    at_opt = min_phase_at(NoonProbe(2), LossChannel(0.5), math.pi / 4)
    assert min_phase_opt(NoonProbe(2), 0.5) == pytest.approx(at_opt, rel=1e-12)
    # the critical transmissivity is exactly the N=1 / N=2 tie
    eta_c = optimal_search.eta_critical()
    assert min_phase_opt(NoonProbe(1), eta_c) == pytest.approx(min_phase_opt(NoonProbe(2), eta_c), abs=1e-9)


def test_min_phase_opt_lossless_exact():
    for n in (1, 2, 3, 10, 137, 4096, 99991, 10 ** 6):
        assert min_phase_opt(NoonProbe(n), 1.0) == 1.0 / n


@given(
    n=st.integers(1, 40),
    eta_lo=st.floats(0.05, 0.999),
    gap=st.floats(1e-6, 0.5),
)
def test_min_phase_opt_degrades_with_loss(n, eta_lo, gap):
    eta_hi = min(eta_lo + gap, 1.0)
    assume(eta_hi - eta_lo >= 1e-6)
    probe = NoonProbe(n)
    assert min_phase_opt(probe, eta_lo) > min_phase_opt(probe, eta_hi)


def test_min_phase_opt_diverges():
    # for any tested eta < 1 the precision blows past 10^3 radians by N = 10^6
    for eta in (0.5, 0.9, 0.99):
        assert log_min_phase_opt_continuous(10 ** 6, eta) > math.log(1000.0)


def test_min_phase_opt_validation():
    with pytest.raises(ValueError):
        min_phase_opt(NoonProbe(2), 0.0)
    with pytest.raises(ValueError):
        min_phase_opt_continuous(0.0, 0.5)


# ---------------------------------------------------------------------------
# log-domain evaluation

def test_log_min_phase_opt_examples():
    assert log_min_phase_opt(NoonProbe(1), 1.0) == pytest.approx(0.0, abs=1e-15)
    got = log_min_phase_opt(NoonProbe(10000), 0.5)
    expected = 0.5 * (10000 * math.log(2.0) - math.log(2.0)) - math.log(10000.0)
    assert got == pytest.approx(expected, abs=1e-9)
    assert log_min_phase_opt(NoonProbe(2), 0.5) == pytest.approx(math.log(math.sqrt(2.5) / 2.0), rel=1e-12)


def test_exp_log_consistency():
    for n in (1, 2, 7, 50, 400, 10 ** 5):
        for eta in (0.2, 0.6, 0.97, 1.0):
            lin = min_phase_opt_continuous(n, eta)
            if math.isinf(lin):
                continue
            assert math.exp(log_min_phase_opt_continuous(n, eta)) == pytest.approx(lin, rel=1e-12)


# ---------------------------------------------------------------------------
# derivatives

def test_d_precision_examples():
    assert d_precision_dN(1.0, 1.0) == pytest.approx(-1.0, rel=1e-12)
    assert d_precision_dN(2.0, 0.01) > 0.0  # large loss: more photons only hurt


def test_d_precision_vanishes_at_continuous_minimizer():
    eta = 1.0 - 1e-6
    n_star = optimal_search.n_min_integer(eta).continuous_n
    slope_scale = min_phase_opt_continuous(n_star, eta) / n_star
    assert abs(d_precision_dN(n_star, eta)) <= 1e-4 * slope_scale
    # cross-check through a finite difference of the log precision
    fd = central_diff(lambda x: log_min_phase_opt_continuous(x, eta), n_star, 1e-3)
    assert abs(fd) <= 1e-4 / n_star


def test_d_log_precision_examples():
    assert d_log_precision_dN(1.0, 1.0) == pytest.approx(-1.0, rel=1e-12)
    # near the continuous minimizer for L = 1e-6
    assert abs(d_log_precision_dN(2.218e6, 1.0 - 1e-6)) < 1e-10
    assert d_log_precision_dN(1.0, 0.5) == pytest.approx(-1.0 + math.log(2.0) / 3.0, rel=1e-12)


def test_derivatives_match_finite_differences():
    worst_log = worst_lin = 0.0
    for n, eta in derivative_grid(optimal_search.solve_nu):
        h = 1e-5 * n
        fd_log = central_diff(lambda x: log_min_phase_opt_continuous(x, eta), n, h)
        a_log = d_log_precision_dN(n, eta)
        worst_log = max(worst_log, abs(a_log - fd_log) / abs(a_log))
        fd_lin = central_diff(lambda x: min_phase_opt_continuous(x, eta), n, h)
        a_lin = d_precision_dN(n, eta)
        worst_lin = max(worst_lin, abs(a_lin - fd_lin) / abs(a_lin))
    assert worst_log < 1e-6
    assert worst_lin < 1e-6


# ---------------------------------------------------------------------------
# bundled report

def test_precision_report_fields():
    probe, ch = NoonProbe(3), LossChannel(0.6, 0.05)
    op = OperatingPoint(0.4, 0.01)
    report = precision_report(probe, ch, op)
    assert report.mean == mean_detection(probe, ch, op.phi0)
    assert report.variance == variance_detection(probe, ch, op.phi0)
    assert report.variance >= 0.0
    assert report.snr >= 0.0
    assert not report.degenerate
    assert math.exp(report.log_min_phase) == pytest.approx(report.min_phase, rel=1e-12)


def test_precision_report_degenerate():
    report = precision_report(NoonProbe(2), LossChannel(0.9), OperatingPoint(0.0, 0.01))
    assert report.degenerate
    assert report.snr == 0.0
    assert math.isinf(report.min_phase)
    assert math.isinf(report.log_min_phase)
