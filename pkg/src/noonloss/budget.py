"""Splitting a fixed photon budget over repeated NOON measurements and
comparing against the unentangled coherent-state baseline.

With N photons per state and M = N_T / N measurements, the budgeted NOON
precision factors as R_NOON / sqrt(eta N_T), where R_NOON is the kappa-free
ratio to the baseline kappa / sqrt(eta N_T).
"""

import math
import operator
from dataclasses import dataclass
from functools import lru_cache

from .analytics import _exp_or_inf, _validate_eta
from .roots import bisect_root, expand_upper

__all__ = [
    "PhotonBudget",
    "unentangled_precision",
    "noon_precision_budgeted",
    "r_noon",
    "r_noon_continuous",
    "log_r_noon",
    "n_tilde_min_integer",
    "solve_nu_tilde",
    "mu_tilde",
    "l_tilde_critical",
    "d_rnoon_dN_largeloss",
]

_LN2 = math.log(2.0)
_LOG_DOMAIN_CUTOFF = 500.0


@dataclass(frozen=True)
class PhotonBudget:
    """Average total photon count N_T, with the baseline constant kappa.

    kappa is the order-unity prefactor of the unentangled precision
    kappa / sqrt(eta N_T); it is not pinned down further and defaults to 1.
    """

    n_total: int
    kappa: float = 1.0

    def __post_init__(self) -> None:
        n_total = operator.index(self.n_total)
        if n_total < 1:
            raise ValueError(f"n_total must be >= 1, got {n_total}")
        if not (self.kappa > 0.0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa!r}")
        object.__setattr__(self, "n_total", n_total)


def unentangled_precision(b: PhotonBudget, eta: float) -> float:
    """kappa / sqrt(eta N_T); independent of how the budget is split."""
    _validate_eta(eta)
    return b.kappa / math.sqrt(eta * b.n_total)


def log_r_noon(n: float, eta: float) -> float:
    """ln R_NOON, finite even where the linear value overflows."""
    if n <= 0:
        raise ValueError(f"photon number must be positive, got {n!r}")
    _validate_eta(eta)
    a = -n * math.log(eta)
    return 0.5 * (math.log(eta) + a + math.log1p(math.exp(-a)) - math.log(2.0 * n))


def r_noon_continuous(n: float, eta: float) -> float:
    """R_NOON with N treated as a real number (for derivative work)."""
    if n <= 0:
        raise ValueError(f"photon number must be positive, got {n!r}")
    _validate_eta(eta)
    a = -n * math.log(eta)
    if a > _LOG_DOMAIN_CUTOFF:
        return _exp_or_inf(log_r_noon(n, eta))
    return math.sqrt(eta * (eta ** -n + 1.0) / (2.0 * n))


def r_noon(n: int, eta: float) -> float:
    """sqrt(eta (eta**-N + 1) / (2N)): budgeted NOON precision over baseline.

    Equals 1/sqrt(N) at eta = 1.  Falls back to log-domain evaluation when
    N |ln eta| is large; the float value may then be +inf.
    """
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"photon number must be >= 1, got {n}")
    return r_noon_continuous(n, eta)


def noon_precision_budgeted(n: int, b: PhotonBudget, eta: float) -> float:
    """sqrt((eta**-N + 1) / (2 N N_T)), the precision after M = N_T/N rounds.

    M enters only as 1/sqrt(M) and may be fractional.  N cannot exceed the
    budget.
    """
    n = operator.index(n)
    if not 1 <= n <= b.n_total:
        raise ValueError(f"per-measurement N must satisfy 1 <= N <= N_T = {b.n_total}, got {n}")
    _validate_eta(eta)
    a = -n * math.log(eta)
    if a > _LOG_DOMAIN_CUTOFF:
        log_value = 0.5 * (a + math.log1p(math.exp(-a)) - _LN2) - 0.5 * math.log(n * b.n_total)
        return _exp_or_inf(log_value)
    return math.sqrt(0.5 * (eta ** -n + 1.0)) / math.sqrt(n * b.n_total)


@lru_cache(maxsize=1)
def solve_nu_tilde() -> float:
    """Positive root of x = exp(-x) + 1, about 1.278.

    The budgeted optimum uses about nu_tilde/L photons per state at small loss.
    """
    return bisect_root(lambda x: math.exp(-x) + 1.0 - x, 1.0, 2.0, tol=1e-12)


def mu_tilde() -> float:
    """sqrt((exp(nu_tilde) + 1) / (2 nu_tilde)), about 1.340.

    The best budgeted precision approaches mu_tilde * sqrt(L / N_T).
    """
    nt = solve_nu_tilde()
    return math.sqrt((math.exp(nt) + 1.0) / (2.0 * nt))


def l_tilde_critical() -> float:
    """2 - sqrt(2): above this loss, R_NOON increases with N everywhere."""
    return 2.0 - math.sqrt(2.0)


def n_tilde_min_integer(eta: float, b: PhotonBudget) -> int:
    """Integer N in [1, N_T] minimizing R_NOON.

    At eta = 1 the whole budget goes into a single measurement.  Otherwise
    the continuous minimizer of ln R_NOON is bracketed and bisected, the two
    neighboring integers compared, and the result clamped to the budget.
    """
    _validate_eta(eta)
    if eta == 1.0:
        return b.n_total

    log_eta = math.log(eta)

    def slope(x: float) -> float:
        # d/dN ln R_NOON
        return 0.5 * (-log_eta / (1.0 + eta ** x) - 1.0 / x)

    lo = 1e-9
    hi = expand_upper(slope, lo, 1.0)
    root = bisect_root(slope, lo, hi, tol=1e-12)

    candidates = sorted({
        min(max(1, math.floor(root)), b.n_total),
        min(max(1, math.ceil(root)), b.n_total),
    })
    if len(candidates) == 1:
        return candidates[0]
    f_small = log_r_noon(candidates[0], eta)
    f_large = log_r_noon(candidates[1], eta)
    return candidates[1] if f_large < f_small - 1e-15 else candidates[0]


def d_rnoon_dN_largeloss(n: float, eta: float) -> float:
    """Large-loss limit form of dR_NOON/dN: -ln(eta) eta**(-(N-1)/2) / (8 sqrt(2N)).

    Positive for every N when eta < 1, so deep in the lossy regime R_NOON
    only grows with N.  This is the limiting expression, not the exact
    derivative.
    """
    if n <= 0:
        raise ValueError(f"photon number must be positive, got {n!r}")
    if not (0.0 < eta < 1.0):
        raise ValueError(f"the large-loss form needs 0 < eta < 1, got {eta!r}")
    log_eta = math.log(eta)
    scale = _exp_or_inf(-0.5 * (n - 1.0) * log_eta)
    return -log_eta * scale / (8.0 * math.sqrt(2.0 * n))
