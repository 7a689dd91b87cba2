"""Brute-force Fock-basis engine for the lossy NOON detection observable.

States live in an explicit three-mode occupation basis: signal mode ``a``,
detected mode ``b``, and the loss port ``V`` of the beam splitter that models
the loss.  The detection operator is applied by expanding the beam-splitter
ladder polynomials term by term with exact integer factorials.  Nothing here
uses the closed-form moment formulas from :mod:`noonloss.analytics`; this
module exists to check them.
"""

import cmath
import math
import operator
from collections import defaultdict
from dataclasses import dataclass
from math import comb, factorial
from typing import NamedTuple

from .analytics import LossChannel

__all__ = [
    "MAX_PHOTONS",
    "Occupation",
    "FockKet",
    "build_noon_input",
    "apply_detector",
    "inner",
    "oracle_moments",
]

# Exact integer factorials stay cheap and float-convertible up to here, and
# the oracle is only ever needed at modest photon numbers.
MAX_PHOTONS = 64

# Amplitudes below this magnitude are dropped to keep the support finite.
_SUPPORT_EPS = 1e-300

# Test hook: the CLI verify command's sentinel scales the detection operator
# by this factor to prove the closed-form comparison actually bites.
_prefactor_scale = 1.0


class Occupation(NamedTuple):
    n_a: int
    n_b: int
    n_v: int

    @property
    def total(self) -> int:
        return self.n_a + self.n_b + self.n_v


@dataclass(frozen=True)
class FockKet:
    """Finite superposition of three-mode occupation states.

    ``amps`` maps :class:`Occupation` to a complex amplitude; every key must
    respect ``photon_cap``.  Kets are treated as immutable once built.
    Physically prepared states are normalized; unnormalized kets appear only
    as results of operator application.
    """

    amps: dict[Occupation, complex]
    photon_cap: int

    def __post_init__(self) -> None:
        cap = operator.index(self.photon_cap)
        if cap < 0:
            raise ValueError(f"photon_cap must be >= 0, got {cap}")
        cleaned: dict[Occupation, complex] = {}
        for key, amp in self.amps.items():
            occ = Occupation(*(operator.index(x) for x in key))
            if min(occ) < 0:
                raise ValueError(f"negative occupation {occ}")
            if occ.total > cap:
                raise ValueError(f"occupation {occ} exceeds photon cap {cap}")
            if abs(amp) >= _SUPPORT_EPS:
                cleaned[occ] = complex(amp)
        object.__setattr__(self, "amps", cleaned)
        object.__setattr__(self, "photon_cap", cap)

    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in self.amps.values())


def build_noon_input(n: int, phi: float) -> FockKet:
    """NOON state with phase phi in mode b and vacuum in the loss port.

    (|N,0,0> + e**(i N phi) |0,N,0>) / sqrt(2)
    """
    n = operator.index(n)
    if n < 1:
        raise ValueError("a NOON probe needs at least one photon")
    amp = 1.0 / math.sqrt(2.0)
    return FockKet(
        {
            Occupation(n, 0, 0): complex(amp),
            Occupation(0, n, 0): cmath.exp(1j * n * phi) * amp,
        },
        photon_cap=n,
    )


def _ladder_weight(k: int, m: int, n: int) -> float:
    """sqrt(k! m! / n!) for one term of an n-quantum ladder expansion."""
    return math.sqrt(factorial(k) * factorial(m) / factorial(n))


def apply_detector(ket: FockKet, n: int, ch: LossChannel, *, reflection_phase: float = math.pi / 2) -> FockKet:
    """Apply the lossy N-photon detection operator to ``ket``.

    The operator couples |N,0,0> with the beam-splitter image of |0,N,0>:
    a raising branch creates (t* b^dag + r* V^dag)**N on the emptied modes
    after projecting onto <N,0|, and the Hermitian-conjugate lowering branch
    annihilates (t b + r V)**N before projecting onto <0,0|.  Both carry the
    1/sqrt(N!) normalization of the N-quantum mode states.

    ``reflection_phase`` fixes arg(r); it never affects measured moments
    because the loss port starts in vacuum, and tests assert exactly that.
    The result is generally not normalized.  Raises if the ket holds more
    than ``n`` photons in any component.
    """
    n = operator.index(n)
    if not 1 <= n <= MAX_PHOTONS:
        raise ValueError(f"detector photon number must be in [1, {MAX_PHOTONS}], got {n}")
    for occ in ket.amps:
        if occ.total > n:
            raise ValueError(f"ket component {occ} holds more than {n} photons")

    t = cmath.rect(math.sqrt(ch.eta), ch.theta_t)
    r = cmath.rect(math.sqrt(1.0 - ch.eta), reflection_phase)
    tc, rc = t.conjugate(), r.conjugate()

    out: dict[Occupation, complex] = defaultdict(complex)
    for occ, amp in ket.amps.items():
        if occ.n_a == n and occ.n_b == 0 and occ.n_v == 0:
            # raising branch: k quanta into b, n - k into the loss port
            for k in range(n + 1):
                coeff = comb(n, k) * _ladder_weight(k, n - k, n) * tc ** k * rc ** (n - k)
                if coeff != 0:
                    out[Occupation(0, k, n - k)] += amp * coeff
        if occ.n_a == 0 and occ.n_b + occ.n_v == n:
            # lowering branch: only the term annihilating exactly n_b quanta
            # from b and n_v from V survives the vacuum projector
            k = occ.n_b
            coeff = comb(n, k) * _ladder_weight(k, n - k, n) * t ** k * r ** (n - k)
            if coeff != 0:
                out[Occupation(n, 0, 0)] += amp * coeff

    scale = _prefactor_scale
    if scale != 1.0:
        out = {occ: a * scale for occ, a in out.items()}
    return FockKet(dict(out), photon_cap=n)


def inner(x: FockKet, y: FockKet) -> complex:
    """<x|y> over the shared support."""
    if len(x.amps) > len(y.amps):
        return inner(y, x).conjugate()
    return sum(
        (amp.conjugate() * y.amps[occ] for occ, amp in x.amps.items() if occ in y.amps),
        start=0j,
    )


def oracle_moments(n: int, ch: LossChannel, phi: float, *, reflection_phase: float = math.pi / 2) -> tuple[float, float]:
    """Mean and variance of the detection operator, from state vectors alone.

    The second moment uses Hermiticity: <A'^2> = ||A' psi||^2.
    """
    psi = build_noon_input(n, phi)
    a_psi = apply_detector(psi, n, ch, reflection_phase=reflection_phase)
    mean = inner(psi, a_psi).real
    second_moment = inner(a_psi, a_psi).real
    return mean, second_moment - mean * mean
