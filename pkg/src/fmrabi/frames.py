"""Parameter bookkeeping between the lab and the effective rotating frame.

The lab frame carries the bare atomic splitting Omega_0, cavity frequency
Omega_c, coupling lam, and the sinusoidal modulation (A, omega_f).  After
moving to the frame rotating with the modulated splitting and expanding the
modulation phase exp(i x sin(omega_f t)) in Bessel sidebands, the slow
dynamics is governed by the detunings

    delta = Omega_0 - Omega_c        (co-rotating)
    Delta = Omega_0 + Omega_c - omega_f   (counter-rotating, drive-assisted)

and the Bessel-weighted couplings lambda_1 = lam*J_{-1}(x),
lambda_2 = lam*J_0(x), with x = A/omega_f.  The equivalent anisotropic Rabi
model has effective frequencies omega_c = (Delta - delta)/2 and
omega_0 = (Delta + delta)/2.

Experiments are authored in the effective frame and lowered to the lab frame
with from_effective(); this removes any ambiguity about which lab parameters
realize a requested operating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BESSEL_X_MAX = 10.0
RWA_RATIO_THRESHOLD = 20.0

_PARAM_TOL = 1e-12


class FrameError(ValueError):
    """Raised for parameter sets outside the validated domain."""


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for |x| <= 10.

    Downward Miller recurrence normalized with the completeness sum
    J_0 + 2*sum_k J_2k = 1, which is stable for every order this package
    needs and keeps the implementation dependency-free.  J_{-n}(x) =
    (-1)^n J_n(x) holds exactly by construction.
    """
    if abs(x) > BESSEL_X_MAX:
        raise FrameError(f"bessel_j validated only for |x| <= {BESSEL_X_MAX}, got {x}")
    if n < 0:
        return bessel_j(-n, x) * (1 if n % 2 == 0 else -1)
    if x < 0:
        return bessel_j(n, -x) * (1 if n % 2 == 0 else -1)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    # Start well above both the requested order and the turning point.
    m_start = max(n, int(x)) + 20 + int(2.0 * math.sqrt(max(n, int(x)) + 1))
    if m_start % 2 == 1:
        m_start += 1
    jp = 0.0
    jc = 1e-30
    result = 0.0
    norm = 0.0
    for m in range(m_start, 0, -1):
        jm = (2.0 * m / x) * jc - jp
        jp = jc
        jc = jm
        if m - 1 == n:
            result = jc
        if (m - 1) % 2 == 0:
            norm += 2.0 * jc
        # Rescale to avoid overflow of the unnormalized recurrence.
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            result *= 1e-250
            norm *= 1e-250
    norm -= jc  # J_0 counted twice in the even sum
    return result / norm


@dataclass(frozen=True)
class LabFrameParams:
    """Physical frequencies of the modulated Rabi model (one frequency unit).

    Fields: Omega0 (atomic splitting), Omega_c (cavity), lam (coupling),
    A (modulation amplitude), omega_f (modulation frequency), x = A/omega_f.
    """

    Omega0: float
    Omega_c: float
    lam: float
    A: float
    omega_f: float

    def __post_init__(self):
        for name in ("Omega0", "Omega_c", "omega_f"):
            if getattr(self, name) <= 0.0:
                raise FrameError(f"{name} must be strictly positive")
        if self.lam < 0.0:
            raise FrameError("coupling lam must be >= 0")
        if self.A < 0.0:
            raise FrameError("modulation amplitude A must be >= 0")

    @property
    def x(self) -> float:
        return self.A / self.omega_f

    @property
    def delta(self) -> float:
        return self.Omega0 - self.Omega_c

    @property
    def Delta(self) -> float:
        return self.Omega0 + self.Omega_c - self.omega_f


@dataclass(frozen=True)
class EffectiveParams:
    """Rotating-frame quantities of the equivalent anisotropic Rabi model."""

    delta: float
    Delta: float
    omega_c: float
    omega0: float
    lambda1: float
    lambda2: float
    lam: float
    x: float

    def __post_init__(self):
        if abs((self.omega_c + self.omega0) - self.Delta) > _PARAM_TOL * max(1.0, abs(self.Delta)):
            raise FrameError("effective frequencies inconsistent: omega_c + omega0 != Delta")
        if abs((self.omega0 - self.omega_c) - self.delta) > _PARAM_TOL * max(1.0, abs(self.delta)):
            raise FrameError("effective frequencies inconsistent: omega0 - omega_c != delta")


def to_effective(p: LabFrameParams) -> EffectiveParams:
    """Lower lab-frame parameters to the effective rotating frame."""
    delta = p.delta
    big_delta = p.Delta
    return EffectiveParams(
        delta=delta,
        Delta=big_delta,
        omega_c=(big_delta - delta) / 2.0,
        omega0=(big_delta + delta) / 2.0,
        lambda1=p.lam * bessel_j(-1, p.x),
        lambda2=p.lam * bessel_j(0, p.x),
        lam=p.lam,
        x=p.x,
    )


def from_effective(omega0_eff: float, omega_c_eff: float, x: float,
                   Omega0: float, lam: float) -> LabFrameParams:
    """Lab-frame parameters realizing the requested effective frame.

    omega_f = 2*(Omega0 - omega0_eff), Omega_c = omega_c_eff + omega_f/2,
    A = x * omega_f.  Round-trips exactly through to_effective.
    """
    if not omega0_eff > omega_c_eff > 0.0:
        raise FrameError("need omega0_eff > omega_c_eff > 0")
    omega_f = 2.0 * (Omega0 - omega0_eff)
    if omega_f <= 0.0:
        raise FrameError(
            f"Omega0 = {Omega0} too small for effective omega0 = {omega0_eff}"
            " (omega_f would be <= 0)")
    return LabFrameParams(
        Omega0=Omega0,
        Omega_c=omega_c_eff + omega_f / 2.0,
        lam=lam,
        A=x * omega_f,
        omega_f=omega_f,
    )


@dataclass(frozen=True)
class ValidityReport:
    """Scale separation ratios behind the sideband rotating-wave step."""

    ratio_delta: float
    ratio_Delta: float
    ratio_coupling: float
    threshold: float
    passed: bool


def rwa_validity(p: LabFrameParams, threshold: float = RWA_RATIO_THRESHOLD,
                 max_order: int = 12) -> ValidityReport:
    """Check omega_f >> {delta, Delta, lam*max_n|J_n(x)|}.

    The threshold factor (default 20) is this package's operational reading
    of "much greater"; the report carries the raw ratios so callers can apply
    their own judgement.
    """
    max_j = max(abs(bessel_j(n, p.x)) for n in range(0, max_order + 1))
    coupling_scale = p.lam * max_j
    inf = float("inf")
    r_delta = p.omega_f / abs(p.delta) if p.delta != 0.0 else inf
    r_big = p.omega_f / abs(p.Delta) if p.Delta != 0.0 else inf
    r_coupling = p.omega_f / coupling_scale if coupling_scale > 0.0 else inf
    passed = all(r >= threshold for r in (r_delta, r_big, r_coupling))
    return ValidityReport(
        ratio_delta=r_delta,
        ratio_Delta=r_big,
        ratio_coupling=r_coupling,
        threshold=threshold,
        passed=passed,
    )
