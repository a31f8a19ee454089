"""PI gain design by pole placement and the bilinear-discretized control law.

The closed loop of a first-order plant K/(tau*s + 1) under PI control is
second order; its characteristic polynomial is matched to the target
s^2 + 2*xi*wn*s + wn^2 derived from a settling-time / percent-overshoot
pair (2% settling convention, ts = 4/(xi*wn)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class PlantModel:
    """First-order servo axis: steady-state gain and time constant."""

    k: float  # output units per unit command
    tau: float  # seconds

    def __post_init__(self):
        if not (self.k > 0 and self.tau > 0):
            raise ValueError("plant gain and time constant must be > 0")


@dataclass(frozen=True)
class LoopSpec:
    """Closed-loop transient targets."""

    ts: float  # settling time, seconds (2% band)
    po: float  # percent overshoot, in (0, 100)

    def __post_init__(self):
        if self.ts <= 0:
            raise ValueError("settling time must be > 0")
        if not 0 < self.po < 100:
            raise ValueError("percent overshoot must be in (0, 100)")


@dataclass(frozen=True)
class PiGains:
    kp: float  # dimensionless
    ki: float  # 1/s


@dataclass(frozen=True)
class DesignDiagnostics:
    xi: float  # damping factor
    wn: float  # natural frequency, rad/s
    poles: tuple[complex, complex]


def damping_from_po(po: float) -> float:
    """Damping factor that yields the given percent overshoot.

    Inverts PO = 100 * exp(-xi*pi / sqrt(1 - xi^2)).
    """
    if not 0 < po < 100:
        raise ValueError("percent overshoot must be in (0, 100)")
    ln = math.log(po / 100.0)
    return -ln / math.sqrt(math.pi**2 + ln**2)


def po_from_damping(xi: float) -> float:
    """Percent overshoot of an underdamped second-order step response."""
    if not 0 < xi < 1:
        raise ValueError("damping factor must be in (0, 1)")
    return 100.0 * math.exp(-xi * math.pi / math.sqrt(1 - xi**2))


def design_gains(plant: PlantModel,
                 spec: LoopSpec) -> tuple[PiGains, DesignDiagnostics]:
    """Place the closed-loop poles to meet the settling/overshoot spec.

    Matching tau*s^2 + (1 + kp*K)*s + ki*K against the target polynomial
    with xi*wn = 4/ts gives kp = (8*tau/ts - 1)/K and ki = wn^2*tau/K.
    Specs with ts > 8*tau would need kp < 0 and are rejected.
    """
    if spec.ts > 8 * plant.tau:
        raise ValueError(
            f"infeasible spec: ts={spec.ts:g} s exceeds 8*tau="
            f"{8 * plant.tau:g} s (kp would be negative)")
    xi = damping_from_po(spec.po)
    wn = 4.0 / (spec.ts * xi)
    kp = (8.0 * plant.tau / spec.ts - 1.0) / plant.k
    ki = wn**2 * plant.tau / plant.k
    root = cmath.sqrt(complex(xi**2 - 1.0, 0.0))
    poles = (wn * (-xi + root), wn * (-xi - root))
    return PiGains(kp, ki), DesignDiagnostics(xi, wn, poles)


def closed_loop_tf(plant: PlantModel,
                   gains: PiGains) -> tuple[tuple[float, float],
                                            tuple[float, float, float]]:
    """Closed-loop transfer function coefficients, highest power first.

    Returns ((kp*K, ki*K), (tau, 1 + kp*K, ki*K)). The DC gain is
    ki*K / ki*K = 1: the integral action removes the offset error.
    """
    num = (gains.kp * plant.k, gains.ki * plant.k)
    den = (plant.tau, 1.0 + gains.kp * plant.k, gains.ki * plant.k)
    return num, den


@dataclass(frozen=True)
class IncrementalCoeffs:
    """Coefficients of the incremental law U[k] = U[k-1] + c1*E[k-1] + c0*E[k]."""

    c0: float  # multiplies E[k]
    c1: float  # multiplies E[k-1]


def discretize(gains: PiGains, t: float) -> IncrementalCoeffs:
    """Bilinear (Tustin) discretization of the PI controller at period t."""
    if t <= 0:
        raise ValueError("sampling period must be > 0")
    half = gains.ki * t / 2.0
    return IncrementalCoeffs(c0=half + gains.kp, c1=half - gains.kp)


@dataclass(frozen=True)
class ControllerState:
    """Runtime state of one axis: previous command, previous error, limits."""

    t: float  # sampling period, seconds
    u_prev: float = 0.0
    e_prev: float = 0.0
    u_min: float = -1.0
    u_max: float = 1.0

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("sampling period must be > 0")
        if not self.u_min < self.u_max:
            raise ValueError("saturation limits must satisfy u_min < u_max")
        if not self.u_min <= self.u_prev <= self.u_max:
            raise ValueError("u_prev outside saturation limits")


def pi_step(state: ControllerState, coeffs: IncrementalCoeffs,
            e: float) -> tuple[float, ControllerState]:
    """One tick of the incremental control law with clamping anti-windup.

    The stored previous command is the clamped output, so the implicit
    integrator cannot wind up while saturated.
    """
    if not math.isfinite(e):
        raise ValueError(f"non-finite error input: {e}")
    u_raw = state.u_prev + state.e_prev * coeffs.c1 + e * coeffs.c0
    u = min(max(u_raw, state.u_min), state.u_max)
    return u, replace(state, u_prev=u, e_prev=e)
