"""Closed-form optimal speeds, feasibility conditions and trade-off factors.

Three problems over the two-phase search with speeds (s, r):

* time-constrained energy minimisation (parameters b, c): solvable iff
  b*c >= 3, piecewise solution switching at c*b = DELTA;
* total-energy-constrained time minimisation at b = 1 (parameter e, cap e*d):
  three regimes split at DELTA and 4;
* makespan-energy-constrained time minimisation at b = 1: two regimes split
  at 3.

DELTA = 2 + 2**(1/3) is the unique real root of 10 - 12x + 6x^2 - x^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfeasibleError
from .model import SpeedPair, functional_rescue_speed

__all__ = [
    "DELTA", "CBRT2", "CBRT4", "Regime", "OptimalSpeeds",
    "ec_feasible", "ec_optimal_speeds", "ec_ratio_f",
    "wec_optimal_speeds", "wec_time_factor_g",
    "we_optimal_speeds", "we_time_factor_g",
    "functional_rescue_speed",
    "functional_exploration_energy", "functional_exploration_time",
    "functional_leftover_energy",
]

CBRT2 = 2.0 ** (1.0 / 3.0)
CBRT4 = 2.0 ** (2.0 / 3.0)
DELTA = 2.0 + CBRT2


class Regime(Enum):
    EC_TIGHT_SPEED_BOUND = "EC_TightSpeedBound"  # 3 <= cb <= DELTA
    EC_INTERIOR = "EC_Interior"                  # cb > DELTA
    WEC_LOW_ENERGY = "WEC_LowEnergy"             # e < DELTA
    WEC_MID_ENERGY = "WEC_MidEnergy"             # DELTA <= e < 4
    WEC_SATURATED = "WEC_Saturated"              # e >= 4
    WE_LOW_ENERGY = "WE_LowEnergy"               # e < 3
    WE_SATURATED = "WE_Saturated"                # e >= 3


@dataclass(frozen=True)
class OptimalSpeeds:
    pair: SpeedPair
    regime: Regime


def _require_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if value <= 0:
            raise ValueError(f"{name} must be positive")


def ec_feasible(b: float, c: float) -> bool:
    """A time bound of c*d with speed cap b is achievable iff b*c >= 3."""
    _require_positive(b=b, c=c)
    return b * c >= 3.0


def ec_optimal_speeds(b: float, c: float) -> OptimalSpeeds:
    """Energy-optimal (s, r) under time bound c*d and speed cap b."""
    _require_positive(b=b, c=c)
    x = b * c
    if x < 3.0:
        raise InfeasibleError(f"no feasible speeds: b*c = {x} < 3")
    if x <= DELTA:
        # boundary x = DELTA belongs here; both branches agree there
        return OptimalSpeeds(SpeedPair(b / (x - 2.0), b), Regime.EC_TIGHT_SPEED_BOUND)
    return OptimalSpeeds(SpeedPair((1.0 + CBRT4) / c, DELTA / c), Regime.EC_INTERIOR)


def ec_ratio_f(x: float) -> float:
    """Worst-case-to-offline energy ratio as a function of the product c*b."""
    if x < 3.0:
        raise InfeasibleError(f"no feasible speeds: c*b = {x} < 3")
    if x <= DELTA:
        return x * x / ((x - 2.0) ** 2) + x * x
    return 0.5 * DELTA ** 3


def wec_optimal_speeds(e: float) -> OptimalSpeeds:
    """Time-optimal (s, r) under total energy cap e*d, speed cap 1."""
    _require_positive(e=e)
    if e < DELTA:
        s = math.sqrt(e / (2.0 * (1.0 + CBRT4)))
        r = math.sqrt(e / (2.0 + CBRT2))
        return OptimalSpeeds(SpeedPair(s, r), Regime.WEC_LOW_ENERGY)
    if e < 4.0:
        return OptimalSpeeds(SpeedPair(math.sqrt((e - 2.0) / 2.0), 1.0),
                             Regime.WEC_MID_ENERGY)
    return OptimalSpeeds(SpeedPair(1.0, 1.0), Regime.WEC_SATURATED)


def wec_time_factor_g(e: float) -> float:
    """Evacuation time per unit distance for the total-energy-capped problem."""
    _require_positive(e=e)
    if e < DELTA:
        return math.sqrt(DELTA ** 3 / e)
    if e < 4.0:
        return 2.0 + math.sqrt(2.0 / (e - 2.0))
    return 3.0


def we_optimal_speeds(e: float) -> OptimalSpeeds:
    """Time-optimal (s, r) under makespan energy cap e*d, speed cap 1."""
    _require_positive(e=e)
    if e < 3.0:
        v = math.sqrt(e / 3.0)
        return OptimalSpeeds(SpeedPair(v, v), Regime.WE_LOW_ENERGY)
    return OptimalSpeeds(SpeedPair(1.0, 1.0), Regime.WE_SATURATED)


def we_time_factor_g(e: float) -> float:
    """Evacuation time per unit distance for the makespan-capped problem.

    Saturates at 3 for e >= 3: the time identity 1/s + 2/r at s = r = 1 gives
    3, as does the e -> 3 limit of the low-energy branch.  A sometimes-quoted
    saturated value of 1 is inconsistent with both and is deliberately not
    reproduced here.
    """
    _require_positive(e=e)
    if e < 3.0:
        return 3.0 * math.sqrt(3.0 / e)
    return 3.0


# ---------------------------------------------------------------------------
# Closed forms for the decaying-profile search (cross-checked by quadrature)
# ---------------------------------------------------------------------------

def functional_exploration_energy(e: float, d: float) -> float:
    """Energy one robot spends exploring [0, d]: e/2 - e/(2e*ln(d+1) + 2)."""
    _require_positive(e=e, d=d)
    return e / 2.0 - e / (2.0 * e * math.log1p(d) + 2.0)


def functional_exploration_time(e: float, d: float) -> float:
    """Time to walk [0, d] against the decaying profile.

    Equals 2*sqrt(2)*((d+1)^(3/2)*(3e*ln(d+1) - 2e + 3) + 2e - 3) / (9e).
    """
    _require_positive(e=e, d=d)
    u = math.log1p(d)
    return (2.0 * math.sqrt(2.0)
            * ((d + 1.0) ** 1.5 * (3.0 * e * u - 2.0 * e + 3.0) + 2.0 * e - 3.0)
            / (9.0 * e))


def functional_leftover_energy(e: float, d: float) -> float:
    """Budget left for the rescue leg after both robots explored to distance d."""
    _require_positive(e=e, d=d)
    return e / (e * math.log1p(d) + 1.0)
