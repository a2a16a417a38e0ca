"""Domain types, drag-energy functional, quadrature and the two search simulators.

Energy model: moving a distance x at constant speed s costs x*s**2; with a
position-dependent speed s(x) the cost over [a, b] is the integral of s(x)**2.
Both searchers start at the origin of the line, explore opposite directions,
and the non-finder turns around on the wireless announcement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from scipy import integrate, optimize

from .errors import NonConvergenceError

DEFAULT_TOL = 1e-10

_QUAD_LIMIT = 200


class ProblemKind(Enum):
    EC = "ec"    # min total energy s.t. time <= c*d, speeds <= b
    WEC = "wec"  # min time s.t. total energy <= budget, speeds <= b
    WE = "we"    # min time s.t. makespan energy <= budget, speeds <= b


class ExitSide(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class EnergyBudget:
    """Energy cap, either a constant e or linear e*d in the exit distance."""

    e: float
    form: str = "constant"  # "constant" | "linear"

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError("energy budget must be positive")
        if self.form not in ("constant", "linear"):
            raise ValueError(f"unknown budget form {self.form!r}")

    def cap(self, d: float) -> float:
        return self.e * d if self.form == "linear" else self.e


@dataclass(frozen=True)
class ProblemInstance:
    problem_kind: ProblemKind
    max_speed_b: float
    exit_distance_d: float
    exit_side: ExitSide = ExitSide.POSITIVE
    time_factor_c: float | None = None       # required for EC
    energy_budget: EnergyBudget | None = None  # required for WEC / WE

    def __post_init__(self):
        if self.max_speed_b <= 0:
            raise ValueError("max_speed_b must be positive")
        if self.exit_distance_d <= 0:
            raise ValueError("exit_distance_d must be positive")
        if self.time_factor_c is not None and self.time_factor_c <= 0:
            raise ValueError("time_factor_c must be positive")
        if self.problem_kind in (ProblemKind.WEC, ProblemKind.WE) and self.energy_budget is None:
            raise ValueError(f"{self.problem_kind.value} instance needs an energy budget")


@dataclass(frozen=True)
class SpeedPair:
    """Exploration speed s and rescue speed r of the two-phase search."""

    s: float
    r: float

    def __post_init__(self):
        if self.s <= 0 or self.r <= 0:
            raise ValueError("speeds must be positive")


@dataclass(frozen=True)
class EvacuationOutcome:
    evacuation_time: float
    finder_energy: float
    nonfinder_energy: float
    total_energy: float
    makespan_energy: float
    feasible: bool
    violated_constraints: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "evacuation_time": self.evacuation_time,
            "finder_energy": self.finder_energy,
            "nonfinder_energy": self.nonfinder_energy,
            "total_energy": self.total_energy,
            "makespan_energy": self.makespan_energy,
            "feasible": self.feasible,
            "violated_constraints": list(self.violated_constraints),
        }


@dataclass(frozen=True)
class TrajectorySegment:
    """One constant-velocity leg of a robot's motion.

    Velocity is signed; zero velocity encodes a hold, which is why the
    duration is stored explicitly rather than derived from the endpoints.
    """

    start_time: float
    duration: float
    start_pos: float
    velocity: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("segment duration must be nonnegative")

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    @property
    def end_pos(self) -> float:
        return self.start_pos + self.velocity * self.duration

    @property
    def speed(self) -> float:
        return abs(self.velocity)

    def position(self, t: float) -> float:
        return self.start_pos + self.velocity * (t - self.start_time)


# ---------------------------------------------------------------------------
# Speed profiles
# ---------------------------------------------------------------------------

class SpeedProfile:
    """Base class; concrete profiles implement speed(x) > 0 for x >= 0."""

    def speed(self, x: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantProfile(SpeedProfile):
    v: float

    def __post_init__(self):
        if self.v <= 0:
            raise ValueError("constant speed must be positive")

    def speed(self, x: float) -> float:
        return self.v


@dataclass(frozen=True)
class FunctionalProfile(SpeedProfile):
    """Decaying profile s(x) = 1 / (sqrt(2+2x) * (1/e + ln(1+x)))."""

    e: float

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError("energy parameter must be positive")

    def speed(self, x: float) -> float:
        return 1.0 / (math.sqrt(2.0 + 2.0 * x) * (1.0 / self.e + math.log1p(x)))


@dataclass(frozen=True)
class CappedProfile(SpeedProfile):
    """FunctionalProfile clipped at speed 1: min(s(x), 1).

    For e <= sqrt(2) the uncapped profile already satisfies s(0) = e/sqrt(2) <= 1
    and is decreasing, so the cap never engages and the profiles coincide.
    """

    e: float

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError("energy parameter must be positive")

    def speed(self, x: float) -> float:
        raw = 1.0 / (math.sqrt(2.0 + 2.0 * x) * (1.0 / self.e + math.log1p(x)))
        return min(raw, 1.0)

    @cached_property
    def crossover(self) -> float | None:
        """Unique x* with s(x*) = 1 when s(0) > 1, else None."""
        e = self.e
        if e <= math.sqrt(2.0):
            return None
        # g(x) = sqrt(2+2x)*(1/e + ln(1+x)) - 1 is strictly increasing from g(0) < 0
        def g(x):
            return math.sqrt(2.0 + 2.0 * x) * (1.0 / e + math.log1p(x)) - 1.0
        hi = 1.0
        while g(hi) <= 0.0:
            hi *= 2.0
        return optimize.bisect(g, 0.0, hi, xtol=1e-12)


# ---------------------------------------------------------------------------
# Energy and time integrals
# ---------------------------------------------------------------------------

def segment_energy(length: float, speed: float) -> float:
    """Drag energy length * speed**2 for a constant-speed leg."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    if speed <= 0:
        raise ValueError("speed must be positive")
    return length * speed * speed


def _quad(f, a: float, b: float, tol: float) -> float:
    if a == b:
        return 0.0
    out = integrate.quad(f, a, b, epsabs=tol, epsrel=tol,
                         limit=_QUAD_LIMIT, full_output=1)
    if len(out) > 3:  # quadpack appended a warning message
        raise NonConvergenceError(f"quadrature did not converge on [{a}, {b}]: {out[3]}")
    return out[0]


def _check_interval(profile: SpeedProfile, a: float, b: float, tol: float) -> None:
    if a > b:
        raise ValueError("interval must satisfy a <= b")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not isinstance(profile, ConstantProfile) and a < 0:
        raise ValueError("functional profiles are defined for x >= 0")


def profile_energy(profile: SpeedProfile, a: float, b: float,
                   tol: float = DEFAULT_TOL) -> float:
    """Integral of speed(x)**2 over [a, b] to absolute accuracy tol."""
    _check_interval(profile, a, b, tol)
    if isinstance(profile, ConstantProfile):
        return (b - a) * profile.v ** 2
    if isinstance(profile, CappedProfile):
        x_star = profile.crossover
        if x_star is not None and a < x_star:
            flat = min(b, x_star) - a  # capped stretch rides at speed 1
            if b <= x_star:
                return flat
            return flat + _quad(lambda x: profile.speed(x) ** 2, x_star, b, tol)
    return _quad(lambda x: profile.speed(x) ** 2, a, b, tol)


def profile_traversal_time(profile: SpeedProfile, a: float, b: float,
                           tol: float = DEFAULT_TOL) -> float:
    """Integral of 1/speed(x) over [a, b] to absolute accuracy tol."""
    _check_interval(profile, a, b, tol)
    if isinstance(profile, ConstantProfile):
        return (b - a) / profile.v
    if isinstance(profile, CappedProfile):
        x_star = profile.crossover
        if x_star is not None and a < x_star:
            flat = min(b, x_star) - a
            if b <= x_star:
                return flat
            return flat + _quad(lambda x: 1.0 / profile.speed(x), x_star, b, tol)
    return _quad(lambda x: 1.0 / profile.speed(x), a, b, tol)


def functional_rescue_speed(e: float, d: float) -> float:
    """Rescue speed spending exactly the leftover budget: 2d*r**2 = e/(e*ln(d+1)+1)."""
    if e <= 0 or d <= 0:
        raise ValueError("e and d must be positive")
    return math.sqrt(e / (2.0 * d * (e * math.log1p(d) + 1.0)))


# ---------------------------------------------------------------------------
# Simulators
# ---------------------------------------------------------------------------

def _exceeds(value: float, limit: float, slack: float) -> bool:
    return value > limit + slack * max(1.0, abs(limit))


def _budget_violations(inst: ProblemInstance, time: float, total: float,
                       makespan: float, slack: float) -> list[str]:
    out = []
    if inst.problem_kind is ProblemKind.EC and inst.time_factor_c is not None:
        if _exceeds(time, inst.time_factor_c * inst.exit_distance_d, slack):
            out.append("time_bound")
    if inst.energy_budget is not None:
        cap = inst.energy_budget.cap(inst.exit_distance_d)
        if inst.problem_kind is ProblemKind.WEC and _exceeds(total, cap, slack):
            out.append("total_energy")
        if inst.problem_kind is ProblemKind.WE and _exceeds(makespan, cap, slack):
            out.append("makespan_energy")
    return out


def simulate_naive(pair: SpeedPair, inst: ProblemInstance) -> EvacuationOutcome:
    """Outcome of the fixed-speed opposite-direction search with speeds (s, r).

    Exact closed arithmetic: time d*(1/s + 2/r); finder energy d*s^2;
    non-finder d*s^2 + 2d*r^2.  Symmetric in the exit side.  Out-of-budget
    inputs yield a populated outcome with feasible=False rather than an error.
    """
    s, r, d = pair.s, pair.r, inst.exit_distance_d
    time = d * (1.0 / s + 2.0 / r)
    finder = d * s * s
    nonfinder = d * s * s + 2.0 * d * r * r
    total = finder + nonfinder
    makespan = max(finder, nonfinder)
    violations = []
    if s > inst.max_speed_b or r > inst.max_speed_b:
        violations.append("speed_bound")
    violations += _budget_violations(inst, time, total, makespan, slack=1e-12)
    return EvacuationOutcome(time, finder, nonfinder, total, makespan,
                             feasible=not violations,
                             violated_constraints=tuple(violations))


def simulate_functional(e: float, inst: ProblemInstance,
                        tol: float = DEFAULT_TOL) -> EvacuationOutcome:
    """Outcome of the constant-budget search with the decaying speed profile.

    Exploration uses FunctionalProfile(e) for e <= 1 and CappedProfile(e)
    otherwise; after discovery at distance d the non-finder covers 2d at the
    constant rescue speed that consumes the whole leftover budget.
    """
    if e <= 0:
        raise ValueError("e must be positive")
    d = inst.exit_distance_d
    profile: SpeedProfile = FunctionalProfile(e) if e <= 1.0 else CappedProfile(e)
    find_time = profile_traversal_time(profile, 0.0, d, tol)
    r = functional_rescue_speed(e, d)
    explore_energy = profile_energy(profile, 0.0, d, tol)
    rescue_energy = 2.0 * d * r * r
    finder = explore_energy
    nonfinder = explore_energy + rescue_energy
    total = finder + nonfinder
    makespan = max(finder, nonfinder)
    time = find_time + 2.0 * d / r
    violations = []
    peak = profile.speed(0.0)  # the profile is decreasing, so the peak sits at 0
    if peak > inst.max_speed_b or r > inst.max_speed_b:
        violations.append("speed_bound")
    violations += _budget_violations(inst, time, total, makespan,
                                     slack=max(4.0 * tol, 1e-12))
    return EvacuationOutcome(time, finder, nonfinder, total, makespan,
                             feasible=not violations,
                             violated_constraints=tuple(violations))
