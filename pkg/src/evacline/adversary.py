"""Constructive worst-case exit placement against piecewise-constant strategies.

Given two robot trajectories with speed cap b, the adversary inspects which of
the two candidate exits at distance d is reached first and places the exit so
that evacuation is as slow as possible.  Any strategy is forced to ratio
(evacuation time)/(exit distance) of at least 3/b, which also yields witnesses
that no strategy meets a time bound c*d when b*c < 3.

After discovery, the non-finder is charged straight-line travel at the full
speed cap (the most favourable continuation), so reported ratios are
conservative lower bounds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import HorizonTooShortError, StrategyFormatError
from .model import (EnergyBudget, ExitSide, ProblemInstance, ProblemKind,
                    TrajectorySegment, simulate_functional)

_TIME_RTOL = 1e-9  # slack for "visited at time d/b" comparisons


@dataclass(frozen=True)
class Strategy:
    """Two piecewise-constant-velocity trajectories starting at the origin.

    A robot with no segments idles at the origin; after its last segment a
    robot holds its final position.
    """

    robots: tuple[tuple[TrajectorySegment, ...], tuple[TrajectorySegment, ...]]
    max_speed: float
    horizon: float

    def __post_init__(self):
        if self.max_speed <= 0 or self.horizon <= 0:
            raise StrategyFormatError("max_speed and horizon must be positive")
        if len(self.robots) != 2:
            raise StrategyFormatError("exactly two robots are required")
        for idx, segs in enumerate(self.robots):
            prev_end_t, prev_end_p = 0.0, 0.0
            for seg in segs:
                tol = 1e-9 * max(1.0, abs(prev_end_t))
                if abs(seg.start_time - prev_end_t) > tol:
                    raise StrategyFormatError(
                        f"robot {idx}: segment at t={seg.start_time} is not "
                        f"contiguous with previous end t={prev_end_t}")
                if abs(seg.start_pos - prev_end_p) > 1e-9 * max(1.0, abs(prev_end_p)):
                    raise StrategyFormatError(
                        f"robot {idx}: position jump at t={seg.start_time}")
                if seg.speed > self.max_speed * (1.0 + 1e-12):
                    raise StrategyFormatError(
                        f"robot {idx}: speed {seg.speed} exceeds cap {self.max_speed}")
                prev_end_t, prev_end_p = seg.end_time, seg.end_pos

    def position(self, robot: int, t: float) -> float:
        segs = self.robots[robot]
        if not segs or t <= segs[0].start_time:
            return 0.0
        for seg in segs:
            if t <= seg.end_time:
                return seg.position(t)
        return segs[-1].end_pos


@dataclass(frozen=True)
class AdversaryReport:
    exit_distance: float
    exit_side: ExitSide
    induced_time: float
    ratio: float
    violated_bound: str | None = None

    def as_dict(self) -> dict:
        return {
            "exit_distance": self.exit_distance,
            "exit_side": self.exit_side.value,
            "induced_time": self.induced_time,
            "ratio": self.ratio,
            "violated_bound": self.violated_bound,
        }


# ---------------------------------------------------------------------------
# First-visit machinery
# ---------------------------------------------------------------------------

def _segment_hit(seg: TrajectorySegment, target: float) -> float | None:
    """Earliest time within the segment at which the robot is at target."""
    if seg.start_pos == target:
        return seg.start_time
    if seg.velocity == 0.0:
        return None
    tau = (target - seg.start_pos) / seg.velocity
    if 0.0 <= tau <= seg.duration:
        return seg.start_time + tau
    return None


def _robot_first_visit(segs: tuple[TrajectorySegment, ...], horizon: float,
                       target: float) -> float | None:
    if target == 0.0:
        return 0.0  # every robot starts at the origin
    for seg in segs:  # time-ordered, so the first hit is the earliest
        t = _segment_hit(seg, target)
        if t is not None and t <= horizon:
            return t
    return None


def _first_visit(strategy: Strategy, target: float) -> float | None:
    hits = [_robot_first_visit(segs, strategy.horizon, target)
            for segs in strategy.robots]
    hits = [t for t in hits if t is not None]
    return min(hits) if hits else None


def first_visit_times(strategy: Strategy, d: float) -> tuple[float | None, float | None]:
    """Earliest visit times of +d and -d by any robot (None if never reached)."""
    if d <= 0:
        raise ValueError("d must be positive")
    return _first_visit(strategy, d), _first_visit(strategy, -d)


def _evacuate_at(strategy: Strategy, exit_pos: float) -> float:
    """Evacuation time when the exit sits at exit_pos and the strategy runs on.

    The finder halts on discovery; the other robot beelines at max_speed.
    """
    hits = [_robot_first_visit(segs, strategy.horizon, exit_pos)
            for segs in strategy.robots]
    if all(t is None for t in hits):
        raise HorizonTooShortError(
            f"exit at {exit_pos} is never reached within the horizon")
    if hits[1] is None or (hits[0] is not None and hits[0] <= hits[1]):
        finder = 0
    else:
        finder = 1
    t_find = hits[finder]
    dist = abs(strategy.position(1 - finder, t_find) - exit_pos)
    return t_find + dist / strategy.max_speed


def adversarial_exit(strategy: Strategy, d: float) -> AdversaryReport:
    """Worst exit placement at (or just inside) distance d for the strategy.

    Both candidate points +/-d cannot be reached before d/max_speed.  If both
    are reached exactly then, either side already forces ratio 3/max_speed;
    if only one is, the exit goes just inside the unreached side; if neither
    is, it goes on the side reached later (or never reached, if any).
    """
    if d <= 0:
        raise ValueError("d must be positive")
    t_ref = d / strategy.max_speed
    t_plus, t_minus = first_visit_times(strategy, d)

    def pinned(t: float | None) -> bool:
        return t is not None and t <= t_ref * (1.0 + _TIME_RTOL)

    if pinned(t_plus) and pinned(t_minus):
        if t_minus >= t_plus:
            exit_pos, side = -d, ExitSide.NEGATIVE
        else:
            exit_pos, side = d, ExitSide.POSITIVE
    elif pinned(t_plus) or pinned(t_minus):
        eps = d * 1e-6  # just inside the unreached side
        if pinned(t_plus):
            exit_pos, side = -(d - eps), ExitSide.NEGATIVE
        else:
            exit_pos, side = d - eps, ExitSide.POSITIVE
    else:
        if t_plus is None and t_minus is None:
            raise HorizonTooShortError(
                f"neither +{d} nor -{d} is reached within the horizon")
        if t_minus is None or (t_plus is not None and t_minus >= t_plus):
            exit_pos, side = -d, ExitSide.NEGATIVE
        else:
            exit_pos, side = d, ExitSide.POSITIVE

    induced = _evacuate_at(strategy, exit_pos)
    distance = abs(exit_pos)
    return AdversaryReport(distance, side, induced, induced / distance)


def infeasibility_witness(b: float, c: float, strategy: Strategy) -> AdversaryReport:
    """Exit placement on which the strategy misses the time bound c*d.

    Scans a geometric grid of candidate distances (50 points per decade) and
    returns the first placement whose induced time exceeds the bound.
    """
    if b <= 0 or c <= 0:
        raise ValueError("b and c must be positive")
    if b * c >= 3.0:
        raise ValueError(f"a witness requires b*c < 3, got {b * c}")
    d_hi = strategy.horizon * strategy.max_speed / 3.0
    k = 0
    while True:
        d = 10.0 ** (k / 50.0)
        if d > d_hi:
            break
        k += 1
        try:
            report = adversarial_exit(strategy, d)
        except HorizonTooShortError:
            continue
        if report.induced_time > c * report.exit_distance:
            return AdversaryReport(report.exit_distance, report.exit_side,
                                   report.induced_time, report.ratio,
                                   violated_bound="time_bound")
    raise HorizonTooShortError(
        "no violation found: the strategy horizon is too short to resolve one")


# ---------------------------------------------------------------------------
# Asymptotics of the constant-budget search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthRow:
    d: float
    time: float
    scaled: float  # time / (d^(3/2) * ln d)
    floor: float   # d^(3/2) / e, a hard lower bound on any evacuation time


def empirical_growth_exponent(e: float, d_values: list[float],
                              tol: float = 1e-10) -> list[GrowthRow]:
    """Evacuation times of the constant-budget search across distances.

    The scaled column must stay within constant factors across the range and
    every time must clear the d^(3/2)/e floor.
    """
    if not 0 < e <= 1.0:
        raise ValueError("constant-budget growth check needs 0 < e <= 1")
    rows = []
    for d in d_values:
        if d < 10.0:
            raise ValueError("growth diagnostics are asymptotic; use d >= 10")
        inst = ProblemInstance(ProblemKind.WEC, max_speed_b=1.0,
                               exit_distance_d=d,
                               energy_budget=EnergyBudget(e, "constant"))
        out = simulate_functional(e, inst, tol)
        rows.append(GrowthRow(d, out.evacuation_time,
                              out.evacuation_time / (d ** 1.5 * math.log(d)),
                              d ** 1.5 / e))
    return rows


def finite_speed_infeasibility_witness(speeds: list[float],
                                       budget: float) -> tuple[float, float]:
    """Distance at which no speed from a finite set fits a constant budget.

    Returns (d', m) with d' = budget/min(s)^2 + 1 and m the cheapest energy
    d' * v^2 over the set; m > budget always, so not even one robot can reach
    an exit at distance d'.
    """
    if budget <= 0 or not speeds or any(v <= 0 for v in speeds):
        raise ValueError("need a positive budget and positive speeds")
    s_min = min(speeds)
    d_prime = budget / (s_min * s_min) + 1.0
    cheapest = min(d_prime * v * v for v in speeds)
    return d_prime, cheapest


# ---------------------------------------------------------------------------
# Built-in strategies and the line-oriented file format
# ---------------------------------------------------------------------------

def naive_strategy(b: float, horizon: float) -> Strategy:
    """Both robots sweep outward at full speed in opposite directions."""
    r0 = (TrajectorySegment(0.0, horizon, 0.0, b),)
    r1 = (TrajectorySegment(0.0, horizon, 0.0, -b),)
    return Strategy((r0, r1), b, horizon)


def random_zigzag_strategy(max_speed: float, seed: int, legs: int = 9,
                           first_turn: float = 1.5) -> Strategy:
    """Seeded expanding zig-zag pair covering both sides of the origin."""
    rng = random.Random(seed)

    def one_robot(direction: int) -> tuple[TrajectorySegment, ...]:
        segs = []
        t, pos, turn, sign = 0.0, 0.0, first_turn * rng.uniform(0.8, 1.2), direction
        for _ in range(legs):
            target = sign * turn
            v = max_speed * rng.uniform(0.55, 1.0)
            dur = abs(target - pos) / v
            segs.append(TrajectorySegment(t, dur, pos, math.copysign(v, target - pos)))
            t, pos = t + dur, target
            sign = -sign
            turn *= rng.uniform(1.6, 2.4)
        return tuple(segs)

    robots = (one_robot(+1), one_robot(-1))
    horizon = max(segs[-1].end_time for segs in robots)
    return Strategy(robots, max_speed, horizon)


def parse_strategy(text: str) -> Strategy:
    """Parse the line format: header `maxspeed <b> horizon <T>`, then one
    segment per line as `robot_id start_time duration signed_speed`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise StrategyFormatError("empty strategy file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "maxspeed" or head[2] != "horizon":
        raise StrategyFormatError(f"bad header line: {lines[0]!r}")
    try:
        max_speed, horizon = float(head[1]), float(head[3])
    except ValueError as exc:
        raise StrategyFormatError(f"bad header numbers: {lines[0]!r}") from exc

    raw: dict[int, list[tuple[float, float, float]]] = {0: [], 1: []}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise StrategyFormatError(f"bad segment line: {ln!r}")
        try:
            rid = int(parts[0])
            start, dur, vel = (float(p) for p in parts[1:])
        except ValueError as exc:
            raise StrategyFormatError(f"bad segment line: {ln!r}") from exc
        if rid not in (0, 1):
            raise StrategyFormatError(f"robot id must be 0 or 1: {ln!r}")
        if dur <= 0:
            raise StrategyFormatError(f"segment duration must be positive: {ln!r}")
        raw[rid].append((start, dur, vel))

    robots = []
    for rid in (0, 1):
        entries = sorted(raw[rid])
        segs, pos = [], 0.0
        for start, dur, vel in entries:
            segs.append(TrajectorySegment(start, dur, pos, vel))
            pos += vel * dur
        robots.append(tuple(segs))
    # Strategy.__post_init__ enforces contiguity, start at the origin, speeds
    return Strategy((robots[0], robots[1]), max_speed, horizon)


def format_strategy(strategy: Strategy) -> str:
    out = [f"maxspeed {strategy.max_speed:.12g} horizon {strategy.horizon:.12g}"]
    for rid, segs in enumerate(strategy.robots):
        for seg in segs:
            out.append(f"{rid} {seg.start_time:.12g} {seg.duration:.12g} "
                       f"{seg.velocity:.12g}")
    return "\n".join(out) + "\n"
