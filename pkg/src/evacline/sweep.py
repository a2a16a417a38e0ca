"""Parameter sweeps emitted as deterministic CSV.

Three sweep axes: the product c*b for the time-constrained problem, the
budget parameter e for either energy-constrained problem, and the exit
distance d for the constant-budget decaying-profile search.  Numbers are
printed with 12 significant digits, `.` decimal point, LF line endings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedform import (ec_optimal_speeds, ec_ratio_f, we_optimal_speeds,
                         we_time_factor_g, wec_optimal_speeds,
                         wec_time_factor_g)
from .model import (DEFAULT_TOL, EnergyBudget, ProblemInstance, ProblemKind,
                    simulate_functional)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str           # "cb" | "e" | "d"
    lo: float
    hi: float
    points: int
    scale: str = "linear"    # "linear" | "geometric"
    problem: str | None = None  # "wec" | "we", required for the e sweep
    e: float | None = None      # budget, required for the d sweep

    def __post_init__(self):
        if self.parameter not in ("cb", "e", "d"):
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if not self.lo < self.hi:
            raise ValueError("sweep range must satisfy lo < hi")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if self.scale not in ("linear", "geometric"):
            raise ValueError(f"unknown scale {self.scale!r}")
        if self.scale == "geometric" and self.lo <= 0:
            raise ValueError("geometric scale needs lo > 0")
        if self.parameter == "e" and self.problem not in ("wec", "we"):
            raise ValueError("an e sweep needs problem 'wec' or 'we'")
        if self.parameter == "d" and (self.e is None or self.e <= 0):
            raise ValueError("a d sweep needs a positive budget e")


def sweep_values(spec: SweepSpec) -> list[float]:
    if spec.scale == "geometric":
        vals = np.geomspace(spec.lo, spec.hi, spec.points)
    else:
        vals = np.linspace(spec.lo, spec.hi, spec.points)
    return [float(v) for v in vals]


def run_sweep(spec: SweepSpec, tol: float = DEFAULT_TOL) -> tuple[list[str], list[list[float]]]:
    """Evaluate the sweep; returns (header, rows) in ascending parameter order."""
    values = sweep_values(spec)
    rows = []
    if spec.parameter == "cb":
        header = ["cb", "s", "r", "ratio_f"]
        for x in values:
            pair = ec_optimal_speeds(1.0, x).pair  # ratio depends only on c*b
            rows.append([x, pair.s, pair.r, ec_ratio_f(x)])
    elif spec.parameter == "e":
        header = ["e", "s", "r", "g"]
        speeds = wec_optimal_speeds if spec.problem == "wec" else we_optimal_speeds
        factor = wec_time_factor_g if spec.problem == "wec" else we_time_factor_g
        for x in values:
            pair = speeds(x).pair
            rows.append([x, pair.s, pair.r, factor(x)])
    else:
        header = ["d", "time", "energy", "time_over_d32logd"]
        for d in values:
            inst = ProblemInstance(ProblemKind.WEC, max_speed_b=1.0,
                                   exit_distance_d=d,
                                   energy_budget=EnergyBudget(spec.e, "constant"))
            out = simulate_functional(spec.e, inst, tol)
            rows.append([d, out.evacuation_time, out.total_energy,
                         out.evacuation_time / (d ** 1.5 * math.log(d))])
    return header, rows


def render_csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"


def write_sweep(spec: SweepSpec, path: str, tol: float = DEFAULT_TOL) -> None:
    header, rows = run_sweep(spec, tol)
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(header, rows))
