"""Independent numerical oracle for the three two-variable convex programs.

solve_nlp never consults the closed-form selectors: it combines the
spec'd coarse grid over the speed box with deterministic 1D scan-and-shrink
refinement along each candidate active manifold (main constraint tight,
either speed cap tight, both caps tight).  A plain 2D shrinking box stalls
near sqrt(grid-step) accuracy against a curved active constraint, which is
why refinement runs on constraint-resolved slices.

The certificate functions verify first-order optimality at the closed-form
speeds: active constraints, multipliers, and the stationarity residual
computed with analytic gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedform import (DELTA, ec_optimal_speeds, we_optimal_speeds,
                         wec_optimal_speeds)
from .errors import InfeasibleError, NonConvergenceError
from .model import ProblemKind, SpeedPair

_MASK_SLACK = 1e-12      # relative feasibility slack for grid masks
_ACTIVE_TOL = 1e-8       # constraint slack below which it counts as tight
_MULTIPLIER_FLOOR = -1e-10
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class NlpSpec:
    """One of the three programs: objective and constraints fixed by kind."""

    kind: ProblemKind
    b: float = 1.0          # speed cap (EC); WEC/WE are defined at cap 1
    c: float | None = None  # EC time factor
    e: float | None = None  # WEC/WE energy parameter

    @staticmethod
    def ec(b: float, c: float) -> "NlpSpec":
        return NlpSpec(ProblemKind.EC, b=b, c=c)

    @staticmethod
    def wec(e: float) -> "NlpSpec":
        return NlpSpec(ProblemKind.WEC, e=e)

    @staticmethod
    def we(e: float) -> "NlpSpec":
        return NlpSpec(ProblemKind.WE, e=e)


@dataclass(frozen=True)
class KktCertificate:
    active_set: tuple[str, ...]
    multipliers: dict[str, float]
    stationarity_residual: float
    verdict: bool

    def as_dict(self) -> dict:
        return {
            "active_set": list(self.active_set),
            "multipliers": dict(self.multipliers),
            "stationarity_residual": self.stationarity_residual,
            "verdict": self.verdict,
        }


# ---------------------------------------------------------------------------
# Program definitions (vectorised over numpy arrays)
# ---------------------------------------------------------------------------

def objective_value(spec: NlpSpec, s, r):
    if spec.kind is ProblemKind.EC:
        return s * s + r * r
    return 1.0 / s + 2.0 / r


def _main_value(spec: NlpSpec, s, r):
    """Left-hand side of the main constraint; limit given by _main_limit."""
    if spec.kind is ProblemKind.EC:
        return 1.0 / s + 2.0 / r
    if spec.kind is ProblemKind.WEC:
        return 2.0 * (s * s + r * r)
    return s * s + 2.0 * r * r


def _main_limit(spec: NlpSpec) -> float:
    return spec.c if spec.kind is ProblemKind.EC else spec.e


def _cap(spec: NlpSpec) -> float:
    return spec.b if spec.kind is ProblemKind.EC else 1.0


def _r_on_main(spec: NlpSpec, s):
    """Solve the main constraint (held tight) for r; nan where unsolvable."""
    if spec.kind is ProblemKind.EC:
        denom = spec.c - 1.0 / s
        return np.where(denom > 0.0, 2.0 / np.where(denom > 0.0, denom, 1.0), np.nan)
    if spec.kind is ProblemKind.WEC:
        rad = spec.e / 2.0 - s * s
    else:
        rad = (spec.e - s * s) / 2.0
    return np.sqrt(np.maximum(rad, 0.0))


# ---------------------------------------------------------------------------
# Deterministic scan + shrink on one axis
# ---------------------------------------------------------------------------

def _scan_refine(f, lo: float, hi: float, rounds: int = 6, n: int = 2001):
    """Argmin of f over [lo, hi] by a scan followed by shrinking re-scans.

    f maps an array of abscissae to objective values with np.inf marking
    infeasible points.  Returns (x*, f*) or (None, inf) if nothing feasible.
    """
    if hi < lo:
        return None, math.inf
    xs = np.linspace(lo, hi, n)
    vals = f(xs)
    k = int(np.argmin(vals))
    if not np.isfinite(vals[k]):
        return None, math.inf
    best, fbest = float(xs[k]), float(vals[k])
    h = (hi - lo) / (n - 1) if hi > lo else 0.0
    for _ in range(rounds):
        if h == 0.0:
            break
        a, b = max(lo, best - 2.0 * h), min(hi, best + 2.0 * h)
        xs = np.linspace(a, b, 201)
        vals = f(xs)
        k = int(np.argmin(vals))
        if np.isfinite(vals[k]) and vals[k] < fbest:
            best, fbest = float(xs[k]), float(vals[k])
        h = (b - a) / 200.0 * 2.0
    return best, fbest


def solve_nlp(spec: NlpSpec, grid_resolution: int = 1000) -> SpeedPair:
    """Solve the program to ~1e-8 per coordinate without the closed forms."""
    cap = _cap(spec)
    limit = _main_limit(spec)
    if spec.kind is ProblemKind.EC:
        if spec.b is None or spec.c is None:
            raise ValueError("EC program needs b and c")
        if spec.b * spec.c < 3.0:
            raise InfeasibleError(f"empty feasible region: b*c = {spec.b * spec.c} < 3")
    elif spec.e is None or spec.e <= 0:
        raise ValueError("WEC/WE program needs e > 0")

    feas_limit = limit * (1.0 + _MASK_SLACK)
    candidates: list[tuple[float, float, float]] = []  # (objective, s, r)

    # coarse grid over the box (0, cap]^2
    axis = np.linspace(cap / grid_resolution, cap, grid_resolution)
    S, R = axis[:, None], axis[None, :]
    obj = np.where(_main_value(spec, S, R) <= feas_limit,
                   objective_value(spec, S, R), np.inf)
    k = int(np.argmin(obj))
    if np.isfinite(obj.flat[k]):
        i, j = divmod(k, grid_resolution)
        candidates.append((float(obj.flat[k]), float(axis[i]), float(axis[j])))

    # slice: main constraint tight, r eliminated
    def on_main(s):
        r = _r_on_main(spec, s)
        ok = np.isfinite(r) & (r > 0.0) & (r <= cap * (1.0 + _MASK_SLACK))
        r_safe = np.where(ok, r, 1.0)
        return np.where(ok, objective_value(spec, s, r_safe), np.inf)

    if spec.kind is ProblemKind.EC:
        lo = 1.0 / (spec.c - 2.0 / cap)  # smallest s with r(s) <= cap
        hi = cap
    elif spec.kind is ProblemKind.WEC:
        lo = max(1e-12, math.sqrt(max(0.0, spec.e / 2.0 - 1.0)))
        hi = min(cap, math.sqrt(spec.e / 2.0))
    else:
        lo = max(1e-12, math.sqrt(max(0.0, spec.e - 2.0)))
        hi = min(cap, math.sqrt(spec.e))
    s_star, f_star = _scan_refine(on_main, min(lo, hi), hi)
    if s_star is not None:
        r_star = float(np.minimum(_r_on_main(spec, np.array([s_star]))[0], cap))
        candidates.append((f_star, s_star, r_star))

    # slice: r at its cap, s free
    def r_capped(s):
        ok = _main_value(spec, s, cap) <= feas_limit
        return np.where(ok, objective_value(spec, s, cap), np.inf)

    s_star, f_star = _scan_refine(r_capped, cap * 1e-9, cap)
    if s_star is not None:
        candidates.append((f_star, s_star, cap))

    # slice: s at its cap, r free
    def s_capped(r):
        ok = _main_value(spec, cap, r) <= feas_limit
        return np.where(ok, objective_value(spec, cap, r), np.inf)

    r_star, f_star = _scan_refine(s_capped, cap * 1e-9, cap)
    if r_star is not None:
        candidates.append((f_star, cap, r_star))

    # corner: both caps tight
    if float(_main_value(spec, cap, cap)) <= feas_limit:
        candidates.append((float(objective_value(spec, cap, cap)), cap, cap))

    if not candidates:
        raise NonConvergenceError("no feasible point located on any slice")
    candidates.sort(key=lambda t: t[0])
    _, s_best, r_best = candidates[0]
    return SpeedPair(s_best, r_best)


def detect_active_set(spec: NlpSpec, pair: SpeedPair) -> tuple[str, ...]:
    """Constraints tight at pair within slack 1e-8 (scaled by the limit)."""
    cap = _cap(spec)
    limit = _main_limit(spec)
    names = {"main": "time" if spec.kind is ProblemKind.EC else "energy"}
    active = []
    if limit - float(_main_value(spec, pair.s, pair.r)) <= _ACTIVE_TOL * max(1.0, abs(limit)):
        active.append(names["main"])
    if cap - pair.s <= _ACTIVE_TOL * max(1.0, cap):
        active.append("s_bound")
    if cap - pair.r <= _ACTIVE_TOL * max(1.0, cap):
        active.append("r_bound")
    return tuple(active)


# ---------------------------------------------------------------------------
# KKT certificates at the closed-form speeds
# ---------------------------------------------------------------------------

def _grad_objective(kind: ProblemKind, s: float, r: float) -> tuple[float, float]:
    if kind is ProblemKind.EC:
        return 2.0 * s, 2.0 * r
    return -1.0 / (s * s), -2.0 / (r * r)


def _grad_constraint(kind: ProblemKind, name: str, s: float, r: float) -> tuple[float, float]:
    if name == "time":
        return -1.0 / (s * s), -2.0 / (r * r)
    if name == "energy":
        if kind is ProblemKind.WEC:
            return 4.0 * s, 4.0 * r
        return 2.0 * s, 4.0 * r
    if name == "s_bound":
        return 1.0, 0.0
    if name == "r_bound":
        return 0.0, 1.0
    raise ValueError(f"unknown constraint {name!r}")


def _certificate(kind: ProblemKind, pair: SpeedPair,
                 multipliers: dict[str, float]) -> KktCertificate:
    gs, gr = _grad_objective(kind, pair.s, pair.r)
    for name, lam in multipliers.items():
        cgs, cgr = _grad_constraint(kind, name, pair.s, pair.r)
        gs += lam * cgs
        gr += lam * cgr
    residual = math.hypot(gs, gr)
    verdict = (residual <= _RESIDUAL_TOL
               and all(lam >= _MULTIPLIER_FLOOR for lam in multipliers.values()))
    return KktCertificate(tuple(multipliers), dict(multipliers), residual, verdict)


def ec_rescue_cap_multiplier(b: float, c: float) -> float:
    """Multiplier on the r <= b cap in the tight-speed-bound regime.

    Proportional to 10 - 12x + 6x^2 - x^3 at x = c*b, hence positive below
    DELTA, zero at DELTA and negative beyond it (where the cap goes slack).
    """
    x = b * c
    return -2.0 * (b ** 4 * c ** 3 - 6.0 * b ** 3 * c ** 2 + 12.0 * b ** 2 * c - 10.0 * b) \
        / (x - 2.0) ** 3


def kkt_certificate_ec(b: float, c: float) -> KktCertificate:
    """First-order optimality certificate for the time-constrained program."""
    pair = ec_optimal_speeds(b, c).pair  # raises InfeasibleError when b*c < 3
    x = b * c
    if x <= DELTA:
        multipliers = {
            "time": 2.0 * b ** 3 / (x - 2.0) ** 3,
            "r_bound": ec_rescue_cap_multiplier(b, c),
        }
    else:
        multipliers = {"time": 2.0 * pair.s ** 3}
    return _certificate(ProblemKind.EC, pair, multipliers)


def kkt_certificate_wec(e: float) -> KktCertificate:
    """Certificate for the total-energy-capped program at speed cap 1.

    Multipliers come from the stationarity equalities at the regime's
    speeds: lam = 1/(4 s^3) on the energy constraint (with 2 s^3 = r^3 in
    the low regime), plus 2 - 1/s^3 on the r cap in the mid regime.
    """
    pair = wec_optimal_speeds(e).pair
    s = pair.s
    if e < DELTA:
        multipliers = {"energy": 1.0 / (4.0 * s ** 3)}
    elif e < 4.0:
        multipliers = {"energy": 1.0 / (4.0 * s ** 3),
                       "r_bound": 2.0 - 1.0 / s ** 3}
    elif e == 4.0:
        # all three constraints tight; one valid multiplier assignment
        multipliers = {"energy": 0.25, "s_bound": 0.0, "r_bound": 1.0}
    else:
        multipliers = {"s_bound": 1.0, "r_bound": 2.0}
    return _certificate(ProblemKind.WEC, pair, multipliers)


def kkt_certificate_we(e: float) -> KktCertificate:
    """Certificate for the makespan-capped program at speed cap 1."""
    pair = we_optimal_speeds(e).pair
    if e < 3.0:
        multipliers = {"energy": 1.0 / (2.0 * pair.s ** 3)}
    else:
        multipliers = {"s_bound": 1.0, "r_bound": 2.0}
    return _certificate(ProblemKind.WE, pair, multipliers)
