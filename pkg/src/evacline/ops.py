"""Operation documents shared by the HTTP service and the CLI.

Each function assembles plain dicts with fixed key names; the authoritative
field list lives in api-schema.json at the repository root.
"""

from __future__ import annotations

from . import numopt
from .closedform import (ec_optimal_speeds, ec_ratio_f, we_optimal_speeds,
                         we_time_factor_g, wec_optimal_speeds,
                         wec_time_factor_g)
from .model import (DEFAULT_TOL, EnergyBudget, EvacuationOutcome, ExitSide,
                    ProblemInstance, ProblemKind, SpeedPair, simulate_functional,
                    simulate_naive)

AGREEMENT_TOL = 1e-6


def optimize_document(problem: str, b: float = 1.0, c: float | None = None,
                      e: float | None = None) -> dict:
    """Closed-form solution, independent numerical solution and certificate.

    The closed form and the solver must agree to AGREEMENT_TOL per coordinate
    and the certificate must hold for the result to count as verified.
    """
    if problem == "ec":
        if c is None:
            raise ValueError("problem 'ec' needs b and c")
        opt = ec_optimal_speeds(b, c)  # raises InfeasibleError when b*c < 3
        factor = ec_ratio_f(b * c)
        extra = {"energy_per_d": 2.0 * (opt.pair.s ** 2 + opt.pair.r ** 2)}
        spec = numopt.NlpSpec.ec(b, c)
        cert = numopt.kkt_certificate_ec(b, c)
        params: dict[str, float] = {"b": b, "c": c}
    elif problem in ("wec", "we"):
        if e is None:
            raise ValueError(f"problem {problem!r} needs e")
        if problem == "wec":
            opt, factor = wec_optimal_speeds(e), wec_time_factor_g(e)
            spec, cert = numopt.NlpSpec.wec(e), numopt.kkt_certificate_wec(e)
        else:
            opt, factor = we_optimal_speeds(e), we_time_factor_g(e)
            spec, cert = numopt.NlpSpec.we(e), numopt.kkt_certificate_we(e)
        extra = {"time_per_d": factor}
        params = {"b": 1.0, "e": e}
    else:
        raise ValueError(f"unknown problem {problem!r}")

    numerical = numopt.solve_nlp(spec)
    agreement = max(abs(numerical.s - opt.pair.s), abs(numerical.r - opt.pair.r))
    doc = {
        "problem": problem,
        "params": params,
        "closed_form": {"s": opt.pair.s, "r": opt.pair.r,
                        "regime": opt.regime.value, "factor": factor, **extra},
        "numerical": {"s": numerical.s, "r": numerical.r,
                      "objective": float(numopt.objective_value(spec, numerical.s,
                                                                numerical.r))},
        "agreement": agreement,
        "kkt": cert.as_dict(),
        "verified": agreement <= AGREEMENT_TOL and cert.verdict,
    }
    return doc


def run_simulation(algo: str, d: float, s: float | None = None,
                   r: float | None = None, e: float | None = None,
                   side: str = "positive", maxspeed: float = 1.0,
                   c: float | None = None,
                   tol: float = DEFAULT_TOL) -> EvacuationOutcome:
    exit_side = ExitSide(side)
    if algo == "naive":
        if s is None or r is None:
            raise ValueError("algo 'naive' needs s and r")
        inst = ProblemInstance(ProblemKind.EC, maxspeed, d, exit_side,
                               time_factor_c=c)
        return simulate_naive(SpeedPair(s, r), inst)
    if algo == "functional":
        if e is None:
            raise ValueError("algo 'functional' needs e")
        inst = ProblemInstance(ProblemKind.WEC, maxspeed, d, exit_side,
                               energy_budget=EnergyBudget(e, "constant"))
        return simulate_functional(e, inst, tol)
    raise ValueError(f"unknown algorithm {algo!r}")
