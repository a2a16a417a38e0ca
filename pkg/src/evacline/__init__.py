"""Two-robot wireless evacuation on the infinite line under quadratic-drag energy.

Core surface: closed-form optimal speeds for the three trade-off problems,
exact simulators for the fixed-speed and decaying-profile searches, an
independent numerical oracle with first-order optimality certificates, and a
constructive adversary for lower bounds.
"""

from .adversary import (AdversaryReport, GrowthRow, Strategy, adversarial_exit,
                        empirical_growth_exponent,
                        finite_speed_infeasibility_witness, first_visit_times,
                        format_strategy, infeasibility_witness, naive_strategy,
                        parse_strategy, random_zigzag_strategy)
from .closedform import (CBRT2, CBRT4, DELTA, OptimalSpeeds, Regime,
                         ec_feasible, ec_optimal_speeds, ec_ratio_f,
                         functional_exploration_energy,
                         functional_exploration_time,
                         functional_leftover_energy, functional_rescue_speed,
                         we_optimal_speeds, we_time_factor_g,
                         wec_optimal_speeds, wec_time_factor_g)
from .errors import (EvaclineError, HorizonTooShortError, InfeasibleError,
                     NonConvergenceError, StrategyFormatError)
from .model import (CappedProfile, ConstantProfile, DEFAULT_TOL, EnergyBudget,
                    EvacuationOutcome, ExitSide, FunctionalProfile,
                    ProblemInstance, ProblemKind, SpeedPair, SpeedProfile,
                    TrajectorySegment, profile_energy, profile_traversal_time,
                    segment_energy, simulate_functional, simulate_naive)
from .numopt import (KktCertificate, NlpSpec, detect_active_set,
                     ec_rescue_cap_multiplier, kkt_certificate_ec,
                     kkt_certificate_we, kkt_certificate_wec, solve_nlp)
from .sweep import SweepSpec, render_csv, run_sweep, sweep_values, write_sweep
from .verify import SUITE_NAMES, VerifyReport, run_verification

__version__ = "0.1.0"
