import math
import random

import pytest

from evacline.adversary import (AdversaryReport, Strategy, adversarial_exit,
                                empirical_growth_exponent,
                                finite_speed_infeasibility_witness,
                                first_visit_times, format_strategy,
                                infeasibility_witness, naive_strategy,
                                parse_strategy, random_zigzag_strategy)
from evacline.errors import (HorizonTooShortError, StrategyFormatError)
from evacline.model import TrajectorySegment


def doubling_searcher(b=1.0, legs=6):
    """One robot sweeps 1, -2, 4, -8, ... at full speed; the other idles."""
    segs, t, pos, target = [], 0.0, 0.0, 1.0
    for k in range(legs):
        dur = abs(target - pos) / b
        segs.append(TrajectorySegment(t, dur, pos, math.copysign(b, target - pos)))
        t, pos = t + dur, target
        target = -2.0 * target
    return Strategy((tuple(segs), ()), b, t)


# ---------------------------------------------------------------------------
# first visits
# ---------------------------------------------------------------------------

def test_first_visits_full_speed_sweep():
    strat = naive_strategy(1.0, horizon=100.0)
    for d in (0.5, 1.0, 7.0, 99.0):
        t_plus, t_minus = first_visit_times(strat, d)
        assert t_plus == pytest.approx(d, rel=1e-15)
        assert t_minus == pytest.approx(d, rel=1e-15)


def test_first_visits_one_sided():
    right_only = Strategy(((TrajectorySegment(0.0, 10.0, 0.0, 1.0),), ()),
                          1.0, 10.0)
    t_plus, t_minus = first_visit_times(right_only, 3.0)
    assert t_plus == pytest.approx(3.0)
    assert t_minus is None


def test_first_visits_half_speed():
    strat = Strategy(((TrajectorySegment(0.0, 40.0, 0.0, 0.5),), ()), 1.0, 40.0)
    t_plus, _ = first_visit_times(strat, 4.0)
    assert t_plus == pytest.approx(8.0)  # 2d/b at half the cap


def test_first_visits_monotone_in_d():
    strat = random_zigzag_strategy(1.0, seed=5)
    prev_plus, prev_minus = 0.0, 0.0
    for d in [0.5, 1.0, 2.0, 4.0, 8.0]:
        t_plus, t_minus = first_visit_times(strat, d)
        if t_plus is not None:
            assert t_plus >= prev_plus
            prev_plus = t_plus
        if t_minus is not None:
            assert t_minus >= prev_minus
            prev_minus = t_minus


def test_first_visits_respect_speed_limit():
    strat = random_zigzag_strategy(2.0, seed=1)
    for d in (1.0, 3.0, 10.0):
        t_plus, t_minus = first_visit_times(strat, d)
        for t in (t_plus, t_minus):
            if t is not None:
                assert t >= d / 2.0 - 1e-12


# ---------------------------------------------------------------------------
# adversarial exit
# ---------------------------------------------------------------------------

def test_adversary_forces_3d_over_b_on_full_speed_sweep():
    for b in (0.5, 1.0, 2.0):
        strat = naive_strategy(b, horizon=300.0 / b)
        for d in (1.0, 5.0, 42.0):
            rep = adversarial_exit(strat, d)
            assert rep.ratio == pytest.approx(3.0 / b, abs=1e-12)
            assert rep.induced_time == pytest.approx(3.0 * d / b, rel=1e-12)


def test_adversary_is_deterministic():
    strat = random_zigzag_strategy(1.0, seed=7)
    a = adversarial_exit(strat, 2.0)
    b = adversarial_exit(strat, 2.0)
    assert a == b


def test_adversary_ratio_floor_over_random_strategies():
    for seed in range(8):
        strat = random_zigzag_strategy(1.0, seed=seed)
        for d in (1.0, 1.7, 3.0, 6.0):
            try:
                rep = adversarial_exit(strat, d)
            except HorizonTooShortError:
                continue
            assert rep.ratio >= 3.0 - 1e-4


def _first_cross(segs, target):
    # independent re-derivation of the earliest crossing time
    for seg in segs:
        lo, hi = sorted((seg.start_pos, seg.end_pos))
        if lo <= target <= hi and seg.velocity != 0.0:
            return seg.start_time + (target - seg.start_pos) / seg.velocity
        if seg.start_pos == target:
            return seg.start_time
    return None


def test_adversary_matches_brute_force_on_single_searcher():
    # exit in a window where neither side is pinned at time d/b, so the
    # adversary must simply pick the costlier of the two placements
    strat = doubling_searcher()
    for d in (1.3, 2.7, 5.0):
        rep = adversarial_exit(strat, d)
        brute = []
        for exit_pos in (d, -d):
            times = [_first_cross(segs, exit_pos) for segs in strat.robots]
            times = [t for t in times if t is not None]
            t_find = min(times)
            other = strat.position(1, t_find) if times.index(t_find) == 0 \
                else strat.position(0, t_find)
            brute.append(t_find + abs(other - exit_pos) / strat.max_speed)
        assert rep.induced_time == pytest.approx(max(brute), rel=1e-12)
        assert rep.ratio >= 3.0 / strat.max_speed


def test_adversary_single_searcher_small_d_uses_inside_placement():
    # on the first leg +d is visited at exactly d/b, so the exit goes just
    # inside the other side
    strat = doubling_searcher()
    rep = adversarial_exit(strat, 0.5)
    assert rep.exit_side.value == "negative"
    assert rep.exit_distance == pytest.approx(0.5 * (1.0 - 1e-6), rel=1e-12)
    assert rep.ratio >= 3.0 - 1e-4


def test_adversary_requires_resolution_within_horizon():
    right_only = Strategy(((TrajectorySegment(0.0, 10.0, 0.0, 1.0),), ()),
                          1.0, 10.0)
    with pytest.raises(HorizonTooShortError):
        adversarial_exit(right_only, 3.0)


def test_adversary_rejects_nonpositive_d():
    with pytest.raises(ValueError):
        adversarial_exit(naive_strategy(1.0, 10.0), 0.0)


# ---------------------------------------------------------------------------
# infeasibility witness
# ---------------------------------------------------------------------------

def test_witness_against_full_speed_sweep():
    strat = naive_strategy(1.0, horizon=300.0)
    rep = infeasibility_witness(1.0, 2.9, strat)
    assert rep.violated_bound == "time_bound"
    assert rep.induced_time > 2.9 * rep.exit_distance
    assert rep.induced_time == pytest.approx(3.0 * rep.exit_distance, rel=1e-9)


def test_witness_against_random_strategies():
    for seed in range(10):
        strat = random_zigzag_strategy(1.0, seed=seed)
        rep = infeasibility_witness(1.0, 2.9, strat)
        assert rep.induced_time > 2.9 * rep.exit_distance


def test_witness_guard_rejects_feasible_product():
    with pytest.raises(ValueError):
        infeasibility_witness(1.0, 3.0, naive_strategy(1.0, 10.0))


# ---------------------------------------------------------------------------
# growth diagnostics and the finite-speed witness
# ---------------------------------------------------------------------------

def test_growth_rows_bounds():
    rows = empirical_growth_exponent(1.0, [1e2, 1e4, 1e6])
    scaled = [row.scaled for row in rows]
    assert max(scaled) / min(scaled) <= 10.0
    for row in rows:
        assert row.time >= row.floor
        assert row.floor == pytest.approx(row.d ** 1.5, rel=1e-12)


def test_growth_rejects_bad_inputs():
    with pytest.raises(ValueError):
        empirical_growth_exponent(2.0, [100.0])
    with pytest.raises(ValueError):
        empirical_growth_exponent(1.0, [5.0])


def test_finite_speed_witness():
    rng = random.Random(17)
    for _ in range(25):
        speeds = [rng.uniform(0.05, 2.0) for _ in range(rng.randint(1, 5))]
        budget = rng.uniform(0.1, 4.0)
        d_prime, cheapest = finite_speed_infeasibility_witness(speeds, budget)
        assert d_prime == budget / min(speeds) ** 2 + 1.0
        assert cheapest > budget


# ---------------------------------------------------------------------------
# strategy file format
# ---------------------------------------------------------------------------

def test_strategy_round_trip():
    strat = random_zigzag_strategy(1.5, seed=3)
    text = format_strategy(strat)
    back = parse_strategy(text)
    assert back.max_speed == pytest.approx(strat.max_speed)
    for rid in range(2):
        assert len(back.robots[rid]) == len(strat.robots[rid])
        for a, b in zip(back.robots[rid], strat.robots[rid]):
            assert a.start_time == pytest.approx(b.start_time, rel=1e-9)
            assert a.velocity == pytest.approx(b.velocity, rel=1e-9)


def test_parse_rejects_bad_header():
    with pytest.raises(StrategyFormatError):
        parse_strategy("speed 1 horizon 5\n0 0 1 1\n")
    with pytest.raises(StrategyFormatError):
        parse_strategy("")


def test_parse_rejects_gaps_and_overlaps():
    head = "maxspeed 1 horizon 10\n"
    with pytest.raises(StrategyFormatError):
        parse_strategy(head + "0 0 1 1\n0 2 1 1\n")   # gap
    with pytest.raises(StrategyFormatError):
        parse_strategy(head + "0 0 2 1\n0 1 1 1\n")   # overlap


def test_parse_rejects_speed_violation():
    with pytest.raises(StrategyFormatError):
        parse_strategy("maxspeed 1 horizon 10\n0 0 1 1.5\n")


def test_parse_rejects_malformed_lines():
    with pytest.raises(StrategyFormatError):
        parse_strategy("maxspeed 1 horizon 10\n0 0 1\n")
    with pytest.raises(StrategyFormatError):
        parse_strategy("maxspeed 1 horizon 10\n2 0 1 0.5\n")


def test_parse_accepts_comments_and_holds():
    text = ("# two-phase plan\nmaxspeed 1 horizon 10\n"
            "0 0 2 1\n0 2 3 0\n0 5 2 -1\n")
    strat = parse_strategy(text)
    assert strat.position(0, 4.0) == pytest.approx(2.0)  # holding
    assert strat.position(0, 7.0) == pytest.approx(0.0)


def test_strategy_holds_final_position():
    strat = doubling_searcher(legs=2)
    end = strat.robots[0][-1]
    assert strat.position(0, end.end_time + 5.0) == pytest.approx(end.end_pos)


def test_report_shape():
    rep = adversarial_exit(naive_strategy(1.0, 50.0), 2.0)
    assert isinstance(rep, AdversaryReport)
    assert rep.induced_time >= rep.exit_distance / 1.0
    d = rep.as_dict()
    assert set(d) == {"exit_distance", "exit_side", "induced_time", "ratio",
                      "violated_bound"}
