import math

import numpy as np
import pytest

from herman_lab import montecarlo as mc
from herman_lab.markov import expected_time_exact
from herman_lab.montecarlo import (
    SimStats,
    StepLimitError,
    coupled_equivalence,
    estimate,
    exhaustive_coupling,
    run_steps,
    simulate_once,
    step_histogram,
    summarize,
)
from herman_lab.ring import Configuration, GapVector, config_from_gaps
from herman_lab.streams import CoinStream


def state(n, gaps):
    return config_from_gaps(GapVector(n, gaps))


def test_single_token_takes_zero_steps():
    assert simulate_once(Configuration(5, (2,)), CoinStream.from_seed(0, 0)) == 0


def test_simulate_rejects_even_k():
    with pytest.raises(ValueError):
        simulate_once(Configuration(5, (1, 3)), CoinStream.from_seed(0, 0))
    with pytest.raises(ValueError):
        run_steps(Configuration(5, (1, 3)), 10, 0)


def test_scalar_and_vectorized_runs_agree():
    config = state(9, (3, 3, 3))
    vec = run_steps(config, 400, 42)
    scalar = [simulate_once(config, CoinStream.from_seed(42, i)) for i in range(400)]
    assert vec.tolist() == scalar


def test_threaded_runs_change_nothing():
    config = state(11, (2, 4, 5))
    assert run_steps(config, 5000, 9, threads=4, batch_size=512).tolist() == run_steps(
        config, 5000, 9
    ).tolist()


def test_estimate_reproducible():
    config = state(9, (3, 3, 3))
    assert estimate(config, 20_000, 12345) == estimate(config, 20_000, 12345)


def test_estimate_stats_fields():
    steps = run_steps(state(7, (2, 2, 3)), 5000, 3)
    stats = summarize(steps, 3)
    assert stats.runs == 5000
    assert stats.min_steps == int(steps.min())
    assert stats.max_steps == int(steps.max())
    expected_stderr = float(np.std(steps, ddof=1) / math.sqrt(5000))
    assert math.isclose(stats.stderr, expected_stderr)
    assert math.isclose(stats.ci95[0], stats.mean - 1.96 * stats.stderr)
    assert math.isclose(stats.ci95[1], stats.mean + 1.96 * stats.stderr)
    assert stats.seed == 3


def test_estimate_requires_positive_runs():
    with pytest.raises(ValueError):
        estimate(state(9, (3, 3, 3)), 0, 1)


def test_geometric_first_step_three_ring():
    # P(done after one step) = 3/4 from the exact one-step law
    steps = run_steps(state(3, (1, 1, 1)), 40_000, 77)
    ones = int((steps == 1).sum())
    sigma = math.sqrt(40_000 * 0.75 * 0.25)
    assert abs(ones - 30_000) <= 4 * sigma


@pytest.mark.parametrize(
    "n,gaps",
    [(9, (3, 3, 3)), (3, (1, 1, 1)), (7, (1, 1, 1, 1, 3)), (11, (2, 4, 5))],
)
def test_estimates_match_exact_values(n, gaps):
    exact = float(expected_time_exact(GapVector(n, gaps)))
    stats = estimate(state(n, gaps), 50_000, 2026)
    assert abs(stats.mean - exact) <= 4 * stats.stderr


def test_step_cap_breach_is_an_error():
    with pytest.raises(StepLimitError):
        simulate_once(state(9, (3, 3, 3)), CoinStream.from_seed(0, 0), step_cap=0)
    with pytest.raises(StepLimitError) as info:
        run_steps(state(9, (3, 3, 3)), 100, 0, step_cap=0)
    assert info.value.run_index is not None


def test_max_steps_below_default_cap():
    config = state(9, (1, 3, 5))
    stats = estimate(config, 100_000, 5)
    assert stats.max_steps <= 100 * 81


def test_histogram_matches_counts():
    steps = run_steps(state(5, (1, 1, 3)), 2000, 8)
    hist = step_histogram(steps)
    assert sum(hist.values()) == 2000
    assert hist[int(steps[0])] >= 1
    lines = mc.histogram_csv_lines(hist)
    assert lines[0] == "step_count,frequency"
    assert len(lines) == len(hist) + 1


def test_sim_stats_json():
    stats = SimStats(10, 1.5, 0.1, (1.3, 1.7), 1, 3, 42)
    record = stats.to_record()
    assert record["runs"] == 10 and record["seed"] == 42
    assert record["ci95"] == [1.3, 1.7]


# --- coupling ------------------------------------------------------------------

def test_exhaustive_coupling_n3_and_n5():
    assert exhaustive_coupling(3).passed
    assert exhaustive_coupling(5).passed


@pytest.mark.parametrize("n", (3, 5, 7, 9))
def test_coupled_trajectories(n):
    result = coupled_equivalence(n, 500, 31)
    assert result.passed
    assert result.failure is None


def test_coupling_rejects_even_ring():
    with pytest.raises(ValueError):
        coupled_equivalence(4, 10, 0)
    with pytest.raises(ValueError):
        exhaustive_coupling(4)


def test_single_token_start_couples_trivially():
    # a one-token bit ring never changes its extracted configuration
    from herman_lab.ring import bit_step, bits_from_config, config_from_bits

    config = Configuration(5, (3,))
    bits = bits_from_config(config)
    for coins in range(2):
        stepped = bit_step(bits, (bool(coins),))
        assert config_from_bits(stepped).token_count == 1
