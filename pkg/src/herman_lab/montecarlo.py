"""Trajectory simulation and seeded estimation of stabilization times.

The simulator works on the occupancy bitmask of the ring and draws one
coin word per step: every process gets a fair coin, and a token moves
clockwise exactly when its process coin is set, which is the original
bit-flipping formulation of the protocol.  Token-mask and process-coin
stepping induce the same trajectory distribution; the cross-check
against the position pipeline lives in `coupled_equivalence`.

Run i consumes only the stream derived as stream_key(master_seed, i)
(see `streams`), so estimates are bit-identical however runs are
batched or threaded.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ring import (
    BitRing,
    Configuration,
    apply_step,
    bit_step,
    config_from_bits,
    token_positions,
)
from .streams import GOLDEN, MASK64, CoinStream

DEFAULT_STEP_CAP_FACTOR = 100  # cap = factor * N^2; a breach is a bug, not a sample


class StepLimitError(RuntimeError):
    def __init__(self, cap: int, run_index: int | None = None):
        self.cap = cap
        self.run_index = run_index
        where = f" in run {run_index}" if run_index is not None else ""
        super().__init__(f"simulation exceeded the {cap}-step cap{where}")


@dataclass(frozen=True)
class SimStats:
    runs: int
    mean: float
    stderr: float
    ci95: tuple[float, float]
    min_steps: int
    max_steps: int
    seed: int

    def to_record(self) -> dict:
        return {
            "runs": self.runs,
            "mean": self.mean,
            "stderr": self.stderr,
            "ci95": [self.ci95[0], self.ci95[1]],
            "min_steps": self.min_steps,
            "max_steps": self.max_steps,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def _occupancy(config: Configuration) -> int:
    occ = 0
    for p in config.positions:
        occ |= 1 << (p - 1)
    return occ


def _default_cap(n: int, step_cap: int | None) -> int:
    return DEFAULT_STEP_CAP_FACTOR * n * n if step_cap is None else step_cap


def simulate_once(config: Configuration, stream: CoinStream, *, step_cap: int | None = None) -> int:
    """Steps until one token remains, driving the occupancy mask with `stream`."""
    if config.token_count % 2 == 0:
        raise ValueError("simulation requires an odd token count")
    n = config.ring_size
    cap = _default_cap(n, step_cap)
    ring_mask = (1 << n) - 1
    high_bit = n - 1
    occ = _occupancy(config)
    steps = 0
    while occ.bit_count() > 1:
        if steps >= cap:
            raise StepLimitError(cap)
        coins = stream.coin_word(n)
        moving = occ & coins
        staying = occ & ~coins
        occ = (staying ^ (((moving << 1) | (moving >> high_bit)) & ring_mask)) & ring_mask
        steps += 1
    return steps


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def _stream_keys(master_seed: int, lo: int, hi: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.uint64)
    seeded = (idx + np.uint64(1)) * np.uint64(GOLDEN)
    return _mix64_vec(np.uint64(master_seed & MASK64) ^ _mix64_vec(seeded))


def _run_batch(occ0: int, n: int, master_seed: int, lo: int, hi: int, cap: int) -> np.ndarray:
    """Step all runs [lo, hi) to absorption; returns their step counts."""
    count = hi - lo
    state = _stream_keys(master_seed, lo, hi)
    occ = np.full(count, occ0, dtype=np.uint64)
    orig = np.arange(count)
    steps = np.zeros(count, dtype=np.int64)
    ring_mask = np.uint64((1 << n) - 1)
    one = np.uint64(1)
    high = np.uint64(n - 1)
    golden = np.uint64(GOLDEN)
    t = 0
    alive = np.bitwise_count(occ) > 1
    occ, state, orig = occ[alive], state[alive], orig[alive]
    while occ.size:
        if t >= cap:
            raise StepLimitError(cap, run_index=lo + int(orig[0]))
        state = state + golden
        coins = _mix64_vec(state) & ring_mask
        moving = occ & coins
        staying = occ & ~coins
        occ = (staying ^ (((moving << one) | (moving >> high)) & ring_mask)) & ring_mask
        t += 1
        done = np.bitwise_count(occ) == 1
        if done.any():
            steps[orig[done]] = t
            keep = ~done
            occ, state, orig = occ[keep], state[keep], orig[keep]
    return steps


def run_steps(
    config: Configuration,
    runs: int,
    master_seed: int,
    *,
    step_cap: int | None = None,
    threads: int = 1,
    batch_size: int = 1 << 16,
) -> np.ndarray:
    """Per-run stabilization steps for runs 0..runs-1 (order-independent)."""
    if config.token_count % 2 == 0:
        raise ValueError("simulation requires an odd token count")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    n = config.ring_size
    cap = _default_cap(n, step_cap)
    occ0 = _occupancy(config)
    bounds = [(lo, min(lo + batch_size, runs)) for lo in range(0, runs, batch_size)]
    out = np.empty(runs, dtype=np.int64)
    if threads <= 1 or len(bounds) == 1:
        for lo, hi in bounds:
            out[lo:hi] = _run_batch(occ0, n, master_seed, lo, hi, cap)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_run_batch, occ0, n, master_seed, lo, hi, cap): (lo, hi) for lo, hi in bounds}
            for future, (lo, hi) in futures.items():
                out[lo:hi] = future.result()
    return out


def summarize(steps: np.ndarray, master_seed: int) -> SimStats:
    runs = int(steps.size)
    mean = float(steps.mean())
    stderr = float(steps.std(ddof=1) / math.sqrt(runs)) if runs > 1 else 0.0
    return SimStats(
        runs=runs,
        mean=mean,
        stderr=stderr,
        ci95=(mean - 1.96 * stderr, mean + 1.96 * stderr),
        min_steps=int(steps.min()),
        max_steps=int(steps.max()),
        seed=master_seed,
    )


def estimate(
    config: Configuration,
    runs: int,
    master_seed: int,
    *,
    step_cap: int | None = None,
    threads: int = 1,
) -> SimStats:
    """Aggregate `runs` independent simulations, reproducible from the seed."""
    steps = run_steps(config, runs, master_seed, step_cap=step_cap, threads=threads)
    return summarize(steps, master_seed)


def step_histogram(steps: np.ndarray) -> dict[int, int]:
    values, counts = np.unique(steps, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def histogram_csv_lines(hist: dict[int, int]) -> list[str]:
    lines = ["step_count,frequency"]
    lines.extend(f"{k},{hist[k]}" for k in sorted(hist))
    return lines


@dataclass(frozen=True)
class CouplingResult:
    passed: bool
    runs: int
    failure: dict | None = None

    def to_json(self) -> str:
        return json.dumps({"pass": self.passed, "runs": self.runs, "failure": self.failure})


def coupled_equivalence(n: int, runs: int, master_seed: int) -> CouplingResult:
    """Run bit-flip and token-passing trajectories under shared coins.

    Each step draws one coin per process; a token's move mask bit is its
    process coin.  Every intermediate extracted configuration must match
    the stepped configuration exactly.
    """
    if n % 2 == 0:
        raise ValueError("the bit representation needs an odd ring size")
    cap = _default_cap(n, None)
    for run in range(runs):
        stream = CoinStream.from_seed(master_seed, run)
        word = stream.coin_word(n)
        bits = BitRing(tuple(bool((word >> i) & 1) for i in range(n)))
        config = config_from_bits(bits)
        steps = 0
        while config.token_count > 1:
            if steps >= cap:
                raise StepLimitError(cap, run_index=run)
            coins = stream.coin_word(n)
            flips = tuple(bool((coins >> (p - 1)) & 1) for p in token_positions(bits))
            bits = bit_step(bits, flips)
            stepped = apply_step(config, flips)
            extracted = config_from_bits(bits)
            if extracted != stepped:
                failure = {
                    "run": run,
                    "step": steps,
                    "coins": coins,
                    "expected_positions": list(stepped.positions),
                    "extracted_positions": list(extracted.positions),
                }
                return CouplingResult(False, runs, failure)
            config = stepped
            steps += 1
    return CouplingResult(True, runs)


def exhaustive_coupling(n: int) -> CouplingResult:
    """Single-step coupling over every bit state and every coin vector."""
    if n % 2 == 0:
        raise ValueError("the bit representation needs an odd ring size")
    checked = 0
    for word in range(1 << n):
        bits = BitRing(tuple(bool((word >> i) & 1) for i in range(n)))
        config = config_from_bits(bits)
        for coins in range(1 << n):
            flips = tuple(bool((coins >> (p - 1)) & 1) for p in token_positions(bits))
            stepped = apply_step(config, flips)
            extracted = config_from_bits(bit_step(bits, flips))
            checked += 1
            if extracted != stepped:
                failure = {
                    "bits": word,
                    "coins": coins,
                    "expected_positions": list(stepped.positions),
                    "extracted_positions": list(extracted.positions),
                }
                return CouplingResult(False, checked, failure)
    return CouplingResult(True, checked)
