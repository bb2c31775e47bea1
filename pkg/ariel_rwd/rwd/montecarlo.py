"""
Monte Carlo estimation of transition throughputs by playing the token game.

Timed transitions race with exponential delays (the total enabled rate sets
the sojourn); enabled immediates are chosen in proportion to their weights
and take no time. Firings before the warm-up time are not counted; throughput
is the remaining firing count divided by the length of the measured window.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ariel_rwd.gspn.errors import VanishingLoop
from ariel_rwd.gspn.net import Marking, PetriNet
from ariel_rwd.rwd.builder import build
from ariel_rwd.rwd.params import RwdParams

MAX_IMMEDIATE_CHAIN = 10000


@dataclass(frozen=True)
class MonteCarloEstimate:
    transitions: tuple[str, ...]
    mean: tuple[float, ...]
    stderr: tuple[float, ...]
    replications: int
    horizon: float
    warmup: float = 0.0

    def as_dict(self) -> dict[str, tuple[float, float]]:
        """transition -> (mean, standard error)."""
        return {t: (m, s) for t, m, s in zip(self.transitions, self.mean, self.stderr)}


class _Step:
    """Firing choices of one marking."""

    __slots__ = ("immediate", "transitions", "cumulative", "total")

    def __init__(self, net: PetriNet, marking: Marking):
        enabled = net.enabled(marking)
        self.immediate = any(net.transitions[t].is_immediate for t in enabled)
        if self.immediate:
            weights = [net.transitions[t].kind.weight for t in enabled]
        else:
            weights = [net.effective_rate(t, marking) for t in enabled]
        self.transitions = enabled
        self.cumulative = np.cumsum(weights) if weights else np.zeros(0)
        self.total = float(self.cumulative[-1]) if weights else 0.0

    def pick(self, rng: np.random.Generator) -> int:
        u = rng.random() * self.total
        k = int(np.searchsorted(self.cumulative, u, side="right"))
        return self.transitions[min(k, len(self.transitions) - 1)]


def play(net: PetriNet, horizon: float, seed: int, warmup: float = 0.0) -> np.ndarray:
    """
    One replication from the initial marking until `horizon`.

    Firings up to `warmup` move the marking away from the initial one but
    are not counted, so early transient behaviour does not bias the rates.

    Returns:
        Firings per unit time of each transition, in net order

    Raises:
        VanishingLoop: If immediates keep firing without time advancing
    """
    rng = np.random.default_rng(seed)
    counts = np.zeros(len(net.transitions))
    steps: dict[Marking, _Step] = {}
    marking = net.initial_marking
    now = 0.0
    chain = 0

    while True:
        step = steps.get(marking)
        if step is None:
            step = steps[marking] = _Step(net, marking)

        if step.immediate:
            chain += 1
            if chain > MAX_IMMEDIATE_CHAIN:
                raise VanishingLoop(f"immediate transitions fire endlessly from {net.format_marking(marking)}")
        else:
            chain = 0
            if step.total == 0.0:
                break
            now += rng.exponential(1.0 / step.total)
            if now > horizon:
                break

        t = step.pick(rng)
        if now >= warmup:
            counts[t] += 1
        marking = net.fire(t, marking)

    return counts / (horizon - warmup)


def _play_job(job: tuple[PetriNet, float, int, float]) -> np.ndarray:
    return play(*job)


def _mean_stderr(table: np.ndarray) -> tuple[tuple[float, ...], tuple[float, ...]]:
    n = table.shape[0]
    mean = table.mean(axis=0)
    if n > 1:
        stderr = table.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        stderr = np.full(table.shape[1], math.nan)
    return tuple(float(x) for x in mean), tuple(float(x) for x in stderr)


def simulate_net(
    net: PetriNet, horizon: float, replications: int, seed: int, workers: int = 1, warmup: float = 0.0
) -> tuple[MonteCarloEstimate, np.ndarray]:
    """
    Replicated token game. Replication i uses seed `seed + i`; every
    replication discards its first `warmup` time units.

    Returns:
        The estimate and the replications x transitions table it came from.
        With a single replication the standard errors are NaN.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    if not 0 <= warmup < horizon:
        raise ValueError("warmup must lie in [0, horizon)")
    if replications < 1:
        raise ValueError("replications must be at least 1")

    jobs = [(net, float(horizon), seed + i, float(warmup)) for i in range(replications)]
    logging.info(f"Monte Carlo: {replications} replications, horizon {horizon}, warm-up {warmup}, seed {seed}, {workers} workers")
    if workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_play_job, jobs))
    else:
        rows = [_play_job(job) for job in jobs]

    table = np.vstack(rows)
    mean, stderr = _mean_stderr(table)
    names = tuple(t.name for t in net.transitions)
    return MonteCarloEstimate(names, mean, stderr, replications, float(horizon), float(warmup)), table


def monte_carlo(
    params: RwdParams, horizon: float, replications: int, seed: int, workers: int = 1, warmup: float = 0.0
) -> MonteCarloEstimate:
    """Throughput estimates per transition of the model built from `params`."""
    estimate, _ = simulate_net(build(params).net, horizon, replications, seed, workers, warmup)
    return estimate


def group_estimate(
    estimate: MonteCarloEstimate, table: np.ndarray, families: dict[str, tuple[str, ...]]
) -> MonteCarloEstimate:
    """Estimate of family sums, with errors taken from the per-run sums."""
    index = {t: i for i, t in enumerate(estimate.transitions)}
    columns = [table[:, [index[t] for t in members]].sum(axis=1) for members in families.values()]
    mean, stderr = _mean_stderr(np.column_stack(columns))
    return MonteCarloEstimate(tuple(families), mean, stderr, estimate.replications, estimate.horizon, estimate.warmup)
