"""
Replicated runs of one scenario under a voting policy.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ariel_rwd.runtime.scenario import SimScenario
from ariel_rwd.runtime.simulator import SimMetrics, run

SUMMARY_FIELDS = (
    "alarms",
    "false_alarms",
    "mean_latency_ms",
    "useful_cycles",
    "heartbeats",
    "notifications",
)


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float
    ci_low: float
    ci_high: float
    n: int


@dataclass
class PolicyMeasurement:
    policy: str
    seed: int
    runs: list[SimMetrics] = field(default_factory=list)
    summary: dict[str, MetricSummary | None] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, int, SimMetrics]]:
        return [(self.policy, self.seed + i, m) for i, m in enumerate(self.runs)]


def summarize(values: list[float], confidence: float = 0.95) -> MetricSummary | None:
    """Mean, sample standard deviation and a Student-t confidence interval; None when empty."""
    if not values:
        return None
    data = np.asarray(values, dtype=float)
    mean = float(data.mean())
    n = len(data)
    if n == 1:
        return MetricSummary(mean, 0.0, mean, mean, 1)
    std = float(data.std(ddof=1))
    if std == 0.0:
        return MetricSummary(mean, 0.0, mean, mean, n)
    low, high = stats.t.interval(confidence, df=n - 1, loc=mean, scale=std / math.sqrt(n))
    return MetricSummary(mean, std, float(low), float(high), n)


def _metric_values(runs: list[SimMetrics], name: str) -> list[float]:
    if name == "mean_latency_ms":
        return [m.mean_latency_ms for m in runs if m.mean_latency_ms is not None]
    if name == "alarms":
        return [m.alarm_count for m in runs]
    if name == "heartbeats":
        return [m.heartbeat_messages for m in runs]
    return [getattr(m, name) for m in runs]


def _run_metrics(scenario: SimScenario) -> SimMetrics:
    return run(scenario).metrics


def measure_policy(
    template: SimScenario,
    policy: str | None,
    replications: int,
    seed: int,
    workers: int = 1,
    confidence: float = 0.95,
) -> PolicyMeasurement:
    """
    Run `replications` independently seeded copies of `template`.

    Replication i uses seed `seed + i`, so one replication equals a single
    run with `seed`. Results do not depend on `workers`.

    Args:
        template: Scenario to replicate
        policy: "AND", "OR", "2oo3" (or any k-out-of-n form); None keeps the
            scenario's own r-code
        replications: Number of runs, at least 1
        seed: Seed of the first replication
        workers: Worker processes; 1 runs in-process

    Returns:
        Per-run metrics plus a summary per metric
    """
    if replications < 1:
        raise ValueError("replications must be at least 1")

    scenario = template.with_policy(policy) if policy else template
    label = policy or scenario.policy or "custom"
    seeded = [scenario.with_seed(seed + i) for i in range(replications)]

    logging.info(f"Measuring policy {label}: {replications} replications from seed {seed}, {workers} workers")
    if workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_metrics, seeded))
    else:
        runs = [_run_metrics(s) for s in seeded]

    measurement = PolicyMeasurement(label, seed, runs)
    for name in SUMMARY_FIELDS:
        measurement.summary[name] = summarize(_metric_values(runs, name), confidence)
    return measurement
