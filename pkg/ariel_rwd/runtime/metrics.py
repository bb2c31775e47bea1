"""
Metrics CSV output.
"""

from collections.abc import Iterable

from ariel_rwd.runtime.simulator import SimMetrics
from ariel_rwd.utils.file_utils import csv_text

METRICS_HEADER = (
    "policy",
    "seed",
    "alarms",
    "false_alarms",
    "mean_latency_ms",
    "useful_cycles",
    "heartbeats",
    "notifications",
)


def metrics_row(policy: str, seed: int, metrics: SimMetrics) -> list[object]:
    return [
        policy,
        seed,
        metrics.alarm_count,
        metrics.false_alarms,
        metrics.mean_latency_ms,
        metrics.useful_cycles,
        metrics.heartbeat_messages,
        metrics.notifications,
    ]


def metrics_csv(rows: Iterable[tuple[str, int, SimMetrics]]) -> str:
    """One CSV row per (policy, seed, metrics); runs without a detected fault leave mean_latency_ms empty."""
    return csv_text(METRICS_HEADER, (metrics_row(p, s, m) for p, s, m in rows))
