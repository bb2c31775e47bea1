"""
Cross-check of analytic throughputs against the Monte Carlo token game.
"""

import logging
import math
from dataclasses import dataclass

from ariel_rwd.gspn.analysis import SolverSettings, solve
from ariel_rwd.rwd.builder import build
from ariel_rwd.rwd.montecarlo import group_estimate, simulate_net
from ariel_rwd.rwd.params import RwdParams
from ariel_rwd.utils.file_utils import csv_text

VALIDATION_HEADER = ("policy", "transition", "analytic", "mc_mean", "mc_se", "z", "agrees")


@dataclass(frozen=True)
class ValidationRow:
    policy: str
    transition: str
    analytic: float
    mc_mean: float
    mc_se: float
    z: float
    agrees: bool

    def cells(self) -> list[object]:
        return [self.policy, self.transition, self.analytic, self.mc_mean, self.mc_se, self.z, self.agrees]


def z_score(analytic: float, mean: float, stderr: float) -> float:
    """Distance in standard errors; exact agreement with zero spread is 0."""
    diff = mean - analytic
    if math.isnan(stderr):
        return math.nan
    if stderr == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return diff / stderr


def validate_model(
    params: RwdParams,
    horizon: float,
    replications: int,
    seed: int,
    settings: SolverSettings | None = None,
    workers: int = 1,
    sigmas: float = 3.0,
    warmup: float = 0.0,
) -> list[ValidationRow]:
    """
    Compare analytic and simulated throughputs per transition family.

    Each replication discards its first `warmup` time units before counting.

    Returns:
        One row per family, in family order
    """
    model = build(params)
    solution = solve(model.net, settings)
    analytic = model.family_throughputs(solution.throughputs)

    estimate, table = simulate_net(model.net, horizon, replications, seed, workers, warmup)
    grouped = group_estimate(estimate, table, model.families).as_dict()

    rows = []
    for family, expected in analytic.items():
        mean, stderr = grouped[family]
        z = z_score(expected, mean, stderr)
        rows.append(ValidationRow(params.policy, family, expected, mean, stderr, z, abs(z) <= sigmas))

    disagreeing = [r.transition for r in rows if not r.agrees]
    if disagreeing:
        logging.warning(f"Policy {params.policy}: Monte Carlo disagrees on {', '.join(disagreeing)}")
    else:
        logging.info(f"Policy {params.policy}: Monte Carlo agrees on all {len(rows)} families")
    return rows


def validation_csv(rows: list[ValidationRow]) -> str:
    return csv_text(VALIDATION_HEADER, [row.cells() for row in rows])
