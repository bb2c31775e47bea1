"""
Throughput sweeps over the timeout rate, one analytic solve per (policy, rate).
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ariel_rwd.gspn.analysis import SolverSettings, solve
from ariel_rwd.gspn.errors import AnalysisError
from ariel_rwd.gspn.netfile import save_net
from ariel_rwd.rwd.builder import build
from ariel_rwd.rwd.params import RwdParams
from ariel_rwd.utils.file_utils import csv_text, format_number

SWEEP_FAMILIES = ("activity", "ok", "timeout", "delayed", "faulty", "cycle")
SWEEP_HEADER = ("policy", "timeout_rate") + tuple(f"thr_{f}" for f in SWEEP_FAMILIES)
FAILED = "failed"


@dataclass(frozen=True)
class SweepRow:
    policy: str
    timeout_rate: float
    throughputs: dict[str, float] | None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.throughputs is None

    def cells(self) -> list[object]:
        if self.throughputs is None:
            return [self.policy, self.timeout_rate] + [FAILED] * len(SWEEP_FAMILIES)
        return [self.policy, self.timeout_rate] + [self.throughputs[f] for f in SWEEP_FAMILIES]


def sweep_point(params: RwdParams, settings: SolverSettings) -> SweepRow:
    """Solve one model; analysis errors mark the row failed."""
    model = build(params)
    try:
        solution = solve(model.net, settings)
    except AnalysisError as e:
        logging.warning(f"Sweep point policy={params.policy} rate={params.rate_timeout} failed: {e}")
        return SweepRow(params.policy, params.rate_timeout, None, str(e))
    return SweepRow(params.policy, params.rate_timeout, model.family_throughputs(solution.throughputs))


def _sweep_job(job: tuple[RwdParams, SolverSettings]) -> SweepRow:
    return sweep_point(*job)


def sweep(
    template: RwdParams,
    timeout_rates: list[float],
    policies: list[str] | None = None,
    settings: SolverSettings | None = None,
    workers: int = 1,
    nets_dir: str | Path | None = None,
) -> list[SweepRow]:
    """
    Solve every (policy, rate) pair.

    Rows come out ordered by policy (as given) then by rate (as given),
    whatever the number of workers.

    Args:
        template: Parameters other than policy and timeout rate
        timeout_rates: Rates to sweep, each positive
        policies: Policies to sweep; defaults to the template's
        settings: Solver settings
        workers: Worker processes
        nets_dir: When set, every built net is written there as a net file

    Raises:
        ValueError: On a non-positive rate or an invalid policy
    """
    for rate in timeout_rates:
        if not rate > 0:
            raise ValueError(f"timeout rates must be positive, got {rate}")
    settings = settings or SolverSettings()
    policies = policies or [template.policy]

    points = [template.with_policy(p).with_timeout(float(r)) for p in policies for r in timeout_rates]
    logging.info(f"Sweeping {len(policies)} policies x {len(timeout_rates)} rates")

    if nets_dir is not None:
        for params in points:
            save_net(build(params).net, Path(nets_dir) / f"rwd_{params.policy}_{format_number(params.rate_timeout)}.toml")

    jobs = [(p, settings) for p in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(job) for job in jobs]

    failed = sum(1 for row in rows if row.failed)
    if failed:
        logging.warning(f"{failed} of {len(rows)} sweep rows failed")
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    return csv_text(SWEEP_HEADER, [row.cells() for row in rows])


def gnuplot_data(rows: list[SweepRow]) -> str:
    """
    One data block per policy, blocks separated by two blank lines so that
    gnuplot's `index` selects a policy. Failed rows are left out.
    """
    blocks: list[str] = []
    order: list[str] = []
    for row in rows:
        if row.policy not in order:
            order.append(row.policy)

    for policy in order:
        lines = [f"# policy {policy}", "# " + " ".join(SWEEP_HEADER[1:])]
        for row in rows:
            if row.policy == policy and not row.failed:
                lines.append(" ".join(format_number(c) for c in row.cells()[1:]))
        blocks.append("\n".join(lines) + "\n")
    return "\n\n".join(blocks)
