import math

import pytest

from ariel_rwd.runtime.measure import measure_policy, summarize
from ariel_rwd.runtime.metrics import METRICS_HEADER, metrics_csv
from ariel_rwd.runtime.scenario import load_scenario
from ariel_rwd.runtime.simulator import run

from conftest import SCENARIOS


@pytest.fixture()
def template():
    return load_scenario(SCENARIOS / "heartbeat_delay.toml")


def test_single_replication_equals_single_run(template):
    measurement = measure_policy(template, "OR", replications=1, seed=42)
    assert measurement.runs == [run(template.with_policy("OR").with_seed(42)).metrics]
    assert measurement.rows()[0][:2] == ("OR", 42)


def test_replication_seeds_are_consecutive(template):
    measurement = measure_policy(template, None, replications=3, seed=7)
    assert measurement.policy == "2oo3"
    assert [seed for _, seed, _ in measurement.rows()] == [7, 8, 9]
    assert measurement.runs[2] == run(template.with_seed(9)).metrics


def test_workers_do_not_change_results(template):
    sequential = measure_policy(template, "AND", replications=4, seed=3)
    parallel = measure_policy(template, "AND", replications=4, seed=3, workers=2)
    assert parallel.runs == sequential.runs
    assert parallel.summary == sequential.summary


def test_zero_replications(template):
    with pytest.raises(ValueError):
        measure_policy(template, "OR", replications=0, seed=0)


def test_summarize():
    assert summarize([]) is None
    assert summarize([4.0]).ci_low == summarize([4.0]).ci_high == 4.0

    summary = summarize([1.0, 2.0, 3.0])
    assert summary.mean == 2.0
    assert summary.std == pytest.approx(1.0)
    assert summary.ci_low < 2.0 < summary.ci_high
    assert summary.ci_high - 2.0 == pytest.approx(2.0 - summary.ci_low)


def test_metrics_csv(template):
    measurement = measure_policy(template, "OR", replications=2, seed=0)
    lines = metrics_csv(measurement.rows()).splitlines()
    assert lines[0] == ",".join(METRICS_HEADER)
    assert len(lines) == 3
    assert lines[1].startswith("OR,0,")
    # no application fault, so no latency sample
    assert lines[1].split(",")[4] == ""


def test_latency_summary_skips_runs_without_detection(template):
    measurement = measure_policy(template, "OR", replications=2, seed=0)
    assert measurement.summary["mean_latency_ms"] is None
    assert not math.isnan(measurement.summary["alarms"].mean)
