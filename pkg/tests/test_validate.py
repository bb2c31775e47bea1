import math

import pytest

from ariel_rwd.rwd.builder import FAMILIES
from ariel_rwd.rwd.params import RwdParams
from ariel_rwd.rwd.validate import VALIDATION_HEADER, validate_model, validation_csv, z_score


@pytest.mark.parametrize(
    "analytic, mean, stderr, expected",
    [
        (1.0, 1.2, 0.1, 2.0),
        (1.0, 0.7, 0.1, -3.0),
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.5, 0.0, math.inf),
        (0.5, 0.0, 0.0, -math.inf),
    ],
)
def test_z_score(analytic, mean, stderr, expected):
    assert z_score(analytic, mean, stderr) == pytest.approx(expected)


def test_z_score_without_spread_estimate():
    assert math.isnan(z_score(1.0, 1.0, math.nan))


AGREEMENT_SEEDS = (0, 1000, 2000)


@pytest.mark.parametrize("policy", ["AND", "OR"])
def test_monte_carlo_agrees_with_analysis(policy):
    params = RwdParams(policy=policy, rate_timeout=1.0)
    runs = [validate_model(params, horizon=1000.0, replications=20, seed=seed, warmup=50.0) for seed in AGREEMENT_SEEDS]

    for rows in runs:
        assert [r.transition for r in rows] == list(FAMILIES)
        assert all(r.policy == policy for r in rows)

    # a lone miss at 3 standard errors in one seed block is chance;
    # a family outside in most blocks is a real disagreement
    for i, family in enumerate(FAMILIES):
        verdicts = [rows[i].agrees for rows in runs]
        z_scores = [round(rows[i].z, 2) for rows in runs]
        assert sum(verdicts) >= 2, (family, z_scores)
        assert abs(sum(rows[i].z for rows in runs)) / math.sqrt(len(runs)) <= 4.0, (family, z_scores)


def test_warmup_is_forwarded():
    late = validate_model(RwdParams(), horizon=60.0, replications=2, seed=0, warmup=30.0)
    full = validate_model(RwdParams(), horizon=60.0, replications=2, seed=0)
    assert [r.analytic for r in late] == [r.analytic for r in full]
    assert [r.mc_mean for r in late] != [r.mc_mean for r in full]
    with pytest.raises(ValueError):
        validate_model(RwdParams(), horizon=60.0, replications=2, seed=0, warmup=60.0)


def test_single_replication_never_agrees():
    rows = validate_model(RwdParams(), horizon=50.0, replications=1, seed=0)
    assert len(rows) == 10
    assert not any(r.agrees for r in rows)


def test_validation_csv():
    rows = validate_model(RwdParams(policy="AND"), horizon=50.0, replications=3, seed=0)
    lines = validation_csv(rows).splitlines()
    assert lines[0] == ",".join(VALIDATION_HEADER)
    assert len(lines) == 11
    assert lines[1].startswith("AND,activity,")
    assert lines[1].split(",")[-1] in ("true", "false")
