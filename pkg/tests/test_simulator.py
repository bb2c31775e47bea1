import itertools

import pytest

from ariel_rwd.runtime.measure import measure_policy
from ariel_rwd.runtime.scenario import DelayModel, FaultInjection, FaultKind, load_scenario
from ariel_rwd.runtime.simulator import run
from ariel_rwd.runtime.watchdog import WatchdogState

from conftest import SCENARIOS

CLIENT, W1, W2, W3 = 10, 21, 22, 23
POLICIES = ("OR", "2oo3", "AND")


def _notify_times(result, watchdog):
    return [e.time for e in result.trace if e.kind == "notify" and e.details.startswith(f"watchdog={watchdog} ")]


def _crash(time_ms, target):
    return FaultInjection(time_ms=time_ms, kind=FaultKind.CRASH, target=target)


def _alarm_times(scenario):
    return [t for t, _ in run(scenario).metrics.alarms]


def _voting_scenario(*faults):
    """Client crash at 5 s with short constant delays; the voting clause comes from `with_policy`."""
    template = load_scenario(SCENARIOS / "heartbeat_delay.toml")
    return template.model_copy(
        update={
            "timeout_ms": 1000.0,
            "network_delay": DelayModel(kind="constant", mean_ms=2.0),
            "faults": faults + (_crash(5000.0, CLIENT),),
        }
    )


def test_no_fault_run():
    metrics = run(load_scenario(SCENARIOS / "no_fault.toml")).metrics
    assert metrics.alarm_count == 0
    assert metrics.false_alarms == 0
    assert metrics.useful_cycles == 40
    assert metrics.heartbeat_messages == 120
    assert metrics.mean_latency_ms is None


def test_crashed_watchdog_silences_and_voting():
    result = run(load_scenario(SCENARIOS / "watchdog_crash_and.toml"))
    assert result.metrics.alarm_count == 0
    assert result.metrics.missed_faults == 1
    assert result.metrics.notifications > 0
    assert _notify_times(result, W1) == []


def test_or_voting_survives_two_watchdog_crashes():
    scenario = load_scenario(SCENARIOS / "client_crash_or.toml")
    scenario = scenario.model_copy(update={"faults": (_crash(1000.0, W1), _crash(1200.0, W2)) + scenario.faults})

    metrics = run(scenario).metrics
    assert metrics.alarm_count > 0
    assert metrics.false_alarms == 0
    assert metrics.missed_faults == 0
    assert 0 < metrics.detection_latency[0] <= scenario.timeout_ms + 10.0
    assert min(t for t, _ in metrics.alarms) > 5000.0


def test_or_alarm_latency():
    metrics = run(load_scenario(SCENARIOS / "client_crash_or.toml")).metrics
    # W1 shares the client's node and the Backbone's: last heartbeat at 4500, timeout 1000
    assert metrics.detection_latency == [pytest.approx(500.0)]


def test_false_alarm_ordering_over_seeded_runs():
    template = load_scenario(SCENARIOS / "heartbeat_delay.toml")
    results = {p: measure_policy(template, p, replications=50, seed=100) for p in POLICIES}

    for or_run, two_run, and_run in zip(*(results[p].runs for p in POLICIES)):
        assert or_run.false_alarms >= two_run.false_alarms >= and_run.false_alarms
        assert or_run.notifications == two_run.notifications == and_run.notifications

    totals = {p: sum(m.false_alarms for m in results[p].runs) for p in results}
    assert totals["OR"] >= totals["2oo3"] >= totals["AND"]
    assert totals["OR"] > 0


@pytest.mark.parametrize("persistent, expected", [(True, [1000.0, 2000.0, 3000.0, 4000.0]), (False, [1000.0, 2500.0, 3500.0])])
def test_node_reset_counter(persistent, expected):
    scenario = load_scenario(SCENARIOS / "node_reset.toml").model_copy(update={"counter_persistent": persistent})
    result = run(scenario)
    assert _notify_times(result, W1) == expected
    assert _notify_times(result, 23) == [1000.0, 2000.0, 3000.0, 4000.0]


def test_node_reset_with_reboot_delay_drops_notifications():
    scenario = load_scenario(SCENARIOS / "node_reset.toml").model_copy(update={"reboot_delay_ms": 1000.0})
    result = run(scenario)
    assert any(e.kind == "bb_drop" for e in result.trace)
    assert not any(e.kind == "alarm" and 1500.0 <= e.time < 2500.0 for e in result.trace)


def test_hang_is_a_temporary_fault():
    scenario = load_scenario(SCENARIOS / "client_crash_or.toml")
    hang = FaultInjection(time_ms=2000.0, kind=FaultKind.HANG, target=CLIENT, duration_ms=900.0)
    result = run(scenario.model_copy(update={"faults": (hang,)}))

    assert result.metrics.alarm_count > 0
    assert result.metrics.false_alarms == 0
    assert result.metrics.missed_faults == 0
    assert any(e.kind == "resume" for e in result.trace)


@pytest.mark.parametrize("crash_ms", [5000.0, 5333.0, 6125.0])
def test_shorter_period_lowers_latency_and_raises_traffic(crash_ms):
    template = load_scenario(SCENARIOS / "client_crash_or.toml")
    latencies, messages = [], []
    for period in (1000.0, 500.0, 250.0, 125.0):
        scenario = template.model_copy(
            update={
                "heartbeat_period_ms": period,
                "timeout_ms": 2 * period,
                "network_delay": DelayModel(),
                "faults": (_crash(crash_ms, CLIENT),),
            }
        )
        metrics = run(scenario).metrics
        latencies.append(metrics.mean_latency_ms)
        messages.append(metrics.heartbeat_messages)

    assert all(later <= earlier for earlier, later in zip(latencies, latencies[1:]))
    assert all(later >= earlier for earlier, later in zip(messages, messages[1:]))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_watchdog_needs_every_watched_heartbeat(k):
    watched = frozenset(range(k))
    for size in range(k + 1):
        for subset in itertools.combinations(sorted(watched), size):
            state = WatchdogState(99, watched, timeout=10.0)
            state.arm(0.0)
            restarted = [state.receive(sender, 1.0) for sender in subset]
            assert any(restarted) == (set(subset) == watched)
            assert (state.deadline == 10.0) == (set(subset) != watched)


@pytest.mark.parametrize("name", ["no_fault.toml", "heartbeat_delay.toml", "node_reset.toml"])
def test_runs_are_reproducible(name):
    scenario = load_scenario(SCENARIOS / name)
    first, second = run(scenario), run(scenario)
    assert first.trace_text() == second.trace_text()
    assert first.metrics == second.metrics


def test_seed_changes_random_delays():
    scenario = load_scenario(SCENARIOS / "heartbeat_delay.toml")
    assert run(scenario.with_seed(1)).trace_text() != run(scenario.with_seed(2)).trace_text()


@pytest.mark.parametrize("seed", range(20))
def test_or_alarms_include_every_other_policy(seed):
    template = load_scenario(SCENARIOS / "heartbeat_delay.toml").with_seed(seed)
    alarms = {p: _alarm_times(template.with_policy(p)) for p in POLICIES}

    assert set(alarms["AND"]) <= set(alarms["OR"])
    assert set(alarms["2oo3"]) <= set(alarms["OR"])

    # REMOVE clears the logical after each vote, so 2oo3 need not alarm at the
    # AND timestamps; it does alarm at least once between consecutive AND alarms
    previous = 0.0
    for at in alarms["AND"]:
        assert any(previous < t <= at for t in alarms["2oo3"]), (previous, at)
        previous = at


def test_heartbeats_skip_dead_watchdogs():
    scenario = load_scenario(SCENARIOS / "client_crash_or.toml")
    result = run(scenario.model_copy(update={"faults": (_crash(1000.0, W2),) + scenario.faults}))

    assert not any(e.kind == "hb_drop" for e in result.trace)
    late = [e for e in result.trace if e.kind == "hb_recv" and e.details.startswith(f"watchdog={W2} ") and e.time >= 1000.0]
    assert late == []
    assert result.metrics.heartbeat_messages == 3 * result.metrics.useful_cycles
    assert result.metrics.missed_faults == 0


def test_colocated_watchdog_detects_sooner():
    template = load_scenario(SCENARIOS / "client_crash_or.toml").model_copy(
        update={"network_delay": DelayModel(kind="constant", mean_ms=50.0)}
    )

    def latency(alone):
        others = tuple(_crash(0.0, w) for w in (W1, W2, W3) if w != alone)
        metrics = run(template.model_copy(update={"faults": others + template.faults})).metrics
        assert metrics.missed_faults == 0
        return metrics.detection_latency[0]

    # W1 shares the client's node and the Backbone's, W2 is one hop away both ways
    assert latency(W1) == pytest.approx(500.0)
    assert latency(W2) == pytest.approx(600.0)


@pytest.mark.parametrize("policy", ["OR", "2oo3"])
def test_single_watchdog_crash_keeps_detection(policy):
    intact = run(_voting_scenario().with_policy(policy)).metrics
    degraded = run(_voting_scenario(_crash(1000.0, W2)).with_policy(policy)).metrics

    for metrics in (intact, degraded):
        assert metrics.alarm_count > 0
        assert metrics.false_alarms == 0
        assert metrics.missed_faults == 0
    assert degraded.detection_latency == intact.detection_latency
