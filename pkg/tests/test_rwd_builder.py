import pytest
from pydantic import ValidationError

from ariel_rwd.config import Config
from ariel_rwd.gspn.analysis import solve
from ariel_rwd.gspn.invariants import p_invariants
from ariel_rwd.gspn.net import Server
from ariel_rwd.gspn.netfile import dumps_net
from ariel_rwd.gspn.query import always_zero, exists_enabled, never_enabled_from
from ariel_rwd.gspn.reachability import StateClass, reachability
from ariel_rwd.rwd.builder import FAMILIES, build, ok_transitions
from ariel_rwd.rwd.params import RwdParams


@pytest.fixture()
def or_model():
    return build(RwdParams(policy="OR"))


@pytest.fixture()
def and_model():
    return build(RwdParams(policy="AND"))


def test_or_model_never_rests_with_an_expired_watchdog(or_model):
    graph = reachability(or_model.net)
    assert always_zero(graph, "Wd2", state_class="tangible").holds
    assert len(graph.states_of(StateClass.TANGIBLE)) == 9


def test_or_model_alarms_with_two_faulty_watchdogs(or_model):
    graph = reachability(or_model.net)
    witness = exists_enabled(graph, ["delayed", "faulty"], "Wd3", 2)
    assert witness.holds
    assert witness.marking["Wd3"] >= 2
    assert witness.marking["Wd2"] >= 1


def test_and_model_rests_with_two_expired_watchdogs(and_model):
    solution = solve(and_model.net)
    wd2 = and_model.net.place_index["Wd2"]
    probability = sum(p for s, p in solution.state_probabilities() if solution.graph.markings[s][wd2] == 2)
    assert probability > 0


def test_and_model_is_silenced_by_a_faulty_watchdog(and_model):
    net = and_model.net
    formatted = [inv.format(net) for inv in p_invariants(net)]
    assert "1*Wd1 + 1*Wd2 + 1*Wd3 = 3" in formatted
    assert "1*Ap1 + 1*ApK + 1*Ap2 + 1*Rst = 1" in formatted

    graph = reachability(net)
    assert never_enabled_from(graph, ["delayed", "faulty"], "Wd3", 1).holds


def test_invariants_cover_every_place(or_model):
    supports = [inv.support(or_model.net) for inv in p_invariants(or_model.net)]
    assert set(supports) == {frozenset({"Ap1", "ApK", "Ap2", "Rst"}), frozenset({"Wd1", "Wd2", "Wd3"})}


@pytest.mark.parametrize("policy", ["AND", "OR", "2oo3"])
def test_steady_state_matches_dense_oracle(policy, oracle):
    model = build(RwdParams(policy=policy))
    solution = solve(model.net)
    expected = oracle(model.net)
    assert len(expected) == len(solution.pi)
    for state, p in solution.state_probabilities():
        assert p == pytest.approx(expected[solution.graph.markings[state]], abs=1e-9)


def test_single_replica_policies_coincide():
    nets = {dumps_net(build(RwdParams(n_replicas=1, policy=p)).net) for p in ("AND", "OR", "1oo1")}
    assert len(nets) == 1


def test_build_is_deterministic():
    params = RwdParams(policy="2oo3", rate_timeout=0.5)
    assert dumps_net(build(params).net) == dumps_net(build(params).net)


def test_ok_family_size():
    assert len(ok_transitions(3, 1)) == 4
    assert len(ok_transitions(3, 3)) == 9
    assert ok_transitions(2, 2) == [
        ("ok_0_0", 0, 0), ("ok_1_0", 1, 0), ("ok_2_0", 2, 0), ("ok_0_1", 0, 1), ("ok_1_1", 1, 1)
    ]


def test_families(and_model):
    assert tuple(and_model.families) == FAMILIES
    assert and_model.family_of("ok_1_2") == "ok"
    assert and_model.family_of("drain_faulty") == "drain"
    with pytest.raises(KeyError):
        and_model.family_of("teleport")
    names = sorted(t for members in and_model.families.values() for t in members)
    assert names == sorted(t.name for t in and_model.net.transitions)
    assert set(and_model.role_map["places"]) == {p.name for p in and_model.net.places}


def test_family_throughputs_sum_members(and_model):
    flows = {t.name: 1.0 for t in and_model.net.transitions}
    grouped = and_model.family_throughputs(flows)
    assert grouped["ok"] == 9.0
    assert grouped["drain"] == 2.0
    assert grouped["cycle"] == 1.0


def test_single_server_timeout():
    model = build(RwdParams(timeout_server=Server.SINGLE))
    assert model.net.transition("timeout").kind.server is Server.SINGLE


@pytest.mark.parametrize("policy, canonical, threshold", [("or", "OR", 1), (" And ", "AND", 3), ("2OO3", "2oo3", 2), ("2oo", "2oo3", 2)])
def test_policy_spelling(policy, canonical, threshold):
    params = RwdParams(policy=policy)
    assert params.policy == canonical
    assert params.threshold == threshold


@pytest.mark.parametrize("values", [{"policy": "4oo3"}, {"policy": "MAJORITY"}, {"rate_fault": 0.0}, {"n_replicas": 0}])
def test_invalid_params(values):
    with pytest.raises(ValidationError):
        RwdParams(**values)


def test_params_are_immutable():
    params = RwdParams()
    with pytest.raises(ValidationError):
        params.rate_timeout = 2.0
    assert params.with_timeout(2.0).rate_timeout == 2.0
    assert params.with_policy("AND").policy == "AND"
    assert params.rate_timeout == 1.0


def test_params_from_config(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("[rwd]\nn_replicas = 4\nrate_cycle = 3.0\n", encoding="utf-8")
    params = RwdParams.from_config(Config(str(path)), policy="3oo4", rate_timeout=None)
    assert (params.n_replicas, params.rate_cycle, params.policy, params.rate_timeout) == (4, 3.0, "3oo4", 1.0)
