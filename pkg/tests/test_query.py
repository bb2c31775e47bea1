import pytest

from ariel_rwd.gspn.errors import NetError
from ariel_rwd.gspn.net import NetBuilder
from ariel_rwd.gspn.netfile import load_net
from ariel_rwd.gspn.query import always_zero, exists_enabled, never_enabled_from, query
from ariel_rwd.gspn.reachability import reachability

from conftest import NETS


@pytest.fixture()
def graph():
    return reachability(load_net(NETS / "two_state.toml"))


@pytest.fixture()
def staged():
    """Counter that fills up to two tokens, then an immediate flush empties it."""
    net = (
        NetBuilder()
        .place("Idle", 1).place("Count")
        .timed("tick", 1.0).input("Idle", "tick").output("tick", "Idle").output("tick", "Count").inhibitor("Count", "tick", 3)
        .immediate("flush").input("Count", "flush", 3)
        .timed("drain", 1.0).input("Count", "drain")
        .build()
    )
    return reachability(net)


def test_always_zero_counterexample(graph):
    result = always_zero(graph, "Down")
    assert not result.holds
    assert result.state == 1
    assert result.marking == {"Up": 0, "Down": 1}


def test_exists_enabled_witness(graph):
    result = exists_enabled(graph, ["repair"], "Down", 1)
    assert result.holds
    assert result.marking["Down"] == 1
    assert not exists_enabled(graph, ["repair"], "Up", 1).holds


def test_state_class_filter(staged):
    assert always_zero(staged, "Count", state_class="tangible").holds is False
    vanishing = query(staged, lambda m, enabled: m["Count"] == 3, mode="always", state_class="vanishing")
    assert vanishing.holds
    assert not query(staged, lambda m, enabled: m["Count"] < 3, mode="always", state_class="all").holds


def test_never_enabled_from(staged):
    assert never_enabled_from(staged, ["tick"], "Count", 3).holds
    assert never_enabled_from(staged, ["tick"], "Count", 2).holds is False
    result = never_enabled_from(staged, ["flush"], "Count", 4)
    assert result.holds
    assert never_enabled_from(staged, ["flush"], "Count", 1).holds is False


def test_unknown_names(graph):
    with pytest.raises(NetError, match="unknown place"):
        always_zero(graph, "Sideways")
    with pytest.raises(NetError, match="unknown transition"):
        exists_enabled(graph, ["teleport"], "Up", 1)


def test_unknown_mode(graph):
    with pytest.raises(ValueError):
        query(graph, lambda m, e: True, mode="sometimes")
