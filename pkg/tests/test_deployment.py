import pytest

from ariel_rwd.ariel.ast import ArielProgram
from ariel_rwd.ariel.deployment import DeploymentConfig, emit_config
from ariel_rwd.ariel.errors import ArielError
from ariel_rwd.ariel.parser import parse_source


@pytest.fixture()
def deployment(defs, listing):
    units = [parse_source(listing(n), defs) for n in ("config.ariel", "alarm.ariel", "logical.ariel")]
    return emit_config(ArielProgram.merge(*units))


def test_backbone_is_lowest_node(deployment):
    assert deployment.backbone_task == 1
    assert deployment.nodes == (1, 2, 3)


def test_watchdog_bindings(deployment):
    assert [w.watchdog_task for w in deployment.watchdogs] == [21, 22, 23]
    assert [w.node for w in deployment.watchdogs] == [1, 2, 3]
    for binding in deployment.watchdogs:
        assert binding.watched == (10,)
        assert binding.period_ms == 500
        assert binding.on_error == "WarnBackbone"


def test_placements_and_logicals(deployment):
    assert deployment.node_of(10) == 1
    assert deployment.node_of(40) == 1
    assert deployment.node_of(999) is None
    assert deployment.members_of(30) == (21, 22, 23)


def test_toml_round_trip(deployment):
    text = deployment.to_toml()
    assert DeploymentConfig.from_toml(text) == deployment
    assert deployment.to_toml() == text


def test_empty_program():
    config = emit_config(ArielProgram())
    assert config == DeploymentConfig()
    assert config.to_toml() == ""


def test_no_backbone_named_task(defs):
    program = parse_source("TASK 5 IS NODE 1, TASKID 5", defs)
    assert emit_config(program).backbone_task is None


def test_malformed_document():
    with pytest.raises(ArielError, match="malformed"):
        DeploymentConfig.from_toml("[[tasks]]\nid = 1\n")
    with pytest.raises(ArielError, match="not valid TOML"):
        DeploymentConfig.from_toml("[[tasks]\n")
