import pytest
from pydantic import ValidationError

from ariel_rwd.ariel.compiler import Opcode
from ariel_rwd.config import Config
from ariel_rwd.runtime.errors import ScenarioError
from ariel_rwd.runtime.scenario import FaultInjection, FaultKind, load_scenario

from conftest import ARIEL, SCENARIOS

SOURCES = ", ".join(f'"{ARIEL / n}"' for n in ("config.ariel", "logical.ariel", "alarm.ariel", "or_strategy.ariel"))


def _write(tmp_path, body: str, program: str | None = None):
    program = program or f'sources = [{SOURCES}]\ndefinitions = "{ARIEL / "watchdogs.defs"}"\n'
    path = tmp_path / "scenario.toml"
    path.write_text(f"{body}\n[program]\n{program}", encoding="utf-8")
    return path


def test_sample_scenario_resolves_macros():
    scenario = load_scenario(SCENARIOS / "client_crash_or.toml")
    assert scenario.name == "client_crash_or"
    assert scenario.heartbeat_logical == 30
    assert scenario.heartbeat_period_ms == 500.0
    assert scenario.timeout_ms == 1000.0
    assert scenario.expired_phase == 2
    assert scenario.faults == (FaultInjection(time_ms=5000.0, kind=FaultKind.CRASH, target=10),)
    assert scenario.clients == (10,)
    assert scenario.deployment.backbone_task == 1
    assert scenario.rcode.clause_count == 1


def test_generated_policy_replaces_rcode():
    scenario = load_scenario(SCENARIOS / "heartbeat_delay.toml")
    assert scenario.policy == "2oo3"
    assert [i.op for i in scenario.rcode.instructions][0] is Opcode.COUNT_GE

    and_version = scenario.with_policy("AND")
    assert and_version.policy == "AND"
    assert Opcode.COUNT_GE not in [i.op for i in and_version.rcode.instructions]


def test_timeout_defaults_to_configured_factor(tmp_path):
    path = _write(tmp_path, "horizon_ms = 2000.0")
    assert load_scenario(path).timeout_ms == 1000.0

    config_file = tmp_path / "config.toml"
    config_file.write_text("[simulation]\ntimeout_factor = 3.0\n", encoding="utf-8")
    assert load_scenario(path, Config(str(config_file))).timeout_ms == 1500.0


def test_policy_without_alarm_target(tmp_path):
    path = _write(tmp_path, "horizon_ms = 2000.0")
    with pytest.raises(ScenarioError, match="alarm_task"):
        load_scenario(path).with_policy("OR")


def test_unresolved_scenario_macro(tmp_path):
    path = _write(tmp_path, 'horizon_ms = 2000.0\nheartbeat_logical = "{NOPE}"')
    with pytest.raises(ScenarioError, match="NOPE"):
        load_scenario(path)


def test_fault_on_unknown_task(tmp_path):
    path = _write(tmp_path, 'horizon_ms = 2000.0\n[[faults]]\ntime_ms = 10.0\nkind = "crash"\ntarget = 77')
    with pytest.raises(ScenarioError, match="undeployed task 77"):
        load_scenario(path)


def test_fault_beyond_horizon(tmp_path):
    path = _write(tmp_path, 'horizon_ms = 2000.0\n[[faults]]\ntime_ms = 3000.0\nkind = "crash"\ntarget = 10')
    with pytest.raises(ValidationError, match="beyond the horizon"):
        load_scenario(path)


def test_unknown_fault_kind(tmp_path):
    path = _write(tmp_path, 'horizon_ms = 2000.0\n[[faults]]\ntime_ms = 1.0\nkind = "melt"\ntarget = 10')
    with pytest.raises(ValidationError):
        load_scenario(path)


def test_delay_fault_needs_extra(tmp_path):
    path = _write(tmp_path, 'horizon_ms = 2000.0\n[[faults]]\ntime_ms = 1.0\nkind = "delay_heartbeats"\ntarget = 10')
    with pytest.raises(ValidationError, match="extra_ms"):
        load_scenario(path)


def test_sources_and_deployment_are_exclusive(tmp_path):
    path = _write(tmp_path, "horizon_ms = 2000.0", f'sources = [{SOURCES}]\ndeployment = "x.toml"\n')
    with pytest.raises(ValidationError, match="not both"):
        load_scenario(path)


def test_invalid_toml(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("horizon_ms = = 1\n", encoding="utf-8")
    with pytest.raises(ScenarioError, match="not valid TOML"):
        load_scenario(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_scenario(tmp_path / "absent.toml")


def test_compiled_files_as_program(tmp_path):
    scenario = load_scenario(SCENARIOS / "client_crash_or.toml")
    (tmp_path / "net.deployment.toml").write_text(scenario.deployment.to_toml(), encoding="utf-8")
    (tmp_path / "net.rcode").write_text(scenario.rcode.dumps(), encoding="utf-8")
    path = _write(
        tmp_path,
        "horizon_ms = 10000.0\ntimeout_ms = 1000.0\nheartbeat_logical = 30\nexpired_phase = 2",
        'deployment = "net.deployment.toml"\nrcode = "net.rcode"\n',
    )
    loaded = load_scenario(path)
    assert loaded.deployment == scenario.deployment
    assert loaded.rcode == scenario.rcode
