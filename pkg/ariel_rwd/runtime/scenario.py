"""
Simulation scenarios: deployment, r-code, timing, network delays and faults.

Scenario files are TOML documents (see docs/formats.md). Integer fields that
name entities or phases may be written as "{MACRO}" strings and are resolved
against the scenario's definitions file.
"""

from __future__ import annotations

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from enum import Enum
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ariel_rwd.ariel.ast import ArielProgram, Identifier, Scope
from ariel_rwd.ariel.compiler import Opcode, RCode, compile_recovery, policy_program
from ariel_rwd.ariel.definitions import load_definitions
from ariel_rwd.ariel.deployment import DeploymentConfig, emit_config
from ariel_rwd.ariel.parser import parse_source
from ariel_rwd.ariel.semantics import check_references
from ariel_rwd.config import Config
from ariel_rwd.runtime.errors import ScenarioError
from ariel_rwd.utils.file_utils import read_text


class FaultKind(str, Enum):
    CRASH = "crash"
    HANG = "hang"
    DELAY_HEARTBEATS = "delay_heartbeats"
    NODE_RESET = "node_reset"


class FaultInjection(BaseModel):
    """
    One injected fault.

    `target` is a task id, or a node id for `node_reset`. `extra_ms` is the
    added heartbeat delay of `delay_heartbeats`. `duration_ms` bounds a hang
    or a heartbeat delay; None means until the horizon.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    time_ms: float = Field(ge=0)
    kind: FaultKind
    target: int
    extra_ms: float = Field(default=0.0, ge=0)
    duration_ms: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_kind_fields(self) -> FaultInjection:
        if self.kind is FaultKind.DELAY_HEARTBEATS and self.extra_ms <= 0:
            raise ValueError("delay_heartbeats needs a positive extra_ms")
        if self.kind in (FaultKind.CRASH, FaultKind.NODE_RESET) and self.duration_ms is not None:
            raise ValueError(f"{self.kind.value} does not take a duration")
        return self

    @property
    def end_ms(self) -> float:
        return float("inf") if self.duration_ms is None else self.time_ms + self.duration_ms


class DelayModel(BaseModel):
    """Per-link delay: a constant, or exponential with the given mean."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant", "exponential"] = "constant"
    mean_ms: float = Field(default=0.0, ge=0)

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == "constant" or self.mean_ms == 0:
            return self.mean_ms
        return float(rng.exponential(self.mean_ms))


class SimScenario(BaseModel):
    """Everything one simulation run needs; immutable."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    name: str = "scenario"
    deployment: DeploymentConfig
    rcode: RCode = RCode()
    policy: str | None = None
    heartbeat_period_ms: float = Field(gt=0)
    timeout_ms: float = Field(gt=0)
    heartbeat_logical: int | None = None
    network_delay: DelayModel = DelayModel()
    faults: tuple[FaultInjection, ...] = ()
    horizon_ms: float = Field(gt=0)
    rng_seed: int = 0
    expired_phase: int = Field(default=1, ge=0)
    reboot_delay_ms: float = Field(default=0.0, ge=0)
    counter_persistent: bool = True
    policy_logical: int | None = None
    alarm_message: int | None = None
    alarm_task: int | None = None

    @model_validator(mode="after")
    def _check_fault_times(self) -> SimScenario:
        for fault in self.faults:
            if fault.time_ms > self.horizon_ms:
                raise ValueError(f"fault at {fault.time_ms} ms lies beyond the horizon {self.horizon_ms} ms")
        return self

    @property
    def clients(self) -> tuple[int, ...]:
        """Watched application tasks, in first-watched order."""
        seen: list[int] = []
        for w in self.deployment.watchdogs:
            for task in w.watched:
                if task not in seen:
                    seen.append(task)
        return tuple(seen)

    def members_of(self, logical_id: int) -> tuple[int, ...]:
        return self.deployment.members_of(logical_id)

    def with_seed(self, seed: int) -> SimScenario:
        return self.model_copy(update={"rng_seed": seed})

    def with_policy(self, policy: str) -> SimScenario:
        """
        Replace the recovery r-code with the voting clause for `policy`.

        Raises:
            ScenarioError: If the scenario does not name the voting logical,
                the alarm message or the alarm task
        """
        if self.policy_logical is None or self.alarm_message is None or self.alarm_task is None:
            raise ScenarioError("policy_logical, alarm_message and alarm_task are needed to generate a policy")
        members = self.members_of(self.policy_logical)
        if not members:
            raise ScenarioError(f"voting logical {self.policy_logical} has no members")
        try:
            program = policy_program(
                policy,
                logical=Identifier(None, self.policy_logical),
                members=[Identifier(None, m) for m in members],
                expired=Identifier(None, self.expired_phase),
                alarm=Identifier(None, self.alarm_message),
                alarm_task=Identifier(None, self.alarm_task),
            )
        except ValueError as e:
            raise ScenarioError(str(e)) from e
        return self.model_copy(update={"rcode": compile_recovery(program), "policy": policy})

    def validate_references(self) -> None:
        """
        Check that faults, r-code and heartbeat routing only name deployed entities.

        Raises:
            ScenarioError: On the first dangling reference
        """
        tasks = {t.task_id for t in self.deployment.tasks}
        logicals = {lg.logical_id for lg in self.deployment.logicals}
        nodes = set(self.deployment.nodes)

        if self.deployment.backbone_task is None:
            raise ScenarioError("deployment has no Backbone task")
        for w in self.deployment.watchdogs:
            if w.watchdog_task not in tasks:
                raise ScenarioError(f"watchdog {w.watchdog_task} is not a deployed task")
            for task in w.watched:
                if task not in tasks:
                    raise ScenarioError(f"watchdog {w.watchdog_task} watches undeployed task {task}")

        for fault in self.faults:
            if fault.kind is FaultKind.NODE_RESET:
                if fault.target not in nodes:
                    raise ScenarioError(f"node_reset targets unknown node {fault.target}")
            elif fault.target not in tasks:
                raise ScenarioError(f"{fault.kind.value} targets undeployed task {fault.target}")

        if self.heartbeat_logical is not None and self.heartbeat_logical not in logicals:
            raise ScenarioError(f"heartbeat logical {self.heartbeat_logical} is not deployed")

        for index, instruction in enumerate(self.rcode.instructions):
            op, args = instruction.op, instruction.operands
            if op in (Opcode.PUSH_PHASE, Opcode.ACT_REMOVE):
                known = tasks if Scope(args[0]) is Scope.TASK else logicals
                if args[1] not in known:
                    raise ScenarioError(f"r-code instruction {index} ({instruction}) names an undeployed entity")
            elif op is Opcode.COUNT_GE and args[0] not in logicals:
                raise ScenarioError(f"r-code instruction {index} ({instruction}) names an undeployed logical")
            elif op is Opcode.ACT_SEND and args[1] not in tasks:
                raise ScenarioError(f"r-code instruction {index} ({instruction}) sends to an undeployed task")


# ---------------------------------------------------------------- file schema

IntOrMacro = int | str


class ProgramSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sources: list[str] = []
    definitions: str | None = None
    deployment: str | None = None
    rcode: str | None = None
    policy: str | None = None

    @model_validator(mode="after")
    def _check_origin(self) -> ProgramSection:
        if self.sources and (self.deployment or self.rcode):
            raise ValueError("give either Ariel sources or deployment/rcode files, not both")
        if not self.sources and not self.deployment:
            raise ValueError("a scenario needs Ariel sources or a deployment file")
        return self


class FaultEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    time_ms: float
    kind: FaultKind
    target: IntOrMacro
    extra_ms: float = 0.0
    duration_ms: float | None = None


class ScenarioFile(BaseModel):
    """Schema of a scenario TOML document."""

    model_config = ConfigDict(extra="forbid")

    name: str | None = None
    seed: int = 0
    horizon_ms: float
    heartbeat_period_ms: float | None = None
    timeout_ms: float | None = None
    expired_phase: IntOrMacro | None = None
    heartbeat_logical: IntOrMacro | None = None
    policy_logical: IntOrMacro | None = None
    alarm_message: IntOrMacro | None = None
    alarm_task: IntOrMacro | None = None
    reboot_delay_ms: float | None = None
    counter_persistent: bool | None = None
    program: ProgramSection
    network: DelayModel = DelayModel()
    faults: list[FaultEntry] = []


def _resolve(value: IntOrMacro | None, definitions: dict[str, int], field: str) -> int | None:
    if value is None or isinstance(value, int):
        return value
    name = value.strip()
    if name.startswith("{") and name.endswith("}"):
        name = name[1:-1].strip()
    if name not in definitions:
        raise ScenarioError(f"{field}: unresolved macro '{name}'")
    return definitions[name]


def _load_program(sources: list[Path], definitions: dict[str, int]) -> ArielProgram:
    units = [parse_source(read_text(path), definitions, source_name=str(path)) for path in sources]
    program = ArielProgram.merge(*units)
    check_references(program)
    return program


def load_scenario(path: str | Path, config: Config | None = None) -> SimScenario:
    """
    Load and validate a scenario file.

    Relative paths inside the file are resolved against the file's folder.
    Missing timing values fall back to the watchdog period and the configured
    `simulation.timeout_factor`.

    Args:
        path: Scenario TOML file
        config: Application configuration (defaults if None)

    Returns:
        The validated scenario

    Raises:
        FileNotFoundError: If the scenario or a file it names doesn't exist
        ScenarioError: On invalid TOML, unresolved macros or dangling references
        pydantic.ValidationError: On schema violations
        ArielError: On errors in the referenced Ariel sources
    """
    path = Path(path)
    config = config or Config()
    base = path.parent

    logging.info(f"Loading scenario {path}")
    try:
        doc = tomllib.loads(read_text(path))
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"{path}: not valid TOML: {e}") from e

    entry = ScenarioFile.model_validate(doc)
    prog = entry.program
    definitions = load_definitions(base / prog.definitions) if prog.definitions else {}

    if prog.sources:
        program = _load_program([base / s for s in prog.sources], definitions)
        deployment = emit_config(program)
        rcode = compile_recovery(program)
    else:
        deployment = DeploymentConfig.from_toml(read_text(base / prog.deployment))
        rcode = RCode.loads(read_text(base / prog.rcode)) if prog.rcode else RCode()

    period = entry.heartbeat_period_ms
    if period is None:
        if not deployment.watchdogs:
            raise ScenarioError("heartbeat_period_ms is required when no watchdog is deployed")
        period = float(min(w.period_ms for w in deployment.watchdogs))
    timeout = entry.timeout_ms
    if timeout is None:
        timeout = float(config.get("simulation.timeout_factor", 2.0)) * period

    expired = _resolve(entry.expired_phase, definitions, "expired_phase")
    if expired is None:
        expired = definitions.get("EXPIRED", 1)

    faults = tuple(
        FaultInjection(
            time_ms=f.time_ms,
            kind=f.kind,
            target=_resolve(f.target, definitions, "faults.target"),
            extra_ms=f.extra_ms,
            duration_ms=f.duration_ms,
        )
        for f in entry.faults
    )

    reboot = entry.reboot_delay_ms
    if reboot is None:
        reboot = float(config.get("simulation.reboot_delay_ms", 0.0))
    persistent = entry.counter_persistent
    if persistent is None:
        persistent = bool(config.get("simulation.counter_persistent", True))

    scenario = SimScenario(
        name=entry.name or path.stem,
        deployment=deployment,
        rcode=rcode,
        heartbeat_period_ms=period,
        timeout_ms=timeout,
        heartbeat_logical=_resolve(entry.heartbeat_logical, definitions, "heartbeat_logical"),
        network_delay=entry.network,
        faults=faults,
        horizon_ms=entry.horizon_ms,
        rng_seed=entry.seed,
        expired_phase=expired,
        reboot_delay_ms=reboot,
        counter_persistent=persistent,
        policy_logical=_resolve(entry.policy_logical, definitions, "policy_logical"),
        alarm_message=_resolve(entry.alarm_message, definitions, "alarm_message"),
        alarm_task=_resolve(entry.alarm_task, definitions, "alarm_task"),
    )
    if prog.policy:
        scenario = scenario.with_policy(prog.policy)

    scenario.validate_references()
    logging.info(
        f"Scenario {scenario.name}: {len(deployment.tasks)} tasks, {len(deployment.watchdogs)} watchdogs, "
        f"{len(faults)} faults, horizon {scenario.horizon_ms} ms"
    )
    return scenario
