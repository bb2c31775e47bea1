"""
Deployment configuration: what the simulator needs to instantiate a program.

Serialized as TOML:

    [backbone]
    task = 1

    [[tasks]]
    id = 1
    node = 1
    taskid = 100
    name = "Backbone0"

    [[watchdogs]]
    task = 21
    node = 1
    watches = [10]
    period_ms = 500
    on_error = "WarnBackbone"

    [[logicals]]
    id = 30
    members = [21, 22, 23]

Empty sections are omitted, so an empty program serializes to an empty document.
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass

import tomli_w

from ariel_rwd.ariel.ast import ArielProgram, OnError
from ariel_rwd.ariel.errors import ArielError

BACKBONE_PREFIX = "Backbone"


@dataclass(frozen=True)
class TaskPlacement:
    task_id: int
    node: int
    local_taskid: int
    name: str | None = None


@dataclass(frozen=True)
class WatchdogBinding:
    watchdog_task: int
    node: int | None
    watched: tuple[int, ...]
    period_ms: int
    on_error: str = OnError.WARN_BACKBONE.value


@dataclass(frozen=True)
class LogicalGroup:
    logical_id: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class DeploymentConfig:
    tasks: tuple[TaskPlacement, ...] = ()
    watchdogs: tuple[WatchdogBinding, ...] = ()
    logicals: tuple[LogicalGroup, ...] = ()
    backbone_task: int | None = None

    def node_of(self, task_id: int) -> int | None:
        for task in self.tasks:
            if task.task_id == task_id:
                return task.node
        return None

    def members_of(self, logical_id: int) -> tuple[int, ...]:
        for logical in self.logicals:
            if logical.logical_id == logical_id:
                return logical.members
        return ()

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted({t.node for t in self.tasks}))

    # ------------------------------------------------------------ TOML

    def to_dict(self) -> dict:
        doc: dict = {}
        if self.backbone_task is not None:
            doc["backbone"] = {"task": self.backbone_task}
        if self.tasks:
            doc["tasks"] = []
            for t in self.tasks:
                entry = {"id": t.task_id, "node": t.node, "taskid": t.local_taskid}
                if t.name is not None:
                    entry["name"] = t.name
                doc["tasks"].append(entry)
        if self.watchdogs:
            doc["watchdogs"] = []
            for w in self.watchdogs:
                entry = {"task": w.watchdog_task}
                if w.node is not None:
                    entry["node"] = w.node
                entry.update({"watches": list(w.watched), "period_ms": w.period_ms, "on_error": w.on_error})
                doc["watchdogs"].append(entry)
        if self.logicals:
            doc["logicals"] = [{"id": lg.logical_id, "members": list(lg.members)} for lg in self.logicals]
        return doc

    def to_toml(self) -> str:
        return tomli_w.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "DeploymentConfig":
        try:
            tasks = tuple(
                TaskPlacement(int(t["id"]), int(t["node"]), int(t["taskid"]), t.get("name"))
                for t in doc.get("tasks", [])
            )
            watchdogs = tuple(
                WatchdogBinding(
                    int(w["task"]),
                    int(w["node"]) if "node" in w else None,
                    tuple(int(x) for x in w["watches"]),
                    int(w["period_ms"]),
                    str(w.get("on_error", OnError.WARN_BACKBONE.value)),
                )
                for w in doc.get("watchdogs", [])
            )
            logicals = tuple(
                LogicalGroup(int(lg["id"]), tuple(int(m) for m in lg["members"])) for lg in doc.get("logicals", [])
            )
            backbone = doc.get("backbone", {}).get("task")
        except (KeyError, TypeError, ValueError) as e:
            raise ArielError(f"malformed deployment document: {e}") from e
        return cls(tasks, watchdogs, logicals, int(backbone) if backbone is not None else None)

    @classmethod
    def from_toml(cls, text: str) -> "DeploymentConfig":
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ArielError(f"deployment is not valid TOML: {e}") from e
        return cls.from_dict(doc)


def _backbone_task(program: ArielProgram) -> int | None:
    candidates = [t for t in program.tasks if t.name is not None and t.name.startswith(BACKBONE_PREFIX)]
    if not candidates:
        return None
    return min(candidates, key=lambda t: (t.node, t.task_id)).task_id


def emit_config(program: ArielProgram) -> DeploymentConfig:
    """
    Derive the deployment the runtime consumes from a parsed program.

    Args:
        program: A parsed (and reference-checked) program

    Returns:
        Task placements, watchdog bindings and logical membership, in
        source order. The authoritative Backbone is the "Backbone*" task
        on the lowest-numbered node.
    """
    tasks = tuple(TaskPlacement(t.task_id, t.node, t.local_taskid, t.name) for t in program.tasks)

    watchdogs = []
    for w in program.watchdogs:
        decl = program.task(w.watchdog_task)
        watchdogs.append(
            WatchdogBinding(
                watchdog_task=w.watchdog_task,
                node=decl.node if decl is not None else None,
                watched=tuple(i.value for i in w.watched_idents),
                period_ms=w.heartbeat_period,
                on_error=w.on_error.value,
            )
        )

    logicals = tuple(LogicalGroup(lg.logical_id, lg.members) for lg in program.logicals)
    config = DeploymentConfig(tasks, tuple(watchdogs), logicals, _backbone_task(program))
    logging.debug(f"Deployment: {len(tasks)} placements, {len(watchdogs)} watchdogs, {len(logicals)} logicals")
    return config
