"""
Discrete-event simulator of the watchdog / Backbone / recovery runtime.

Events are ordered by (time, priority class, insertion order). At equal
timestamps faults come first, then watchdog deadlines, then message
deliveries, then application cycles.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from ariel_rwd.ariel.ast import Scope
from ariel_rwd.runtime.backbone import BackboneDB, backbone_on_notification
from ariel_rwd.runtime.network import Network
from ariel_rwd.runtime.scenario import FaultInjection, FaultKind, SimScenario
from ariel_rwd.runtime.watchdog import WatchdogState


class Priority(IntEnum):
    FAULT = 0
    WATCHDOG = 1
    DELIVERY = 2
    APPLICATION = 3


@dataclass(order=True)
class _Event:
    time: float
    priority: int
    seq: int
    kind: str = field(compare=False)
    data: dict = field(compare=False, default_factory=dict)


@dataclass(frozen=True)
class TraceEvent:
    time: float
    kind: str
    details: str

    def __str__(self) -> str:
        return f"{self.time:.3f}\t{self.kind}\t{self.details}"


@dataclass
class SimMetrics:
    alarms: list[tuple[float, int]] = field(default_factory=list)
    false_alarms: int = 0
    detection_latency: list[float] = field(default_factory=list)
    useful_cycles: int = 0
    heartbeat_messages: int = 0
    notifications: int = 0
    missed_faults: int = 0

    @property
    def alarm_count(self) -> int:
        return len(self.alarms)

    @property
    def mean_latency_ms(self) -> float | None:
        if not self.detection_latency:
            return None
        return float(np.mean(self.detection_latency))


@dataclass
class SimResult:
    metrics: SimMetrics
    trace: list[TraceEvent]

    def trace_text(self) -> str:
        return "".join(f"{event}\n" for event in self.trace)


@dataclass
class _AppFault:
    start: float
    end: float
    task: int


class Simulator:
    """One run of one scenario. Not reusable: create a new instance per run."""

    def __init__(self, scenario: SimScenario):
        scenario.validate_references()
        self.scenario = scenario
        self.deployment = scenario.deployment

        link_seed, alarm_seed = np.random.SeedSequence(scenario.rng_seed).spawn(2)
        self.links = Network(self.deployment, scenario.network_delay, np.random.default_rng(link_seed))
        self.alarm_links = Network(self.deployment, scenario.network_delay, np.random.default_rng(alarm_seed))

        self.backbone = self.deployment.backbone_task
        self.db = BackboneDB(self.deployment.members_of)
        self.watchdogs: dict[int, WatchdogState] = {
            w.watchdog_task: WatchdogState(
                watchdog_id=w.watchdog_task,
                watched=frozenset(w.watched),
                timeout=scenario.timeout_ms,
                counter_persistent=scenario.counter_persistent,
            )
            for w in self.deployment.watchdogs
        }
        self.clients = scenario.clients
        self._node_of = {t.task_id: t.node for t in self.deployment.tasks}

        self.crashed: set[int] = set()
        self.hung_until: dict[int, float] = {}
        self.down_nodes: set[int] = set()
        self.heartbeat_delays: dict[int, list[tuple[float, float, float]]] = {}
        self.app_faults: list[_AppFault] = []

        self.metrics = SimMetrics()
        self.trace: list[TraceEvent] = []
        self._queue: list[_Event] = []
        self._seq = 0
        self.now = 0.0

    # ------------------------------------------------------------ plumbing

    def _push(self, time: float, priority: Priority, kind: str, **data) -> None:
        heapq.heappush(self._queue, _Event(time, int(priority), self._seq, kind, data))
        self._seq += 1

    def _log(self, kind: str, details: str) -> None:
        self.trace.append(TraceEvent(self.now, kind, details))

    def is_alive(self, task: int) -> bool:
        if task in self.crashed:
            return False
        if self._node_of.get(task) in self.down_nodes:
            return False
        return self.hung_until.get(task, -math.inf) <= self.now

    def _heartbeat_extra(self, client: int) -> float:
        return sum(extra for start, end, extra in self.heartbeat_delays.get(client, []) if start <= self.now < end)

    def _app_fault_active(self) -> bool:
        return any(f.start <= self.now < f.end for f in self.app_faults)

    def _schedule_deadline(self, wd: WatchdogState) -> None:
        self._push(wd.deadline, Priority.WATCHDOG, "deadline", watchdog=wd.watchdog_id, generation=wd.generation)

    # ------------------------------------------------------------ operations

    def deliver_heartbeat(self, client: int) -> None:
        """
        The client finishes a cycle and multicasts its heartbeat.

        Destinations are the members of the heartbeat logical, or the
        watchdogs watching the client when no logical is configured. Every
        destination counts as a sent message, but only live destinations
        get one enqueued; a destination that dies in flight drops it on
        arrival.
        """
        if self.scenario.heartbeat_logical is not None:
            targets = self.deployment.members_of(self.scenario.heartbeat_logical)
        else:
            targets = tuple(w.watchdog_task for w in self.deployment.watchdogs if client in w.watched)

        self.metrics.useful_cycles += 1
        self.metrics.heartbeat_messages += len(targets)
        extra = self._heartbeat_extra(client)
        self._log("heartbeat", f"task={client} sent={len(targets)}")

        for target in targets:
            if not self.is_alive(target):
                continue
            at = self.now + self.links.delay(client, target) + extra
            self._push(at, Priority.DELIVERY, "hb_deliver", target=target, sender=client)

    def watchdog_tick(self, watchdog_id: int) -> None:
        """Deadline passed without the full heartbeat set: notify the Backbone and rearm."""
        wd = self.watchdogs[watchdog_id]
        if not wd.tick(self.now):
            return
        self._schedule_deadline(wd)
        self.metrics.notifications += 1
        self._log("notify", f"watchdog={watchdog_id} phase={self.scenario.expired_phase}")
        at = self.now + self.links.delay(watchdog_id, self.backbone)
        self._push(at, Priority.DELIVERY, "bb_deliver", entity=watchdog_id, phase=self.scenario.expired_phase)

    def backbone_on_notification(self, entity: int, phase: int) -> None:
        """Store the notification and run the recovery r-code; each fired clause is an alarm."""
        if not self.is_alive(self.backbone):
            self._log("bb_drop", f"entity=task:{entity}")
            return

        def on_send(message: int, task: int, clause: int) -> None:
            at = self.now + self.alarm_links.delay(self.backbone, task)
            self._push(at, Priority.DELIVERY, "msg_deliver", target=task, message=message)
            self._log("send", f"clause={clause} message={message} to={task}")

        self._log("bb_recv", f"entity=task:{entity} phase={phase}")
        fired = backbone_on_notification(self.db, self.scenario.rcode, Scope.TASK, entity, phase, on_send=on_send)
        for clause in fired:
            false_alarm = not self._app_fault_active()
            self.metrics.alarms.append((self.now, clause))
            if false_alarm:
                self.metrics.false_alarms += 1
            self._log("alarm", f"clause={clause} false={str(false_alarm).lower()}")

    # ------------------------------------------------------------ faults

    def _inject(self, fault: FaultInjection) -> None:
        target = fault.target
        self._log("fault", f"{fault.kind.value} target={target}")

        if fault.kind is FaultKind.CRASH:
            self.crashed.add(target)
            if target in self.watchdogs:
                self.watchdogs[target].kill()
            if target in self.clients:
                self.app_faults.append(_AppFault(self.now, math.inf, target))

        elif fault.kind is FaultKind.HANG:
            end = fault.end_ms
            self.hung_until[target] = max(self.hung_until.get(target, -math.inf), end)
            if target in self.watchdogs:
                self.watchdogs[target].kill()
            if target in self.clients:
                self.app_faults.append(_AppFault(self.now, end, target))
            if math.isfinite(end):
                self._push(end, Priority.FAULT, "hang_end", task=target)

        elif fault.kind is FaultKind.DELAY_HEARTBEATS:
            self.heartbeat_delays.setdefault(target, []).append((self.now, fault.end_ms, fault.extra_ms))

        elif fault.kind is FaultKind.NODE_RESET:
            self.down_nodes.add(target)
            back = self.now + self.scenario.reboot_delay_ms
            for task, node in self._node_of.items():
                if node != target:
                    continue
                if task in self.watchdogs:
                    self.watchdogs[task].kill()
                if task in self.clients and back > self.now:
                    self.app_faults.append(_AppFault(self.now, back, task))
            self._push(back, Priority.FAULT, "node_up", node=target)

    def _revive_watchdog(self, task: int, keep_counter: bool) -> None:
        wd = self.watchdogs.get(task)
        if wd is None or not self.is_alive(task):
            return
        overdue = wd.revive(self.now, keep_counter)
        if not keep_counter:
            self._schedule_deadline(wd)
        elif overdue:
            self.watchdog_tick(task)

    # ------------------------------------------------------------ loop

    def run(self) -> SimResult:
        scenario = self.scenario
        horizon = scenario.horizon_ms

        for fault in scenario.faults:
            self._push(fault.time_ms, Priority.FAULT, "fault", fault=fault)
        for wd in self.watchdogs.values():
            wd.arm(0.0)
            self._schedule_deadline(wd)
        for client in self.clients:
            self._push(scenario.heartbeat_period_ms, Priority.APPLICATION, "cycle", task=client)

        while self._queue and self._queue[0].time <= horizon:
            event = heapq.heappop(self._queue)
            self.now = event.time
            data = event.data

            if event.kind == "fault":
                self._inject(data["fault"])
            elif event.kind == "hang_end":
                task = data["task"]
                self._log("resume", f"task={task}")
                self._revive_watchdog(task, keep_counter=True)
            elif event.kind == "node_up":
                node = data["node"]
                self.down_nodes.discard(node)
                self._log("node_up", f"node={node}")
                for task, task_node in self._node_of.items():
                    if task_node == node:
                        self._revive_watchdog(task, keep_counter=scenario.counter_persistent)
            elif event.kind == "deadline":
                wd = self.watchdogs[data["watchdog"]]
                if data["generation"] == wd.generation and wd.alive:
                    self._log("expire", f"watchdog={wd.watchdog_id}")
                    self.watchdog_tick(wd.watchdog_id)
            elif event.kind == "hb_deliver":
                self._on_heartbeat(data["target"], data["sender"])
            elif event.kind == "bb_deliver":
                self.backbone_on_notification(data["entity"], data["phase"])
            elif event.kind == "msg_deliver":
                state = "recv" if self.is_alive(data["target"]) else "drop"
                self._log(f"msg_{state}", f"task={data['target']} message={data['message']}")
            elif event.kind == "cycle":
                task = data["task"]
                if self.is_alive(task):
                    self.deliver_heartbeat(task)
                if task not in self.crashed:
                    self._push(self.now + scenario.heartbeat_period_ms, Priority.APPLICATION, "cycle", task=task)

        self._score_latency()
        logging.debug(
            f"Run {scenario.name} seed {scenario.rng_seed}: {self.metrics.alarm_count} alarms, "
            f"{self.metrics.notifications} notifications, {len(self.trace)} trace events"
        )
        return SimResult(self.metrics, self.trace)

    def _on_heartbeat(self, target: int, sender: int) -> None:
        if not self.is_alive(target):
            self._log("hb_drop", f"task={target} from={sender}")
            return
        wd = self.watchdogs.get(target)
        if wd is None:
            return
        self._log("hb_recv", f"watchdog={target} from={sender}")
        if wd.receive(sender, self.now):
            self._schedule_deadline(wd)

    def _score_latency(self) -> None:
        alarm_times = [t for t, _ in self.metrics.alarms]
        for fault in sorted(self.app_faults, key=lambda f: f.start):
            detected = [t for t in alarm_times if t >= fault.start]
            if detected:
                self.metrics.detection_latency.append(detected[0] - fault.start)
            else:
                self.metrics.missed_faults += 1


def run(scenario: SimScenario) -> SimResult:
    """
    Simulate `scenario` until its horizon.

    Identical scenarios (seed included) produce identical traces.

    Raises:
        ScenarioError: On dangling entity references
    """
    return Simulator(scenario).run()
