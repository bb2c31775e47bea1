"""
Syntax tree for Ariel programs.

Values written in the source either as integer literals or as `{NAME}`
macros are kept as `Identifier`s so that printing reproduces the macro name;
everything downstream works on the resolved integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Sequence, Union


class Scope(IntEnum):
    """Entity namespace; the integer is the r-code operand encoding."""

    TASK = 0
    LOGICAL = 1


class OnError(Enum):
    WARN_BACKBONE = "WarnBackbone"


@dataclass(frozen=True)
class Identifier:
    """A resolved value; `name` is the macro name or None for a literal."""

    name: str | None
    resolved_value: int

    @property
    def value(self) -> int:
        return self.resolved_value

    def render(self) -> str:
        return f"{{{self.name}}}" if self.name is not None else str(self.resolved_value)


@dataclass(frozen=True)
class EntityRef:
    scope: Scope
    ident: Identifier

    @property
    def key(self) -> tuple[Scope, int]:
        return (self.scope, self.ident.value)


@dataclass(frozen=True)
class IncludeDirective:
    path: str
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TaskDecl:
    ident: Identifier
    name: str | None
    node_ident: Identifier
    local_ident: Identifier
    line: int | None = field(default=None, compare=False)

    @property
    def task_id(self) -> int:
        return self.ident.value

    @property
    def node(self) -> int:
        return self.node_ident.value

    @property
    def local_taskid(self) -> int:
        return self.local_ident.value


@dataclass(frozen=True)
class WatchdogDecl:
    watchdog: Identifier
    watched_idents: tuple[Identifier, ...]
    period_ident: Identifier
    on_error: OnError = OnError.WARN_BACKBONE
    line: int | None = field(default=None, compare=False)

    @property
    def watchdog_task(self) -> int:
        return self.watchdog.value

    @property
    def watched(self) -> frozenset[int]:
        return frozenset(i.value for i in self.watched_idents)

    @property
    def heartbeat_period(self) -> int:
        return self.period_ident.value


@dataclass(frozen=True)
class LogicalDecl:
    ident: Identifier
    member_idents: tuple[Identifier, ...]
    line: int | None = field(default=None, compare=False)

    @property
    def logical_id(self) -> int:
        return self.ident.value

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(m.value for m in self.member_idents)


# ---------------------------------------------------------------- guards

PhaseLookup = Callable[[Scope, int], "int | None"]
MembersLookup = Callable[[int], Sequence[int]]


@dataclass(frozen=True)
class PhaseEquals:
    entity: EntityRef
    phase: Identifier

    def evaluate(self, phase_of: PhaseLookup, members_of: MembersLookup) -> bool:
        return phase_of(self.entity.scope, self.entity.ident.value) == self.phase.value


@dataclass(frozen=True)
class CountPhase:
    """At least `threshold` members of `logical` are in `phase`."""

    logical: Identifier
    phase: Identifier
    threshold: Identifier

    def evaluate(self, phase_of: PhaseLookup, members_of: MembersLookup) -> bool:
        hits = sum(1 for m in members_of(self.logical.value) if phase_of(Scope.TASK, m) == self.phase.value)
        return hits >= self.threshold.value


@dataclass(frozen=True)
class And:
    left: Guard
    right: Guard

    def evaluate(self, phase_of: PhaseLookup, members_of: MembersLookup) -> bool:
        # both sides evaluated, as the compiled code does
        left = self.left.evaluate(phase_of, members_of)
        right = self.right.evaluate(phase_of, members_of)
        return left and right


@dataclass(frozen=True)
class Or:
    left: Guard
    right: Guard

    def evaluate(self, phase_of: PhaseLookup, members_of: MembersLookup) -> bool:
        left = self.left.evaluate(phase_of, members_of)
        right = self.right.evaluate(phase_of, members_of)
        return left or right


@dataclass(frozen=True)
class Not:
    operand: Guard

    def evaluate(self, phase_of: PhaseLookup, members_of: MembersLookup) -> bool:
        return not self.operand.evaluate(phase_of, members_of)


Guard = Union[PhaseEquals, CountPhase, And, Or, Not]


def guard_entities(guard: Guard) -> list[EntityRef]:
    """All entities a guard reads, in left-to-right order."""
    if isinstance(guard, PhaseEquals):
        return [guard.entity]
    if isinstance(guard, CountPhase):
        return [EntityRef(Scope.LOGICAL, guard.logical)]
    if isinstance(guard, Not):
        return guard_entities(guard.operand)
    return guard_entities(guard.left) + guard_entities(guard.right)


def guard_depth(guard: Guard) -> int:
    if isinstance(guard, (PhaseEquals, CountPhase)):
        return 1
    if isinstance(guard, Not):
        return 1 + guard_depth(guard.operand)
    return 1 + max(guard_depth(guard.left), guard_depth(guard.right))


# ---------------------------------------------------------------- actions

@dataclass(frozen=True)
class Send:
    message: Identifier
    target: Identifier


@dataclass(frozen=True)
class RemovePhase:
    entity: EntityRef


RecoveryAction = Union[Send, RemovePhase]


@dataclass(frozen=True)
class GuardedAction:
    guard: Guard
    actions: tuple[RecoveryAction, ...]
    line: int | None = field(default=None, compare=False)


# ---------------------------------------------------------------- program

@dataclass(frozen=True)
class ArielProgram:
    includes: tuple[IncludeDirective, ...] = ()
    tasks: tuple[TaskDecl, ...] = ()
    watchdogs: tuple[WatchdogDecl, ...] = ()
    logicals: tuple[LogicalDecl, ...] = ()
    clauses: tuple[GuardedAction, ...] = ()

    @classmethod
    def merge(cls, *programs: ArielProgram) -> ArielProgram:
        """
        Concatenate compilation units in order.

        Duplicate declarations across units are rejected here; references
        are checked separately with `check_references`.
        """
        from ariel_rwd.ariel.semantics import check_duplicates

        merged = cls(
            includes=tuple(i for p in programs for i in p.includes),
            tasks=tuple(t for p in programs for t in p.tasks),
            watchdogs=tuple(w for p in programs for w in p.watchdogs),
            logicals=tuple(lg for p in programs for lg in p.logicals),
            clauses=tuple(c for p in programs for c in p.clauses),
        )
        check_duplicates(merged)
        return merged

    def members_of(self, logical_id: int) -> tuple[int, ...]:
        for logical in self.logicals:
            if logical.logical_id == logical_id:
                return logical.members
        return ()

    def task(self, task_id: int) -> TaskDecl | None:
        for task in self.tasks:
            if task.task_id == task_id:
                return task
        return None
