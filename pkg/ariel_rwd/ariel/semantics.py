"""
Static checks over Ariel programs: duplicate declarations and entity references.
"""

import logging

from ariel_rwd.ariel.ast import ArielProgram, RemovePhase, Scope, Send, guard_entities
from ariel_rwd.ariel.errors import ArielError, DuplicateDeclarationError, UndeclaredEntityError


def check_duplicates(program: ArielProgram) -> None:
    """
    Enforce the uniqueness invariants of the configuration and composition sections.

    Raises:
        DuplicateDeclarationError: On a repeated task id, (node, taskid) pair,
            watchdog task, logical id or logical member
    """
    seen_ids: dict[int, int | None] = {}
    seen_slots: dict[tuple[int, int], int] = {}

    for task in program.tasks:
        if task.task_id in seen_ids:
            raise DuplicateDeclarationError(f"task {task.ident.render()} ({task.task_id}) declared twice", task.line, 1)
        seen_ids[task.task_id] = task.line

        slot = (task.node, task.local_taskid)
        if slot in seen_slots:
            raise DuplicateDeclarationError(
                f"node {task.node} already hosts local taskid {task.local_taskid} (task {seen_slots[slot]})",
                task.line,
                1,
            )
        seen_slots[slot] = task.task_id

    watchdog_ids: set[int] = set()
    for watchdog in program.watchdogs:
        if watchdog.watchdog_task in watchdog_ids:
            raise DuplicateDeclarationError(f"watchdog {watchdog.watchdog.render()} declared twice", watchdog.line, 1)
        watchdog_ids.add(watchdog.watchdog_task)
        if len(watchdog.watched) != len(watchdog.watched_idents):
            raise DuplicateDeclarationError(f"watchdog {watchdog.watchdog.render()} watches a task twice", watchdog.line, 1)

    logical_ids: set[int] = set()
    for logical in program.logicals:
        if logical.logical_id in logical_ids:
            raise DuplicateDeclarationError(f"logical {logical.ident.render()} declared twice", logical.line, 1)
        logical_ids.add(logical.logical_id)
        if len(set(logical.members)) != len(logical.members):
            raise DuplicateDeclarationError(f"logical {logical.ident.render()} lists a member twice", logical.line, 1)


def check_references(program: ArielProgram) -> None:
    """
    Check that every referenced task or logical is declared.

    Raises:
        UndeclaredEntityError: Naming the first dangling reference
        ArielError: On a non-positive heartbeat period
    """
    tasks = {t.task_id for t in program.tasks}
    logicals = {lg.logical_id for lg in program.logicals}

    def require(scope: Scope, value: int, rendered: str, line: int | None, context: str) -> None:
        known = tasks if scope is Scope.TASK else logicals
        if value not in known:
            kind = "task" if scope is Scope.TASK else "logical"
            raise UndeclaredEntityError(f"{context} references undeclared {kind} {rendered}", line, 1)

    for watchdog in program.watchdogs:
        if watchdog.heartbeat_period <= 0:
            raise ArielError(f"watchdog {watchdog.watchdog.render()} needs a positive heartbeat period", watchdog.line, 1)
        require(Scope.TASK, watchdog.watchdog_task, watchdog.watchdog.render(), watchdog.line, "WATCHDOG")
        for ident in watchdog.watched_idents:
            require(Scope.TASK, ident.value, ident.render(), watchdog.line, "WATCHES")

    for logical in program.logicals:
        for ident in logical.member_idents:
            require(Scope.TASK, ident.value, ident.render(), logical.line, "LOGICAL")

    for clause in program.clauses:
        for ref in guard_entities(clause.guard):
            require(ref.scope, ref.ident.value, ref.ident.render(), clause.line, "guard")
        for action in clause.actions:
            if isinstance(action, Send):
                require(Scope.TASK, action.target.value, action.target.render(), clause.line, "SEND")
            elif isinstance(action, RemovePhase):
                ref = action.entity
                require(ref.scope, ref.ident.value, ref.ident.render(), clause.line, "REMOVE")

    logging.debug(
        f"References checked: {len(tasks)} tasks, {len(logicals)} logicals, {len(program.clauses)} clauses"
    )
