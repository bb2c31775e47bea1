"""
Pretty-printer producing Ariel source that re-parses to the same tree.
"""

from ariel_rwd.ariel.ast import (
    And,
    ArielProgram,
    CountPhase,
    EntityRef,
    Guard,
    Not,
    Or,
    PhaseEquals,
    RecoveryAction,
    RemovePhase,
    Scope,
    Send,
)


def _entity(ref: EntityRef) -> str:
    keyword = "TASK" if ref.scope is Scope.TASK else "LOGICAL"
    return f"{keyword} {ref.ident.render()}"


def format_guard(guard: Guard) -> str:
    """Render a guard; parentheses are added only where the tree shape needs them."""
    if isinstance(guard, PhaseEquals):
        return f"PHASE ({_entity(guard.entity)}) == {guard.phase.render()}"
    if isinstance(guard, CountPhase):
        return f"COUNT (LOGICAL {guard.logical.render()}, {guard.phase.render()}) >= {guard.threshold.render()}"
    if isinstance(guard, Not):
        inner = format_guard(guard.operand)
        if isinstance(guard.operand, (And, Or)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(guard, And):
        left = format_guard(guard.left)
        if isinstance(guard.left, Or):
            left = f"({left})"
        right = format_guard(guard.right)
        if isinstance(guard.right, (And, Or)):
            right = f"({right})"
        return f"{left} AND {right}"
    left = format_guard(guard.left)
    right = format_guard(guard.right)
    if isinstance(guard.right, Or):
        right = f"({right})"
    return f"{left} OR {right}"


def _action(action: RecoveryAction) -> str:
    if isinstance(action, Send):
        return f"SEND {action.message.render()} TASK {action.target.render()}"
    assert isinstance(action, RemovePhase)
    return f"REMOVE PHASE {_entity(action.entity)} FROM ERRORLIST"


def format_program(program: ArielProgram) -> str:
    """Render a whole program: includes, tasks, watchdogs, logicals, clauses."""
    lines: list[str] = []

    for include in program.includes:
        lines.append(f'INCLUDE "{include.path}"')

    for task in program.tasks:
        label = f' = "{task.name}"' if task.name is not None else ""
        lines.append(
            f"TASK {task.ident.render()}{label} IS NODE {task.node_ident.render()}, TASKID {task.local_ident.render()}"
        )

    for watchdog in program.watchdogs:
        watched = ", ".join(i.render() for i in watchdog.watched_idents)
        lines.append(f"WATCHDOG {watchdog.watchdog.render()} WATCHES {watched}")
        lines.append(f"  HEARTBEATS EVERY {watchdog.period_ident.render()} MS")
        lines.append("  ON ERROR WARN BACKBONE")
        lines.append("END WATCHDOG")

    for logical in program.logicals:
        members = ", ".join(f"TASK {m.render()}" for m in logical.member_idents)
        lines.append(f"LOGICAL {logical.ident.render()} IS {members}")
        lines.append("END LOGICAL")

    for clause in program.clauses:
        lines.append(f"IF [ {format_guard(clause.guard)} ]")
        lines.append("THEN")
        lines.extend(f"  {_action(a)}" for a in clause.actions)
        lines.append("FI")

    return "\n".join(lines) + ("\n" if lines else "")
