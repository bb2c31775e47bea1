"""
R-code interpreter: one linear pass over the compiled recovery clauses.
"""

from collections.abc import Callable, Sequence

from ariel_rwd.ariel.ast import Scope
from ariel_rwd.ariel.compiler import Opcode, RCode

PhaseOf = Callable[[Scope, int], "int | None"]
MembersOf = Callable[[int], Sequence[int]]
OnSend = Callable[[int, int, int], None]
OnRemove = Callable[[Scope, int], None]


def run_rcode(
    rcode: RCode,
    phase_of: PhaseOf,
    members_of: MembersOf,
    on_send: OnSend | None = None,
    on_remove: OnRemove | None = None,
) -> list[int]:
    """
    Evaluate every clause in order against the current phases.

    Each guard sees the effects of the actions of earlier clauses.

    Args:
        rcode: Validated r-code
        phase_of: Current phase of an entity, None when it has none
        members_of: Members of a logical
        on_send: Called as on_send(message, task, clause_index)
        on_remove: Called as on_remove(scope, entity_id)

    Returns:
        Indices of the clauses whose guard was true
    """
    stack: list = []
    fired: list[int] = []
    clause = 0
    instructions = rcode.instructions
    pc = 0

    while pc < len(instructions):
        ins = instructions[pc]
        op, args = ins.op, ins.operands

        if op is Opcode.PUSH_PHASE:
            stack.append(phase_of(Scope(args[0]), args[1]))
        elif op is Opcode.PUSH_CONST:
            stack.append(args[0])
        elif op is Opcode.CMP_EQ:
            right, left = stack.pop(), stack.pop()
            stack.append(left == right)
        elif op is Opcode.AND:
            right, left = stack.pop(), stack.pop()
            stack.append(bool(left) and bool(right))
        elif op is Opcode.OR:
            right, left = stack.pop(), stack.pop()
            stack.append(bool(left) or bool(right))
        elif op is Opcode.NOT:
            stack.append(not stack.pop())
        elif op is Opcode.COUNT_GE:
            logical, phase, threshold = args
            hits = sum(1 for m in members_of(logical) if phase_of(Scope.TASK, m) == phase)
            stack.append(hits >= threshold)
        elif op is Opcode.JUMP_IF_FALSE:
            if not stack.pop():
                pc = args[0]
                continue
            fired.append(clause)
        elif op is Opcode.ACT_SEND:
            if on_send is not None:
                on_send(args[0], args[1], clause)
        elif op is Opcode.ACT_REMOVE:
            if on_remove is not None:
                on_remove(Scope(args[0]), args[1])
        elif op is Opcode.END_GUARD:
            clause += 1
        pc += 1

    return fired
