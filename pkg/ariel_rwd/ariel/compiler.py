"""
Compilation of recovery clauses into r-codes.

Each `IF [guard] THEN actions FI` clause becomes

    <guard evaluation>          leaves one boolean on the stack
    JUMP_IF_FALSE <end>         pops it
    <actions>
    END_GUARD                   <end>

Jumps only go forward, so the interpreter is a single linear pass.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from ariel_rwd.ariel.ast import (
    And,
    ArielProgram,
    CountPhase,
    EntityRef,
    Guard,
    GuardedAction,
    Identifier,
    LogicalDecl,
    Not,
    Or,
    PhaseEquals,
    RemovePhase,
    Scope,
    Send,
)
from ariel_rwd.ariel.errors import RCodeFormatError


class Opcode(Enum):
    PUSH_PHASE = "PUSH_PHASE"        # scope id          -> phase
    PUSH_CONST = "PUSH_CONST"        # k                 -> k
    CMP_EQ = "CMP_EQ"                # a b               -> a == b
    AND = "AND"                      # a b               -> a and b
    OR = "OR"                        # a b               -> a or b
    NOT = "NOT"                      # a                 -> not a
    COUNT_GE = "COUNT_GE"            # logical phase k   -> count >= k
    JUMP_IF_FALSE = "JUMP_IF_FALSE"  # target            pops a boolean
    ACT_SEND = "ACT_SEND"            # message task
    ACT_REMOVE = "ACT_REMOVE"        # scope id
    END_GUARD = "END_GUARD"


OPERAND_COUNT = {
    Opcode.PUSH_PHASE: 2,
    Opcode.PUSH_CONST: 1,
    Opcode.CMP_EQ: 0,
    Opcode.AND: 0,
    Opcode.OR: 0,
    Opcode.NOT: 0,
    Opcode.COUNT_GE: 3,
    Opcode.JUMP_IF_FALSE: 1,
    Opcode.ACT_SEND: 2,
    Opcode.ACT_REMOVE: 2,
    Opcode.END_GUARD: 0,
}

# (pops, pushes)
STACK_EFFECT = {
    Opcode.PUSH_PHASE: (0, 1),
    Opcode.PUSH_CONST: (0, 1),
    Opcode.CMP_EQ: (2, 1),
    Opcode.AND: (2, 1),
    Opcode.OR: (2, 1),
    Opcode.NOT: (1, 1),
    Opcode.COUNT_GE: (0, 1),
    Opcode.JUMP_IF_FALSE: (1, 0),
    Opcode.ACT_SEND: (0, 0),
    Opcode.ACT_REMOVE: (0, 0),
    Opcode.END_GUARD: (0, 0),
}


@dataclass(frozen=True)
class Instruction:
    op: Opcode
    operands: tuple[int, ...] = ()

    def __str__(self) -> str:
        return " ".join([self.op.value, *(str(o) for o in self.operands)])


@dataclass(frozen=True)
class RCode:
    instructions: tuple[Instruction, ...] = ()

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def clause_count(self) -> int:
        return sum(1 for i in self.instructions if i.op is Opcode.END_GUARD)

    def dumps(self) -> str:
        """Line-oriented text form: one instruction per line."""
        return "".join(f"{instruction}\n" for instruction in self.instructions)

    @classmethod
    def loads(cls, text: str) -> RCode:
        """
        Parse the text form produced by `dumps`.

        Raises:
            RCodeFormatError: On unknown mnemonics, wrong operand counts or
                a program that fails `validate`
        """
        instructions: list[Instruction] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            parts = raw.split()
            if not parts:
                continue
            try:
                op = Opcode(parts[0])
            except ValueError:
                raise RCodeFormatError(f"unknown instruction '{parts[0]}'", lineno, 1) from None
            try:
                operands = tuple(int(p) for p in parts[1:])
            except ValueError:
                raise RCodeFormatError(f"non-integer operand in '{raw.strip()}'", lineno, 1) from None
            if len(operands) != OPERAND_COUNT[op]:
                raise RCodeFormatError(f"{op.value} takes {OPERAND_COUNT[op]} operands, got {len(operands)}", lineno, 1)
            instructions.append(Instruction(op, operands))

        rcode = cls(tuple(instructions))
        rcode.validate()
        return rcode

    def validate(self) -> None:
        """
        Check stack balance, forward-only jumps and that actions are guarded.

        Raises:
            RCodeFormatError: If a guard underflows the stack or does not
                leave exactly one boolean, if a jump goes backwards or lands
                anywhere but on END_GUARD, or if an action is not preceded
                by a JUMP_IF_FALSE in its clause
        """
        depth = 0
        guarded = False
        for index, instruction in enumerate(self.instructions):
            pops, pushes = STACK_EFFECT[instruction.op]
            if instruction.op in (Opcode.ACT_SEND, Opcode.ACT_REMOVE) and not guarded:
                raise RCodeFormatError(f"{instruction.op.value} outside a guarded clause", index + 1, 1)
            if instruction.op is Opcode.JUMP_IF_FALSE:
                if depth != 1:
                    raise RCodeFormatError(f"guard leaves {depth} values before JUMP_IF_FALSE", index + 1, 1)
                target = instruction.operands[0]
                if target < index or target >= len(self.instructions):
                    raise RCodeFormatError(f"jump target {target} is not forward", index + 1, 1)
                if self.instructions[target].op is not Opcode.END_GUARD:
                    raise RCodeFormatError(f"jump target {target} is not END_GUARD", index + 1, 1)
                guarded = True
            if depth < pops:
                raise RCodeFormatError(f"stack underflow at {instruction}", index + 1, 1)
            depth += pushes - pops
            if instruction.op is Opcode.END_GUARD:
                if depth != 0:
                    raise RCodeFormatError("END_GUARD reached with a non-empty stack", index + 1, 1)
                guarded = False
        if depth != 0:
            raise RCodeFormatError("r-code ends inside a guard", len(self.instructions), 1)


def _compile_guard(guard: Guard, out: list[Instruction]) -> None:
    if isinstance(guard, PhaseEquals):
        out.append(Instruction(Opcode.PUSH_PHASE, (int(guard.entity.scope), guard.entity.ident.value)))
        out.append(Instruction(Opcode.PUSH_CONST, (guard.phase.value,)))
        out.append(Instruction(Opcode.CMP_EQ))
    elif isinstance(guard, CountPhase):
        out.append(Instruction(Opcode.COUNT_GE, (guard.logical.value, guard.phase.value, guard.threshold.value)))
    elif isinstance(guard, Not):
        _compile_guard(guard.operand, out)
        out.append(Instruction(Opcode.NOT))
    elif isinstance(guard, And):
        _compile_guard(guard.left, out)
        _compile_guard(guard.right, out)
        out.append(Instruction(Opcode.AND))
    elif isinstance(guard, Or):
        _compile_guard(guard.left, out)
        _compile_guard(guard.right, out)
        out.append(Instruction(Opcode.OR))
    else:
        raise TypeError(f"not a guard node: {guard!r}")


def compile_clause(clause: GuardedAction, base: int = 0) -> list[Instruction]:
    """Compile one clause whose first instruction lands at index `base`."""
    code: list[Instruction] = []
    _compile_guard(clause.guard, code)

    jump_at = len(code)
    code.append(Instruction(Opcode.JUMP_IF_FALSE, (0,)))

    for action in clause.actions:
        if isinstance(action, Send):
            code.append(Instruction(Opcode.ACT_SEND, (action.message.value, action.target.value)))
        elif isinstance(action, RemovePhase):
            code.append(Instruction(Opcode.ACT_REMOVE, (int(action.entity.scope), action.entity.ident.value)))

    code.append(Instruction(Opcode.END_GUARD))
    code[jump_at] = Instruction(Opcode.JUMP_IF_FALSE, (base + len(code) - 1,))
    return code


def compile_recovery(program: ArielProgram) -> RCode:
    """
    Compile every guarded action of `program`, preserving clause order.

    Args:
        program: A parsed program

    Returns:
        The r-code (empty when the program has no IF clauses)
    """
    instructions: list[Instruction] = []
    for clause in program.clauses:
        instructions.extend(compile_clause(clause, base=len(instructions)))

    rcode = RCode(tuple(instructions))
    rcode.validate()
    logging.debug(f"Compiled {len(program.clauses)} clauses into {len(rcode)} instructions")
    return rcode


# ------------------------------------------------------------ voting policies

def policy_threshold(policy: str, n_members: int) -> int:
    """
    Number of EXPIRED members that triggers the alarm.

    `policy` is "AND", "OR", "2oo3" or "KooN" with an explicit k such as "2oo5".
    """
    key = policy.strip().upper()
    if key == "AND":
        return n_members
    if key == "OR":
        return 1
    if "OO" in key:
        k_text, n_text = key.split("OO", 1)
        k = int(k_text)
        if n_text and int(n_text) != n_members:
            raise ValueError(f"policy {policy} does not match a logical of {n_members} members")
        if not 1 <= k <= n_members:
            raise ValueError(f"policy {policy}: k must be between 1 and {n_members}")
        return k
    raise ValueError(f"unknown voting policy '{policy}'")


def policy_guard(policy: str, members: list[Identifier], expired: Identifier, logical: Identifier) -> Guard:
    """
    Build the voting guard over watchdog phases.

    AND and OR chain PhaseEquals atoms; intermediate thresholds use a
    single COUNT atom over the logical.
    """
    threshold = policy_threshold(policy, len(members))
    atoms: list[Guard] = [PhaseEquals(EntityRef(Scope.TASK, m), expired) for m in members]

    if threshold == len(members) or threshold == 1:
        node = atoms[0]
        for atom in atoms[1:]:
            node = And(node, atom) if threshold == len(members) else Or(node, atom)
        return node
    return CountPhase(logical, expired, Identifier(None, threshold))


def policy_program(
    policy: str,
    logical: Identifier,
    members: list[Identifier],
    expired: Identifier,
    alarm: Identifier,
    alarm_task: Identifier,
) -> ArielProgram:
    """
    The recovery section of a redundant watchdog under `policy`:
    on a vote, alarm `alarm_task` and clear the logical's phases.
    """
    guard = policy_guard(policy, members, expired, logical)
    clause = GuardedAction(guard, (Send(alarm, alarm_task), RemovePhase(EntityRef(Scope.LOGICAL, logical))))
    return ArielProgram(
        logicals=(LogicalDecl(logical, tuple(members)),),
        clauses=(clause,),
    )
