import pytest
from hypothesis import given

from ariel_rwd.ariel.ast import And, ArielProgram, EntityRef, GuardedAction, Identifier, Not, Or, PhaseEquals, Scope, Send
from ariel_rwd.ariel.parser import parse_source
from ariel_rwd.ariel.printer import format_guard, format_program
from strategies import guards


@pytest.mark.parametrize("name", ["config.ariel", "logical.ariel", "and_strategy.ariel", "two_of_three.ariel"])
def test_listing_reprints_to_same_tree(defs, listing, name):
    program = parse_source(listing(name), defs)
    assert parse_source(format_program(program), defs) == program


def test_macros_survive_printing(defs, listing):
    text = format_program(parse_source(listing("logical.ariel"), defs))
    assert text == "LOGICAL {L} IS TASK {W1}, TASK {W2}, TASK {W3}\nEND LOGICAL\n"


def test_parentheses_only_where_needed():
    a = PhaseEquals(EntityRef(Scope.TASK, Identifier(None, 1)), Identifier(None, 2))
    b = PhaseEquals(EntityRef(Scope.TASK, Identifier(None, 3)), Identifier(None, 2))
    assert format_guard(And(Or(a, b), a)) == (
        "(PHASE (TASK 1) == 2 OR PHASE (TASK 3) == 2) AND PHASE (TASK 1) == 2"
    )
    assert format_guard(Or(And(a, b), a)) == "PHASE (TASK 1) == 2 AND PHASE (TASK 3) == 2 OR PHASE (TASK 1) == 2"
    assert format_guard(Not(And(a, b))).startswith("NOT (")



@given(guards)
def test_any_guard_reprints_to_same_tree(guard):
    clause = GuardedAction(guard, (Send(Identifier(None, 1), Identifier(None, 2)),))
    program = ArielProgram(clauses=(clause,))
    assert parse_source(format_program(program), {}) == program
