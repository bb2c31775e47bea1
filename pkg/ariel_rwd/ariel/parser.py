"""
Recursive-descent parser for the Ariel subset.

Grammar (keywords upper case, `value` is an integer or a `{MACRO}`):

    program   := item*
    item      := INCLUDE string
               | TASK value [ '=' string ] IS NODE value ',' TASKID value
               | WATCHDOG value WATCHES [TASK] value { ',' [TASK] value }
                     HEARTBEATS EVERY value MS ON ERROR WARN BACKBONE END WATCHDOG
               | LOGICAL value IS TASK value { ',' TASK value } END LOGICAL
               | IF '[' guard ']' THEN action+ FI
    guard     := conj { OR conj }
    conj      := unary { AND unary }
    unary     := NOT unary | primary
    primary   := '(' guard ')'
               | PHASE '(' entity ')' '==' value
               | COUNT '(' LOGICAL value ',' value ')' '>=' value
    entity    := TASK value | LOGICAL value
    action    := SEND value TASK value
               | REMOVE PHASE entity FROM ERRORLIST
"""

import logging
from collections.abc import Mapping

from ariel_rwd.ariel.ast import (
    And,
    ArielProgram,
    CountPhase,
    EntityRef,
    Guard,
    GuardedAction,
    Identifier,
    IncludeDirective,
    LogicalDecl,
    Not,
    OnError,
    Or,
    PhaseEquals,
    RecoveryAction,
    RemovePhase,
    Scope,
    Send,
    TaskDecl,
    WatchdogDecl,
)
from ariel_rwd.ariel.errors import ArielError, ArielSyntaxError, UnresolvedMacroError
from ariel_rwd.ariel.lexer import Token, TokenKind, tokenize
from ariel_rwd.ariel.semantics import check_duplicates


class Parser:
    """Parses one compilation unit against a definitions table."""

    def __init__(self, tokens: list[Token], definitions: Mapping[str, int]):
        self.tokens = tokens
        self.definitions = definitions
        self.pos = 0

    # ------------------------------------------------------------ helpers

    def _peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _error(self, expected: str) -> ArielSyntaxError:
        token = self._peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            column = (last.column + len(last.describe())) if last else 1
            return ArielSyntaxError(f"expected {expected}, found end of input", line, column)
        return ArielSyntaxError(f"expected {expected}, found '{token.describe()}'", token.line, token.column)

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _at_keyword(self, word: str) -> bool:
        token = self._peek()
        return token is not None and token.is_keyword(word)

    def _at_punct(self, symbol: str) -> bool:
        token = self._peek()
        return token is not None and token.is_punct(symbol)

    def _keyword(self, word: str) -> Token:
        if not self._at_keyword(word):
            raise self._error(word)
        return self._advance()

    def _punct(self, symbol: str) -> Token:
        if not self._at_punct(symbol):
            raise self._error(f"'{symbol}'")
        return self._advance()

    def _string(self) -> str:
        token = self._peek()
        if token is None or token.kind is not TokenKind.STRING:
            raise self._error("a string")
        return self._advance().value

    def _value(self) -> Identifier:
        token = self._peek()
        if token is None or token.kind not in (TokenKind.INTEGER, TokenKind.MACRO):
            raise self._error("an integer or {MACRO}")
        self._advance()
        if token.kind is TokenKind.INTEGER:
            return Identifier(None, int(token.value))
        if token.value not in self.definitions:
            raise UnresolvedMacroError(token.value, token.line, token.column)
        return Identifier(token.value, int(self.definitions[token.value]))

    # ------------------------------------------------------------ program

    def parse_program(self) -> ArielProgram:
        includes: list[IncludeDirective] = []
        tasks: list[TaskDecl] = []
        watchdogs: list[WatchdogDecl] = []
        logicals: list[LogicalDecl] = []
        clauses: list[GuardedAction] = []

        while self._peek() is not None:
            token = self._peek()
            if token.is_keyword("INCLUDE"):
                self._advance()
                includes.append(IncludeDirective(self._string(), token.line))
            elif token.is_keyword("TASK"):
                tasks.append(self._task_decl())
            elif token.is_keyword("WATCHDOG"):
                watchdogs.append(self._watchdog_decl())
            elif token.is_keyword("LOGICAL"):
                logicals.append(self._logical_decl())
            elif token.is_keyword("IF"):
                clauses.append(self._clause())
            else:
                raise self._error("INCLUDE, TASK, WATCHDOG, LOGICAL or IF")

        return ArielProgram(tuple(includes), tuple(tasks), tuple(watchdogs), tuple(logicals), tuple(clauses))

    def _task_decl(self) -> TaskDecl:
        start = self._keyword("TASK")
        ident = self._value()
        name = None
        if self._at_punct("="):
            self._advance()
            name = self._string()
        self._keyword("IS")
        self._keyword("NODE")
        node = self._value()
        self._punct(",")
        self._keyword("TASKID")
        local = self._value()
        return TaskDecl(ident, name, node, local, start.line)

    def _watchdog_decl(self) -> WatchdogDecl:
        start = self._keyword("WATCHDOG")
        watchdog = self._value()
        self._keyword("WATCHES")
        watched = [self._watched_task()]
        while self._at_punct(","):
            self._advance()
            watched.append(self._watched_task())
        self._keyword("HEARTBEATS")
        self._keyword("EVERY")
        period_token = self._peek()
        period = self._value()
        if period.value <= 0:
            raise ArielError("heartbeat period must be positive", period_token.line, period_token.column)
        self._keyword("MS")
        self._keyword("ON")
        self._keyword("ERROR")
        self._keyword("WARN")
        self._keyword("BACKBONE")
        self._keyword("END")
        self._keyword("WATCHDOG")
        return WatchdogDecl(watchdog, tuple(watched), period, OnError.WARN_BACKBONE, start.line)

    def _watched_task(self) -> Identifier:
        if self._at_keyword("TASK"):
            self._advance()
        return self._value()

    def _logical_decl(self) -> LogicalDecl:
        start = self._keyword("LOGICAL")
        ident = self._value()
        self._keyword("IS")
        self._keyword("TASK")
        members = [self._value()]
        while self._at_punct(","):
            self._advance()
            self._keyword("TASK")
            members.append(self._value())
        self._keyword("END")
        self._keyword("LOGICAL")
        return LogicalDecl(ident, tuple(members), start.line)

    # ------------------------------------------------------------ recovery

    def _clause(self) -> GuardedAction:
        start = self._keyword("IF")
        self._punct("[")
        guard = self._guard()
        self._punct("]")
        self._keyword("THEN")
        actions = [self._action()]
        while not self._at_keyword("FI"):
            if self._peek() is None:
                raise self._error("FI")
            actions.append(self._action())
        self._keyword("FI")
        return GuardedAction(guard, tuple(actions), start.line)

    def _guard(self) -> Guard:
        node = self._conjunction()
        while self._at_keyword("OR"):
            self._advance()
            node = Or(node, self._conjunction())
        return node

    def _conjunction(self) -> Guard:
        node = self._unary()
        while self._at_keyword("AND"):
            self._advance()
            node = And(node, self._unary())
        return node

    def _unary(self) -> Guard:
        if self._at_keyword("NOT"):
            self._advance()
            return Not(self._unary())
        return self._primary()

    def _primary(self) -> Guard:
        if self._at_punct("("):
            self._advance()
            node = self._guard()
            self._punct(")")
            return node
        if self._at_keyword("PHASE"):
            self._advance()
            self._punct("(")
            entity = self._entity()
            self._punct(")")
            self._punct("==")
            return PhaseEquals(entity, self._value())
        if self._at_keyword("COUNT"):
            self._advance()
            self._punct("(")
            self._keyword("LOGICAL")
            logical = self._value()
            self._punct(",")
            phase = self._value()
            self._punct(")")
            self._punct(">=")
            return CountPhase(logical, phase, self._value())
        raise self._error("PHASE, COUNT, NOT or '('")

    def _entity(self) -> EntityRef:
        if self._at_keyword("TASK"):
            self._advance()
            return EntityRef(Scope.TASK, self._value())
        if self._at_keyword("LOGICAL"):
            self._advance()
            return EntityRef(Scope.LOGICAL, self._value())
        raise self._error("TASK or LOGICAL")

    def _action(self) -> RecoveryAction:
        if self._at_keyword("SEND"):
            self._advance()
            message = self._value()
            self._keyword("TASK")
            return Send(message, self._value())
        if self._at_keyword("REMOVE"):
            self._advance()
            self._keyword("PHASE")
            entity = self._entity()
            self._keyword("FROM")
            self._keyword("ERRORLIST")
            return RemovePhase(entity)
        raise self._error("SEND or REMOVE")


def parse(tokens: list[Token], definitions: Mapping[str, int]) -> ArielProgram:
    """
    Parse a token stream into an ArielProgram.

    Args:
        tokens: Output of `tokenize`
        definitions: Macro name to integer table

    Returns:
        The program with declarations and clauses in source order

    Raises:
        ArielSyntaxError: On a grammar violation
        UnresolvedMacroError: On a macro missing from `definitions`
        DuplicateDeclarationError: On repeated declarations
    """
    program = Parser(tokens, definitions).parse_program()
    check_duplicates(program)
    logging.debug(
        f"Parsed program: {len(program.tasks)} tasks, {len(program.watchdogs)} watchdogs, "
        f"{len(program.logicals)} logicals, {len(program.clauses)} clauses"
    )
    return program


def parse_source(source: str, definitions: Mapping[str, int], source_name: str = "<input>") -> ArielProgram:
    """Tokenize and parse `source`; diagnostics are tagged with `source_name`."""
    try:
        return parse(tokenize(source), definitions)
    except ArielError as e:
        e.source_name = source_name
        raise
