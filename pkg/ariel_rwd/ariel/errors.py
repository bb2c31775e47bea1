"""
Exceptions raised by the Ariel front end.
"""


class ArielError(ValueError):
    """Base class for Ariel diagnostics; carries an optional source position."""

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        source_name: str | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.source_name = source_name

    def format(self, source_name: str | None = None) -> str:
        """Render as `file:line:col: message` (missing parts are skipped)."""
        name = source_name or self.source_name or "<input>"
        if self.line is None:
            return f"{name}: {self.message}"
        return f"{name}:{self.line}:{self.column or 0}: {self.message}"

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column or 0}: {self.message}"


class LexicalError(ArielError):
    """Unrecognized character sequence in the source."""


class ArielSyntaxError(ArielError):
    """Token stream does not match the grammar."""


class UnresolvedMacroError(ArielError):
    """A brace macro has no entry in the definitions table."""

    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        super().__init__(f"unresolved macro '{name}'", line, column)
        self.name = name


class DuplicateDeclarationError(ArielError):
    """Task, node/taskid pair, watchdog or logical declared twice."""


class UndeclaredEntityError(ArielError):
    """A watchdog, logical, guard or action names an entity that was never declared."""


class DefinitionsError(ArielError):
    """Malformed definitions file."""


class RCodeFormatError(ArielError):
    """Malformed r-code text."""
