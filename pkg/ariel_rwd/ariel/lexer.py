"""
Tokenizer for the Ariel subset (configuration, composition and recovery sections).
"""

import re
from dataclasses import dataclass
from enum import Enum

from ariel_rwd.ariel.errors import LexicalError

KEYWORDS = frozenset({
    "TASK", "IS", "NODE", "TASKID", "WATCHDOG", "WATCHES", "HEARTBEATS", "EVERY",
    "MS", "ON", "ERROR", "WARN", "BACKBONE", "END", "LOGICAL", "IF", "THEN", "FI",
    "SEND", "REMOVE", "PHASE", "FROM", "ERRORLIST", "INCLUDE", "AND", "OR", "NOT",
    "COUNT",
})


class TokenKind(Enum):
    KEYWORD = "keyword"
    MACRO = "macro"
    INTEGER = "integer"
    STRING = "string"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    value: str
    line: int
    column: int

    def is_keyword(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.value == word

    def is_punct(self, symbol: str) -> bool:
        return self.kind is TokenKind.PUNCT and self.value == symbol

    def describe(self) -> str:
        if self.kind is TokenKind.MACRO:
            return f"{{{self.value}}}"
        if self.kind is TokenKind.STRING:
            return f'"{self.value}"'
        return self.value


# order matters: two-character operators before '='
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<macro>\{\s*[A-Za-z_][A-Za-z0-9_]*\s*\})
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>==|>=|[\[\]\(\),=])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    """
    Split Ariel source text into tokens with line/column positions.

    Args:
        source: Program text

    Returns:
        The token list (empty for empty input)

    Raises:
        LexicalError: On any character sequence that is not a token
    """
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0

    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        column = pos - line_start + 1
        if match is None:
            snippet = source[pos:pos + 10].split("\n", 1)[0]
            raise LexicalError(f"unrecognized input '{snippet}'", line, column)

        group = match.lastgroup
        text = match.group()
        pos = match.end()

        if group == "nl":
            line += 1
            line_start = pos
        elif group == "macro":
            tokens.append(Token(TokenKind.MACRO, text[1:-1].strip(), line, column))
        elif group == "int":
            tokens.append(Token(TokenKind.INTEGER, text, line, column))
        elif group == "string":
            tokens.append(Token(TokenKind.STRING, text[1:-1], line, column))
        elif group == "word":
            if text not in KEYWORDS:
                raise LexicalError(f"unknown word '{text}' (identifiers must be written as {{{text}}})", line, column)
            tokens.append(Token(TokenKind.KEYWORD, text, line, column))
        elif group == "punct":
            tokens.append(Token(TokenKind.PUNCT, text, line, column))

    return tokens
