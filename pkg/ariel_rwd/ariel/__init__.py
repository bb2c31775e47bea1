"""
Ariel front end: tokenizer, parser, static checks, r-code compiler and
deployment emitter for the configuration / composition / recovery subset.
"""

from ariel_rwd.ariel.ast import ArielProgram
from ariel_rwd.ariel.compiler import RCode, compile_recovery, policy_program
from ariel_rwd.ariel.definitions import load_definitions, parse_definitions
from ariel_rwd.ariel.deployment import DeploymentConfig, emit_config
from ariel_rwd.ariel.errors import ArielError
from ariel_rwd.ariel.lexer import tokenize
from ariel_rwd.ariel.parser import parse, parse_source
from ariel_rwd.ariel.printer import format_program
from ariel_rwd.ariel.semantics import check_references

__all__ = [
    "ArielError",
    "ArielProgram",
    "DeploymentConfig",
    "RCode",
    "check_references",
    "compile_recovery",
    "emit_config",
    "format_program",
    "load_definitions",
    "parse",
    "parse_definitions",
    "parse_source",
    "policy_program",
    "tokenize",
]
