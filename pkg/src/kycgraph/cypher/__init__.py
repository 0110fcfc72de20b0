"""Cypher-style query subset: lexer, parser, planner, executor, reference oracle."""

from .ast import Query
from .parser import parse
from .executor import execute, ResultTable
from .planner import explain

__all__ = ["Query", "parse", "execute", "explain", "ResultTable"]
