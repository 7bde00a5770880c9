"""Goal-directed answer set programming with dynamic consistency checking."""

__version__ = "0.1.0"

from .analysis import (
    CheckProgram,
    SplittingPartition,
    SubCheck,
    analyze,
    build_check_program,
    build_splitting_partition,
    dcc_relevant_checks,
    detect_olon_rules,
)
from .engine import Mode, PartialAnswerSet, SolveConfig, SolveStats, Solver, StepLimitExceeded, solve
from .oracle import enumerate_answer_sets, is_stable
from .syntax import Literal, ParseError, Program, Query, Rule, parse_program, parse_query

__all__ = [
    "CheckProgram", "SplittingPartition", "SubCheck", "analyze", "build_check_program",
    "build_splitting_partition", "dcc_relevant_checks", "detect_olon_rules", "Mode",
    "PartialAnswerSet", "SolveConfig", "SolveStats", "Solver", "StepLimitExceeded", "solve",
    "enumerate_answer_sets", "is_stable", "Literal", "ParseError", "Program", "Query", "Rule",
    "parse_program", "parse_query",
]
