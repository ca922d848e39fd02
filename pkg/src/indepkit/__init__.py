"""Finite-model verification of set and probabilistic independence."""

from ._accel import HAVE_NUMBA, backend
from .errors import (
    ConstructionError,
    DegenerateConstructionWarning,
    DomainError,
    IndepError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
)
from .fileformats import parse_function_set, parse_triple, parse_triples, render_function_set
from .funcset import AttributeSet, Assignment, Fragment, FunctionSet, LayeredFunctionSet
from .independence import (
    RationalMeasure,
    marginal,
    prob_indep,
    prob_scan_table,
    scan_table,
    set_indep,
    uniform_measure,
)
from .rules import check_closure, check_rule_prob, check_rule_semantic, close, get_rule, search_counterexample
from .triples import Triple, TripleSet

__version__ = "0.1.0"

__all__ = [
    "HAVE_NUMBA",
    "backend",
    "ConstructionError",
    "DegenerateConstructionWarning",
    "DomainError",
    "IndepError",
    "ParseError",
    "PreconditionError",
    "ResourceLimitError",
    "parse_function_set",
    "parse_triple",
    "parse_triples",
    "render_function_set",
    "AttributeSet",
    "Assignment",
    "Fragment",
    "FunctionSet",
    "LayeredFunctionSet",
    "RationalMeasure",
    "marginal",
    "prob_indep",
    "prob_scan_table",
    "scan_table",
    "set_indep",
    "uniform_measure",
    "check_closure",
    "check_rule_prob",
    "check_rule_semantic",
    "close",
    "get_rule",
    "search_counterexample",
    "Triple",
    "TripleSet",
]
