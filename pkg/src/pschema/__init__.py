"""Grounding and solving for PS and PS+ data-program pairs."""

from .ast import DataProgramPair, Rule, validate
from .errors import Inconsistent, PSError
from .grounder import ground_core, ground_pair, simplify_to_core
from .parser import parse_data, parse_program
from .pipeline import count_models, load_pair, make_pair, models_of
from .solver import Solver, solve
from .theory import GroundTheory, satisfies

__version__ = "0.1.0"

__all__ = [
    "DataProgramPair", "GroundTheory", "Inconsistent", "PSError", "Rule", "Solver",
    "count_models", "ground_core", "ground_pair", "load_pair", "make_pair", "models_of",
    "parse_data", "parse_program", "satisfies", "simplify_to_core", "solve", "validate",
]
