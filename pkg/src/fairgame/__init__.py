"""Symbolic solvers for games under strong transition fairness."""
from .fixpoint import SolveResult, solve
from .gamefile import ParseError, emit_game, parse_game, parse_text
from .model import (GR1, Buchi, CoBuchi, GameGraph, GenBuchi, GenCoBuchi, GenRabin, Muller, Owner,
                    Parity, Rabin, RabinChain, SafeBuchi, SafeReach, Safety, StochasticGameGraph,
                    ValidationError, validate)
from .oracle import brute_force_region, verify_strategy_sound
from .stochastic import derand, solve_almost_sure
from .strategy import extract_p0_strategy
from .symset import VertexSet

__all__ = [
    "GR1", "Buchi", "CoBuchi", "GameGraph", "GenBuchi", "GenCoBuchi", "GenRabin", "Muller", "Owner",
    "Parity", "ParseError", "Rabin", "RabinChain", "SafeBuchi", "SafeReach", "Safety", "SolveResult",
    "StochasticGameGraph", "ValidationError", "VertexSet", "brute_force_region", "derand", "emit_game",
    "extract_p0_strategy", "parse_game", "parse_text", "solve", "solve_almost_sure", "validate",
    "verify_strategy_sound",
]
