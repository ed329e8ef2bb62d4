"""Stabilizer encoder synthesis, rewrite-based optimization and grid routing."""
from .circuit import CNOT, CY, CZ, H, S, SWAP, X, Y, Z, Circuit, Gate, GateKind, QubitInit, Sdg, emit_circuit, parse_circuit
from .encoder import synthesize, synthesize_encoder
from .pauli import PauliString, propagate
from .rewrite import OptimizeConfig, RewriteTrace, apply_rule, optimize, rule_catalog, to_cnot_only
from .routing import GridLayout, RoutedCircuit, decompose_swaps, is_nnc, route, search_layout
from .stabilizer import StabilizerCode, five_qubit_code, verify_encoder

__version__ = "0.1.0"

__all__ = [
    "CNOT", "CY", "CZ", "H", "S", "SWAP", "Sdg", "X", "Y", "Z",
    "Circuit", "Gate", "GateKind", "GridLayout", "OptimizeConfig", "PauliString", "QubitInit",
    "RewriteTrace", "RoutedCircuit", "StabilizerCode",
    "apply_rule", "decompose_swaps", "emit_circuit", "five_qubit_code", "is_nnc", "optimize",
    "parse_circuit", "propagate", "route", "rule_catalog", "search_layout", "synthesize",
    "synthesize_encoder", "to_cnot_only", "verify_encoder",
]
