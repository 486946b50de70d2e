"""Braid-group, one-clean-qubit, perturbative-gadget, stabilizer-code and adiabatic numerics."""

from .braid import BraidWord, parse_braid, random_braid, writhe
from .bracket import kauffman_bracket, pin_conventions
from .dqc1 import dqc1_jones_estimate, hadamard_trace_estimate
from .errors import (
    ConfigurationError,
    ContractError,
    ConvergenceError,
    DegeneracyError,
    NumericError,
    ParseError,
    QBenchError,
    ResourceError,
    VerificationError,
)
from .fibonacci import CONSTANTS, Sector, rep_braid, rep_generator
from .jones import jones_trace_closure, weighted_trace

__version__ = "0.1.0"
