"""Exact remote state preparation protocols: finite Z_N and continuous-variable variants."""

from .engine import execute, obliviousness_check
from .transcript import DISCARD, ClassicalMessage, ProtocolTranscript

__version__ = "0.1.0"
