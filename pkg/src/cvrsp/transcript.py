"""Records shared by all protocols: the classical message and run transcript."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

DISCARD = -1
"""Outcome id of the discard branch (phase POVM remainder, regularization edge)."""


@dataclass(frozen=True)
class ClassicalMessage:
    """The single number Alice sends to Bob."""

    kind: str  # "integer" or "real"
    value: float | int

    def __post_init__(self):
        if self.kind not in ("integer", "real"):
            raise ValueError(f"unknown message kind {self.kind!r}")
        if not math.isfinite(self.value):
            raise ValueError("message value must be finite")


@dataclass(frozen=True, eq=False)
class ProtocolTranscript:
    protocol: str
    resource: dict
    pre_measurement: dict
    outcome: int
    probability: float
    message: ClassicalMessage | None
    correction: dict
    bob_state: np.ndarray | None  # normalized, before Bob's correction
    output: np.ndarray | None
    target: np.ndarray
    fidelity: float | None
    discarded: bool = False
    dropped_weight: float | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError(f"probability {self.probability} outside [0, 1]")
        if self.fidelity is not None and not -1e-12 <= self.fidelity <= 1 + 1e-12:
            raise ValueError(f"fidelity {self.fidelity} outside [0, 1]")


def is_discard(outcome) -> bool:
    return isinstance(outcome, (int, np.integer)) and outcome == DISCARD


def select_outcome(probs, outcome) -> int:
    """Resolve an outcome selector to an index into ``probs``.

    ``outcome`` is either a forced index or any object with a ``random()``
    method returning a uniform double, in which case the index is drawn by
    inverse CDF with ties going to the lower index.
    """
    probs = np.asarray(probs, dtype=float)
    if hasattr(outcome, "random"):
        u = outcome.random()
        cdf = np.cumsum(probs)
        idx = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
        if idx >= probs.size:  # rounding at the top of the cdf
            idx = int(np.flatnonzero(probs > 0)[-1])
        return idx
    idx = int(outcome)
    if not 0 <= idx < probs.size:
        raise ValueError(f"forced outcome {idx} out of range 0..{probs.size - 1}")
    return idx
