"""Finite discrete measure spaces and their case classification.

A space is a weight vector (a_1, ..., a_k), a_i = mu({i}) >= 0.  The two
classification flags correspond to the regimes where the theory provides
paranorm certificates: total mass at most one, and counting-measure-like
weights (each a_i either 0 or at least 1).  Both may hold at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MeasureError(Exception):
    pass


@dataclass(frozen=True)
class MeasureSpace:
    weights: tuple

    def __post_init__(self):
        ws = tuple(float(w) for w in self.weights)
        if len(ws) < 1:
            raise MeasureError("a measure space needs at least one weight")
        if any(w < 0 or not np.isfinite(w) for w in ws):
            raise MeasureError(f"weights must be finite and nonnegative: {ws}")
        if not any(w > 0 for w in ws):
            raise MeasureError("at least one weight must be positive")
        object.__setattr__(self, "weights", ws)

    @property
    def k(self) -> int:
        return len(self.weights)

    def array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    @property
    def total(self) -> float:
        return float(sum(self.weights))


@dataclass(frozen=True)
class CaseFlags:
    """Classification of a measure space.

    sub_probability: total mass <= 1 (weight-sum comparison is exact; the
    weights are user inputs, not computed quantities).
    counting_like: every weight lies in {0} union [1, inf).
    The witness dict explains a False flag.
    """

    sub_probability: bool
    counting_like: bool
    witness: dict

    def __str__(self):
        return (f"sub_probability={self.sub_probability} "
                f"counting_like={self.counting_like}")


def classify(space: MeasureSpace) -> CaseFlags:
    total = space.total
    sub_probability = total <= 1.0
    offending = [w for w in space.weights if not (w == 0.0 or w >= 1.0)]
    counting_like = not offending
    witness = {}
    if not sub_probability:
        witness["total_mass"] = total
    if not counting_like:
        witness["weight_outside_{0}_union_[1,inf)"] = offending[0]
    return CaseFlags(sub_probability=sub_probability,
                     counting_like=counting_like,
                     witness=witness)


def parse_weights(text: str) -> MeasureSpace:
    """CLI weight syntax: comma-separated reals, e.g. '1,1'."""
    parts = [p for p in text.split(",") if p.strip()]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as err:
        raise MeasureError(f"malformed weights {text!r}: {err}") from None
    return MeasureSpace(values)
