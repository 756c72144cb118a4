"""Information-gain ranking of discretized features against the binary decision."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataError
from .masks import FeatureMask
from .rough_set import DecisionTable

DEFAULT_K = 29


@dataclass(frozen=True)
class FeatureScore:
    feature: int
    gain: float
    rank: int


def _entropy_of_counts(counts: np.ndarray) -> float:
    counts = counts[counts > 0]
    if counts.size == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def decision_entropy(rows) -> float:
    """Shannon entropy of a discrete vector, in bits."""
    rows = np.asarray(rows)
    if rows.size == 0:
        raise EmptyDataError("entropy of an empty vector")
    _, counts = np.unique(rows, return_counts=True)
    return _entropy_of_counts(counts)


def information_gain(table: DecisionTable, feature) -> float:
    column = table.column(feature)
    d = table.decision
    if d.size == 0:
        raise EmptyDataError("information gain on an empty table")
    _, dec = np.unique(d, return_inverse=True)
    _, val = np.unique(column, return_inverse=True)
    joint = np.zeros((val.max() + 1, dec.max() + 1))
    np.add.at(joint, (val, dec), 1)
    conditional = sum(row.sum() / d.size * _entropy_of_counts(row) for row in joint)
    # floating error can push a zero gain marginally negative
    return max(0.0, _entropy_of_counts(joint.sum(axis=0)) - conditional)


def rank_features(table: DecisionTable) -> list[FeatureScore]:
    gains = [(a, information_gain(table, a)) for a in table.attributes]
    ordered = sorted(gains, key=lambda ag: (-ag[1], ag[0]))
    return [FeatureScore(a, g, r) for r, (a, g) in enumerate(ordered, 1)]


def entropy_mask(table: DecisionTable, k: int = DEFAULT_K) -> FeatureMask:
    if not 1 <= k <= len(table.attributes):
        raise ValueError(f"k must lie in [1, {len(table.attributes)}]")
    top = [s.feature for s in rank_features(table)[:k]]
    return FeatureMask.of(top, "entropy")


def score_report(scores: list[FeatureScore]) -> str:
    lines = ["# feature gain_bits"]
    lines += [f"{s.feature} {s.gain:.6f}" for s in scores]
    return "\n".join(lines) + "\n"
