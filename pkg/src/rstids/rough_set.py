"""Rough-set decision tables: indiscernibility, approximations, dependency, reducts.

Objects are referred to by id (``DecisionTable.objects``); attribute subsets are
given as attribute ids drawn from ``DecisionTable.attributes``. Grouping is
done by hashing value tuples, so no pairwise discernibility matrix is built.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyUniverseError, UnknownAttributeError
from .masks import FeatureMask

log = logging.getLogger(__name__)

# The 29-feature reference reduct, as 1-based feature numbers.
REFERENCE_FEATURES = (1, 2, 5, 6, 8, 11, 12, 13, 14, 16, 17, 18, 19, 23, 25, 27, 29,
                      30, 31, 32, 33, 34, 35, 36, 37, 38, 39, 40, 41)


def reference_mask() -> FeatureMask:
    return FeatureMask(REFERENCE_FEATURES, "reference")


class Definability(str, enum.Enum):
    DEFINABLE = "Definable"
    ROUGHLY_DEFINABLE = "RoughlyDefinable"
    EXTERNALLY_INDEFINABLE = "ExternallyIndefinable"
    INTERNALLY_INDEFINABLE = "InternallyIndefinable"
    TOTALLY_INDEFINABLE = "TotallyIndefinable"


@dataclass
class DecisionTable:
    values: np.ndarray
    decision: np.ndarray
    attributes: list = field(default=None)
    objects: list = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        self.decision = np.asarray(self.decision, dtype=np.int64)
        m, k = self.values.shape
        if self.decision.shape != (m,):
            raise ValueError("decision length must equal the number of objects")
        if m and self.values.min() < 0:
            raise ValueError("attribute codes must be non-negative integers")
        if self.attributes is None:
            self.attributes = list(range(1, k + 1))
        if self.objects is None:
            self.objects = list(range(1, m + 1))
        if len(self.attributes) != k or len(set(self.attributes)) != k:
            raise ValueError("attributes must be distinct and match the column count")
        if len(self.objects) != m:
            raise ValueError("object ids must match the row count")
        self._col = {a: j for j, a in enumerate(self.attributes)}
        self._pos = {o: i for i, o in enumerate(self.objects)}

    @property
    def n_objects(self) -> int:
        return self.values.shape[0]

    def column(self, attribute) -> np.ndarray:
        try:
            return self.values[:, self._col[attribute]]
        except KeyError:
            raise UnknownAttributeError(f"attribute {attribute!r} not in table") from None

    def ids(self, positions: Iterable[int]) -> set:
        return {self.objects[i] for i in positions}

    def positions(self, ids: Iterable) -> np.ndarray:
        try:
            return np.array(sorted(self._pos[o] for o in ids), dtype=np.int64)
        except KeyError as e:
            raise ValueError(f"object {e.args[0]!r} not in universe") from None

    def dumps(self) -> str:
        """Row-per-object text form, ``O:<id>,<codes...>,<decision>``."""
        rows = []
        for oid, row, d in zip(self.objects, self.values, self.decision):
            rows.append(f"O:{oid}," + ",".join(str(v) for v in row) + f",{d}")
        return "\n".join(rows) + ("\n" if rows else "")

    @classmethod
    def loads(cls, text: str, attributes: list | None = None) -> DecisionTable:
        objects, rows, dec = [], [], []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            oid = None
            if line.startswith("O:"):
                head, _, line = line[2:].partition(",")
                oid = int(head)
            fields = [int(v) for v in line.split(",")]
            objects.append(oid if oid is not None else n)
            rows.append(fields[:-1])
            dec.append(fields[-1])
        width = len(attributes) if attributes else (len(rows[0]) if rows else 0)
        values = np.array(rows, dtype=np.int64).reshape(len(rows), width)
        return cls(values, np.array(dec, dtype=np.int64), attributes, objects)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path, attributes: list | None = None) -> DecisionTable:
        return cls.loads(Path(path).read_text(), attributes)


@dataclass(frozen=True)
class Partition:
    classes: tuple[frozenset, ...]
    attributes: tuple

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class ApproximationResult:
    lower: frozenset
    upper: frozenset
    boundary: frozenset
    definability: Definability


def _refine(labels: np.ndarray, column: np.ndarray) -> np.ndarray:
    """Intersect a partition (given as class labels) with one more attribute."""
    key = labels * (int(column.max()) + 1 if column.size else 1) + column
    return np.unique(key, return_inverse=True)[1].reshape(-1)


def class_labels(table: DecisionTable, B: Sequence) -> np.ndarray:
    """Dense equivalence-class label per object under Ind(B)."""
    labels = np.zeros(table.n_objects, dtype=np.int64)
    for a in B:
        labels = _refine(labels, table.column(a))
    return labels


def partition(table: DecisionTable, B: Sequence) -> Partition:
    labels = class_labels(table, B)
    groups: dict[int, list] = {}
    for i, g in enumerate(labels):
        groups.setdefault(int(g), []).append(table.objects[i])
    classes = tuple(frozenset(members) for members in groups.values())
    return Partition(classes, tuple(B))


def _classify(lower_empty: bool, upper_is_universe: bool, rough: bool) -> Definability:
    if not rough:
        return Definability.DEFINABLE
    if not lower_empty and not upper_is_universe:
        return Definability.ROUGHLY_DEFINABLE
    if not lower_empty:
        return Definability.EXTERNALLY_INDEFINABLE
    if not upper_is_universe:
        return Definability.INTERNALLY_INDEFINABLE
    return Definability.TOTALLY_INDEFINABLE


def approximate(table: DecisionTable, B: Sequence, X: Iterable) -> ApproximationResult:
    """Lower/upper approximation of the object set ``X`` under Ind(B)."""
    labels = class_labels(table, B)
    in_x = np.zeros(table.n_objects, dtype=bool)
    in_x[table.positions(X)] = True
    n_cls = int(labels.max()) + 1 if labels.size else 0
    hits = np.bincount(labels, weights=in_x, minlength=n_cls)
    sizes = np.bincount(labels, minlength=n_cls)
    lower_pos = np.flatnonzero((hits == sizes)[labels] & (sizes[labels] > 0))
    upper_pos = np.flatnonzero((hits > 0)[labels])
    lower, upper = frozenset(table.ids(lower_pos)), frozenset(table.ids(upper_pos))
    boundary = upper - lower
    kind = _classify(not lower, len(upper) == table.n_objects, bool(boundary))
    return ApproximationResult(lower, upper, boundary, kind)


def _positive_mask(labels: np.ndarray, decision: np.ndarray) -> np.ndarray:
    if labels.size == 0:
        return np.zeros(0, dtype=bool)
    n_cls = int(labels.max()) + 1
    lo = np.full(n_cls, np.iinfo(np.int64).max)
    hi = np.full(n_cls, np.iinfo(np.int64).min)
    np.minimum.at(lo, labels, decision)
    np.maximum.at(hi, labels, decision)
    return (lo == hi)[labels]


def positive_count(table: DecisionTable, B: Sequence) -> int:
    return int(_positive_mask(class_labels(table, B), table.decision).sum())


def positive_region(table: DecisionTable, B: Sequence) -> set:
    """Objects whose Ind(B) class is pure in the decision."""
    pure = _positive_mask(class_labels(table, B), table.decision)
    return table.ids(np.flatnonzero(pure))


def dependency_fraction(table: DecisionTable, B: Sequence) -> Fraction:
    if table.n_objects == 0:
        raise EmptyUniverseError("dependency undefined on an empty universe")
    return Fraction(positive_count(table, B), table.n_objects)


def dependency(table: DecisionTable, B: Sequence) -> float:
    return float(dependency_fraction(table, B))


def reduct_attributes(table: DecisionTable) -> list:
    """Greedy forward selection then a backward redundancy pass.

    Each round adds the attribute with the largest positive-region gain, lowest
    attribute id first on ties. When no candidate gains anything, the one that
    splits the current partition into the most classes is taken instead, so
    constant or duplicate columns are not picked while a useful combination
    exists. The backward pass drops every attribute whose removal keeps the
    full-set dependency. Comparisons use integer positive-region sizes.
    """
    if table.n_objects == 0:
        return []
    target = positive_count(table, table.attributes)
    chosen: list = []
    labels = np.zeros(table.n_objects, dtype=np.int64)
    current = positive_count(table, [])
    remaining = sorted(table.attributes)
    while current < target and remaining:
        best = None
        for a in remaining:
            cand = _refine(labels, table.column(a))
            pos = int(_positive_mask(cand, table.decision).sum())
            score = (pos, int(cand.max()) + 1 if pos == current else 0)
            if best is None or score > best[0]:
                best = (score, a, cand)
        (current, _), a, labels = best
        chosen.append(a)
        remaining.remove(a)
        log.debug("reduct: added %s, positive region %d/%d", a, current, target)
    for a in sorted(chosen):
        trial = [b for b in chosen if b != a]
        if positive_count(table, trial) == target:
            chosen = trial
    return sorted(chosen)


def greedy_reduct(table: DecisionTable, seed: int = 0) -> FeatureMask:
    """Reduct of a KDD decision table whose attributes are feature numbers.

    The search is deterministic; ``seed`` is accepted for interface symmetry
    with the other selectors and recorded by callers, but does not affect the
    result.
    """
    return FeatureMask.of(reduct_attributes(table), "reduct")


def table_from_codes(codes: np.ndarray, decision: np.ndarray, mask: FeatureMask) -> DecisionTable:
    return DecisionTable(codes, decision, attributes=list(mask.indices))
