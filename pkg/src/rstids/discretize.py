"""Equal-frequency binning of continuous features into small integer codes.

Codes feed the rough-set and entropy modules only; the SVM sees scaled
continuous values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EmptyDataError, FormatVersionError, MaskMismatchError
from .kdd_ingest import N_FEATURES, NumericInstance, to_arrays
from .masks import FeatureMask

DEFAULT_BINS = 10
_HEADER = "# rstids-bins v1"


def equal_frequency_cuts(values: np.ndarray, bin_count: int) -> np.ndarray:
    """Cut points for one feature.

    A cut always sits midway between two adjacent distinct training values, so
    equal values never land in different bins. With at most ``bin_count``
    distinct values every distinct value gets its own bin.
    """
    distinct = np.unique(values)
    if distinct.size <= 1:
        return np.empty(0)
    if distinct.size <= bin_count:
        return (distinct[:-1] + distinct[1:]) / 2.0
    ordered = np.sort(values)
    n = ordered.size
    cuts = []
    for j in range(1, bin_count):
        q = ordered[int(np.ceil(j * n / bin_count)) - 1]  # last value of the j-th bin
        k = np.searchsorted(distinct, q)
        if k + 1 < distinct.size:
            cuts.append((distinct[k] + distinct[k + 1]) / 2.0)
    return np.unique(np.array(cuts))


@dataclass
class BinningModel:
    mask: FeatureMask
    cuts: list[np.ndarray]
    bin_count: int
    method: str = "equal-frequency"

    def __post_init__(self):
        if len(self.cuts) != len(self.mask):
            raise ValueError("one cut list per masked feature required")
        for c in self.cuts:
            if c.size and (np.any(np.diff(c) <= 0) or not np.all(np.isfinite(c))):
                raise ValueError("cut points must be finite and strictly increasing")
            if c.size + 1 > self.bin_count:
                raise ValueError("more bins than bin_count")

    def n_bins(self) -> list[int]:
        return [c.size + 1 for c in self.cuts]

    def apply_matrix(self, X: np.ndarray) -> np.ndarray:
        """Codes for a full (n, 41) feature matrix -> (n, len(mask))."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != N_FEATURES:
            raise MaskMismatchError(f"expected {N_FEATURES} columns, got {X.shape[1]}")
        cols = self.mask.columns()
        codes = np.empty((X.shape[0], len(cols)), dtype=np.int64)
        for j, (col, cuts) in enumerate(zip(cols, self.cuts)):
            # side="left" counts cuts strictly below the value
            codes[:, j] = np.searchsorted(cuts, X[:, col], side="left")
        return codes

    def dumps(self) -> str:
        lines = [_HEADER, f"# method={self.method} bin_count={self.bin_count}",
                 f"# mask={self.mask.to_csv()}"]
        lines += [",".join(repr(float(v)) for v in c) for c in self.cuts]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> BinningModel:
        lines = text.split("\n")
        if not lines or lines[0] != _HEADER or len(lines) < 3:
            raise FormatVersionError("not a binning file")
        try:
            meta = dict(kv.split("=", 1) for kv in lines[1][2:].split())
            mask = FeatureMask.from_csv(lines[2].split("=", 1)[1], provenance="binning")
            body = lines[3:3 + len(mask)]
            if len(body) != len(mask):
                raise FormatVersionError("binning file truncated")
            cuts = [np.array([float(v) for v in ln.split(",") if v]) for ln in body]
            return cls(mask, cuts, int(meta["bin_count"]), meta["method"])
        except (KeyError, ValueError, IndexError) as e:
            raise FormatVersionError(f"corrupt binning file: {e}") from None

    @classmethod
    def load(cls, path) -> BinningModel:
        return cls.loads(Path(path).read_text())


def fit_bins(data: Sequence[NumericInstance] | np.ndarray, mask: FeatureMask | None = None,
             bin_count: int = DEFAULT_BINS) -> BinningModel:
    """Fit equal-frequency cut points per masked feature on training data."""
    if bin_count < 2:
        raise ValueError("bin_count must be >= 2")
    X = data if isinstance(data, np.ndarray) else to_arrays(data)[0]
    if X.shape[0] == 0:
        raise EmptyDataError("cannot fit bins on empty data")
    mask = mask or FeatureMask.full()
    cuts = [equal_frequency_cuts(X[:, col], bin_count) for col in mask.columns()]
    return BinningModel(mask, cuts, bin_count)


def apply_bins(model: BinningModel, instance: NumericInstance) -> tuple[np.ndarray, int]:
    """Discrete codes for the masked features of one instance, plus its decision."""
    if instance.features.shape != (N_FEATURES,):
        raise MaskMismatchError("instance does not carry the full 41 features")
    return model.apply_matrix(instance.features[None, :])[0], instance.decision
