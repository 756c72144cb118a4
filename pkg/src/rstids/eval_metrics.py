"""Confusion-matrix tallies and the detection metrics derived from them.

Positive = attack. A metric whose denominator is zero is ``None`` and prints
as ``n/a``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .errors import EmptyError, EmptyMatrixError, LengthMismatchError, MissingArtifactError

NA = "n/a"
FPR_NORMALS = "normals"  # misclassified normals / normals
FPR_COMPLEMENT = "complement"  # 1 - attack detection rate
FPR_CONVENTIONS = (FPR_NORMALS, FPR_COMPLEMENT)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def attacks(self) -> int:
        return self.tp + self.fn

    @property
    def normals(self) -> int:
        return self.tn + self.fp


def tally(predictions: Sequence[int], truths: Sequence[int]) -> ConfusionMatrix:
    """Count outcomes; predictions are +1/-1, truths are 1 (attack) / 0 (normal)."""
    p = np.asarray(predictions)
    t = np.asarray(truths)
    if p.shape != t.shape:
        raise LengthMismatchError(f"{p.size} predictions vs {t.size} truths")
    if p.size == 0:
        raise EmptyError("nothing to tally")
    alarm = p > 0
    attack = t > 0
    return ConfusionMatrix(
        tp=int(np.sum(alarm & attack)),
        fp=int(np.sum(alarm & ~attack)),
        tn=int(np.sum(~alarm & ~attack)),
        fn=int(np.sum(~alarm & attack)),
    )


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


@dataclass(frozen=True)
class MetricsReport:
    precision: float | None
    recall: float | None
    overall: float | None
    false_alarm: float | None
    attack_detection_rate: float | None
    false_positive_rate: float | None
    accuracy: float | None
    missed_attack_rate: float | None
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def cm(self) -> ConfusionMatrix:
        return ConfusionMatrix(self.tp, self.fp, self.tn, self.fn)

    @property
    def total_attacks(self) -> int:
        return self.tp + self.fn

    @property
    def total_normals(self) -> int:
        return self.tn + self.fp

    @property
    def total_processes(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def table_fpr(self, convention: str = FPR_NORMALS) -> float | None:
        if convention == FPR_NORMALS:
            return self.false_positive_rate
        if convention == FPR_COMPLEMENT:
            return self.missed_attack_rate
        raise ValueError(f"unknown FPR convention {convention!r}")

    def dumps(self, comments=()) -> str:
        """Flat ``key=value`` block; fractions as repr floats, missing as n/a."""
        lines = [f"# {c}" for c in comments]
        for key, value in asdict(self).items():
            if isinstance(value, float):
                lines.append(f"{key}={value!r}")
            elif value is None:
                lines.append(f"{key}={NA}")
            else:
                lines.append(f"{key}={value}")
        lines += [f"total_attacks={self.total_attacks}", f"total_normals={self.total_normals}",
                  f"total_processes={self.total_processes}"]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> MetricsReport:
        """Read a stored block back as written; nothing is recomputed."""
        kv = dict(line.split("=", 1) for line in text.splitlines()
                  if "=" in line and not line.startswith("#"))
        values = {}
        try:
            for f in fields(cls):
                raw = kv[f.name]
                if f.name in ("tp", "fp", "tn", "fn"):
                    values[f.name] = int(raw)
                else:
                    values[f.name] = None if raw == NA else float(raw)
        except KeyError as e:
            raise MissingArtifactError(f"metrics block lacks {e.args[0]}") from None
        return cls(**values)


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    total = cm.total
    if total == 0:
        raise EmptyMatrixError("confusion matrix is empty")
    adr = _ratio(cm.tp, cm.attacks)
    return MetricsReport(
        precision=_ratio(cm.tp, cm.tp + cm.fp),
        recall=_ratio(cm.tp, cm.tp + cm.fn),
        overall=(cm.tp + cm.tn) / total,
        false_alarm=(cm.fp + cm.fn) / total,
        attack_detection_rate=adr,
        false_positive_rate=_ratio(cm.fp, cm.normals),
        accuracy=(cm.tp + cm.tn) / total,
        missed_attack_rate=_ratio(cm.fn, cm.attacks),
        tp=cm.tp, fp=cm.fp, tn=cm.tn, fn=cm.fn,
    )


def _pct(value: float | None) -> str:
    return NA if value is None else f"{100.0 * value:.2f}%"


def format_row(name: str, adr: float | None, fpr: float | None, accuracy: float | None,
               width: int = 20) -> str:
    return f"{name:<{width}} | {_pct(adr)} | {_pct(fpr)} | {_pct(accuracy)}"


def comparison_table(reports: Sequence[tuple[str, MetricsReport]],
                     convention: str = FPR_NORMALS) -> str:
    """Method rows with attack detection rate, false positive rate and accuracy."""
    if not reports:
        raise EmptyError("no reports to compare")
    if convention not in FPR_CONVENTIONS:
        raise ValueError(f"unknown FPR convention {convention!r}")
    width = max(20, *(len(name) for name, _ in reports))
    fpr_head = "False Positive Rate" + (" (100%-ADR)" if convention == FPR_COMPLEMENT else "")
    lines = [f"{'Method':<{width}} | Attack Detection Rate | {fpr_head} | Accuracy"]
    for name, rep in reports:
        lines.append(format_row(name, rep.attack_detection_rate, rep.table_fpr(convention),
                                rep.accuracy, width))
    return "\n".join(lines) + "\n"
