"""Feature subsets, identified by 1-based KDD feature numbers."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import FormatVersionError
from .kdd_ingest import FEATURE_NAMES, N_FEATURES

PROVENANCES = ("reduct", "reference", "entropy", "full", "binning")


@dataclass(frozen=True)
class FeatureMask:
    indices: tuple[int, ...]
    provenance: str = "reduct"

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(i < 1 or i > N_FEATURES for i in idx):
            raise ValueError(f"feature indices must lie in [1, {N_FEATURES}]: {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"feature indices must be strictly increasing: {idx}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def of(cls, indices: Iterable[int], provenance: str = "reduct") -> FeatureMask:
        return cls(tuple(sorted(set(indices))), provenance)

    @classmethod
    def full(cls) -> FeatureMask:
        return cls(tuple(range(1, N_FEATURES + 1)), "full")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, item) -> bool:
        return item in self.indices

    def columns(self) -> list[int]:
        """0-based column positions into a 41-wide feature row."""
        return [i - 1 for i in self.indices]

    def names(self) -> list[str]:
        return [FEATURE_NAMES[i - 1] for i in self.indices]

    def to_csv(self) -> str:
        return ",".join(str(i) for i in self.indices)

    @classmethod
    def from_csv(cls, text: str, provenance: str = "reduct") -> FeatureMask:
        text = text.strip()
        return cls(tuple(int(t) for t in text.split(",")) if text else (), provenance)

    def dumps(self, comments: Iterable[str] = ()) -> str:
        extra = "".join(f"# {c}\n" for c in comments)
        return f"# provenance={self.provenance}\n{extra}{self.to_csv()}\n"

    @classmethod
    def loads(cls, text: str) -> FeatureMask:
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# provenance="):
            raise FormatVersionError("mask file lacks a provenance header")
        provenance = lines[0].split("=", 1)[1].strip()
        body = [ln for ln in lines[1:] if not ln.startswith("#")]
        return cls.from_csv(body[0] if body else "", provenance)

    def save(self, path, comments: Iterable[str] = ()) -> None:
        Path(path).write_text(self.dumps(comments))

    @classmethod
    def load(cls, path) -> FeatureMask:
        return cls.loads(Path(path).read_text())

    def diff(self, other: FeatureMask) -> dict[str, list[int]]:
        """Compare against ``other`` (the baseline): common / added / removed."""
        mine, theirs = set(self.indices), set(other.indices)
        return {
            "common": sorted(mine & theirs),
            "added": sorted(mine - theirs),
            "removed": sorted(theirs - mine),
        }


def diff_report(mask: FeatureMask, baseline: FeatureMask) -> str:
    d = mask.diff(baseline)
    lines = [f"{len(d['common'])} common, {len(d['added'])} added, {len(d['removed'])} removed"]
    for key in ("common", "added", "removed"):
        names = ", ".join(f"{i}:{FEATURE_NAMES[i - 1]}" for i in d[key])
        lines.append(f"{key}: {names}")
    return "\n".join(lines) + "\n"
