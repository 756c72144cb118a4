"""KDD Cup'99 record parsing, symbolic-to-numeric transform, labelling and sampling."""

from __future__ import annotations

import gzip
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyClassError,
    FieldCountError,
    NumericParseError,
    RecordError,
    UnknownAttackError,
    UnknownSymbolError,
)

log = logging.getLogger(__name__)

FEATURE_NAMES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
    "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
N_FEATURES = 41
N_FIELDS = 42

# 1-based positions of the symbolic fields
PROTOCOL_FIELD, SERVICE_FIELD, FLAG_FIELD = 2, 3, 4
SYMBOLIC_FIELDS = (PROTOCOL_FIELD, SERVICE_FIELD, FLAG_FIELD)

NORMAL, DOS, U2R, R2L, PROBE = "Normal", "DoS", "U2R", "R2L", "Probe"
CLASSES = (NORMAL, PROBE, DOS, U2R, R2L)  # row order of the train/test table

_CLASS_MEMBERS = {
    NORMAL: ["normal"],
    DOS: ["apache2", "back", "land", "mailbomb", "neptune", "pod", "processtable",
          "smurf", "teardrop", "udpstorm"],
    U2R: ["buffer_overflow", "httptunnel", "loadmodule", "perl", "ps", "rootkit",
          "sqlattack", "xterm"],
    R2L: ["ftp_write", "guess_passwd", "imap", "multihop", "named", "phf", "sendmail",
          "snmpgetattack", "snmpguess", "spy", "warezclient", "warezmaster", "worm",
          "xlock", "xsnoop"],
    PROBE: ["ipsweep", "mscan", "nmap", "portsweep", "saint", "satan"],
}
# Misspelled attack names accepted as aliases.
ATTACK_ALIASES = {"netune": "neptune", "lpsweep": "ipsweep", "httpunnel": "httptunnel"}

ATTACK_CLASSES: dict[str, str] = {
    name: cls for cls, names in _CLASS_MEMBERS.items() for name in names
}
ATTACK_CLASSES.update({alias: ATTACK_CLASSES[canon] for alias, canon in ATTACK_ALIASES.items()})

# Per-class counts of the reference train/test sample. The sampling ratios
# are the counts normalised by their own sum.
SAMPLE_TRAIN_COUNTS = {NORMAL: 4863, PROBE: 205, DOS: 19572, U2R: 2, R2L: 56}
SAMPLE_TEST_COUNTS = {NORMAL: 3029, PROBE: 208, DOS: 11492, U2R: 11, R2L: 809}


def _normalise(counts: dict[str, int]) -> dict[str, float]:
    total = sum(counts.values())
    return {c: n / total for c, n in counts.items()}


SAMPLE_TRAIN_RATIOS = _normalise(SAMPLE_TRAIN_COUNTS)
SAMPLE_TEST_RATIOS = _normalise(SAMPLE_TEST_COUNTS)


def attack_class(label: str) -> str:
    try:
        return ATTACK_CLASSES[label.strip().rstrip(".").lower()]
    except KeyError:
        raise UnknownAttackError(f"unknown attack label {label!r}") from None


@dataclass(frozen=True)
class ConnectionRecord:
    """One raw KDD line: 41 feature tokens in KDD field order plus the label.

    Numeric fields are already floats; the three symbolic fields stay strings.
    """

    fields: tuple
    label: str
    line_no: int | None = None

    @property
    def protocol(self) -> str:
        return self.fields[PROTOCOL_FIELD - 1]

    @property
    def service(self) -> str:
        return self.fields[SERVICE_FIELD - 1]

    @property
    def flag(self) -> str:
        return self.fields[FLAG_FIELD - 1]


@dataclass(frozen=True, eq=False)
class NumericInstance:
    features: np.ndarray
    decision: int
    attack_class: str

    def __post_init__(self):
        if self.features.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} features, got {self.features.shape}")
        if (self.decision == 0) != (self.attack_class == NORMAL):
            raise ValueError("decision must be 0 exactly for Normal instances")

    def __eq__(self, other):
        if not isinstance(other, NumericInstance):
            return NotImplemented
        return (
            self.decision == other.decision
            and self.attack_class == other.attack_class
            and np.array_equal(self.features, other.features)
        )

    __hash__ = None


@dataclass
class SymbolMaps:
    protocol_map: dict[str, int]
    flag_map: dict[str, int]
    service_map: dict[str, int]

    def __post_init__(self):
        self.protocol_map = {k.lower(): v for k, v in self.protocol_map.items()}
        self.flag_map = {k.lower(): v for k, v in self.flag_map.items()}
        self.service_map = {k.lower(): v for k, v in self.service_map.items()}
        if len(set(self.service_map.values())) != len(self.service_map):
            raise ValueError("service map must be injective")

    @classmethod
    def from_file(cls, path) -> SymbolMaps:
        return cls.parse(Path(path).read_text())

    @classmethod
    def default(cls) -> SymbolMaps:
        text = resources.files("rstids").joinpath("data/symbol_maps.txt").read_text()
        return cls.parse(text)

    @classmethod
    def parse(cls, text: str) -> SymbolMaps:
        groups: dict[str, dict[str, int]] = {"protocol": {}, "flag": {}, "service": {}}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            group, dot, token = key.strip().partition(".")
            if not sep or not dot or group not in groups:
                raise ValueError(f"symbol map line {n}: cannot parse {raw!r}")
            groups[group][token.strip()] = int(value)
        return cls(groups["protocol"], groups["flag"], groups["service"])

    def dump(self) -> str:
        out = []
        for group, mapping in (("protocol", self.protocol_map), ("flag", self.flag_map),
                               ("service", self.service_map)):
            out += [f"{group}.{k}={v}" for k, v in sorted(mapping.items(), key=lambda kv: kv[1])]
        return "\n".join(out) + "\n"


def parse_line(line: str, line_no: int | None = None) -> ConnectionRecord:
    if not line or not line.strip():
        raise FieldCountError("empty line", line_no)
    parts = [p.strip() for p in line.strip().split(",")]
    if len(parts) != N_FIELDS:
        raise FieldCountError(f"expected {N_FIELDS} fields, found {len(parts)}", line_no)
    fields: list = []
    for pos, token in enumerate(parts[:N_FEATURES], 1):
        if pos in SYMBOLIC_FIELDS:
            fields.append(token)
            continue
        try:
            value = float(token)
        except ValueError:
            raise NumericParseError(f"field {pos} ({FEATURE_NAMES[pos - 1]}): {token!r}", line_no) from None
        if not math.isfinite(value) or value < 0:
            raise NumericParseError(f"field {pos} ({FEATURE_NAMES[pos - 1]}) out of range: {token!r}", line_no)
        fields.append(value)
    label = parts[-1].rstrip(".").strip()
    return ConnectionRecord(tuple(fields), label, line_no)


def _lookup(mapping: dict[str, int], token: str, what: str, strict: bool, line_no) -> int:
    code = mapping.get(token.lower())
    if code is None:
        if strict:
            raise UnknownSymbolError(f"unknown {what} {token!r}", line_no)
        return 0
    return code


def transform(rec: ConnectionRecord, maps: SymbolMaps, strict: bool = True) -> NumericInstance:
    """Replace the symbolic fields by their codes and map the label.

    With ``strict=False`` an unknown symbol maps to 0 (no table entry uses 0).
    """
    cls = _class_or_raise(rec)
    values = list(rec.fields)
    values[PROTOCOL_FIELD - 1] = _lookup(maps.protocol_map, rec.protocol, "protocol", strict, rec.line_no)
    values[SERVICE_FIELD - 1] = _lookup(maps.service_map, rec.service, "service", strict, rec.line_no)
    values[FLAG_FIELD - 1] = _lookup(maps.flag_map, rec.flag, "flag", strict, rec.line_no)
    features = np.array(values, dtype=np.float64)
    return NumericInstance(features, int(cls != NORMAL), cls)


def _class_or_raise(rec: ConnectionRecord) -> str:
    try:
        return attack_class(rec.label)
    except UnknownAttackError as e:
        raise UnknownAttackError(str(e), rec.line_no) from None


@dataclass
class IngestReport:
    accepted: int = 0
    skipped: int = 0
    class_counts: Counter = field(default_factory=Counter)
    errors: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.class_counts.values())

    def table(self) -> str:
        """Plain-text class/count/ratio table."""
        total = self.total
        rows = [f"{'Class':<8}{'Count':>8}{'Ratio':>10}"]
        for cls in CLASSES:
            n = self.class_counts.get(cls, 0)
            ratio = 100.0 * n / total if total else 0.0
            rows.append(f"{cls:<8}{n:>8}{ratio:>9.2f}%")
        rows.append(f"{'Total':<8}{total:>8}{(100.0 if total else 0.0):>9.2f}%")
        rows.append(f"accepted={self.accepted} skipped={self.skipped}")
        return "\n".join(rows) + "\n"


def _open_text(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8", newline="")
    return path.open("r", encoding="utf-8", newline="")


def iter_lines(path) -> Iterable[tuple[int, str]]:
    with _open_text(path) as fh:
        for n, line in enumerate(fh, 1):
            if line.strip():
                yield n, line


def load_dataset(path, maps: SymbolMaps | None = None,
                 strict: bool = False) -> tuple[list[NumericInstance], IngestReport]:
    """Read a KDD file (plain or .gz) into numeric instances, in file order.

    In lenient mode bad lines are skipped and counted; in strict mode the first
    bad line raises.
    """
    maps = maps or SymbolMaps.default()
    report = IngestReport()
    out: list[NumericInstance] = []
    for n, line in iter_lines(path):
        try:
            inst = transform(parse_line(line, n), maps, strict=strict)
        except RecordError as e:
            if strict:
                raise
            report.skipped += 1
            report.errors.append(str(e))
            continue
        out.append(inst)
        report.accepted += 1
        report.class_counts[inst.attack_class] += 1
    if report.skipped:
        log.warning("%s: skipped %d malformed line(s)", path, report.skipped)
    return out, report


def allocate_counts(ratios: dict[str, float], total: int) -> dict[str, int]:
    """Largest-remainder apportionment of ``total`` over ``ratios``.

    Remainder ties go to the class listed first in ``ratios``.
    """
    if abs(sum(ratios.values()) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios.values())!r}")
    if total < 0:
        raise ValueError("total must be non-negative")
    quotas = {c: r * total for c, r in ratios.items()}
    counts = {c: int(math.floor(q)) for c, q in quotas.items()}
    left = total - sum(counts.values())
    order = sorted(ratios, key=lambda c: -(quotas[c] - counts[c]))  # stable sort
    for c in order[:left]:
        counts[c] += 1
    return counts


def stratified_sample(data: Sequence[NumericInstance], ratios: dict[str, float], total: int,
                      seed: int, report_shortfall: bool = True) -> list[NumericInstance]:
    """Draw ``total`` instances without replacement with the given class ratios.

    Selected instances keep their source order. A class with too few records
    contributes everything it has; the shortfall is logged, not redistributed.
    """
    counts = allocate_counts(ratios, total)
    by_class: dict[str, list[int]] = {c: [] for c in ratios}
    for i, inst in enumerate(data):
        if inst.attack_class in by_class:
            by_class[inst.attack_class].append(i)
    rng = np.random.default_rng(seed)
    chosen: list[int] = []
    for cls in ratios:  # fixed iteration order keeps the RNG stream deterministic
        want, pool = counts[cls], by_class[cls]
        if want == 0:
            continue
        if not pool and not report_shortfall:
            raise EmptyClassError(f"class {cls} requested {want} records but has none")
        if len(pool) < want:
            if report_shortfall:
                log.warning("class %s: requested %d, only %d available", cls, want, len(pool))
            chosen.extend(pool)
            continue
        picks = rng.choice(len(pool), size=want, replace=False)
        chosen.extend(pool[k] for k in picks)
    return [data[i] for i in sorted(chosen)]


def sample_lines(path, ratios: dict[str, float], total: int, seed: int,
                 maps: SymbolMaps | None = None, strict: bool = False) -> list[str]:
    """Stratified sample of the raw text lines of a KDD file (lines keep file order)."""
    maps = maps or SymbolMaps.default()
    raw, insts = [], []
    for n, line in iter_lines(path):
        try:
            insts.append(transform(parse_line(line, n), maps, strict=strict))
        except RecordError:
            if strict:
                raise
            continue
        raw.append(line.rstrip("\r\n"))
    position = {id(inst): k for k, inst in enumerate(insts)}
    return [raw[position[id(p)]] for p in stratified_sample(insts, ratios, total, seed)]


def to_arrays(data: Sequence[NumericInstance]) -> tuple[np.ndarray, np.ndarray]:
    """Stack instances into an (n, 41) feature matrix and a 0/1 decision vector."""
    if not data:
        return np.empty((0, N_FEATURES)), np.empty(0, dtype=np.int64)
    X = np.vstack([d.features for d in data])
    y = np.array([d.decision for d in data], dtype=np.int64)
    return X, y
