"""Three-arm experiment: full 41 features vs entropy-ranked vs rough-set reduct.

A run writes a flat directory of text artifacts::

    out/config.txt           resolved config, config hash, seed
    out/ingest_train.txt     class table of the (sampled) training split
    out/ingest_test.txt
    out/binning.txt          cut points fitted on the training split
    out/entropy_scores.txt   information gain ranking (entropy arm only)
    out/<arm>/mask.txt
    out/<arm>/model.txt
    out/<arm>/metrics.txt
    out/status.txt           ok / error per arm
    out/comparison.txt

Only the training split is used to fit bins, masks, scaling and the SVM.
"""

from __future__ import annotations

import configparser
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

from . import discretize, entropy_rank, eval_metrics, rough_set, svm_core
from .errors import DataError, MissingArtifactError, RstIdsError
from .kdd_ingest import (
    SAMPLE_TEST_RATIOS,
    SAMPLE_TRAIN_RATIOS,
    NumericInstance,
    SymbolMaps,
    load_dataset,
    stratified_sample,
    to_arrays,
)
from .masks import FeatureMask

log = logging.getLogger(__name__)

ARMS = ("full", "entropy", "roughset", "reference")
ARM_TITLES = {
    "full": "41 features to SVM",
    "entropy": "Entropy to SVM",
    "roughset": "Rough Set of SVM",
    "reference": "Reference 29 to SVM",
}
DESK = "desk"  # path placeholder for the bundled sample


def desk_path(split: str) -> Path:
    return Path(str(resources.files("rstids").joinpath(f"data/desk_{split}.txt")))


def parse_ratios(text: str) -> dict[str, float]:
    """``train`` / ``test`` for the built-in class ratios, else ``Normal=0.2,DoS=0.8,...``."""
    text = text.strip()
    if text == "train":
        return dict(SAMPLE_TRAIN_RATIOS)
    if text == "test":
        return dict(SAMPLE_TEST_RATIOS)
    out = {}
    for part in text.split(","):
        k, _, v = part.partition("=")
        out[k.strip()] = float(v)
    return out


@dataclass
class ExperimentConfig:
    train_path: str = DESK
    test_path: str = DESK
    output_dir: str = "experiment_out"
    maps_path: str = ""
    train_total: int = 0  # 0: use the whole file
    test_total: int = 0
    train_ratios: str = "train"
    test_ratios: str = "test"
    seed: int = 0
    bins: int = discretize.DEFAULT_BINS
    entropy_k: int = entropy_rank.DEFAULT_K
    C: float = 1.0
    gamma: float = 0.0  # 0: 1 / number of selected features
    tolerance: float = 1e-3
    max_passes: int = 10
    max_sweeps: int = 10_000
    attack_weight: float = 1.0
    normal_weight: float = 1.0
    arms: tuple[str, ...] = ("full", "entropy", "roughset")
    strict: bool = False
    fpr_convention: str = eval_metrics.FPR_NORMALS
    workers: int = 0  # 0: one worker per arm

    # keys excluded from the hash: they do not change any result
    _UNHASHED = ("output_dir", "workers")

    def __post_init__(self):
        if isinstance(self.arms, str):
            self.arms = tuple(a.strip() for a in self.arms.split(",") if a.strip())
        self.arms = tuple(self.arms)
        if not self.arms:
            raise ValueError("at least one arm is required")
        bad = [a for a in self.arms if a not in ARMS]
        if bad:
            raise ValueError(f"unknown arm(s) {bad}; choose from {ARMS}")
        if self.fpr_convention not in eval_metrics.FPR_CONVENTIONS:
            raise ValueError(f"fpr_convention must be one of {eval_metrics.FPR_CONVENTIONS}")
        if self.bins < 2:
            raise ValueError("bins must be >= 2")

    def resolved_path(self, split: str) -> Path:
        raw = self.train_path if split == "train" else self.test_path
        return desk_path(split) if raw == DESK else Path(raw)

    def train_config(self) -> svm_core.TrainConfig:
        weights = None
        if self.attack_weight != 1.0 or self.normal_weight != 1.0:
            weights = {1: self.attack_weight, -1: self.normal_weight}
        return svm_core.TrainConfig(C=self.C, gamma=self.gamma or None, tolerance=self.tolerance,
                                    max_passes=self.max_passes, max_sweeps=self.max_sweeps,
                                    seed=self.seed, class_weight=weights)

    def items(self, hashed_only: bool = False):
        for f in fields(self):
            if hashed_only and f.name in self._UNHASHED:
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            yield f.name, str(value)

    def dumps(self, hashed_only: bool = True) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items(hashed_only))

    def config_hash(self) -> str:
        return hashlib.sha256(self.dumps(hashed_only=True).encode()).hexdigest()[:16]

    @classmethod
    def from_mapping(cls, mapping: dict) -> ExperimentConfig:
        kinds = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, raw in mapping.items():
            key = key.replace("-", "_")
            if key not in kinds:
                raise ValueError(f"unknown config key {key!r}")
            kind = kinds[key]
            if not isinstance(raw, str):
                values[key] = raw
            elif kind == "int":
                values[key] = int(raw)
            elif kind == "float":
                values[key] = float(raw)
            elif kind == "bool":
                values[key] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                values[key] = raw.strip()
        return cls(**values)

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> ExperimentConfig:
        """Read an INI-style file with one ``[experiment]`` section."""
        parser = configparser.ConfigParser()
        parser.optionxform = str
        if not parser.read(path):
            raise DataError(f"cannot read config file {path}")
        mapping = dict(parser["experiment"]) if parser.has_section("experiment") else {}
        mapping.update(overrides or {})
        return cls.from_mapping(mapping)


@dataclass
class ArmResult:
    arm: str
    mask: FeatureMask | None = None
    model: svm_core.SvmModel | None = None
    report: eval_metrics.MetricsReport | None = None
    error: str | None = None


@dataclass
class ExperimentBundle:
    config: ExperimentConfig
    arms: dict[str, ArmResult] = field(default_factory=dict)
    binning: discretize.BinningModel | None = None
    comparison: str = ""

    @property
    def failed(self) -> list[str]:
        return [a for a, r in self.arms.items() if r.error]


def _load_split(cfg: ExperimentConfig, split: str, maps: SymbolMaps) -> tuple[list[NumericInstance], object]:
    path = cfg.resolved_path(split)
    if not path.exists():
        raise DataError(f"{split} file not found: {path}")
    data, report = load_dataset(path, maps, strict=cfg.strict)
    total = cfg.train_total if split == "train" else cfg.test_total
    if total:
        ratios = parse_ratios(cfg.train_ratios if split == "train" else cfg.test_ratios)
        # distinct streams for the two splits
        data = stratified_sample(data, ratios, total, cfg.seed + (0 if split == "train" else 1))
        report.class_counts.clear()
        report.class_counts.update(d.attack_class for d in data)
    return data, report


def _select_mask(arm: str, table: rough_set.DecisionTable, cfg: ExperimentConfig) -> FeatureMask:
    if arm == "full":
        return FeatureMask.full()
    if arm == "reference":
        return rough_set.reference_mask()
    if arm == "roughset":
        return rough_set.greedy_reduct(table, cfg.seed)
    return entropy_rank.entropy_mask(table, cfg.entropy_k)


def _run_arm(arm: str, table, Xtr, ytr, Xte, yte, cfg: ExperimentConfig) -> ArmResult:
    result = ArmResult(arm)
    try:
        mask = _select_mask(arm, table, cfg)
        if len(mask) == 0:
            raise DataError("feature selection returned an empty mask")
        result.mask = mask
        result.model = svm_core.train_masked(Xtr, ytr, mask, cfg.train_config())
        signs, _ = svm_core.predict_batch(result.model, Xte)
        result.report = eval_metrics.compute_metrics(eval_metrics.tally(signs, yte))
    except (RstIdsError, ValueError) as e:
        log.error("arm %s failed: %s", arm, e)
        result.error = f"arm {arm}: {type(e).__name__}: {e}"
    return result


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentBundle:
    """Ingest, discretize, select features, train and evaluate every configured arm."""
    maps = SymbolMaps.from_file(cfg.maps_path) if cfg.maps_path else SymbolMaps.default()
    train, train_report = _load_split(cfg, "train", maps)
    test, test_report = _load_split(cfg, "test", maps)
    if not train or not test:
        raise DataError("train and test splits must both be non-empty")
    Xtr, ytr = to_arrays(train)
    Xte, yte = to_arrays(test)

    binning = discretize.fit_bins(Xtr, FeatureMask.full(), cfg.bins)
    table = rough_set.table_from_codes(binning.apply_matrix(Xtr), ytr, binning.mask)

    workers = cfg.workers or len(cfg.arms)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {arm: pool.submit(_run_arm, arm, table, Xtr, ytr, Xte, yte, cfg) for arm in cfg.arms}
        results = {arm: futures[arm].result() for arm in cfg.arms}

    bundle = ExperimentBundle(cfg, results, binning)
    ok = [(ARM_TITLES[a], r.report) for a, r in results.items() if r.report is not None]
    bundle.comparison = eval_metrics.comparison_table(ok, cfg.fpr_convention) if ok else ""
    if write:
        _write_bundle(bundle, table, train_report, test_report)
    return bundle


def _write_bundle(bundle: ExperimentBundle, table, train_report, test_report) -> None:
    cfg = bundle.config
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stamp = [f"config_hash={cfg.config_hash()}", f"seed={cfg.seed}"]
    header = "".join(f"# {s}\n" for s in stamp)

    (out / "config.txt").write_text(header + "[experiment]\n" + cfg.dumps())
    (out / "ingest_train.txt").write_text(header + train_report.table())
    (out / "ingest_test.txt").write_text(header + test_report.table())
    (out / "binning.txt").write_text(bundle.binning.dumps() + header)
    if "entropy" in cfg.arms:
        scores = entropy_rank.rank_features(table)
        (out / "entropy_scores.txt").write_text(header + entropy_rank.score_report(scores))
    status = []
    for arm, res in bundle.arms.items():
        arm_dir = out / arm
        arm_dir.mkdir(exist_ok=True)
        for name in ("mask.txt", "model.txt", "metrics.txt"):
            stale = arm_dir / name
            if stale.exists():
                stale.unlink()
        if res.mask is not None:
            res.mask.save(arm_dir / "mask.txt", stamp)
        if res.model is not None:
            svm_core.save_model(res.model, arm_dir / "model.txt", stamp)
        if res.report is not None:
            (arm_dir / "metrics.txt").write_text(res.report.dumps(stamp))
        if res.error:
            status.append(f"{arm}={res.error}")
        else:
            info = res.model.info
            status.append(f"{arm}=ok features={len(res.mask)} support_vectors={res.model.n_support} "
                          f"sweeps={info.sweeps} converged={str(info.converged).lower()}")
    (out / "status.txt").write_text(header + "\n".join(status) + "\n")
    (out / "comparison.txt").write_text(header + bundle.comparison)


def read_config(out_dir) -> ExperimentConfig:
    path = Path(out_dir) / "config.txt"
    if not path.exists():
        raise MissingArtifactError(f"no config.txt in {out_dir}")
    return ExperimentConfig.from_file(path)


def render_report(out_dir) -> str:
    """Comparison table from stored metrics files; nothing is retrained or re-scored."""
    out = Path(out_dir)
    cfg = read_config(out)
    rows = []
    for arm in cfg.arms:
        path = out / arm / "metrics.txt"
        if path.exists():
            rows.append((ARM_TITLES[arm], eval_metrics.MetricsReport.loads(path.read_text())))
    if not rows:
        raise MissingArtifactError(f"no arm metrics found in {out_dir}")
    return eval_metrics.comparison_table(rows, cfg.fpr_convention)


def reduce_file(path, bins: int = discretize.DEFAULT_BINS, seed: int = 0,
                maps: SymbolMaps | None = None, strict: bool = False) -> FeatureMask:
    data, _ = load_dataset(path, maps, strict)
    if not data:
        raise DataError(f"no usable records in {path}")
    X, y = to_arrays(data)
    binning = discretize.fit_bins(X, FeatureMask.full(), bins)
    return rough_set.greedy_reduct(rough_set.table_from_codes(binning.apply_matrix(X), y, binning.mask), seed)


def entropy_file(path, bins: int = discretize.DEFAULT_BINS, k: int = entropy_rank.DEFAULT_K,
                 maps: SymbolMaps | None = None, strict: bool = False):
    data, _ = load_dataset(path, maps, strict)
    if not data:
        raise DataError(f"no usable records in {path}")
    X, y = to_arrays(data)
    binning = discretize.fit_bins(X, FeatureMask.full(), bins)
    table = rough_set.table_from_codes(binning.apply_matrix(X), y, binning.mask)
    return entropy_rank.entropy_mask(table, k), entropy_rank.rank_features(table)


def resolve_mask(value: str) -> FeatureMask:
    """``full``, ``reference``, a mask file, or comma-separated feature numbers."""
    if value == "full":
        return FeatureMask.full()
    if value == "reference":
        return rough_set.reference_mask()
    p = Path(value)
    if p.exists():
        return FeatureMask.load(p)
    return FeatureMask.of((int(t) for t in value.split(",")), "reduct")


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})


__all__ = [
    "ARMS", "ExperimentConfig", "ExperimentBundle", "run_experiment", "render_report",
    "reduce_file", "entropy_file", "resolve_mask", "read_config", "desk_path",
]
