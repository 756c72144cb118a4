"""Binary soft-margin SVM with an RBF kernel, trained by SMO.

Labels are +1 (attack) / -1 (normal). Decision function::

    f(x) = sum_i coef_i * K(sv_i, x) + b,   coef_i = alpha_i * y_i

The trainer follows Platt's SMO: an outer loop alternating full sweeps and
sweeps over non-bound multipliers, a second-choice heuristic maximising
|E1 - E2|, and seeded random start points for the fallback scans.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyDataError,
    FormatVersionError,
    MaskMismatchError,
    ModelError,
    NonConvergenceWarning,
    SingleClassError,
)
from .kdd_ingest import N_FEATURES, NumericInstance
from .masks import FeatureMask

log = logging.getLogger(__name__)

MODEL_MAGIC = "rstids-svm"
MODEL_VERSION = 1
FULL_CACHE_LIMIT = 8000  # rows; above this kernel columns are computed on demand


@dataclass
class ScalingModel:
    """Per-feature min/max from training rows, mapping into [0, 1].

    Test values outside the training range are clamped; constant features map to 0.
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=np.float64)
        self.hi = np.asarray(self.hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ValueError("scaling bounds must satisfy min <= max per feature")

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.lo.size:
            raise DimensionMismatchError(f"expected {self.lo.size} features, got {X.shape[-1]}")
        span = self.hi - self.lo
        safe = np.where(span > 0, span, 1.0)
        with np.errstate(over="ignore"):  # tiny spans overflow to inf, clipped below
            out = np.where(span > 0, (X - self.lo) / safe, 0.0)
        return np.clip(out, 0.0, 1.0)


def fit_scaling(rows: np.ndarray) -> ScalingModel:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[0] == 0 or rows.size == 0:
        raise EmptyDataError("cannot fit scaling on empty data")
    return ScalingModel(rows.min(axis=0), rows.max(axis=0))


def rbf_kernel(x, y, gamma: float) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"kernel arguments differ in shape: {x.shape} vs {y.shape}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    d = x - y
    return float(np.exp(-gamma * np.dot(d, d)))


def rbf_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """Kernel matrix K[i, j] = exp(-gamma * ||A_i - B_j||^2)."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(f"{A.shape[1]} vs {B.shape[1]} features")
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass
class TrainConfig:
    C: float = 1.0
    gamma: float | None = None  # None: 1 / number of features
    tolerance: float = 1e-3
    # Consecutive full sweeps without any multiplier change required to stop.
    # A quiet sweep leaves the state untouched, so every later sweep is quiet
    # too; the trainer therefore stops at the first one.
    max_passes: int = 10
    max_sweeps: int = 10_000
    seed: int = 0
    class_weight: dict | None = None  # e.g. {1: 2.0, -1: 1.0}; scales C per class

    def __post_init__(self):
        if self.C <= 0 or self.tolerance <= 0 or self.max_passes <= 0 or self.max_sweeps <= 0:
            raise ValueError("C, tolerance, max_passes and max_sweeps must be positive")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def resolved_gamma(self, n_features: int) -> float:
        return self.gamma if self.gamma is not None else 1.0 / max(n_features, 1)


@dataclass
class TrainInfo:
    alpha: np.ndarray
    sweeps: int
    steps: int
    converged: bool
    kkt_violations: int
    objective_trace: list[float] = field(default_factory=list)


@dataclass
class SvmModel:
    support_vectors: np.ndarray
    coef: np.ndarray
    bias: float
    gamma: float
    C: float
    scaling: ScalingModel | None = None
    mask: FeatureMask | None = None
    info: TrainInfo | None = field(default=None, repr=False, compare=False)

    @property
    def n_support(self) -> int:
        return int(self.coef.size)


class _KernelCache:
    def __init__(self, X: np.ndarray, gamma: float):
        self.X, self.gamma = X, gamma
        self.full = None
        self.cols: dict[int, np.ndarray] = {}
        if X.shape[0] <= FULL_CACHE_LIMIT:
            self.full = rbf_matrix(X, X, gamma)
            np.fill_diagonal(self.full, 1.0)

    def column(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[:, i]
        col = self.cols.get(i)
        if col is None:
            if len(self.cols) > 2000:
                self.cols.clear()
            col = rbf_matrix(self.X, self.X[i:i + 1], self.gamma)[:, 0]
            col[i] = 1.0
            self.cols[i] = col
        return col

    def entry(self, i: int, j: int) -> float:
        if self.full is not None:
            return float(self.full[i, j])
        return float(self.column(j)[i])


def _snap(a: float, C: float) -> float:
    """Clamp to [0, C], absorbing rounding residue next to either bound."""
    if a < 1e-12 * C:
        return 0.0
    if a > C * (1.0 - 1e-12):
        return C
    return a


def dual_objective(alpha: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    """W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij."""
    v = alpha * y
    return float(alpha.sum() - 0.5 * v @ K @ v)


class _Smo:
    def __init__(self, X, y, Cs, gamma, cfg: TrainConfig, trace: bool):
        self.X, self.y, self.Cs, self.cfg = X, y, Cs, cfg
        self.n = X.shape[0]
        self.K = _KernelCache(X, gamma)
        self.alpha = np.zeros(self.n)
        self.g = np.zeros(self.n)  # sum_j alpha_j y_j K_ij, i.e. f without bias
        self.b = 0.0
        self.rng = np.random.default_rng(cfg.seed)
        self.steps = 0
        self.trace = [] if trace else None
        if trace:
            self._Kfull = self.K.full if self.K.full is not None else rbf_matrix(X, X, gamma)
            self.trace.append(0.0)
        self.eps = 1e-12

    def error(self, i: int) -> float:
        return self.g[i] + self.b - self.y[i]

    def take_step(self, i1: int, i2: int, E2: float) -> bool:
        if i1 == i2:
            return False
        y1, y2 = self.y[i1], self.y[i2]
        a1o, a2o = self.alpha[i1], self.alpha[i2]
        C1, C2 = self.Cs[i1], self.Cs[i2]
        E1 = self.error(i1)
        s = y1 * y2
        if s < 0:
            L, H = max(0.0, a2o - a1o), min(C2, C1 + a2o - a1o)
        else:
            L, H = max(0.0, a1o + a2o - C1), min(C2, a1o + a2o)
        if H - L <= self.eps:
            return False
        k11, k22, k12 = 1.0, 1.0, self.K.entry(i1, i2)
        eta = k11 + k22 - 2.0 * k12
        if eta > self.eps:
            a2 = min(H, max(L, a2o + y2 * (E1 - E2) / eta))
        else:
            # Objective change along the constraint line for a2 -> a2o + d.
            slope = y2 * (E1 - E2)
            gain_L = slope * (L - a2o) - 0.5 * eta * (L - a2o) ** 2
            gain_H = slope * (H - a2o) - 0.5 * eta * (H - a2o) ** 2
            if max(gain_L, gain_H) <= 1e-12:
                return False
            a2 = L if gain_L > gain_H else H
        if abs(a2 - a2o) < 1e-8 * (a2 + a2o + 1e-8):
            return False
        a1 = a1o + s * (a2o - a2)
        a1, a2 = _snap(a1, C1), _snap(a2, C2)
        d1, d2 = y1 * (a1 - a1o), y2 * (a2 - a2o)
        b1 = self.b - E1 - d1 * k11 - d2 * k12
        b2 = self.b - E2 - d1 * k12 - d2 * k22
        if 0.0 < a1 < C1:
            self.b = b1
        elif 0.0 < a2 < C2:
            self.b = b2
        else:
            self.b = 0.5 * (b1 + b2)
        self.alpha[i1], self.alpha[i2] = a1, a2
        self.g += d1 * self.K.column(i1) + d2 * self.K.column(i2)
        self.steps += 1
        if self.trace is not None:
            self.trace.append(dual_objective(self.alpha, self.y, self._Kfull))
        return True

    def _violates(self, i: int, E: float) -> bool:
        r = E * self.y[i]
        tol = self.cfg.tolerance
        return (r < -tol and self.alpha[i] < self.Cs[i]) or (r > tol and self.alpha[i] > 0)

    def examine(self, i2: int) -> int:
        E2 = self.error(i2)
        if not self._violates(i2, E2):
            return 0
        free = np.flatnonzero((self.alpha > 0) & (self.alpha < self.Cs))
        if free.size > 1:
            E = self.g[free] + self.b - self.y[free]
            i1 = int(free[np.argmax(np.abs(E - E2))])
            if self.take_step(i1, i2, E2):
                return 1
        if free.size:
            start = int(self.rng.integers(free.size))
            for i1 in np.roll(free, -start):
                if self.take_step(int(i1), i2, E2):
                    return 1
        start = int(self.rng.integers(self.n))
        for i1 in np.roll(np.arange(self.n), -start):
            if self.take_step(int(i1), i2, E2):
                return 1
        return 0

    def run(self) -> tuple[int, bool]:
        changed, examine_all, sweeps, quiet = 0, True, 0, 0
        while sweeps < self.cfg.max_sweeps:
            changed = 0
            if examine_all:
                candidates = range(self.n)
            else:
                candidates = np.flatnonzero((self.alpha > 0) & (self.alpha < self.Cs)).tolist()
            for i in candidates:
                changed += self.examine(i)
            sweeps += 1
            if examine_all:
                quiet = quiet + 1 if changed == 0 else 0
                if quiet >= 1:  # see TrainConfig.max_passes
                    return sweeps, True
                examine_all = False
            elif changed == 0:
                examine_all = True
        return sweeps, False

    def kkt_violations(self, b: float) -> int:
        r = (self.g + b) * self.y - 1.0
        tol = self.cfg.tolerance
        bad = ((self.alpha < self.Cs) & (r < -tol)) | ((self.alpha > 0) & (r > tol))
        return int(bad.sum())

    def final_bias(self) -> float:
        """Bias minimising the largest margin violation given the multipliers.

        Each multiplier bounds b from one or both sides (free vectors pin it);
        the midpoint of the tightest interval is returned.
        """
        y, g, a, Cs = self.y, self.g, self.alpha, self.Cs
        target = y - g
        at_zero, at_c = a <= 0, a >= Cs
        free = ~at_zero & ~at_c
        lower = free | (at_zero & (y > 0)) | (at_c & (y < 0))
        upper = free | (at_zero & (y < 0)) | (at_c & (y > 0))
        lb = target[lower].max() if lower.any() else None
        ub = target[upper].min() if upper.any() else None
        if lb is None:
            return float(ub)
        if ub is None:
            return float(lb)
        return float(0.5 * (lb + ub))


def train(rows: np.ndarray, labels: np.ndarray, cfg: TrainConfig | None = None, *,
          scaling: ScalingModel | None = None, mask: FeatureMask | None = None,
          trace: bool = False) -> SvmModel:
    """Train on already-scaled rows with labels in {+1, -1}.

    ``scaling`` and ``mask`` are stored on the model so that :func:`predict`
    can take raw 41-feature instances. ``trace=True`` records the exact dual
    objective after every SMO step (quadratic cost, for small problems).
    """
    cfg = cfg or TrainConfig()
    X = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    y = np.asarray(labels, dtype=np.float64)
    if X.shape[0] != y.size:
        raise DimensionMismatchError("rows and labels differ in length")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise SingleClassError("training data must contain both classes")
    gamma = cfg.resolved_gamma(X.shape[1])
    Cs = np.full(y.size, float(cfg.C))
    if cfg.class_weight:
        Cs = np.where(y > 0, cfg.C * cfg.class_weight.get(1, 1.0), cfg.C * cfg.class_weight.get(-1, 1.0))

    smo = _Smo(X, y, Cs, gamma, cfg, trace)
    sweeps, quiet = smo.run()
    loop_violations = smo.kkt_violations(smo.b)
    b = smo.final_bias()
    violations = min(loop_violations, smo.kkt_violations(b))
    converged = quiet and violations == 0
    if not converged:
        warnings.warn(
            f"SMO stopped after {sweeps} sweeps ({smo.steps} steps) with "
            f"{max(violations, loop_violations)} KKT violation(s) above tolerance",
            NonConvergenceWarning, stacklevel=2)
    elif not np.any((smo.alpha > 0) & (smo.alpha < Cs)):
        # Every multiplier sits at a bound: no margin vector pins the bias,
        # typical of identical rows carrying both labels.
        warnings.warn(
            f"SMO finished after {sweeps} sweeps without any free support vector; "
            "the bias is only bounded, not determined", NonConvergenceWarning, stacklevel=2)
    log.info("SMO: %d sweeps, %d steps, %d support vectors", sweeps, smo.steps,
             int((smo.alpha > 0).sum()))

    keep = smo.alpha > 0
    info = TrainInfo(smo.alpha.copy(), sweeps, smo.steps, converged, violations,
                     smo.trace or [])
    return SvmModel(X[keep].copy(), (smo.alpha * y)[keep], b, gamma, float(cfg.C),
                    scaling, mask, info)


def prepare_rows(X41: np.ndarray, mask: FeatureMask | None, scaling: ScalingModel | None) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X41, dtype=np.float64))
    if mask is not None:
        if X.shape[1] != N_FEATURES:
            raise MaskMismatchError(f"masked model needs {N_FEATURES}-feature rows, got {X.shape[1]}")
        X = X[:, mask.columns()]
    if scaling is not None:
        X = scaling.transform(X)
    return X


def train_masked(X41: np.ndarray, decisions: np.ndarray, mask: FeatureMask,
                 cfg: TrainConfig | None = None) -> SvmModel:
    """Mask, fit scaling on the training rows, map 0/1 decisions to -1/+1, train."""
    Xm = np.asarray(X41, dtype=np.float64)[:, mask.columns()]
    scaling = fit_scaling(Xm)
    y = np.where(np.asarray(decisions) > 0, 1.0, -1.0)
    return train(scaling.transform(Xm), y, cfg, scaling=scaling, mask=mask)


def decision_values(model: SvmModel, rows: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """f(x) for rows already masked and scaled."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != model.support_vectors.shape[1]:
        raise DimensionMismatchError(
            f"model expects {model.support_vectors.shape[1]} features, got {rows.shape[1]}")
    out = np.empty(rows.shape[0])
    for s in range(0, rows.shape[0], chunk):
        K = rbf_matrix(rows[s:s + chunk], model.support_vectors, model.gamma)
        out[s:s + chunk] = K @ model.coef + model.bias
    return out


def predict_batch(model: SvmModel, X41: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signs (+1 attack / -1 normal; ties alarm) and raw decision values."""
    values = decision_values(model, prepare_rows(X41, model.mask, model.scaling))
    return np.where(values >= 0, 1, -1), values


def predict(model: SvmModel, instance: NumericInstance | np.ndarray) -> tuple[int, float]:
    x = instance.features if isinstance(instance, NumericInstance) else np.asarray(instance)
    signs, values = predict_batch(model, x[None, :] if x.ndim == 1 else x)
    return int(signs[0]), float(values[0])


def _floats(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def dumps_model(model: SvmModel, comments=()) -> str:
    if model.n_support == 0:
        raise ModelError("refusing to save a model without support vectors")
    lines = [f"{MODEL_MAGIC} v{MODEL_VERSION}"]
    lines += [f"# {c}" for c in comments]
    lines += [
        f"gamma={model.gamma!r}",
        f"bias={model.bias!r}",
        f"C={model.C!r}",
        f"n_features={model.support_vectors.shape[1]}",
        f"mask={model.mask.to_csv() if model.mask is not None else ''}",
        f"mask_provenance={model.mask.provenance if model.mask is not None else ''}",
        f"scale_min={_floats(model.scaling.lo) if model.scaling is not None else ''}",
        f"scale_max={_floats(model.scaling.hi) if model.scaling is not None else ''}",
        f"n_sv={model.n_support}",
    ]
    for c, sv in zip(model.coef, model.support_vectors):
        pairs = " ".join(f"{j}:{float(v)!r}" for j, v in enumerate(sv, 1) if v != 0.0)
        lines.append(f"{float(c)!r} {pairs}".rstrip())
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> SvmModel:
    """Parse a model file; header is ``key=value`` lines up to ``n_sv``, then one
    support vector per line (coefficient, then sparse ``index:value`` pairs)."""
    lines = text.split("\n")
    if not lines or lines[0] != f"{MODEL_MAGIC} v{MODEL_VERSION}":
        raise FormatVersionError("unrecognised model header")
    try:
        head: dict[str, str] = {}
        pos = 1
        while "n_sv" not in head:
            if pos >= len(lines):
                raise FormatVersionError("model header truncated")
            line = lines[pos]
            pos += 1
            if line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise FormatVersionError(f"bad header line {line!r}")
            head[key] = value
        n_feat, n_sv = int(head["n_features"]), int(head["n_sv"])
        body = lines[pos:pos + n_sv]
        if len(body) != n_sv or len(lines) <= pos + n_sv or lines[pos + n_sv] != "end":
            raise FormatVersionError("model file truncated")
        coef = np.empty(n_sv)
        sv = np.zeros((n_sv, n_feat))
        for r, ln in enumerate(body):
            parts = ln.split()
            coef[r] = float(parts[0])
            for p in parts[1:]:
                j, v = p.split(":")
                sv[r, int(j) - 1] = float(v)
        mask = (FeatureMask.from_csv(head["mask"], head["mask_provenance"])
                if head["mask_provenance"] else None)
        scaling = None
        if head["scale_min"]:
            scaling = ScalingModel([float(v) for v in head["scale_min"].split(",")],
                                   [float(v) for v in head["scale_max"].split(",")])
        return SvmModel(sv, coef, float(head["bias"]), float(head["gamma"]), float(head["C"]),
                        scaling, mask)
    except FormatVersionError:
        raise
    except (KeyError, ValueError, IndexError) as e:
        raise FormatVersionError(f"corrupt model file: {e}") from None


def save_model(model: SvmModel, path, comments=()) -> None:
    Path(path).write_text(dumps_model(model, comments))


def load_model(path) -> SvmModel:
    return loads_model(Path(path).read_text())


def _fmt(v: float) -> str:
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def export_sparse(rows: np.ndarray, labels) -> str:
    """Sparse ``<label> <index>:<value> ...`` lines; zeros omitted, 1-based indices."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    lines = []
    for row, lab in zip(rows, labels):
        head = "+1" if lab > 0 else "-1"
        pairs = [f"{j}:{_fmt(v)}" for j, v in enumerate(row, 1) if v != 0.0]
        lines.append(" ".join([head] + pairs))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_sparse(text: str, n_features: int) -> tuple[np.ndarray, np.ndarray]:
    rows, labels = [], []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split()
        labels.append(int(float(parts[0])))
        row = np.zeros(n_features)
        for p in parts[1:]:
            j, v = p.split(":")
            row[int(j) - 1] = float(v)
        rows.append(row)
    return np.array(rows).reshape(len(rows), n_features), np.array(labels, dtype=np.int64)
