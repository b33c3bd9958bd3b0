"""Supervised baselines, joint teacher/student distillation and cross-validation.

RNG discipline: every random draw comes from one of five streams derived
from ``KdConfig.seed`` (student init, teacher init, sample shuffling,
student dropout, teacher dropout). A student trained alone and a student
trained next to a teacher therefore see identical initial weights, sample
orders and dropout masks, and the teacher never affects the student's
streams.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .metrics import MetricsReport, average_reports, evaluate
from . import _kernels
from .nn import (ADAM_BETA1, ADAM_BETA2, ADAM_EPS, AdamState, DISTILL_DIM, LayerSpec,
                 MlpModel, derive_architecture, init_kaiming_uniform, mse)
from .parsers import LabeledCorpus
from .scaler import Scaler, fit_scaler_array
from .table import FeatureTable

log = logging.getLogger(__name__)

# Sign applied to the distillation terms of the student objective. The
# terms must be added for the student to move toward the teacher.
DISTILL_SIGN = 1.0

_MASK64 = (1 << 64) - 1

STREAM_STUDENT_INIT = 0
STREAM_TEACHER_INIT = 1
STREAM_SHUFFLE = 2
STREAM_STUDENT_DROPOUT = 3
STREAM_TEACHER_DROPOUT = 4


class Mode(str, Enum):
    BASELINE_STUDENT = "baseline-student"
    BASELINE_TEACHER = "baseline-teacher"
    DISTILL_OUT = "distill-out"
    DISTILL_OUT_FEAT = "distill-out-feat"

    @property
    def distills(self) -> bool:
        return self in (Mode.DISTILL_OUT, Mode.DISTILL_OUT_FEAT)


class ScalerScope(str, Enum):
    PER_FOLD = "per-fold"
    GLOBAL = "global"


class TrainingError(ValueError):
    pass


@dataclass
class KdConfig:
    mode: Mode = Mode.DISTILL_OUT_FEAT
    lambda_out: float = 0.6
    lambda_feat: float = 0.5
    lr: float = 1e-3
    weight_decay: float = 1e-4
    epochs: int = 100
    batch_size: int = 1
    seed: int = 0
    scaler_scope: ScalerScope = ScalerScope.PER_FOLD
    # "train": teacher targets come from the teacher's own dropout forward pass;
    # "eval": from a dropout-free pass with the same (pre-update) weights.
    teacher_target: str = "train"
    distill_sign: float = DISTILL_SIGN
    distill_dim: int = DISTILL_DIM

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.scaler_scope = ScalerScope(self.scaler_scope)
        if not 0.0 <= self.lambda_out <= 1.0:
            raise ValueError("lambda_out must lie in [0, 1]")
        if self.lambda_feat < 0:
            raise ValueError("lambda_feat must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size != 1:
            raise ValueError("only batch_size=1 is supported")
        if self.teacher_target not in ("train", "eval"):
            raise ValueError("teacher_target must be 'train' or 'eval'")

    def replace(self, **changes) -> "KdConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["mode"] = self.mode.value
        out["scaler_scope"] = self.scaler_scope.value
        return out

    @classmethod
    def from_dict(cls, data: dict, base: "KdConfig | None" = None) -> "KdConfig":
        """Override ``base`` (default: the stock configuration) field by field."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return dataclasses.replace(base or cls(), **data)

    @classmethod
    def load(cls, path, base: "KdConfig | None" = None) -> "KdConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")), base)


# seeds ---------------------------------------------------------------------

def mix_seed(seed: int, index: int) -> int:
    """SplitMix64 finaliser over ``seed`` and ``index``."""
    z = (int(seed) * 0x9E3779B97F4A7C15 + int(index) + 1) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream(seed: int, which: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & _MASK64,
                                                        spawn_key=(which,)))


# loss ----------------------------------------------------------------------

def supervised_loss(pred, target) -> float:
    return mse(pred, target)


def total_loss(student_pred: float, student_h, teacher_pred, teacher_h, y: float,
               cfg: KdConfig) -> tuple[float, float, np.ndarray | None]:
    """Per-sample student objective and its partials w.r.t. the student's
    prediction and latent vector. Teacher values are constants."""
    if cfg.mode.distills:
        if teacher_pred is None or (cfg.mode is Mode.DISTILL_OUT_FEAT and teacher_h is None):
            raise TrainingError(f"{cfg.mode.value} needs teacher prediction and latent targets")
    elif teacher_pred is not None or teacher_h is not None:
        raise TrainingError(f"{cfg.mode.value} takes no teacher targets")

    err = student_pred - y
    if not cfg.mode.distills:
        return err * err, 2.0 * err, None

    lam, sign = cfg.lambda_out, cfg.distill_sign
    gap = student_pred - teacher_pred
    loss = (1.0 - lam) * err * err + sign * lam * gap * gap
    d_pred = 2.0 * (1.0 - lam) * err + 2.0 * sign * lam * gap
    if cfg.mode is Mode.DISTILL_OUT:
        return loss, d_pred, None
    diff = np.asarray(student_h, dtype=np.float64) - np.asarray(teacher_h, dtype=np.float64)
    loss += sign * cfg.lambda_feat * float(np.mean(diff * diff))
    d_h = (2.0 * sign * cfg.lambda_feat / diff.size) * diff
    return loss, d_pred, d_h


# training ------------------------------------------------------------------

ArchFn = Callable[[int], Sequence[LayerSpec]]


@dataclass
class TrainHistory:
    epoch_loss: list[float] = field(default_factory=list)
    initial_mse: float = float("nan")
    final_mse: float = float("nan")


def _build(dim: int, arch_fn: ArchFn, cfg: KdConfig, rng, descriptor=None,
           scaler=None) -> MlpModel:
    specs = arch_fn(dim) if arch_fn is not derive_architecture \
        else derive_architecture(dim, cfg.distill_dim)
    model = MlpModel(specs, len(specs) - 2, descriptor=descriptor, scaler=scaler)
    return init_kaiming_uniform(model, rng)


def _labels_for(ids: Sequence[str], labels) -> np.ndarray:
    if isinstance(labels, LabeledCorpus):
        return labels.values_for(ids)
    y = np.asarray(labels, dtype=np.float64)
    if y.shape != (len(ids),):
        raise TrainingError(f"{len(ids)} feature rows but {y.size} labels")
    return y


def _check_aligned(a: FeatureTable, b: FeatureTable) -> None:
    if a.ids == b.ids:
        return
    only_a = sorted(set(a.ids) - set(b.ids))
    only_b = sorted(set(b.ids) - set(a.ids))
    if only_a or only_b:
        parts = []
        if only_a:
            parts.append("student only: " + ", ".join(only_a))
        if only_b:
            parts.append("teacher only: " + ", ".join(only_b))
        raise TrainingError("feature tables are not aligned (" + "; ".join(parts) + ")")


def _standardize(table: FeatureTable, scaler: Scaler | None) -> tuple[np.ndarray, Scaler]:
    if scaler is None:
        scaler = fit_scaler_array(table.values)
    return scaler.transform(table.values), scaler


class _Learner:
    """One network plus its optimiser state, dropout stream and work buffers."""

    def __init__(self, model: MlpModel, dropout_rng: np.random.Generator):
        self.model = model
        self.state = AdamState.zeros_like(model.params)
        self.dropout_rng = dropout_rng
        self.net = model.kernel_state(self.state)

    def epoch_masks(self, n: int) -> np.ndarray:
        return self.model.sample_masks(self.dropout_rng, n)


_NO_DATA = np.zeros((1, 1))
_MODE_CODE = {Mode.BASELINE_STUDENT: 0, Mode.BASELINE_TEACHER: 0,
              Mode.DISTILL_OUT: 1, Mode.DISTILL_OUT_FEAT: 2}


def _placeholder() -> _Learner:
    return _Learner(MlpModel([LayerSpec(1, 1, "linear")], 0), np.random.default_rng(0))


def _eval_mse(model: MlpModel, X: np.ndarray, y: np.ndarray) -> float:
    return mse(model.predict(X), y)


def _fit(cfg: KdConfig, y: np.ndarray, Xs: np.ndarray | None, Xt: np.ndarray | None,
         arch_fn: ArchFn, student_scaler=None, teacher_scaler=None, descriptors=(None, None),
         history: TrainHistory | None = None) -> tuple[MlpModel | None, MlpModel | None]:
    n = len(y)
    if n < 2:
        raise TrainingError(f"training needs at least 2 samples, got {n}")
    shuffle = stream(cfg.seed, STREAM_SHUFFLE)

    student = teacher = None
    if Xs is not None:
        student = _Learner(
            _build(Xs.shape[1], arch_fn, cfg, stream(cfg.seed, STREAM_STUDENT_INIT),
                   descriptors[0], student_scaler),
            stream(cfg.seed, STREAM_STUDENT_DROPOUT))
    if Xt is not None:
        teacher = _Learner(
            _build(Xt.shape[1], arch_fn, cfg, stream(cfg.seed, STREAM_TEACHER_INIT),
                   descriptors[1], teacher_scaler),
            stream(cfg.seed, STREAM_TEACHER_DROPOUT))
    distilling = student is not None and teacher is not None and cfg.mode.distills
    if distilling and student.model.latent_dim != teacher.model.latent_dim:
        raise TrainingError("teacher and student latent widths differ")
    mode = _MODE_CODE[cfg.mode] if distilling else 0

    main, main_X = (student, Xs) if student is not None else (teacher, Xt)
    if history is not None:
        history.initial_mse = _eval_mse(main.model, main_X, y)

    s = student or _placeholder()
    t = teacher or _placeholder()
    Xs_ = np.ascontiguousarray(Xs) if student is not None else _NO_DATA
    Xt_ = np.ascontiguousarray(Xt) if teacher is not None else _NO_DATA
    clean_pre, clean_post = np.zeros_like(t.net[8]), np.zeros_like(t.net[9])
    ones = np.ones_like(t.net[9])
    y = np.ascontiguousarray(y, dtype=np.float64)
    step = 1
    for _ in range(cfg.epochs):
        order = shuffle.permutation(n)
        s_masks = student.epoch_masks(n) if student is not None else _NO_DATA
        t_masks = teacher.epoch_masks(n) if teacher is not None else _NO_DATA
        total = _kernels.fit_epoch(
            order, y, student is not None, s.net, Xs_, s_masks,
            teacher is not None, t.net, Xt_, t_masks, clean_pre, clean_post, ones, step,
            mode, cfg.lambda_out, cfg.lambda_feat, cfg.distill_sign,
            cfg.teacher_target == "eval", cfg.lr, cfg.weight_decay,
            ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
        step += n
        if history is not None:
            history.epoch_loss.append(total / n)
    for learner in (student, teacher):
        if learner is not None:
            learner.state.t = step - 1
            if not np.all(np.isfinite(learner.model.params)):
                raise TrainingError("training diverged: non-finite parameters")

    if history is not None:
        history.final_mse = _eval_mse(main.model, main_X, y)
    return (student.model if student else None, teacher.model if teacher else None)


def train_baseline(features: FeatureTable, labels, cfg: KdConfig,
                   arch_fn: ArchFn = derive_architecture, scaler: Scaler | None = None,
                   history: TrainHistory | None = None) -> MlpModel:
    """Train one network on the supervised MSE objective.

    The model carries the scaler fitted on ``features`` (or the one given).
    ``BASELINE_TEACHER`` draws from the teacher RNG streams, every other mode
    from the student streams.
    """
    y = _labels_for(features.ids, labels)
    X, scaler = _standardize(features, scaler)
    sole = cfg.replace(mode=Mode.BASELINE_TEACHER if cfg.mode is Mode.BASELINE_TEACHER
                       else Mode.BASELINE_STUDENT)
    if sole.mode is Mode.BASELINE_TEACHER:
        _, model = _fit(sole, y, None, X, arch_fn, teacher_scaler=scaler,
                        descriptors=(None, features.descriptor), history=history)
    else:
        model, _ = _fit(sole, y, X, None, arch_fn, student_scaler=scaler,
                        descriptors=(features.descriptor, None), history=history)
    return model


def train_distill(teacher_features: FeatureTable, student_features: FeatureTable, labels,
                  cfg: KdConfig, arch_fn: ArchFn = derive_architecture,
                  teacher_scaler: Scaler | None = None, student_scaler: Scaler | None = None,
                  history: TrainHistory | None = None) -> tuple[MlpModel, MlpModel]:
    """Jointly train teacher (supervised) and student (distillation objective).

    Per sample: teacher forward and update on its own MSE, then the student
    update against the teacher's pre-update outputs held constant.
    """
    if not cfg.mode.distills:
        raise TrainingError(f"train_distill needs a distillation mode, got {cfg.mode.value}")
    _check_aligned(student_features, teacher_features)
    teacher_features = teacher_features.select(student_features.ids)
    y = _labels_for(student_features.ids, labels)
    Xs, s_scaler = _standardize(student_features, student_scaler)
    Xt, t_scaler = _standardize(teacher_features, teacher_scaler)
    student, teacher = _fit(cfg, y, Xs, Xt, arch_fn, s_scaler, t_scaler,
                            (student_features.descriptor, teacher_features.descriptor),
                            history)
    return teacher, student


def predict(model: MlpModel, X) -> np.ndarray:
    """EVAL-mode predictions for raw (unscaled) rows, using the model's scaler."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.input_dim:
        raise ValueError(f"features have {X.shape[1]} columns, model expects {model.input_dim}")
    if model.scaler is not None:
        X = model.scaler.transform(X)
    return model.predict(X)


# cross-validation ------------------------------------------------------------

@dataclass
class _Corpus:
    ids: list[str]
    y: np.ndarray
    student: FeatureTable | None
    teacher: FeatureTable | None


def _corpus(student, teacher, labels, cfg: KdConfig) -> _Corpus:
    if cfg.mode.distills and teacher is None:
        raise TrainingError(f"{cfg.mode.value} needs teacher features")
    if cfg.mode is Mode.BASELINE_TEACHER:
        if teacher is None:
            raise TrainingError("baseline-teacher needs teacher features")
        student = None
    elif student is None:
        raise TrainingError(f"{cfg.mode.value} needs student features")
    if not cfg.mode.distills and cfg.mode is not Mode.BASELINE_TEACHER:
        teacher = None
    spine = student if student is not None else teacher
    if student is not None and teacher is not None:
        _check_aligned(student, teacher)
        teacher = teacher.select(student.ids)
    return _Corpus(list(spine.ids), _labels_for(spine.ids, labels), student, teacher)


def _fold_job(args) -> float:
    corpus, cfg, test_idx, arch_fn, scalers = args
    held_out = set(test_idx)
    train_idx = [i for i in range(len(corpus.ids)) if i not in held_out]
    y = corpus.y[train_idx]

    def split(table, scaler):
        if table is None:
            return None, None, None
        train = table.values[train_idx]
        if scaler is None:
            scaler = fit_scaler_array(train)
        return scaler.transform(train), scaler.transform(table.values[test_idx]), scaler

    Xs, Xs_test, s_sc = split(corpus.student, scalers[0])
    Xt, Xt_test, t_sc = split(corpus.teacher, scalers[1])
    student, teacher = _fit(cfg, y, Xs, Xt, arch_fn, s_sc, t_sc)
    if student is not None:
        return student.predict(Xs_test)
    return teacher.predict(Xt_test)


def cross_validate(test_sets: Sequence[Sequence[int]], student_features: FeatureTable | None,
                   labels, cfg: KdConfig, teacher_features: FeatureTable | None = None,
                   n_runs: int = 1, arch_fn: ArchFn = derive_architecture,
                   n_jobs: int = 1, folds_per_run=None) -> MetricsReport:
    """Held-out evaluation over the given folds, repeated ``n_runs`` times.

    ``folds_per_run(run, n)`` may supply fresh test sets for each run; by
    default ``test_sets`` is reused. Run ``r`` trains fold ``f`` with seed
    ``mix_seed(mix_seed(cfg.seed, r), f)``.
    """
    corpus = _corpus(student_features, teacher_features, labels, cfg)
    n = len(corpus.ids)
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")

    scalers = (None, None)
    if cfg.scaler_scope is ScalerScope.GLOBAL:
        scalers = tuple(None if t is None else fit_scaler_array(t.values)
                        for t in (corpus.student, corpus.teacher))

    jobs, layout = [], []
    for run in range(n_runs):
        run_seed = mix_seed(cfg.seed, run)
        sets = folds_per_run(run, n) if folds_per_run is not None else test_sets
        _check_partition(sets, n)
        for f, test_idx in enumerate(sets):
            fold_cfg = cfg.replace(seed=mix_seed(run_seed, f))
            jobs.append((corpus, fold_cfg, list(test_idx), arch_fn, scalers))
            layout.append((run, list(test_idx)))

    if n_jobs == 1:
        results = [_fold_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_fold_job, jobs))

    reports = []
    for run in range(n_runs):
        pred = np.full(n, np.nan)
        for (r, test_idx), out in zip(layout, results):
            if r == run:
                pred[test_idx] = out
        reports.append(evaluate(corpus.y, pred, corpus.ids, run=run))
    return average_reports(reports)


def _check_partition(sets, n: int) -> None:
    seen = np.zeros(n, dtype=int)
    for s in sets:
        if len(s) == 0:
            raise ValueError("empty test fold")
        seen[list(s)] += 1
    if not np.all(seen == 1):
        raise ValueError("test folds must partition the corpus")


def loco_folds(n: int) -> list[list[int]]:
    return [[i] for i in range(n)]


def kfold_folds(n: int, k: int, seed: int) -> list[list[int]]:
    perm = np.random.default_rng(seed).permutation(n)
    return [sorted(chunk.tolist()) for chunk in np.array_split(perm, k)]


def loco_cv(student_features: FeatureTable | None, labels, cfg: KdConfig,
            teacher_features: FeatureTable | None = None, n_runs: int = 3,
            arch_fn: ArchFn = derive_architecture, n_jobs: int = 1) -> MetricsReport:
    """Leave-one-complex-out: every complex is the test set once per run."""
    spine = student_features if student_features is not None else teacher_features
    if spine is None or len(spine) < 3:
        raise TrainingError("LOCO needs at least 3 complexes")
    return cross_validate(loco_folds(len(spine)), student_features, labels, cfg,
                          teacher_features, n_runs, arch_fn, n_jobs)


def kfold_cv(student_features: FeatureTable | None, labels, cfg: KdConfig,
             teacher_features: FeatureTable | None = None, k: int = 5, n_runs: int = 1,
             arch_fn: ArchFn = derive_architecture, n_jobs: int = 1) -> MetricsReport:
    """k-fold held-out evaluation; folds are reshuffled for each run."""
    def folds(run, n):
        return kfold_folds(n, k, mix_seed(cfg.seed, 1000 + run))
    spine = student_features if student_features is not None else teacher_features
    if spine is None or len(spine) < k:
        raise TrainingError(f"{k}-fold CV needs at least {k} complexes")
    return cross_validate([], student_features, labels, cfg, teacher_features, n_runs,
                          arch_fn, n_jobs, folds_per_run=folds)
