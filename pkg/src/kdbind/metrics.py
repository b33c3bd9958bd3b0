"""Regression agreement statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

LOA_Z = 1.96


class UndefinedCorrelationError(ValueError):
    """Pearson correlation requested for an input with zero variance."""


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size == 0:
        raise ValueError("empty input")
    return x, y


def pearson(x, y) -> float:
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _betacf(a: float, b: float, x: float, eps: float = 1e-16, max_iter: int = 10_000) -> float:
    # Modified Lentz evaluation of the incomplete-beta continued fraction.
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularised incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise ValueError("betainc needs 0 <= x <= 1")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def pearson_pvalue(r: float, n: int) -> float:
    """Two-sided p-value of ``r`` under Student's t with ``n - 2`` df.

    Uses ``P(|T| >= |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2)`` where
    ``df / (df + t^2)`` reduces to ``1 - r^2``.
    """
    if n < 3:
        raise ValueError("p-value needs n >= 3")
    if not -1.0 <= r <= 1.0:
        raise ValueError("r must lie in [-1, 1]")
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    return min(1.0, betainc(0.5 * df, 0.5, 1.0 - r * r))


def rmse(x, y) -> float:
    x, y = _pair(x, y)
    return math.sqrt(float(np.mean((x - y) ** 2)))


def mae(x, y) -> float:
    x, y = _pair(x, y)
    return float(np.mean(np.abs(x - y)))


@dataclass
class BlandAltman:
    mean_bias: float
    loa_low: float
    loa_high: float


def bland_altman(y_true, y_pred) -> BlandAltman:
    """Bias and 95% limits of agreement of the errors ``y_true - y_pred``."""
    t, p = _pair(y_true, y_pred)
    if t.size < 2:
        raise ValueError("Bland-Altman limits need at least two points")
    e = t - p
    bias = float(e.mean())
    sd = float(e.std(ddof=1))
    return BlandAltman(bias, bias - LOA_Z * sd, bias + LOA_Z * sd)


@dataclass
class MetricsReport:
    pearson_r: float
    p_value: float
    rmse: float
    mae: float
    bland_altman: BlandAltman
    # (complex_id, run, y_true, y_pred)
    per_complex_predictions: list[tuple] = field(default_factory=list)
    runs_averaged: int = 1
    per_run: list[dict] = field(default_factory=list)

    @property
    def n_complexes(self) -> int:
        return len({row[0] for row in self.per_complex_predictions})

    def to_dict(self) -> dict:
        return {
            "pearson_r": self.pearson_r,
            "p_value": self.p_value,
            "rmse": self.rmse,
            "mae": self.mae,
            "bland_altman": asdict(self.bland_altman),
            "per_run": self.per_run,
            "n_complexes": self.n_complexes,
            "n_runs": self.runs_averaged,
            "runs_averaged": self.runs_averaged,
        }


def evaluate(y_true, y_pred, ids=None, run: int = 0) -> MetricsReport:
    t, p = _pair(y_true, y_pred)
    r = pearson(t, p)
    ids = list(ids) if ids is not None else [str(i) for i in range(t.size)]
    return MetricsReport(
        pearson_r=r,
        p_value=pearson_pvalue(r, t.size),
        rmse=rmse(t, p),
        mae=mae(t, p),
        bland_altman=bland_altman(t, p),
        per_complex_predictions=[(cid, run, float(a), float(b)) for cid, a, b in zip(ids, t, p)],
    )


def summary(report: MetricsReport) -> dict:
    """Scalar metrics of one report as a flat dict."""
    return {
        "pearson_r": report.pearson_r,
        "p_value": report.p_value,
        "rmse": report.rmse,
        "mae": report.mae,
        "bland_altman": asdict(report.bland_altman),
    }


def average_reports(reports: list[MetricsReport]) -> MetricsReport:
    """Metric-wise mean over runs; per-run values and predictions are kept."""
    if not reports:
        raise ValueError("no reports to average")
    n = len(reports)

    def mean(get):
        return sum(get(r) for r in reports) / n

    predictions = []
    for run, rep in enumerate(reports):
        predictions.extend((cid, run, t, p) for cid, _, t, p in rep.per_complex_predictions)
    return MetricsReport(
        pearson_r=mean(lambda r: r.pearson_r),
        p_value=mean(lambda r: r.p_value),
        rmse=mean(lambda r: r.rmse),
        mae=mean(lambda r: r.mae),
        bland_altman=BlandAltman(
            mean(lambda r: r.bland_altman.mean_bias),
            mean(lambda r: r.bland_altman.loa_low),
            mean(lambda r: r.bland_altman.loa_high),
        ),
        per_complex_predictions=predictions,
        runs_averaged=n,
        per_run=[summary(r) for r in reports],
    )
