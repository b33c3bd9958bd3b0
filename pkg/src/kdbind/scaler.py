"""Column-wise z-score standardisation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .table import FeatureTable

log = logging.getLogger(__name__)


@dataclass
class Scaler:
    mean: np.ndarray
    std: np.ndarray
    constant_columns: list[int] = field(default_factory=list)

    def transform(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        if values.shape[-1] != self.mean.shape[0]:
            raise ValueError(
                f"scaler fitted on {self.mean.shape[0]} features, got {values.shape[-1]}"
            )
        return (values - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist(),
                "constant_columns": list(self.constant_columns)}

    @classmethod
    def from_dict(cls, data: dict) -> "Scaler":
        std = np.asarray(data["std"], dtype=np.float64)
        return cls(np.asarray(data["mean"], dtype=np.float64), std,
                   list(data.get("constant_columns", [])))


def fit_scaler_array(values, rows=None) -> Scaler:
    values = np.asarray(values, dtype=np.float64)
    subset = values if rows is None else values[np.asarray(rows)]
    if subset.shape[0] == 0:
        raise ValueError("cannot fit a scaler on an empty row subset")
    mean = subset.mean(axis=0)
    std = subset.std(axis=0)
    constant = np.flatnonzero(std == 0).tolist()
    if constant:
        log.info("%d constant feature column(s) left unscaled", len(constant))
        std = std.copy()
        std[constant] = 1.0
    return Scaler(mean, std, constant)


def fit_scaler(table: FeatureTable, rows=None) -> Scaler:
    """Population mean/std over ``rows`` (row indices or complex ids; all rows if None)."""
    if rows is not None:
        rows = [table.ids.index(r) if isinstance(r, str) else int(r) for r in rows]
    return fit_scaler_array(table.values, rows)


def apply_scaler(scaler: Scaler, table: FeatureTable) -> FeatureTable:
    return FeatureTable(table.ids, scaler.transform(table.values), table.descriptor)
