"""Synthetic privileged-information regression corpus.

The teacher sees all ``teacher_dim`` latent coordinates that generate the
target; the student sees only the first ``shared_dim`` of them plus pure
noise columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .table import FeatureTable


@dataclass
class PrivilegedData:
    teacher: FeatureTable
    student: FeatureTable
    y: np.ndarray
    w: np.ndarray


def privileged_dataset(seed: int, n: int = 150, teacher_dim: int = 20, shared_dim: int = 8,
                       noise_dim: int = 4, noise_sd: float = 0.5, w=None) -> PrivilegedData:
    """Draw ``x_t ~ N(0, I)``, ``y = w . x_t + noise_sd * eps`` and the
    student view ``[x_t[:shared_dim], N(0, I_noise_dim)]``.

    ``w`` defaults to a fresh standard-normal draw from the same generator.
    """
    if not 0 < shared_dim <= teacher_dim:
        raise ValueError("shared_dim must lie in [1, teacher_dim]")
    rng = np.random.default_rng(seed)
    xt = rng.standard_normal((n, teacher_dim))
    if w is None:
        w = rng.standard_normal(teacher_dim)
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (teacher_dim,):
        raise ValueError(f"w must have length {teacher_dim}")
    y = xt @ w + noise_sd * rng.standard_normal(n)
    xs = np.hstack([xt[:, :shared_dim], rng.standard_normal((n, noise_dim))])
    ids = [f"syn{i:03d}" for i in range(n)]
    return PrivilegedData(FeatureTable(ids, xt, "synthetic-teacher"),
                          FeatureTable(ids, xs, "synthetic-student"), y, w)
