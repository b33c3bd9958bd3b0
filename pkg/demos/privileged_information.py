"""Does a structure-aware teacher help a sequence-only student?

A small synthetic world where the teacher sees all 20 coordinates of each
complex and the student only 8 of them plus 4 noise columns. We compare
5-fold held-out correlation of a plain student with one distilled from a
teacher trained on the same folds.

    python3 demos/privileged_information.py [n_seeds]
"""

import sys

import numpy as np

from kdbind.distill import KdConfig, Mode, kfold_cv
from kdbind.synthetic import privileged_dataset

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 4

# Signal lives on the shared coordinates; the teacher's extra inputs are pure
# nuisance, so whatever it passes on has to come from cleaner targets.
w = np.r_[np.full(8, 0.25), np.zeros(12)]

print(f"{'seed':>4}  {'baseline':>8}  {'distilled':>9}  {'gain':>7}")
gains = []
for seed in range(n_seeds):
    data = privileged_dataset(seed, w=w)
    cfg = KdConfig(seed=seed)
    base = kfold_cv(data.student, data.y, cfg.replace(mode=Mode.BASELINE_STUDENT), k=5)
    kd = kfold_cv(data.student, data.y, cfg, teacher_features=data.teacher, k=5)
    gains.append(kd.pearson_r - base.pearson_r)
    print(f"{seed:>4}  {base.pearson_r:8.3f}  {kd.pearson_r:9.3f}  {gains[-1]:+7.3f}")

print(f"mean gain {np.mean(gains):+.4f} over {n_seeds} seeds "
      f"({sum(g > 0 for g in gains)} positive)")
