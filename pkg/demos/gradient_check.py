"""Backpropagation against central finite differences.

Builds the network the trainer would build for a 24-feature input, pushes
one sample through it with dropout on, and compares every analytic
parameter gradient of the distillation objective with a numerical one.

    python3 demos/gradient_check.py
"""

import numpy as np

from kdbind.distill import KdConfig, Mode, total_loss
from kdbind.nn import MlpModel, derive_architecture, init_kaiming_uniform

rng = np.random.default_rng(0)
model = init_kaiming_uniform(MlpModel(derive_architecture(24)), rng)
print("layers:", " -> ".join(str(d) for d in model.dims), f"({model.params.size} parameters)")

x = rng.normal(size=24)
mask = model.sample_masks(rng)
cfg = KdConfig(mode=Mode.DISTILL_OUT_FEAT, lambda_out=0.6, lambda_feat=0.5)
teacher_pred, teacher_h, y = 0.3, rng.normal(size=model.latent_dim), -1.2


def loss():
    tr = model.forward(x, train=True, mask=mask)
    return total_loss(tr.y, tr.h, teacher_pred, teacher_h, y, cfg)[0]


tr = model.forward(x, train=True, mask=mask)
_, d_pred, d_h = total_loss(tr.y, tr.h, teacher_pred, teacher_h, y, cfg)
analytic = model.backward(tr, d_pred, d_h)

h = 1e-5
numeric = np.empty_like(analytic)
for i in range(model.params.size):
    old = model.params[i]
    model.params[i] = old + h
    up = loss()
    model.params[i] = old - h
    down = loss()
    model.params[i] = old
    numeric[i] = (up - down) / (2 * h)

err = np.abs(analytic - numeric)
rel = err / np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-12)
big = np.maximum(np.abs(analytic), np.abs(numeric)) > 1e-6
print(f"max abs error {err.max():.2e}, max rel error (|g| > 1e-6) {rel[big].max():.2e}")
# Zeros come from dropped units and inactive ReLUs.
print(f"{(analytic == 0).sum()} of {analytic.size} gradients are exactly zero")
