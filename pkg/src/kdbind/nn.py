"""Small dense regression networks with hand-written backpropagation.

Parameters of a model live in one flat float64 buffer; per-layer weight and
bias arrays are views into it, so Adam updates the whole network with a
handful of vector operations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .scaler import Scaler
from .table import atomic_write

RELU = "relu"
LINEAR = "linear"

DISTILL_DIM = 16
H1_DROPOUT = 0.3
H2_DROPOUT = 0.2
# Leaky-ReLU slope in the default Kaiming-uniform bound of torch.nn.Linear.
KAIMING_A = math.sqrt(5.0)

FORMAT_VERSION = 1

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: str = RELU
    dropout: float = 0.0

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise ValueError("layer dimensions must be >= 1")
        if self.activation not in (RELU, LINEAR):
            raise ValueError(f"unknown activation {self.activation!r}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")


def derive_architecture(input_dim: int, distill_dim: int = DISTILL_DIM) -> list[LayerSpec]:
    """Layer stack ``input -> h1 -> h2 -> distill_dim -> 1``.

    ``h1 = int(min(512, max(64, input_dim / 8)))`` and
    ``h2 = int(min(128, h1 / 2))``.
    """
    if input_dim < 1:
        raise ValueError(f"input_dim must be >= 1, got {input_dim}")
    h1 = int(min(512, max(64, input_dim / 8)))
    h2 = int(min(128, h1 / 2))
    return [
        LayerSpec(input_dim, h1, RELU, H1_DROPOUT),
        LayerSpec(h1, h2, RELU, H2_DROPOUT),
        LayerSpec(h2, distill_dim, RELU, 0.0),
        LayerSpec(distill_dim, 1, LINEAR, 0.0),
    ]


@dataclass
class ForwardTrace:
    """Cached activations of one forward pass.

    ``pre``/``post``/``masks`` are per-layer views into the flat buffers
    ``pre_flat``/``post_flat``/``mask_flat``; ``masks[l]`` is None for layers
    without dropout and in EVAL mode.
    """

    x: np.ndarray
    pre_flat: np.ndarray
    post_flat: np.ndarray
    mask_flat: np.ndarray
    pre: list[np.ndarray]
    post: list[np.ndarray]
    masks: list[np.ndarray | None]
    train: bool

    @property
    def y(self) -> float:
        return float(self.post[-1][0])

    @property
    def h(self) -> np.ndarray:
        return self._h

    def __post_init__(self):
        self._h = None


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros_like(cls, params: np.ndarray) -> "AdamState":
        return cls(np.zeros_like(params), np.zeros_like(params))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class MlpModel:
    """Dense ReLU network ending in a linear 1-unit head.

    ``distill_layer_index`` names the hidden layer whose post-activation
    output is the latent vector ``h`` aligned during distillation.
    """

    def __init__(self, layers: Sequence[LayerSpec], distill_layer_index: int | None = None,
                 descriptor: str | None = None, scaler: Scaler | None = None):
        layers = list(layers)
        if not layers:
            raise ValueError("model needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.out_dim != b.in_dim:
                raise ValueError(f"layer dims do not chain: {a.out_dim} -> {b.in_dim}")
        if layers[-1].out_dim != 1 or layers[-1].activation != LINEAR \
                or layers[-1].dropout != 0.0:
            raise ValueError("output layer must be a linear 1-unit layer without dropout")
        if distill_layer_index is None:
            distill_layer_index = len(layers) - 2 if len(layers) > 1 else 0
        if not 0 <= distill_layer_index < len(layers):
            raise ValueError("distill_layer_index out of range")
        self.layers = layers
        self.distill_layer_index = distill_layer_index
        self.descriptor = descriptor
        self.scaler = scaler

        self._dims = np.array([layers[0].in_dim] + [s.out_dim for s in layers], dtype=np.int64)
        sizes = [s.out_dim * s.in_dim + s.out_dim for s in layers]
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
        self._w_off = starts
        self._b_off = starts + np.array([s.out_dim * s.in_dim for s in layers], dtype=np.int64)
        outs = [s.out_dim for s in layers]
        self._a_off = np.concatenate([[0], np.cumsum(outs)[:-1]]).astype(np.int64)
        self._n_act = int(sum(outs))
        self._relu = np.array([s.activation == RELU for s in layers])
        self._width = int(self._dims.max())
        self._delta = np.zeros(self._width)
        self._scratch = np.zeros(self._width)
        self._no_dh = np.zeros(self._width)
        self._eval_mask = np.ones(self._n_act)

        self.params = np.zeros(sum(sizes), dtype=np.float64)
        self.weights, self.biases = self._views(self.params)

    def _views(self, flat: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
        weights = [flat[w:w + s.out_dim * s.in_dim].reshape(s.out_dim, s.in_dim)
                   for s, w in zip(self.layers, self._w_off)]
        biases = [flat[b:b + s.out_dim] for s, b in zip(self.layers, self._b_off)]
        return weights, biases

    def _act_views(self, flat: np.ndarray) -> list[np.ndarray]:
        return [flat[o:o + s.out_dim] for s, o in zip(self.layers, self._a_off)]

    @property
    def input_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def latent_dim(self) -> int:
        return self.layers[self.distill_layer_index].out_dim

    @property
    def dims(self) -> list[int]:
        return self._dims.tolist()

    def grad_views(self, flat: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Per-layer (weight, bias) views of a flat gradient buffer."""
        return self._views(flat)

    def kernel_state(self, state: AdamState) -> tuple:
        """Buffers consumed by the compiled training loop; ``params`` and the
        Adam moments are shared, not copied."""
        return (self.params, self._dims, self._w_off, self._b_off, self._a_off, self._relu,
                state.m, state.v, np.zeros(self._n_act), np.zeros(self._n_act),
                np.zeros_like(self.params), np.zeros(self._width), np.zeros(self._width),
                self.distill_layer_index)

    def copy(self) -> "MlpModel":
        other = MlpModel(self.layers, self.distill_layer_index, self.descriptor, self.scaler)
        other.params[:] = self.params
        return other

    # forward / backward ----------------------------------------------------

    def sample_masks(self, rng, n: int | None = None) -> np.ndarray:
        """Flat inverted-dropout multipliers: ``keep / (1 - p)`` on dropout
        layers, 1 elsewhere. With ``n`` given the result has ``n`` rows."""
        rng = _as_rng(rng)
        shape = (self._n_act,) if n is None else (n, self._n_act)
        mask = np.ones(shape)
        for s, o in zip(self.layers, self._a_off):
            if s.activation == RELU and s.dropout > 0:
                sub = (s.out_dim,) if n is None else (n, s.out_dim)
                keep = rng.random(sub) >= s.dropout
                mask[..., o:o + s.out_dim] = keep / (1.0 - s.dropout)
        return mask

    def new_trace(self) -> ForwardTrace:
        pre, post = np.zeros(self._n_act), np.zeros(self._n_act)
        tr = ForwardTrace(np.zeros(self.input_dim), pre, post, self._eval_mask,
                          self._act_views(pre), self._act_views(post),
                          [None] * len(self.layers), False)
        tr._h = tr.post[self.distill_layer_index]
        return tr

    def forward(self, x, train: bool = False, rng=None, mask=None,
                trace: ForwardTrace | None = None) -> ForwardTrace:
        """Forward pass. TRAIN mode applies dropout from ``mask`` (see
        :meth:`sample_masks`) or from masks drawn with ``rng``; EVAL mode
        uses no randomness. ``trace`` reuses an existing buffer set."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.input_dim,):
            raise ValueError(f"expected input of length {self.input_dim}, got shape {x.shape}")
        if train:
            if mask is None:
                if rng is None:
                    raise ValueError("training-mode forward needs an rng or a mask")
                mask = self.sample_masks(rng)
            elif mask.shape != (self._n_act,):
                raise ValueError("dropout mask has the wrong size")
        else:
            mask = self._eval_mask
        if trace is None:
            trace = self.new_trace()
        trace.x = x
        trace.mask_flat = mask
        trace.train = train
        if train:
            trace.masks = [mask[o:o + s.out_dim] if s.activation == RELU and s.dropout > 0
                           else None for s, o in zip(self.layers, self._a_off)]
        else:
            trace.masks = [None] * len(self.layers)
        _kernels.forward(self.params, x, self._dims, self._w_off, self._b_off, self._a_off,
                         self._relu, mask, trace.pre_flat, trace.post_flat)
        return trace

    def backward(self, trace: ForwardTrace, dl_dy: float, dl_dh=None, out=None) -> np.ndarray:
        """Flat gradient of a loss with upstream ``dl_dy`` at the output and
        optional ``dl_dh`` added at the distillation layer's output."""
        if trace.pre_flat.shape != (self._n_act,) or trace.x.shape != (self.input_dim,):
            raise ValueError("trace was not produced by this model")
        distill = -1
        if dl_dh is not None:
            if self.distill_layer_index == len(self.layers) - 1:
                raise ValueError("dl_dh needs a hidden distillation layer")
            dl_dh = np.asarray(dl_dh, dtype=np.float64)
            if dl_dh.shape != (self.latent_dim,):
                raise ValueError(f"dl_dh must have length {self.latent_dim}")
            distill = self.distill_layer_index
        else:
            dl_dh = self._no_dh
        if out is None:
            out = np.zeros_like(self.params)
        _kernels.backward(self.params, trace.x, self._dims, self._w_off, self._b_off,
                          self._a_off, self._relu, trace.mask_flat, trace.pre_flat,
                          trace.post_flat, float(dl_dy), dl_dh, distill, out,
                          self._delta, self._scratch)
        return out

    def predict(self, X) -> np.ndarray:
        """EVAL-mode predictions for the rows of ``X`` (already standardised)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        trace = self.new_trace()
        return np.array([self.forward(x, trace=trace).y for x in X])


def forward(model: MlpModel, x, mode: str = "eval", rng=None) -> ForwardTrace:
    return model.forward(x, train=(mode.lower() == "train"), rng=rng)


def backward(trace: ForwardTrace, model: MlpModel, dl_dy: float, dl_dh=None) -> np.ndarray:
    return model.backward(trace, dl_dy, dl_dh)


def init_kaiming_uniform(model: MlpModel, rng_seed) -> MlpModel:
    """Draw weights from U(-b, b), ``b = sqrt(6 / (fan_in (1 + a^2)))``, and
    biases from U(-1/sqrt(fan_in), 1/sqrt(fan_in)), in place."""
    rng = _as_rng(rng_seed)
    for s, w, b in zip(model.layers, model.weights, model.biases):
        bound = math.sqrt(6.0 / (s.in_dim * (1.0 + KAIMING_A**2)))
        w[:] = rng.uniform(-bound, bound, size=w.shape)
        bb = 1.0 / math.sqrt(s.in_dim)
        b[:] = rng.uniform(-bb, bb, size=b.shape)
    return model


def kaiming_bound(fan_in: int, a: float = KAIMING_A) -> float:
    return math.sqrt(6.0 / (fan_in * (1.0 + a * a)))


def adam_step(params: np.ndarray, grads: np.ndarray, state: AdamState,
              lr: float = 1e-3, weight_decay: float = 1e-4) -> tuple[np.ndarray, AdamState]:
    """One Adam update with L2 weight decay folded into the gradient, in place.

    ``g = grad + wd * param``; ``m``/``v`` are the usual exponential moments
    and ``param -= lr * m_hat / (sqrt(v_hat) + eps)``.
    """
    if params.shape != grads.shape or state.m.shape != params.shape \
            or state.v.shape != params.shape:
        raise ValueError("parameter, gradient and moment shapes differ")
    state.t += 1
    _kernels.adam(params.reshape(-1), grads.reshape(-1), state.m.reshape(-1),
                  state.v.reshape(-1), state.t, lr, weight_decay,
                  ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
    return params, state


def mse(pred, target) -> float:
    pred = np.asarray(pred, dtype=np.float64).ravel()
    target = np.asarray(target, dtype=np.float64).ravel()
    if pred.shape != target.shape:
        raise ValueError(f"length mismatch: {pred.shape[0]} vs {target.shape[0]}")
    if pred.size == 0:
        raise ValueError("mse of empty vectors")
    return float(np.mean((pred - target) ** 2))


# persistence ---------------------------------------------------------------

def model_to_dict(model: MlpModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "descriptor": model.descriptor,
        "layers": [
            {"in": s.in_dim, "out": s.out_dim, "activation": s.activation,
             "dropout": s.dropout, "w": w.ravel().tolist(), "b": b.tolist()}
            for s, w, b in zip(model.layers, model.weights, model.biases)
        ],
        "distill_layer_index": model.distill_layer_index,
        "scaler": model.scaler.to_dict() if model.scaler is not None else None,
    }


def model_from_dict(data: dict) -> MlpModel:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    specs = [LayerSpec(l["in"], l["out"], l["activation"], l["dropout"]) for l in data["layers"]]
    scaler = Scaler.from_dict(data["scaler"]) if data.get("scaler") else None
    model = MlpModel(specs, data["distill_layer_index"], data.get("descriptor"), scaler)
    for layer, w, b in zip(data["layers"], model.weights, model.biases):
        w[:] = np.asarray(layer["w"], dtype=np.float64).reshape(w.shape)
        b[:] = np.asarray(layer["b"], dtype=np.float64)
    return model


def save_model(model: MlpModel, path) -> None:
    atomic_write(path, json.dumps(model_to_dict(model)) + "\n")


def load_model(path) -> MlpModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
