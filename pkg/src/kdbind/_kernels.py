"""Compiled inner loops for dense networks stored in one flat parameter buffer.

Layer ``l`` maps ``dims[l]`` inputs to ``dims[l + 1]`` outputs. Its weights
start at ``w_off[l]`` (row-major, out x in) and its biases at ``b_off[l]``.
Per-layer activations live in flat buffers at offset ``a_off[l]``.
"""

import numpy as np
from numba import njit

# Reassociation lets the dot products vectorise; NaN/inf semantics are kept
# so divergence is still detectable.
_FAST = {"reassoc", "contract", "nsz", "arcp"}


@njit(cache=True, fastmath=_FAST)
def forward(params, x, dims, w_off, b_off, a_off, relu, mask, pre, post):
    n_layers = dims.size - 1
    for l in range(n_layers):
        din = dims[l]
        wo = w_off[l]
        ao = a_off[l]
        po = a_off[l - 1] if l > 0 else 0
        for j in range(dims[l + 1]):
            row = wo + j * din
            s = 0.0
            if l == 0:
                for k in range(din):
                    s += params[row + k] * x[k]
            else:
                for k in range(din):
                    s += params[row + k] * post[po + k]
            s += params[b_off[l] + j]
            pre[ao + j] = s
            if relu[l]:
                post[ao + j] = (s if s > 0.0 else 0.0) * mask[ao + j]
            else:
                post[ao + j] = s


@njit(cache=True, fastmath=_FAST)
def backward(params, x, dims, w_off, b_off, a_off, relu, mask, pre, post,
             dl_dy, dl_dh, distill, grad, delta, scratch):
    """Write d(loss)/d(params) into ``grad``.

    ``dl_dh`` (length ``dims[distill + 1]``) is added to the upstream
    gradient of layer ``distill``'s output; pass ``distill = -1`` to skip.
    """
    n_layers = dims.size - 1
    delta[0] = dl_dy
    for l in range(n_layers - 1, -1, -1):
        din = dims[l]
        wo = w_off[l]
        po = a_off[l - 1] if l > 0 else 0
        for j in range(dims[l + 1]):
            dj = delta[j]
            grad[b_off[l] + j] = dj
            row = wo + j * din
            if l == 0:
                for k in range(din):
                    grad[row + k] = dj * x[k]
            else:
                for k in range(din):
                    grad[row + k] = dj * post[po + k]
        if l == 0:
            break
        for k in range(din):
            scratch[k] = 0.0
        for j in range(dims[l + 1]):
            dj = delta[j]
            row = wo + j * din
            for k in range(din):
                scratch[k] += params[row + k] * dj
        inject = l - 1 == distill
        for k in range(din):
            s = scratch[k]
            if inject:
                s += dl_dh[k]
            if relu[l - 1]:
                s = s * mask[po + k] if pre[po + k] > 0.0 else 0.0
            delta[k] = s


@njit(cache=True, fastmath=_FAST, error_model="numpy")
def adam(params, grads, m, v, t, lr, weight_decay, beta1, beta2, eps):
    bc1 = 1.0 - beta1**t
    bc2 = 1.0 - beta2**t
    for i in range(params.size):
        g = grads[i] + weight_decay * params[i]
        m[i] = beta1 * m[i] + (1.0 - beta1) * g
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g
        params[i] -= lr * (m[i] / bc1) / (np.sqrt(v[i] / bc2) + eps)


# One network as a tuple: (params, dims, w_off, b_off, a_off, relu, m, v,
# pre, post, grad, delta, scratch, distill_layer). Optimiser moments m/v and
# the work buffers are updated in place.

@njit(cache=True)
def _forward_net(net, x, mask):
    forward(net[0], x, net[1], net[2], net[3], net[4], net[5], mask, net[8], net[9])


@njit(cache=True)
def _step_net(net, x, mask, dl_dy, dl_dh, distill, t, lr, weight_decay, beta1, beta2, eps):
    backward(net[0], x, net[1], net[2], net[3], net[4], net[5], mask, net[8], net[9],
             dl_dy, dl_dh, distill, net[10], net[11], net[12])
    adam(net[0], net[10], net[6], net[7], t, lr, weight_decay, beta1, beta2, eps)


@njit(cache=True)
def fit_epoch(order, y, has_student, student, Xs, s_masks, has_teacher, teacher, Xt, t_masks,
              t_clean_pre, t_clean_post, ones, t0, mode, lambda_out, lambda_feat, sign,
              eval_targets, lr, weight_decay, beta1, beta2, eps):
    """Run one epoch of per-sample updates and return the summed loss.

    ``mode`` is 0 for a plain supervised fit, 1 for output distillation and
    2 for output plus latent distillation. Each sample runs the teacher
    forward/update first and then the student update against the teacher's
    pre-update outputs.
    """
    total = 0.0
    s_lat_off = 0
    s_lat_dim = 0
    if has_student and mode == 2:
        k = student[13]
        s_lat_off = student[4][k]
        s_lat_dim = student[1][k + 1]
    t_lat = np.zeros(s_lat_dim)
    d_h = np.zeros(max(s_lat_dim, 1))
    t_out = 0
    t_lat_off = 0
    if has_teacher:
        t_out = teacher[4][teacher[1].size - 2]
        if s_lat_dim > 0:
            t_lat_off = teacher[4][teacher[13]]
    s_out = 0
    if has_student:
        s_out = student[4][student[1].size - 2]
    for pos in range(order.size):
        i = order[pos]
        t = t0 + pos
        yi = y[i]
        t_pred = 0.0
        if has_teacher:
            xt = Xt[i]
            _forward_net(teacher, xt, t_masks[pos])
            if mode > 0 and has_student:
                if eval_targets:
                    forward(teacher[0], xt, teacher[1], teacher[2], teacher[3], teacher[4],
                            teacher[5], ones, t_clean_pre, t_clean_post)
                    t_pred = t_clean_post[t_out]
                    for k in range(s_lat_dim):
                        t_lat[k] = t_clean_post[t_lat_off + k]
                else:
                    t_pred = teacher[9][t_out]
                    for k in range(s_lat_dim):
                        t_lat[k] = teacher[9][t_lat_off + k]
            err = teacher[9][t_out] - yi
            _step_net(teacher, xt, t_masks[pos], 2.0 * err, d_h, -1, t,
                      lr, weight_decay, beta1, beta2, eps)
            if not has_student:
                total += err * err
        if has_student:
            xs = Xs[i]
            _forward_net(student, xs, s_masks[pos])
            s_pred = student[9][s_out]
            err = s_pred - yi
            distill = -1
            if mode == 0:
                loss = err * err
                d_pred = 2.0 * err
            else:
                gap = s_pred - t_pred
                loss = (1.0 - lambda_out) * err * err + sign * lambda_out * gap * gap
                d_pred = 2.0 * (1.0 - lambda_out) * err + 2.0 * sign * lambda_out * gap
                if mode == 2:
                    acc = 0.0
                    scale = 2.0 * sign * lambda_feat / s_lat_dim
                    for k in range(s_lat_dim):
                        diff = student[9][s_lat_off + k] - t_lat[k]
                        acc += diff * diff
                        d_h[k] = scale * diff
                    loss += sign * lambda_feat * (acc / s_lat_dim)
                    distill = student[13]
            _step_net(student, xs, s_masks[pos], d_pred, d_h, distill, t,
                      lr, weight_decay, beta1, beta2, eps)
            total += loss
    return total
