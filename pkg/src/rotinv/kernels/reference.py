"""Pure-NumPy kernels for contraction words and their gradients.

The contract shared with the compiled backend: every word is a stack ``h`` of
shape ``(k, n, n)`` holding the metric-scaled factors ``H_j = diag(g) @ T_j``,
and gradients are returned with respect to the underlying ``T_j``.
"""
import numpy as np


def word_value(h):
    """``trace(H_1 @ ... @ H_k)`` for ``k >= 1``."""
    p = h[0]
    for i in range(1, h.shape[0]):
        p = p @ h[i]
    return float(np.trace(p))


def word_grads(h, g):
    """Per-position derivative of ``trace(H_1 ... H_k)`` w.r.t. ``T_i``.

    With ``C_i`` the product of the other factors in cyclic order, the
    derivative at position ``i`` is ``diag(g) @ C_i^T``.
    """
    k, n, _ = h.shape
    pre = np.empty((k + 1, n, n))
    pre[0] = np.eye(n)
    for i in range(k):
        pre[i + 1] = pre[i] @ h[i]
    suf = np.empty((k + 1, n, n))
    suf[k] = np.eye(n)
    for i in range(k - 1, -1, -1):
        suf[i] = h[i] @ suf[i + 1]
    out = np.empty((k, n, n))
    for i in range(k):
        cyc = suf[i + 1] @ pre[i]
        out[i] = g[:, None] * cyc.T
    return out


def sandwich_value(u, h, g, v):
    """``u^T H_1 ... H_k diag(g) v``; ``k = 0`` gives the metric product."""
    w = g * v
    for i in range(h.shape[0] - 1, -1, -1):
        w = h[i] @ w
    return float(u @ w)


def sandwich_grads(u, h, g, v):
    """Gradients of a sandwich w.r.t. ``u``, ``v``, and every ``T_i``."""
    k = h.shape[0]
    n = u.shape[0]
    a = np.empty((k + 1, n))
    a[0] = u
    for i in range(k):
        a[i + 1] = a[i] @ h[i]
    b = np.empty((k + 1, n))
    b[k] = g * v
    for i in range(k - 1, -1, -1):
        b[i] = h[i] @ b[i + 1]
    du = b[0].copy()
    dv = g * a[k]
    dt = np.empty((k, n, n))
    for i in range(k):
        dt[i] = np.outer(g * a[i], b[i + 1])
    return du, dv, dt
