# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for contraction words; see reference.py for the contract."""
import numpy as np


def word_value(const double[:, :, ::1] h):
    cdef Py_ssize_t k = h.shape[0], n = h.shape[1]
    cdef Py_ssize_t i, p, q, r
    cdef double acc, tr = 0.0
    buf_a = np.eye(n)
    buf_b = np.empty((n, n))
    cdef double[:, ::1] a = buf_a
    cdef double[:, ::1] b = buf_b
    for i in range(k):
        for p in range(n):
            for q in range(n):
                acc = 0.0
                for r in range(n):
                    acc += a[p, r] * h[i, r, q]
                b[p, q] = acc
        a, b = b, a
    for p in range(n):
        tr += a[p, p]
    return tr


def word_grads(const double[:, :, ::1] h, const double[::1] g):
    cdef Py_ssize_t k = h.shape[0], n = h.shape[1]
    cdef Py_ssize_t i, p, q, r
    cdef double acc
    pre_buf = np.empty((k + 1, n, n))
    suf_buf = np.empty((k + 1, n, n))
    out_buf = np.empty((k, n, n))
    cdef double[:, :, ::1] pre = pre_buf
    cdef double[:, :, ::1] suf = suf_buf
    cdef double[:, :, ::1] out = out_buf
    for p in range(n):
        for q in range(n):
            pre[0, p, q] = 1.0 if p == q else 0.0
            suf[k, p, q] = 1.0 if p == q else 0.0
    for i in range(k):
        for p in range(n):
            for q in range(n):
                acc = 0.0
                for r in range(n):
                    acc += pre[i, p, r] * h[i, r, q]
                pre[i + 1, p, q] = acc
    for i in range(k - 1, -1, -1):
        for p in range(n):
            for q in range(n):
                acc = 0.0
                for r in range(n):
                    acc += h[i, p, r] * suf[i + 1, r, q]
                suf[i, p, q] = acc
    # out[i] = diag(g) @ (suf[i+1] @ pre[i])^T
    for i in range(k):
        for p in range(n):
            for q in range(n):
                acc = 0.0
                for r in range(n):
                    acc += suf[i + 1, q, r] * pre[i, r, p]
                out[i, p, q] = g[p] * acc
    return out_buf


def sandwich_value(const double[::1] u, const double[:, :, ::1] h, const double[::1] g, const double[::1] v):
    cdef Py_ssize_t k = h.shape[0], n = u.shape[0]
    cdef Py_ssize_t i, p, r
    cdef double acc, total = 0.0
    w_buf = np.empty(n)
    t_buf = np.empty(n)
    cdef double[::1] w = w_buf
    cdef double[::1] tmp = t_buf
    for p in range(n):
        w[p] = g[p] * v[p]
    for i in range(k - 1, -1, -1):
        for p in range(n):
            acc = 0.0
            for r in range(n):
                acc += h[i, p, r] * w[r]
            tmp[p] = acc
        w, tmp = tmp, w
    for p in range(n):
        total += u[p] * w[p]
    return total


def sandwich_grads(const double[::1] u, const double[:, :, ::1] h, const double[::1] g, const double[::1] v):
    cdef Py_ssize_t k = h.shape[0], n = u.shape[0]
    cdef Py_ssize_t i, p, r
    cdef double acc
    a_buf = np.empty((k + 1, n))
    b_buf = np.empty((k + 1, n))
    du_buf = np.empty(n)
    dv_buf = np.empty(n)
    dt_buf = np.empty((k, n, n))
    cdef double[:, ::1] a = a_buf
    cdef double[:, ::1] b = b_buf
    cdef double[::1] du = du_buf
    cdef double[::1] dv = dv_buf
    cdef double[:, :, ::1] dt = dt_buf
    for p in range(n):
        a[0, p] = u[p]
        b[k, p] = g[p] * v[p]
    for i in range(k):
        for p in range(n):
            acc = 0.0
            for r in range(n):
                acc += a[i, r] * h[i, r, p]
            a[i + 1, p] = acc
    for i in range(k - 1, -1, -1):
        for p in range(n):
            acc = 0.0
            for r in range(n):
                acc += h[i, p, r] * b[i + 1, r]
            b[i, p] = acc
    for p in range(n):
        du[p] = b[0, p]
        dv[p] = g[p] * a[k, p]
    for i in range(k):
        for p in range(n):
            acc = g[p] * a[i, p]
            for r in range(n):
                dt[i, p, r] = acc * b[i + 1, r]
    return du_buf, dv_buf, dt_buf
