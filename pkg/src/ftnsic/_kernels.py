"""Compiled block kernels for the cancellation estimators.

Every kernel processes one complete block: it consumes exactly n
received samples, internally runs the pipeline-draining steps (reading
zeros past the block edge, consistent with the zero-symbol padding
convention), and returns one decided point index per symbol plus the
multiplication/addition counters.

Arithmetic blueprint shared with the streaming classes (bit-exact
equivalence depends on it):
  * every estimation event starts from v = y[idx], then subtracts the
    left terms in ascending tap order, then the right terms in
    ascending tap order; each term is one multiply and one subtract;
  * out-of-range neighbors contribute an explicit zero factor (the
    product is still performed and counted, matching the per-event
    formula costs);
  * decisions scan points in index order keeping the first strict
    minimum of (dr*dr + di*di).
"""
from __future__ import annotations

import numpy as np
from numba import njit

_Z = np.complex128(0.0)


@njit(cache=True, nogil=True, inline="always")
def _deci(v, pts):
    best = 0
    dr = v.real - pts[0].real
    di = v.imag - pts[0].imag
    bd = dr * dr + di * di
    for i in range(1, pts.shape[0]):
        dr = v.real - pts[i].real
        di = v.imag - pts[i].imag
        d = dr * dr + di * di
        if d < bd:
            bd = d
            best = i
    return best


@njit(cache=True, nogil=True, inline="always")
def _at(buf, idx):
    if 0 <= idx < buf.shape[0]:
        return buf[idx]
    return _Z


@njit(cache=True, nogil=True)
def sssse_kernel(y, taps, pts):
    """Causal-only cancellation; zero added delay."""
    n = y.shape[0]
    span = taps.shape[0]
    est = np.zeros(n, np.complex128)
    out = np.empty(n, np.int64)
    ops = 0
    for k in range(n):
        v = y[k]
        for i in range(2, span + 1):
            v = v - taps[i - 1] * _at(est, k - i + 1)
            ops += 1
        b = _deci(v, pts)
        est[k] = pts[b]
        out[k] = b
    return out, ops, ops


@njit(cache=True, nogil=True)
def sssgbkse_kernel(y, taps, pts, go_back):
    """Go-back-K revision: first pass, K re-estimates, final pass.

    Each revision of the symbol go-back positions behind also cancels
    the interference of the symbols between it and the newest one.
    """
    n = y.shape[0]
    span = taps.shape[0]
    est = np.zeros(n, np.complex128)
    out = np.empty(n, np.int64)
    ops = 0
    for k in range(n):
        v = y[k]
        for i in range(2, span + 1):
            v = v - taps[i - 1] * _at(est, k - i + 1)
            ops += 1
        b = _deci(v, pts)
        est[k] = pts[b]
        out[k] = b
        for kp in range(1, go_back + 1):
            j = k - kp
            if j < 0:
                break
            v = y[j]
            for i in range(2, span + 1):
                v = v - taps[i - 1] * _at(est, j - i + 1)
                ops += 1
            for m in range(1, kp + 1):
                v = v - taps[m] * est[j + m]
                ops += 1
            b = _deci(v, pts)
            est[j] = pts[b]
            out[j] = b
        v = y[k]
        for i in range(2, span + 1):
            v = v - taps[i - 1] * _at(est, k - i + 1)
            ops += 1
        b = _deci(v, pts)
        est[k] = pts[b]
        out[k] = b
    return out, ops, ops


@njit(cache=True, nogil=True)
def mlisic_kernel(y, taps, pts, layers):
    """Layered cancellation; layer 1 uses raw received samples as
    symbol proxies on both sides, deeper layers re-estimate from the
    previous layer's decisions.  Delay layers * (span - 1)."""
    n = y.shape[0]
    span = taps.shape[0]
    lag = span - 1
    est = np.zeros((layers, n), np.complex128)
    out = np.empty(n, np.int64)
    ops = 0
    for k in range(n + layers * lag):
        for j in range(1, layers + 1):
            idx = k - j * lag
            if idx < 0 or idx >= n:
                continue
            v = y[idx]
            if j == 1:
                for i in range(2, span + 1):
                    v = v - taps[i - 1] * _at(y, idx - i + 1)
                    ops += 1
                for i in range(2, span + 1):
                    v = v - taps[i - 1] * _at(y, idx + i - 1)
                    ops += 1
            else:
                prev = est[j - 2]
                for i in range(2, span + 1):
                    v = v - taps[i - 1] * _at(prev, idx - i + 1)
                    ops += 1
                for i in range(2, span + 1):
                    v = v - taps[i - 1] * _at(prev, idx + i - 1)
                    ops += 1
            b = _deci(v, pts)
            est[j - 1, idx] = pts[b]
            if j == layers:
                out[idx] = b
    return out, ops, ops


@njit(cache=True, nogil=True)
def imlisic_kernel(y, taps, pts, spans, mask):
    """Improved layered cancellation with per-layer spans.

    Layer 1 feeds its own past decisions back on the causal side and
    uses raw received samples on the anti-causal side; deeper layers
    combine own-layer causal feedback with the previous layer's
    decisions.  The newest decision of layer j overwrites the matching
    entry of every earlier layer enabled in `mask`.
    """
    n = y.shape[0]
    layers = spans.shape[0]
    cum = np.empty(layers + 1, np.int64)
    cum[0] = 0
    for j in range(1, layers + 1):
        cum[j] = cum[j - 1] + spans[j - 1] - 1
    delay = cum[layers]
    est = np.zeros((layers, n), np.complex128)
    out = np.empty(n, np.int64)
    ops = 0
    for k in range(n + delay):
        for j in range(1, layers + 1):
            idx = k - cum[j]
            if idx < 0 or idx >= n:
                continue
            lj = spans[j - 1]
            own = est[j - 1]
            v = y[idx]
            for i in range(2, lj + 1):
                v = v - taps[i - 1] * _at(own, idx - i + 1)
                ops += 1
            if j == 1:
                for i in range(2, lj + 1):
                    v = v - taps[i - 1] * _at(y, idx + i - 1)
                    ops += 1
            else:
                prev = est[j - 2]
                for i in range(2, lj + 1):
                    v = v - taps[i - 1] * _at(prev, idx + i - 1)
                    ops += 1
            b = _deci(v, pts)
            own[idx] = pts[b]
            if j == layers:
                out[idx] = b
            for jj in range(1, j):
                if mask[j, jj]:
                    est[jj - 1, idx] = pts[b]
    return out, ops, ops
