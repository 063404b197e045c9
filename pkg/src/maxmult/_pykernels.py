"""NumPy versions of the compiled pair-sum loops (same signatures as ``_ckernels``).

Each loops over offsets in Python and vectorises over base points.
"""

import numpy as np


def _shifted(arr, off, fill=0.0):
    """``arr[x + off]`` on the same index set, ``fill`` where ``x + off`` leaves the box."""
    out = np.full_like(arr, fill)
    src, dst = [], []
    for o, n in zip(off, arr.shape):
        o = int(o)
        if abs(o) >= n:
            return out, np.zeros(arr.shape, dtype=bool)
        if o >= 0:
            src.append(slice(o, n))
            dst.append(slice(0, n - o))
        else:
            src.append(slice(0, n + o))
            dst.append(slice(-o, n))
    out[tuple(dst)] = arr[tuple(src)]
    inside = np.zeros(arr.shape, dtype=bool)
    inside[tuple(dst)] = True
    return out, inside


def hoelder_max(re, im, offs, denom, stride):
    g = np.asarray(re) + 1j * np.asarray(im)
    base = np.zeros(g.shape, dtype=bool)
    base[tuple(slice(0, None, stride) for _ in g.shape)] = True
    best = 0.0
    for o, dn in zip(np.asarray(offs), np.asarray(denom)):
        y, inside = _shifted(g, o)
        ok = inside & base
        if not np.any(ok):
            continue
        v = np.max(np.abs(g[ok] - y[ok])) / dn
        best = max(best, float(v))
    return best


def frac_double_sum(re, im, xw, xr, offs, olen, kern):
    g = np.asarray(re) + 1j * np.asarray(im)
    xw = np.asarray(xw)
    half = 0.5 * np.asarray(xr)
    active = xw != 0.0
    acc = np.zeros(g.shape)
    for o, ln, kq in zip(np.asarray(offs), np.asarray(olen), np.asarray(kern)):
        sel = active & (ln < half)
        if not np.any(sel):
            # offsets are sorted, so no later offset qualifies either
            break
        y, _ = _shifted(g, o)
        d = g[sel] - y[sel]
        acc[sel] += (d.real**2 + d.imag**2) * kq
    return float(np.sum(xw * acc))
