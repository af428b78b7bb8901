"""Pure-numpy implementations of the hot numeric kernels.

Same signatures as ``_impl_numba``; selected via the CURVEOPS_BACKEND
environment variable (see ``curveops.backend``).
"""

import math

import numpy as np

KERNEL_FEJER = 0
KERNEL_BSPLINE = 1

# Anchoring weight recurrences at index 0 keeps full float precision; the
# exponent guard switches to a log-space anchor at the distribution mode
# before exp() underflows.
_LOG_UNDERFLOW = -700.0


def fejer_values(x):
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * np.sinc(0.5 * x) ** 2


def bspline_values(order, x):
    x = np.asarray(x, dtype=np.float64)
    if order == 1:
        return np.where(np.abs(x) <= 0.5, 1.0, 0.0)
    half = 0.5 * order
    out = np.zeros_like(x)
    inside = np.abs(x) < half
    # evaluating at -|x| makes the even symmetry exact in floats
    xi = -np.abs(x[inside])
    acc = np.zeros_like(xi)
    coeff = 1.0
    sign = 1.0
    for j in range(order + 1):
        acc += sign * coeff * np.maximum(half + xi - j, 0.0) ** (order - 1)
        sign = -sign
        coeff = coeff * (order - j) / (j + 1)
    out[inside] = acc / math.factorial(order - 1)
    return out


def kernel_values(kernel_id, order, x):
    if kernel_id == KERNEL_FEJER:
        return fejer_values(x)
    if kernel_id == KERNEL_BSPLINE:
        return bspline_values(order, x)
    raise ValueError(f"unknown kernel id {kernel_id}")


def _fejer_translate_values(s, kk):
    """Fejér kernel at s - kk for integer kk, one sin pair per row.

    Over integer translates sin^2(pi(s-k)/2) only alternates between
    sin^2(pi s/2) and cos^2(pi s/2).
    """
    x = s[:, None] - kk
    sig = np.sin(0.5 * np.pi * s) ** 2
    w = np.where(kk % 2 == 0, sig[:, None], 1.0 - sig[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (2.0 / np.pi ** 2) * w / (x * x)
    return np.where(x == 0.0, 0.5, vals)


def _translate_values(kernel_id, order, s, kk):
    if kernel_id == KERNEL_FEJER:
        return _fejer_translate_values(s, kk)
    return kernel_values(kernel_id, order, s[:, None] - kk)


def sampling_dot(samples, kmin, n, ts, win, kernel_id, order):
    """Sum samples[k - kmin] * kernel(n*t - k) over |n*t - k| <= win, per t."""
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape[0])
    ncols = int(math.floor(2.0 * win)) + 2
    rows = max(1, 4_000_000 // max(ncols, 1))
    offs = np.arange(ncols, dtype=np.int64)
    for lo in range(0, ts.shape[0], rows):
        s = n * ts[lo:lo + rows]
        k0 = np.ceil(s - win).astype(np.int64)
        kk = k0[:, None] + offs[None, :]
        valid = kk <= np.floor(s + win).astype(np.int64)[:, None]
        vals = _translate_values(kernel_id, order, s, kk)
        idx = np.clip(kk - kmin, 0, samples.shape[0] - 1)
        out[lo:lo + rows] = np.sum(np.where(valid, samples[idx] * vals, 0.0), axis=1)
    return out


def kernel_window_sums(kernel_id, order, ts, win):
    """Signed and absolute translate sums of the kernel over |t - k| <= win."""
    ts = np.asarray(ts, dtype=np.float64)
    signed = np.empty(ts.shape[0])
    absd = np.empty(ts.shape[0])
    ncols = int(math.floor(2.0 * win)) + 2
    rows = max(1, 4_000_000 // max(ncols, 1))
    offs = np.arange(ncols, dtype=np.int64)
    for lo in range(0, ts.shape[0], rows):
        s = ts[lo:lo + rows]
        k0 = np.ceil(s - win).astype(np.int64)
        kk = k0[:, None] + offs[None, :]
        valid = kk <= np.floor(s + win).astype(np.int64)[:, None]
        vals = np.where(valid, _translate_values(kernel_id, order, s, kk), 0.0)
        signed[lo:lo + rows] = np.sum(vals, axis=1)
        absd[lo:lo + rows] = np.sum(np.abs(vals), axis=1)
    return signed, absd


def poisson_windows(n, ts, tol):
    """Per-point index windows whose neglected Poisson mass is certified < tol.

    The one-sided tails are bounded by geometric series: going up from k the
    term ratio s/(k+1) is < 1 and decreasing once k >= s, and going down the
    ratio k/s is < 1 and decreasing.
    """
    ts = np.asarray(ts, dtype=np.float64)
    m = ts.shape[0]
    klo = np.zeros(m, dtype=np.int64)
    khi = np.zeros(m, dtype=np.int64)
    tails = np.zeros(m)
    for i in range(m):
        s = n * float(ts[i])
        if s <= 0.0:
            continue
        if -s > _LOG_UNDERFLOW:
            k0 = 0
            w0 = math.exp(-s)
        else:
            k0 = int(s)
            w0 = math.exp(k0 * math.log(s) - s - math.lgamma(k0 + 1.0))
        k = k0
        w = w0
        while True:
            r = s / (k + 1.0)
            if r < 1.0:
                bound = w * r / (1.0 - r)
                if bound <= 0.5 * tol:
                    break
            w *= s / (k + 1.0)
            k += 1
        khi[i] = k
        tails[i] = bound
        if k0 > 0:
            k = k0
            w = w0
            while k > 0:
                r = k / s
                if r < 1.0 and w * r / (1.0 - r) <= 0.5 * tol:
                    tails[i] += w * r / (1.0 - r)
                    break
                w *= k / s
                k -= 1
            klo[i] = k
    return klo, khi, tails


def poisson_dot(samples, kmin, n, ts, klo, khi):
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        s = n * float(ts[i])
        if s <= 0.0:
            out[i] = samples[-kmin]
            continue
        lo = int(klo[i])
        hi = int(khi[i])
        if -s > _LOG_UNDERFLOW:
            w = np.empty(hi + 1)
            w[0] = math.exp(-s)
            if hi > 0:
                w[1:] = w[0] * np.cumprod(s / np.arange(1.0, hi + 1.0))
            wseg = w[lo:]
        else:
            k0 = int(s)
            w0 = math.exp(k0 * math.log(s) - s - math.lgamma(k0 + 1.0))
            up = np.arange(k0 + 1.0, hi + 1.0)
            down = np.arange(float(k0), lo, -1.0)
            wseg = np.concatenate((
                (w0 * np.cumprod(down / s))[::-1],
                [w0],
                w0 * np.cumprod(s / up),
            ))
        out[i] = wseg @ samples[lo - kmin:hi + 1 - kmin]
    return out


def negbin_windows(n, ts, tol):
    """Certified index windows for the Baskakov weights.

    Upward the term ratio ((n+k)/(k+1)) * t/(1+t) decreases toward t/(1+t)<1,
    downward the ratio k/((n+k-1) q) with q = t/(1+t) decreases as k drops, so
    both tails admit geometric bounds at the stopping term.
    """
    ts = np.asarray(ts, dtype=np.float64)
    m = ts.shape[0]
    klo = np.zeros(m, dtype=np.int64)
    khi = np.zeros(m, dtype=np.int64)
    tails = np.zeros(m)
    for i in range(m):
        t = float(ts[i])
        if t <= 0.0:
            continue
        q = t / (1.0 + t)
        log_w0 = -n * math.log1p(t)
        if log_w0 > _LOG_UNDERFLOW:
            k0 = 0
            w0 = math.exp(log_w0)
        else:
            k0 = int(n * t)
            w0 = math.exp(math.lgamma(n + k0) - math.lgamma(k0 + 1.0) - math.lgamma(n)
                          + k0 * math.log(t) - (n + k0) * math.log1p(t))
        k = k0
        w = w0
        while True:
            r = (n + k) / (k + 1.0) * q
            if r < 1.0:
                bound = w * r / (1.0 - r)
                if bound <= 0.5 * tol:
                    break
            w *= (n + k) / (k + 1.0) * q
            k += 1
        khi[i] = k
        tails[i] = bound
        if k0 > 0:
            k = k0
            w = w0
            while k > 0:
                r = k / ((n + k - 1.0) * q)
                if r < 1.0 and w * r / (1.0 - r) <= 0.5 * tol:
                    tails[i] += w * r / (1.0 - r)
                    break
                w *= k / ((n + k - 1.0) * q)
                k -= 1
            klo[i] = k
    return klo, khi, tails


def negbin_dot(samples, kmin, n, ts, klo, khi):
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        t = float(ts[i])
        if t <= 0.0:
            out[i] = samples[-kmin]
            continue
        lo = int(klo[i])
        hi = int(khi[i])
        q = t / (1.0 + t)
        log_w0 = -n * math.log1p(t)
        if log_w0 > _LOG_UNDERFLOW:
            ks = np.arange(0.0, hi)
            w = np.empty(hi + 1)
            w[0] = math.exp(log_w0)
            if hi > 0:
                w[1:] = w[0] * np.cumprod((n + ks) / (ks + 1.0) * q)
            wseg = w[lo:]
        else:
            k0 = int(n * t)
            w0 = math.exp(math.lgamma(n + k0) - math.lgamma(k0 + 1.0) - math.lgamma(n)
                          + k0 * math.log(t) - (n + k0) * math.log1p(t))
            up = np.arange(float(k0), hi)
            down = np.arange(float(k0), lo, -1.0)
            wseg = np.concatenate((
                (w0 * np.cumprod(down / ((n + down - 1.0) * q)))[::-1],
                [w0],
                w0 * np.cumprod((n + up) / (up + 1.0) * q),
            ))
        out[i] = wseg @ samples[lo - kmin:hi + 1 - kmin]
    return out


def bernstein_dot(samples, n, ts):
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty(ts.shape[0])
    ks = np.arange(float(n))
    for i in range(ts.shape[0]):
        t = float(ts[i])
        if t <= 0.0:
            out[i] = samples[0]
        elif t >= 1.0:
            out[i] = samples[n]
        elif t <= 0.5 and n * math.log1p(-t) > _LOG_UNDERFLOW:
            w = np.empty(n + 1)
            w[0] = math.exp(n * math.log1p(-t))
            w[1:] = w[0] * np.cumprod((n - ks) / (ks + 1.0) * (t / (1.0 - t)))
            out[i] = w @ samples
        elif t > 0.5 and n * math.log(t) > _LOG_UNDERFLOW:
            w = np.empty(n + 1)
            w[n] = math.exp(n * math.log(t))
            w[:n] = (w[n] * np.cumprod((n - ks) / (ks + 1.0)
                                       * ((1.0 - t) / t)))[::-1]
            out[i] = w @ samples
        else:
            from scipy.special import gammaln
            kk = np.arange(n + 1.0)
            logw = (gammaln(n + 1.0) - gammaln(kk + 1.0) - gammaln(n - kk + 1.0)
                    + kk * math.log(t) + (n - kk) * math.log1p(-t))
            out[i] = np.exp(logw) @ samples
    return out
