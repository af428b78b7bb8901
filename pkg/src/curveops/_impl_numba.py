"""Numba-compiled implementations of the hot numeric kernels.

Loop-level twins of ``_impl_numpy``; selected via the CURVEOPS_BACKEND
environment variable (see ``curveops.backend``).
"""

import math

import numpy as np
from numba import njit

KERNEL_FEJER = 0
KERNEL_BSPLINE = 1

_LOG_UNDERFLOW = -700.0
_PI = math.pi


@njit(cache=True)
def _fejer_scalar(x):
    u = 0.5 * x
    if u == 0.0:
        return 0.5
    s = math.sin(_PI * u) / (_PI * u)
    return 0.5 * s * s


@njit(cache=True)
def _bspline_scalar(order, x):
    if order == 1:
        return 1.0 if abs(x) <= 0.5 else 0.0
    half = 0.5 * order
    if abs(x) >= half:
        return 0.0
    # evaluating at -|x| makes the even symmetry exact in floats
    x = -abs(x)
    acc = 0.0
    coeff = 1.0
    sign = 1.0
    for j in range(order + 1):
        base = half + x - j
        if base > 0.0:
            acc += sign * coeff * base ** (order - 1)
        sign = -sign
        coeff = coeff * (order - j) / (j + 1)
    fact = 1.0
    for j in range(2, order):
        fact *= j
    return acc / fact


@njit(cache=True)
def _kernel_scalar(kernel_id, order, x):
    if kernel_id == KERNEL_FEJER:
        return _fejer_scalar(x)
    return _bspline_scalar(order, x)


@njit(cache=True)
def fejer_values(x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _fejer_scalar(x[i])
    return out


@njit(cache=True)
def bspline_values(order, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _bspline_scalar(order, x[i])
    return out


def kernel_values(kernel_id, order, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if kernel_id == KERNEL_FEJER:
        return fejer_values(x)
    if kernel_id == KERNEL_BSPLINE:
        return bspline_values(order, x)
    raise ValueError(f"unknown kernel id {kernel_id}")


@njit(cache=True)
def _fejer_translate_dot(samples, kmin, s, klo, khi):
    # over integer translates sin^2(pi(s-k)/2) only alternates between
    # sin^2(pi s/2) and cos^2(pi s/2), so the loop needs no per-term sin
    sig = math.sin(0.5 * _PI * s) ** 2
    c = 2.0 / (_PI * _PI)
    acc = 0.0
    for k in range(klo, khi + 1):
        x = s - k
        if x == 0.0:
            acc += 0.5 * samples[k - kmin]
        else:
            w = sig if k % 2 == 0 else 1.0 - sig
            acc += samples[k - kmin] * c * w / (x * x)
    return acc


@njit(cache=True)
def sampling_dot(samples, kmin, n, ts, win, kernel_id, order):
    """Sum samples[k - kmin] * kernel(n*t - k) over |n*t - k| <= win, per t."""
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        s = n * ts[i]
        klo = int(math.ceil(s - win))
        khi = int(math.floor(s + win))
        if kernel_id == KERNEL_FEJER:
            out[i] = _fejer_translate_dot(samples, kmin, s, klo, khi)
            continue
        acc = 0.0
        for k in range(klo, khi + 1):
            acc += samples[k - kmin] * _kernel_scalar(kernel_id, order, s - k)
        out[i] = acc
    return out


@njit(cache=True)
def _fejer_translate_sum(s, klo, khi):
    sig = math.sin(0.5 * _PI * s) ** 2
    c = 2.0 / (_PI * _PI)
    acc = 0.0
    for k in range(klo, khi + 1):
        x = s - k
        if x == 0.0:
            acc += 0.5
        else:
            acc += c * (sig if k % 2 == 0 else 1.0 - sig) / (x * x)
    return acc


@njit(cache=True)
def kernel_window_sums(kernel_id, order, ts, win):
    """Signed and absolute translate sums of the kernel over |t - k| <= win."""
    signed = np.empty(ts.shape[0])
    absd = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        s = ts[i]
        klo = int(math.ceil(s - win))
        khi = int(math.floor(s + win))
        if kernel_id == KERNEL_FEJER:
            # nonnegative kernel: absolute and signed sums coincide
            total = _fejer_translate_sum(s, klo, khi)
            signed[i] = total
            absd[i] = total
            continue
        acc = 0.0
        aacc = 0.0
        for k in range(klo, khi + 1):
            v = _kernel_scalar(kernel_id, order, s - k)
            acc += v
            aacc += abs(v)
        signed[i] = acc
        absd[i] = aacc
    return signed, absd


@njit(cache=True)
def poisson_windows(n, ts, tol):
    """Per-point index windows whose neglected Poisson mass is certified < tol.

    One-sided tails are bounded geometrically: the up ratio s/(k+1) is < 1 and
    decreasing once k >= s, the down ratio k/s is < 1 and decreasing.
    """
    m = ts.shape[0]
    klo = np.zeros(m, dtype=np.int64)
    khi = np.zeros(m, dtype=np.int64)
    tails = np.zeros(m)
    for i in range(m):
        s = n * ts[i]
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
        bound = 0.0
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


@njit(cache=True)
def poisson_dot(samples, kmin, n, ts, klo, khi):
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        s = n * ts[i]
        if s <= 0.0:
            out[i] = samples[-kmin]
            continue
        lo = klo[i]
        hi = khi[i]
        if -s > _LOG_UNDERFLOW:
            k0 = 0
            w0 = math.exp(-s)
        else:
            k0 = int(s)
            w0 = math.exp(k0 * math.log(s) - s - math.lgamma(k0 + 1.0))
        acc = w0 * samples[k0 - kmin]
        w = w0
        k = k0
        while k > lo:
            w *= k / s
            k -= 1
            acc += w * samples[k - kmin]
        w = w0
        k = k0
        while k < hi:
            w *= s / (k + 1.0)
            k += 1
            acc += w * samples[k - kmin]
        out[i] = acc
    return out


@njit(cache=True)
def negbin_windows(n, ts, tol):
    """Certified index windows for the Baskakov weights.

    Upward the term ratio ((n+k)/(k+1)) * t/(1+t) decreases toward t/(1+t)<1,
    downward the ratio k/((n+k-1) q) decreases as k drops, so both tails admit
    geometric bounds at the stopping term.
    """
    m = ts.shape[0]
    klo = np.zeros(m, dtype=np.int64)
    khi = np.zeros(m, dtype=np.int64)
    tails = np.zeros(m)
    for i in range(m):
        t = ts[i]
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
        bound = 0.0
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


@njit(cache=True)
def negbin_dot(samples, kmin, n, ts, klo, khi):
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        t = ts[i]
        if t <= 0.0:
            out[i] = samples[-kmin]
            continue
        lo = klo[i]
        hi = khi[i]
        q = t / (1.0 + t)
        log_w0 = -n * math.log1p(t)
        if log_w0 > _LOG_UNDERFLOW:
            k0 = 0
            w0 = math.exp(log_w0)
        else:
            k0 = int(n * t)
            w0 = math.exp(math.lgamma(n + k0) - math.lgamma(k0 + 1.0) - math.lgamma(n)
                          + k0 * math.log(t) - (n + k0) * math.log1p(t))
        acc = w0 * samples[k0 - kmin]
        w = w0
        k = k0
        while k > lo:
            w *= k / ((n + k - 1.0) * q)
            k -= 1
            acc += w * samples[k - kmin]
        w = w0
        k = k0
        while k < hi:
            w *= (n + k) / (k + 1.0) * q
            k += 1
            acc += w * samples[k - kmin]
        out[i] = acc
    return out


@njit(cache=True)
def bernstein_dot(samples, n, ts):
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        t = ts[i]
        if t <= 0.0:
            out[i] = samples[0]
        elif t >= 1.0:
            out[i] = samples[n]
        elif t <= 0.5 and n * math.log1p(-t) > _LOG_UNDERFLOW:
            ratio = t / (1.0 - t)
            w = math.exp(n * math.log1p(-t))
            acc = w * samples[0]
            for k in range(n):
                w *= (n - k) / (k + 1.0) * ratio
                acc += w * samples[k + 1]
            out[i] = acc
        elif t > 0.5 and n * math.log(t) > _LOG_UNDERFLOW:
            ratio = (1.0 - t) / t
            w = math.exp(n * math.log(t))
            acc = w * samples[n]
            for j in range(n):
                w *= (n - j) / (j + 1.0) * ratio
                acc += w * samples[n - 1 - j]
            out[i] = acc
        else:
            k0 = int((n + 1) * t)
            if k0 > n:
                k0 = n
            w0 = math.exp(math.lgamma(n + 1.0) - math.lgamma(k0 + 1.0)
                          - math.lgamma(n - k0 + 1.0)
                          + k0 * math.log(t) + (n - k0) * math.log1p(-t))
            acc = w0 * samples[k0]
            w = w0
            for k in range(k0, n):
                w *= (n - k) / (k + 1.0) * (t / (1.0 - t))
                if w == 0.0:
                    break
                acc += w * samples[k + 1]
            w = w0
            for k in range(k0, 0, -1):
                w *= k / (n - k + 1.0) * ((1.0 - t) / t)
                if w == 0.0:
                    break
                acc += w * samples[k - 1]
            out[i] = acc
    return out
