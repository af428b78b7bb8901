"""Discrete approximation operators built from sampled function values.

Every family evaluates sums of the form  sum_k f(k/n) * basis(n, k, t)  with a
certified truncation: compactly supported sampling kernels get exact windows,
everything else gets windows whose neglected mass is provably below a
tolerance.
"""

import math
from dataclasses import dataclass

import numpy as np

from .backend import impl
from .kernels import (
    DEFAULT_MAX_WINDOW,
    KERNEL_CUSTOM,
    CompactSupport,
    KernelValidationError,
    SamplingKernel,
    TruncationError,
    _window_for,
    validate_kernel,
)

DEFAULT_TOLERANCE = 1.0e-10


@dataclass(frozen=True)
class Interval:
    """A (possibly unbounded) closed interval of the real line."""
    lo: float
    hi: float

    def contains(self, t) -> bool:
        t = np.asarray(t)
        return bool(np.all((t >= self.lo) & (t <= self.hi)))

    def __str__(self):
        lo = "-inf" if self.lo == -math.inf else f"{self.lo:g}"
        hi = "+inf" if self.hi == math.inf else f"{self.hi:g}"
        return f"[{lo}, {hi}]"


@dataclass(frozen=True)
class IndexSet:
    """Which summation indices k a family uses."""
    kind: str  # "integers" | "naturals" | "range0n"

    def bounds(self, n: int):
        if self.kind == "integers":
            return None, None
        if self.kind == "naturals":
            return 0, None
        return 0, n


@dataclass(frozen=True)
class Exact:
    """Finite or compactly-windowed sums; no neglected mass."""


@dataclass(frozen=True)
class TailBounded:
    """Adaptive windows certified to neglect at most `tolerance` basis mass."""
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("truncation tolerance must be positive")


@dataclass(frozen=True)
class TruncationCertificate:
    """Window actually summed plus an upper bound on the neglected basis mass.

    For bounded f the neglected contribution is at most sup|f| * tail_bound.
    """
    k_min: int
    k_max: int
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail bound must be nonnegative")


@dataclass(frozen=True)
class OperatorFamily:
    """One discrete operator family: domain, nodes, basis and truncation policy."""

    name: str
    kind: str  # dispatch tag: "sampling" | "szasz" | "baskakov" | "bernstein"
    domain: Interval
    index_set: IndexSet
    truncation: Exact | TailBounded
    kernel: SamplingKernel | None = None
    default_n: int | None = None

    def node(self, n: int, k: int) -> float:
        """Sampling node k/n (equispaced for all shipped families)."""
        return k / n

    def mesh_bounds(self, n: int) -> tuple[float, float]:
        """Strict lower / inclusive upper bounds on consecutive node spacing."""
        return 0.999 / n, 1.0 / n

    def basis(self, n: int, k: int, t: float) -> float:
        """Reference scalar basis value; the array paths use stable recurrences."""
        if self.kind == "sampling":
            return float(np.asarray(self.kernel.evaluate(
                np.array([n * t - k], dtype=np.float64)))[0])
        if self.kind == "szasz":
            s = n * t
            if s == 0.0:
                return 1.0 if k == 0 else 0.0
            return math.exp(k * math.log(s) - s - math.lgamma(k + 1.0))
        if self.kind == "baskakov":
            if t == 0.0:
                return 1.0 if k == 0 else 0.0
            return math.exp(math.lgamma(n + k) - math.lgamma(k + 1.0) - math.lgamma(n)
                            + k * math.log(t) - (n + k) * math.log1p(t))
        if t == 0.0:
            return 1.0 if k == 0 else 0.0
        if t == 1.0:
            return 1.0 if k == n else 0.0
        return math.exp(math.lgamma(n + 1.0) - math.lgamma(k + 1.0)
                        - math.lgamma(n - k + 1.0)
                        + k * math.log(t) + (n - k) * math.log1p(-t))


def make_generalized_sampling(kernel: SamplingKernel, *,
                              tolerance: float = DEFAULT_TOLERANCE,
                              validation_grid=None,
                              validation_tolerance: float = 1.0e-6) -> OperatorFamily:
    """Sampling family on the whole line with basis kernel(n*t - k).

    The kernel is validated first; a partition defect above
    ``validation_tolerance`` rejects it.
    """
    if validation_grid is None:
        validation_grid = np.linspace(0.0, 1.0, 9)
    report = validate_kernel(kernel, validation_grid, validation_tolerance)
    if report.max_partition_defect > validation_tolerance:
        raise KernelValidationError(
            f"kernel {kernel.name!r}: partition defect {report.max_partition_defect:.3g} "
            f"exceeds {validation_tolerance:g}")
    exact = isinstance(kernel.support, CompactSupport)
    return OperatorFamily(
        name=f"sampling-{kernel.name}",
        kind="sampling",
        domain=Interval(-math.inf, math.inf),
        index_set=IndexSet("integers"),
        truncation=Exact() if exact else TailBounded(tolerance),
        kernel=kernel,
    )


def make_szasz_mirakjan(*, tolerance: float = DEFAULT_TOLERANCE) -> OperatorFamily:
    """Szász-Mirak'jan family on [0, inf) with Poisson weights."""
    return OperatorFamily(
        name="szasz",
        kind="szasz",
        domain=Interval(0.0, math.inf),
        index_set=IndexSet("naturals"),
        truncation=TailBounded(tolerance),
    )


def make_baskakov(*, tolerance: float = DEFAULT_TOLERANCE) -> OperatorFamily:
    """Baskakov family on [0, inf) with negative-binomial weights."""
    return OperatorFamily(
        name="baskakov",
        kind="baskakov",
        domain=Interval(0.0, math.inf),
        index_set=IndexSet("naturals"),
        truncation=TailBounded(tolerance),
    )


def make_bernstein(n: int) -> OperatorFamily:
    """Bernstein family on [0, 1]; ``n`` is the default degree.

    The degree passed to :func:`evaluate` always wins; the constructor argument
    is validated here and kept as the default for callers that do not choose
    one per call.
    """
    if n < 1:
        raise ValueError("Bernstein degree must be >= 1")
    return OperatorFamily(
        name="bernstein",
        kind="bernstein",
        domain=Interval(0.0, 1.0),
        index_set=IndexSet("range0n"),
        truncation=Exact(),
        default_n=n,
    )


def _sample_values(f, nodes: np.ndarray) -> np.ndarray:
    """Evaluate f at the nodes, accepting scalar-only callables."""
    try:
        vals = np.asarray(f(nodes), dtype=np.float64)
        if vals.shape != nodes.shape:
            raise ValueError
    except Exception:
        vals = np.array([float(f(x)) for x in nodes], dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)][0]
        raise ValueError(f"non-finite sample f({bad!r})")
    return vals


def _tolerance_of(family: OperatorFamily, tol) -> float:
    if tol is not None:
        if not tol > 0:
            raise ValueError("tolerance must be positive")
        return float(tol)
    if isinstance(family.truncation, TailBounded):
        return family.truncation.tolerance
    return DEFAULT_TOLERANCE


def _sampling_dot_custom(samples, kmin, n, ts, win, kernel):
    out = np.empty(ts.shape[0])
    klo = np.ceil(n * ts - win).astype(np.int64)
    khi = np.floor(n * ts + win).astype(np.int64)
    width = int((khi - klo).max()) + 1
    step = max(1, 2_000_000 // max(width, 1))
    offs = np.arange(width, dtype=np.int64)
    for lo in range(0, ts.shape[0], step):
        sl = slice(lo, min(lo + step, ts.shape[0]))
        kk = klo[sl, None] + offs[None, :]
        valid = kk <= khi[sl, None]
        vals = np.asarray(kernel.evaluate(((n * ts[sl, None]) - kk).ravel()),
                          dtype=np.float64).reshape(kk.shape)
        idx = np.clip(kk - kmin, 0, samples.shape[0] - 1)
        out[sl] = np.sum(np.where(valid, samples[idx] * vals, 0.0), axis=1)
    return out


def evaluate_many(family: OperatorFamily, f, n: int, ts, tol=None, *,
                  max_window: int = DEFAULT_MAX_WINDOW):
    """Apply the family operator to f at every point of ts.

    Returns ``(values, certificate)``; the certificate aggregates the summed
    index range and the worst certified neglected basis mass over the points.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    ts = np.ascontiguousarray(np.atleast_1d(ts), dtype=np.float64)
    if not family.domain.contains(ts):
        raise ValueError(f"evaluation points must lie in {family.domain}")
    tolerance = _tolerance_of(family, tol)

    if family.kind == "sampling":
        win, tail = _window_for(family.kernel, tolerance, max_window)
        kmin = int(math.ceil(n * float(ts.min()) - win))
        kmax = int(math.floor(n * float(ts.max()) + win))
        nodes = np.arange(kmin, kmax + 1, dtype=np.float64) / n
        samples = _sample_values(f, nodes)
        if family.kernel.accel_id == KERNEL_CUSTOM:
            values = _sampling_dot_custom(samples, kmin, n, ts, win, family.kernel)
        else:
            values = impl.sampling_dot(samples, kmin, n, ts, win,
                                       family.kernel.accel_id, family.kernel.order)
        return values, TruncationCertificate(kmin, kmax, tail)

    if family.kind in ("szasz", "baskakov"):
        windows = impl.poisson_windows if family.kind == "szasz" else impl.negbin_windows
        dot = impl.poisson_dot if family.kind == "szasz" else impl.negbin_dot
        klo, khi, tails = windows(n, ts, tolerance)
        if int((khi - klo).max()) > max_window:
            raise TruncationError(
                f"window of {int((khi - klo).max())} terms exceeds the cap {max_window}")
        kmin = int(klo.min())
        kmax = int(khi.max())
        nodes = np.arange(kmin, kmax + 1, dtype=np.float64) / n
        samples = _sample_values(f, nodes)
        values = dot(samples, kmin, n, ts, klo, khi)
        return values, TruncationCertificate(kmin, kmax, float(tails.max()))

    # Bernstein: finite exact sum over k = 0..n.
    nodes = np.arange(0, n + 1, dtype=np.float64) / n
    samples = _sample_values(f, nodes)
    values = impl.bernstein_dot(samples, n, ts)
    return values, TruncationCertificate(0, n, 0.0)


def evaluate(family: OperatorFamily, f, n: int, t: float, tol=None, *,
             max_window: int = DEFAULT_MAX_WINDOW):
    """Scalar wrapper around :func:`evaluate_many`."""
    values, cert = evaluate_many(family, f, n, np.array([float(t)]), tol,
                                 max_window=max_window)
    return float(values[0]), cert


def tail_mass(family: OperatorFamily, n: int, t: float, delta: float, tol=None, *,
              max_window: int = DEFAULT_MAX_WINDOW) -> float:
    """Absolute basis mass carried by nodes with |k/n - t| >= delta.

    Computed under the same certified windows as :func:`evaluate`; the window
    truncation can undercount by at most the certificate's tail bound.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not family.domain.contains(np.array([t])):
        raise ValueError(f"t must lie in {family.domain}")
    tolerance = _tolerance_of(family, tol)

    if family.kind == "sampling":
        win, _ = _window_for(family.kernel, tolerance, max_window)
        s = n * float(t)
        ks = np.arange(math.ceil(s - win), math.floor(s + win) + 1, dtype=np.float64)
        far = np.abs(ks / n - t) >= delta
        if not np.any(far):
            return 0.0
        vals = np.abs(np.asarray(family.kernel.evaluate(s - ks[far]), dtype=np.float64))
        return float(vals.sum())

    # The remaining families have nonnegative weights, so the delta-tail is the
    # operator applied to the indicator of the far node set.
    far = lambda nodes: (np.abs(nodes - t) >= delta).astype(np.float64)
    value, _ = evaluate(family, far, n, t, tolerance, max_window=max_window)
    return max(0.0, float(value))
