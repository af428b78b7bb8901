"""Vector-valued curves, componentwise operator application and domain adaptation.

A curve is a tuple of scalar functions on a closed interval.  Operators whose
natural domain differs from the curve's are bridged by one of four adaptation
strategies: constant padding (whole-line operators), translate-and-pad
(half-line operators), periodic extension (whole-line operators on closed
curves) and affine remapping (unit-interval operators).
"""

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .operators import OperatorFamily, evaluate_many

CLOSURE_TOLERANCE = 1.0e-9


class ExtensionStrategy(Enum):
    CONSTANT_PAD = "constant-pad"
    TRANSLATE_AND_PAD = "translate-pad"
    PERIODIC = "periodic"
    AFFINE_REMAP = "affine-remap"


def _eval_component(f, ts: np.ndarray) -> np.ndarray:
    """Evaluate a component at an array of parameters, tolerating scalar-only f."""
    try:
        vals = np.asarray(f(ts), dtype=np.float64)
        if vals.shape == ts.shape:
            return vals
    except Exception:
        pass
    return np.array([float(f(t)) for t in ts], dtype=np.float64)


@dataclass(frozen=True)
class Curve:
    """A d-component function on [a, b]; closed means the endpoint values agree."""

    domain: tuple[float, float]
    components: tuple
    closed: bool = False
    continuous: bool = True

    def __post_init__(self):
        a, b = self.domain
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError("domain must be a bounded interval [a, b] with a < b")
        if len(self.components) < 1:
            raise ValueError("curve needs at least one component")
        object.__setattr__(self, "components", tuple(self.components))
        if self.closed and self.continuous:
            gap = np.abs(self(a) - self(b)).max()
            if gap >= CLOSURE_TOLERANCE:
                raise ValueError(f"closed curve has endpoint gap {gap:.3g}")

    @property
    def dimension(self) -> int:
        return len(self.components)

    def __call__(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
        vals = np.stack([_eval_component(f, ts) for f in self.components], axis=-1)
        return vals[0] if np.ndim(t) == 0 else vals

    def sample(self, grid_size: int):
        """Equispaced parameters (endpoints included) and the curve values there."""
        if grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        ts = np.linspace(self.domain[0], self.domain[1], grid_size)
        return ts, self(ts)


def constant_curve(values, domain=(0.0, 1.0)) -> Curve:
    """Curve with constant components; always closed."""
    comps = tuple((lambda t, v=float(v): np.full_like(np.asarray(t, dtype=np.float64), v))
                  for v in values)
    return Curve(domain, comps, closed=True)


def extend_scalar(f, domain: tuple[float, float], strategy: ExtensionStrategy):
    """Extend a scalar function beyond [a, b] per the chosen strategy.

    Constant padding freezes the endpoint values; translate-and-pad shifts
    [a, b] to [0, b-a] and freezes f(b) beyond; periodic extension repeats a
    [0, 1] function with period one.  Affine remapping is not an extension and
    is handled inside :func:`apply_operator`.
    """
    a, b = float(domain[0]), float(domain[1])
    if strategy is ExtensionStrategy.CONSTANT_PAD:
        return lambda t: f(np.clip(np.asarray(t, dtype=np.float64), a, b))
    if strategy is ExtensionStrategy.TRANSLATE_AND_PAD:
        return lambda t: f(np.clip(np.asarray(t, dtype=np.float64) + a, a, b))
    if strategy is ExtensionStrategy.PERIODIC:
        if not (a == 0.0 and b == 1.0):
            raise ValueError("periodic extension requires the domain [0, 1]")
        return lambda t: f(np.asarray(t, dtype=np.float64)
                           - np.floor(np.asarray(t, dtype=np.float64)))
    raise ValueError("affine remapping has no extension; use apply_operator")


_COMPATIBLE = {
    (-math.inf, math.inf): (ExtensionStrategy.CONSTANT_PAD, ExtensionStrategy.PERIODIC),
    (0.0, math.inf): (ExtensionStrategy.TRANSLATE_AND_PAD,),
    (0.0, 1.0): (ExtensionStrategy.AFFINE_REMAP,),
}


def apply_operator(family: OperatorFamily, gamma: Curve, n: int,
                   strategy: ExtensionStrategy, tol=None) -> Curve:
    """Approximate a curve by applying the family operator to each component.

    The strategy must match the family domain (constant padding or periodic
    extension on the whole line, translate-and-pad on the half line, affine
    remapping on [0, 1]); periodic extension additionally requires a closed
    curve.  The result lives on the same [a, b].
    """
    allowed = _COMPATIBLE.get((family.domain.lo, family.domain.hi), ())
    if strategy not in allowed:
        raise ValueError(
            f"strategy {strategy.value} is incompatible with domain {family.domain}")
    if strategy is ExtensionStrategy.PERIODIC and not gamma.closed:
        raise ValueError("periodic extension requires a closed curve")
    a, b = gamma.domain
    if strategy is ExtensionStrategy.PERIODIC and not (a == 0.0 and b == 1.0):
        raise ValueError("periodic extension requires the domain [0, 1]")

    if strategy is ExtensionStrategy.AFFINE_REMAP:
        width = b - a
        def pullback(ts):
            return (ts - a) / width
        extended = [(lambda s, f=f: f(a + (b - a) * np.asarray(s, dtype=np.float64)))
                    for f in gamma.components]
    else:
        if strategy is ExtensionStrategy.TRANSLATE_AND_PAD:
            def pullback(ts):
                return ts - a
        else:
            def pullback(ts):
                return ts
        extended = [extend_scalar(f, gamma.domain, strategy) for f in gamma.components]

    def make_component(g):
        def component(t):
            ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
            values, _ = evaluate_many(family, g, n, pullback(ts), tol)
            return values if np.ndim(t) else float(values[0])
        return component

    comps = tuple(make_component(g) for g in extended)
    closed = gamma.closed and strategy in (ExtensionStrategy.PERIODIC,
                                           ExtensionStrategy.AFFINE_REMAP)
    return Curve(gamma.domain, comps, closed=closed)


def sup_error(gamma: Curve, approx: Curve, grid_size: int) -> float:
    """Max over an equispaced grid of the max componentwise deviation."""
    if gamma.domain != approx.domain:
        raise ValueError("curves must share a domain")
    if gamma.dimension != approx.dimension:
        raise ValueError("curves must share a dimension")
    ts, _ = gamma.sample(grid_size)
    return float(np.max(np.abs(gamma(ts) - approx(ts))))


def affine_transform(gamma: Curve, scale, offset) -> Curve:
    """The curve t -> scale @ gamma(t) + offset; preserves closedness."""
    d = gamma.dimension
    scale = np.asarray(scale, dtype=np.float64)
    offset = np.asarray(offset, dtype=np.float64)
    if scale.shape != (d, d) or offset.shape != (d,):
        raise ValueError(f"expected a {d}x{d} matrix and a length-{d} offset")

    def make_component(i):
        def component(t):
            ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
            vals = gamma(ts) @ scale[i] + offset[i]
            return vals if np.ndim(t) else float(vals[0])
        return component

    comps = tuple(make_component(i) for i in range(d))
    return Curve(gamma.domain, comps, closed=gamma.closed, continuous=gamma.continuous)


def curve_to_csv(gamma: Curve, grid_size: int) -> str:
    """Samples as CSV with columns t, x1..xd."""
    ts, pts = gamma.sample(grid_size)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"x{i + 1}" for i in range(gamma.dimension)])
    for t, row in zip(ts, pts):
        writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
    return buf.getvalue()


def curve_to_json(gamma: Curve, grid_size: int) -> str:
    """Samples plus metadata as JSON."""
    ts, pts = gamma.sample(grid_size)
    doc = {
        "domain": [gamma.domain[0], gamma.domain[1]],
        "dimension": gamma.dimension,
        "closed": gamma.closed,
        "samples": [[float(t)] + [float(v) for v in row] for t, row in zip(ts, pts)],
    }
    return json.dumps(doc, indent=2)
