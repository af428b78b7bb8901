"""Curves in binary images: tracing, coordinate functions, rasterization, upscaling.

Coordinates follow the matrix convention: the abscissa is the column index and
the ordinate is the row index counted from the top downwards.  A curve pixel
has value 1, background 0.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve, ExtensionStrategy, affine_transform, apply_operator
from .operators import OperatorFamily

MAX_PIXELS = 100_000_000
RASTER_SAMPLE_CAP = 2 ** 20

# Freeman directions 0..7 as (dabscissa, dordinate) with the ordinate growing
# downwards: 0 is east, the numbering then runs counterclockwise on screen.
DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1))


class PbmFormatError(ValueError):
    """Raised for malformed PBM streams."""


class TraceError(ValueError):
    """Raised when an image violates the simple-curve tracing preconditions."""


@dataclass(frozen=True)
class BinaryImage:
    """A rows x cols matrix over {0, 1}."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise ValueError("pixels must be a nonempty 2-d matrix")
        if not np.isin(px, (0, 1)).all():
            raise ValueError("pixel values must be 0 or 1")
        object.__setattr__(self, "pixels", px.astype(np.uint8))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    def pixel_set(self) -> set:
        """Curve pixels as (abscissa, ordinate) pairs."""
        ys, xs = np.nonzero(self.pixels)
        return {(int(x), int(y)) for x, y in zip(xs, ys)}


@dataclass(frozen=True)
class ChainCode:
    """Start pixel plus Freeman direction labels along the traced path."""

    start: tuple[int, int]
    codes: tuple[int, ...]
    closed: bool

    def __post_init__(self):
        object.__setattr__(self, "codes", tuple(int(c) for c in self.codes))
        if any(c < 0 or c > 7 for c in self.codes):
            raise ValueError("chain codes must lie in 0..7")


@dataclass(frozen=True)
class CoordinateSequences:
    """Ordered abscissa and ordinate sequences of the traced pixels."""

    u: tuple[int, ...]
    v: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if len(self.u) != len(self.v):
            raise ValueError("abscissa and ordinate sequences must have equal length")


def _tokens(data: bytes):
    """PBM header/ascii-raster tokens; '#' starts a comment through end of line."""
    i = 0
    n = len(data)
    while i < n:
        c = data[i:i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            j = data.find(b"\n", i)
            i = n if j < 0 else j + 1
        else:
            j = i
            while j < n and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            yield i, data[i:j]
            i = j
    yield n, None


def load_pbm(data: bytes) -> BinaryImage:
    """Parse a P1 (ascii) or P4 (packed) PBM stream; value 1 is a curve pixel."""
    toks = _tokens(data)
    try:
        _, magic = next(toks)
        _, w_tok = next(toks)
        h_pos, h_tok = next(toks)
    except StopIteration:
        raise PbmFormatError("truncated PBM header") from None
    if magic not in (b"P1", b"P4"):
        raise PbmFormatError(f"unsupported magic {magic!r}; expected P1 or P4")
    try:
        cols, rows = int(w_tok), int(h_tok)
    except (TypeError, ValueError):
        raise PbmFormatError("malformed PBM dimensions") from None
    if cols <= 0 or rows <= 0:
        raise PbmFormatError("PBM dimensions must be positive")
    if rows * cols > MAX_PIXELS:
        raise PbmFormatError(f"image of {rows}x{cols} pixels exceeds the size cap")

    if magic == b"P1":
        bits = []
        for _, tok in toks:
            if tok is None:
                break
            for ch in tok:
                if ch == 0x30:
                    bits.append(0)
                elif ch == 0x31:
                    bits.append(1)
                else:
                    raise PbmFormatError(f"unexpected byte {chr(ch)!r} in P1 raster")
            if len(bits) > rows * cols:
                raise PbmFormatError("trailing garbage after P1 raster")
        if len(bits) != rows * cols:
            raise PbmFormatError(f"expected {rows * cols} raster bits, got {len(bits)}")
        px = np.array(bits, dtype=np.uint8).reshape(rows, cols)
        return BinaryImage(px)

    # P4: a single whitespace byte after the height, then packed rows.
    after_h = h_pos + len(h_tok)
    if after_h >= len(data) or not data[after_h:after_h + 1].isspace():
        raise PbmFormatError("P4 raster must follow a single whitespace byte")
    raster = data[after_h + 1:]
    stride = (cols + 7) // 8
    if len(raster) < stride * rows:
        raise PbmFormatError("truncated P4 raster")
    if len(raster) > stride * rows:
        raise PbmFormatError("trailing garbage after P4 raster")
    rowbits = np.unpackbits(np.frombuffer(raster, dtype=np.uint8).reshape(rows, stride),
                            axis=1)
    return BinaryImage(rowbits[:, :cols])


def save_pbm(image: BinaryImage, fmt: str = "P1") -> bytes:
    """Serialize to P1 or P4 bytes; load_pbm round-trips both exactly."""
    if fmt == "P1":
        body = "\n".join("".join(str(int(v)) for v in row) for row in image.pixels)
        return f"P1\n{image.cols} {image.rows}\n{body}\n".encode()
    if fmt == "P4":
        packed = np.packbits(image.pixels, axis=1)
        return f"P4\n{image.cols} {image.rows}\n".encode() + packed.tobytes()
    raise ValueError("fmt must be 'P1' or 'P4'")


def find_start(image: BinaryImage) -> tuple[int, int]:
    """The curve pixel with maximum ordinate, ties broken by minimum abscissa."""
    ys, xs = np.nonzero(image.pixels)
    if ys.size == 0:
        raise TraceError("image contains no curve pixel")
    ymax = ys.max()
    return int(xs[ys == ymax].min()), int(ymax)


def trace(image: BinaryImage) -> tuple[ChainCode, CoordinateSequences]:
    """Walk the curve from the start pixel, always taking the lowest direction.

    The curve pixels must form a single simple 8-connected path or cycle.  At
    each step the next pixel is the neighbor with the lowest direction label
    among those that are neither the previous pixel nor already visited; only
    the start may be revisited, which closes the loop.  Inputs that leave
    pixels unvisited (branching or self-intersecting curves, disconnected
    specks, open paths whose start pixel is not an endpoint) are rejected with
    a diagnostic naming the junction pixel where the walk went astray.
    """
    pixels = image.pixel_set()
    if not pixels:
        raise TraceError("image contains no curve pixel")

    start = find_start(image)
    if len(pixels) == 1:
        chain = ChainCode(start=start, codes=(), closed=True)
        return chain, CoordinateSequences(u=(start[0],), v=(start[1],))

    path = [start]
    codes = []
    visited = {start}
    prev = None
    cur = start
    closed = False
    while True:
        step = None
        for d, (dx, dy) in enumerate(DIRECTIONS):
            nxt = (cur[0] + dx, cur[1] + dy)
            if nxt not in pixels or nxt == prev:
                continue
            if nxt in visited and nxt != start:
                continue
            step = (d, nxt)
            break
        if step is None:
            break
        d, nxt = step
        codes.append(d)
        if nxt == start:
            closed = True
            break
        path.append(nxt)
        visited.add(nxt)
        prev = cur
        cur = nxt

    if len(visited) != len(pixels):
        unvisited = pixels - visited
        for p in path:
            junction = [q for dx, dy in DIRECTIONS
                        if (q := (p[0] + dx, p[1] + dy)) in unvisited]
            if junction:
                raise TraceError(
                    f"pixel ({p[0]}, {p[1]}) branches to unvisited "
                    f"({junction[0][0]}, {junction[0][1]}); the image is not a "
                    f"single simple curve ({len(unvisited)} pixel(s) unreached)")
        missing = sorted(unvisited)[0]
        raise TraceError(
            f"disconnected curve pixels, e.g. ({missing[0]}, {missing[1]}); "
            f"{len(unvisited)} pixel(s) unreached from the start")

    chain = ChainCode(start=start, codes=tuple(codes), closed=closed)
    seqs = CoordinateSequences(u=tuple(p[0] for p in path), v=tuple(p[1] for p in path))
    return chain, seqs


def replay(chain: ChainCode) -> CoordinateSequences:
    """Coordinates visited when walking the chain codes from the start."""
    x, y = chain.start
    us, vs = [x], [y]
    for c in chain.codes:
        dx, dy = DIRECTIONS[c]
        x, y = x + dx, y + dy
        us.append(x)
        vs.append(y)
    if chain.closed:
        if (us[-1], vs[-1]) != chain.start:
            raise ValueError("closed chain code does not return to its start")
        us.pop()
        vs.pop()
    return CoordinateSequences(u=tuple(us), v=tuple(vs))


def chaincode_to_json(chain: ChainCode) -> str:
    return json.dumps({"start": [chain.start[0], chain.start[1]],
                       "codes": list(chain.codes), "closed": chain.closed})


def coord_function_pl(values, closed: bool):
    """Piecewise-linear function on [0, 1] through the sequence values.

    Closed sequences use breakpoints j/N and wrap the last segment back to the
    first value; open sequences interpolate on breakpoints (j-1)/(N-1).
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("need a nonempty 1-d sequence")
    n = vals.size
    if n == 1:
        c = float(vals[0])
        return lambda t: np.full_like(np.asarray(t, dtype=np.float64), c)[()]
    if closed:
        knots = np.arange(n + 1) / n
        table = np.concatenate((vals, vals[:1]))
    else:
        knots = np.arange(n) / (n - 1)
        table = vals
    return lambda t: np.interp(np.asarray(t, dtype=np.float64), knots, table)[()]


def coord_function_pc(values):
    """Piecewise-constant function on [0, 1]: value j on [(j-1)/N, j/N).

    The final cell is closed at t = 1.  Cell membership is resolved against the
    exact breakpoint floats, so j/N maps to value j+1.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("need a nonempty 1-d sequence")
    n = vals.size
    knots = np.arange(n) / n

    def fn(t):
        idx = np.searchsorted(knots, np.asarray(t, dtype=np.float64), side="right") - 1
        return vals[np.clip(idx, 0, n - 1)][()]
    return fn


def image_to_curve(image: BinaryImage, variant: str = "pl") -> Curve:
    """Trace the image and build its 2-component coordinate curve on [0, 1].

    The piecewise-linear variant is continuous; the piecewise-constant variant
    is returned flagged non-continuous (operators still apply to it, and the
    approximation holds away from the jump set).
    """
    chain, seqs = trace(image)
    if variant == "pl":
        x1 = coord_function_pl(seqs.u, chain.closed)
        x2 = coord_function_pl(seqs.v, chain.closed)
        return Curve((0.0, 1.0), (x1, x2), closed=chain.closed)
    if variant == "pc":
        x1 = coord_function_pc(seqs.u)
        x2 = coord_function_pc(seqs.v)
        return Curve((0.0, 1.0), (x1, x2), closed=chain.closed, continuous=False)
    raise ValueError("variant must be 'pl' or 'pc'")


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.copysign(np.floor(np.abs(x) + 0.5), x).astype(np.int64)


def rasterize(gamma: Curve, rows: int, cols: int) -> BinaryImage:
    """Round dense curve samples to the nearest pixels (half away from zero).

    Sampling is refined by doubling until consecutive sample positions are
    within Chebyshev distance 0.5, which forces consecutive rounded pixels to
    be 8-adjacent, and is capped at 2**20 samples.
    """
    if rows < 1 or cols < 1:
        raise ValueError("canvas dimensions must be positive")
    if gamma.dimension != 2:
        raise ValueError("only 2-d curves can be rasterized")
    a, b = gamma.domain
    m = 1024
    while True:
        ts = np.linspace(a, b, m)
        pts = gamma(ts)
        gap = np.max(np.abs(np.diff(pts, axis=0)))
        if gap <= 0.5 or m >= RASTER_SAMPLE_CAP:
            break
        m *= 2

    if not np.all(np.isfinite(pts)):
        raise ValueError("curve produced non-finite values")
    xi = _round_half_away(pts[:, 0])
    yi = _round_half_away(pts[:, 1])
    if gap > 0.5 and (np.abs(np.diff(xi)).max() > 1 or np.abs(np.diff(yi)).max() > 1):
        raise ValueError("sample cap reached before the rasterization connected")
    if xi.min() < 0 or xi.max() >= cols or yi.min() < 0 or yi.max() >= rows:
        raise ValueError(
            f"curve values round outside the {rows}x{cols} canvas "
            f"(abscissa {xi.min()}..{xi.max()}, ordinate {yi.min()}..{yi.max()})")
    px = np.zeros((rows, cols), dtype=np.uint8)
    px[yi, xi] = 1
    return BinaryImage(px)


def upscale(image: BinaryImage, factor: float, family: OperatorFamily, n: int,
            strategy: ExtensionStrategy, tol=None) -> BinaryImage:
    """Re-render the image curve at ``factor`` times the resolution.

    Pipeline: trace, build piecewise-linear coordinate functions, apply the
    operator, scale the continuous approximant, then rasterize onto a
    ceil(factor*rows) x ceil(factor*cols) canvas.
    """
    if not factor > 0:
        raise ValueError("factor must be positive")
    curve = image_to_curve(image, "pl")
    approx = apply_operator(family, curve, n, strategy, tol)
    scaled = affine_transform(approx, factor * np.eye(2), np.zeros(2))
    return rasterize(scaled, math.ceil(factor * image.rows), math.ceil(factor * image.cols))


def smooth_from_points(points, closed: bool, family: OperatorFamily, n: int,
                       strategy: ExtensionStrategy, tol=None) -> Curve:
    """Smooth the polyline through ordered points with the family operator."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError("need at least two (x, y) points")
    x1 = coord_function_pl(pts[:, 0], closed)
    x2 = coord_function_pl(pts[:, 1], closed)
    base = Curve((0.0, 1.0), (x1, x2), closed=closed)
    return apply_operator(family, base, n, strategy, tol)


def read_points_csv(text: str):
    """Parse x,y rows; a non-numeric first row is treated as a header."""
    rows = []
    for lineno, rec in enumerate(csv.reader(io.StringIO(text))):
        if not rec or all(not cell.strip() for cell in rec):
            continue
        try:
            rows.append((float(rec[0]), float(rec[1])))
        except (ValueError, IndexError):
            if lineno == 0:
                continue
            raise ValueError(f"malformed point row {lineno + 1}: {rec!r}") from None
    return rows


def write_points_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in points:
        writer.writerow([repr(float(x)), repr(float(y))])
    return buf.getvalue()
