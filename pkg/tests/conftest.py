import numpy as np
import pytest

import curveops as co

# Worked example: an 11-pixel closed curve with known chain code.
EXAMPLE_U = (4, 5, 6, 7, 7, 6, 5, 4, 3, 3, 4)
EXAMPLE_V = (6, 6, 5, 4, 3, 3, 3, 2, 3, 4, 5)
EXAMPLE_CODES = (0, 1, 1, 2, 4, 4, 3, 5, 6, 7, 6)


def example_image() -> co.BinaryImage:
    px = np.zeros((8, 9), dtype=np.uint8)
    for x, y in zip(EXAMPLE_U, EXAMPLE_V):
        px[y, x] = 1
    return co.BinaryImage(px)


@pytest.fixture(scope="session")
def figure_image():
    return example_image()


@pytest.fixture(scope="session")
def m2_family():
    return co.make_generalized_sampling(co.bspline_kernel(2))


@pytest.fixture(scope="session")
def m3_family():
    return co.make_generalized_sampling(co.bspline_kernel(3))


@pytest.fixture(scope="session")
def fejer_family():
    return co.make_generalized_sampling(co.fejer_kernel())


@pytest.fixture(scope="session")
def szasz_family():
    return co.make_szasz_mirakjan()


@pytest.fixture(scope="session")
def baskakov_family():
    return co.make_baskakov()


@pytest.fixture(scope="session")
def bernstein_family():
    return co.make_bernstein(1)


def spiral_curve() -> co.Curve:
    return co.Curve((0.0, 1.0), (
        lambda t: np.asarray(t, float) * np.cos(np.pi * np.asarray(t, float)),
        lambda t: np.asarray(t, float) * np.sin(np.pi * np.asarray(t, float)),
    ))


def closed_figure_curve() -> co.Curve:
    return co.Curve((0.0, 1.0), (
        lambda t: np.cos(4 * np.pi * np.asarray(t, float))
        + 2 * np.cos(2 * np.pi * np.asarray(t, float)),
        lambda t: np.sin(2 * np.pi * np.asarray(t, float)),
    ), closed=True)


def digitize_closed(fx, fy, samples=8192):
    """Round a smooth closed curve to a simple digital cycle.

    Consecutive duplicates are dropped and diagonal shortcuts removed, so the
    resulting pixel list is a cyclic sequence whose only set-adjacencies are
    consecutive ones (for shapes that stay away from self-contact).
    """
    ts = np.linspace(0.0, 1.0, samples, endpoint=False)
    xs = np.round(np.asarray(fx(ts))).astype(int)
    ys = np.round(np.asarray(fy(ts))).astype(int)
    pts = []
    for x, y in zip(xs, ys):
        if not pts or (int(x), int(y)) != pts[-1]:
            pts.append((int(x), int(y)))
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) > 3:
        changed = False
        i = 0
        while i < len(pts) and len(pts) > 3:
            m = len(pts)
            prv, nxt = pts[(i - 1) % m], pts[(i + 1) % m]
            if max(abs(prv[0] - nxt[0]), abs(prv[1] - nxt[1])) <= 1:
                pts.pop(i)
                changed = True
            else:
                i += 1
    return pts


def image_from_points(pts, margin=3) -> co.BinaryImage:
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    assert min(xs) >= 1 and min(ys) >= 1
    px = np.zeros((max(ys) + margin, max(xs) + margin), dtype=np.uint8)
    for x, y in pts:
        px[y, x] = 1
    return co.BinaryImage(px)


SYNTHETIC_SHAPES = {
    "ellipse": (lambda t: 30 + 22 * np.cos(2 * np.pi * t),
                lambda t: 25 + 16 * np.sin(2 * np.pi * t)),
    "rounded-rect": (
        lambda t: 30 + 24 * np.sign(np.cos(2 * np.pi * t)) * np.abs(np.cos(2 * np.pi * t)) ** 0.5,
        lambda t: 21 + 15 * np.sign(np.sin(2 * np.pi * t)) * np.abs(np.sin(2 * np.pi * t)) ** 0.5),
    "blob": (
        lambda t: 30 + (18 + 4 * np.cos(4 * np.pi * t) + 2 * np.sin(6 * np.pi * t)) * np.cos(2 * np.pi * t),
        lambda t: 28 + (18 + 4 * np.cos(4 * np.pi * t) + 2 * np.sin(6 * np.pi * t)) * np.sin(2 * np.pi * t)),
}


@pytest.fixture(scope="session")
def synthetic_images():
    return {name: image_from_points(digitize_closed(fx, fy))
            for name, (fx, fy) in SYNTHETIC_SHAPES.items()}


def random_closed_image(seed: int) -> co.BinaryImage:
    """A random smooth star-shaped digital cycle."""
    rng = np.random.default_rng(seed)
    base = rng.uniform(12.0, 20.0)
    amps = rng.uniform(0.5, 3.0, size=3)
    phases = rng.uniform(0.0, 2 * np.pi, size=3)

    def radius(t):
        r = np.full_like(np.asarray(t, float), base)
        for j, (a, p) in enumerate(zip(amps, phases), start=2):
            r = r + a * np.cos(2 * np.pi * j * t + p)
        return r

    cx = base + amps.sum() + 4
    fx = lambda t: cx + radius(t) * np.cos(2 * np.pi * t)
    fy = lambda t: cx + radius(t) * np.sin(2 * np.pi * t)
    return image_from_points(digitize_closed(fx, fy))


def hausdorff_distance(img_a: co.BinaryImage, img_b: co.BinaryImage) -> float:
    """Brute-force symmetric Hausdorff distance between the two pixel sets."""
    a = np.argwhere(img_a.pixels)[:, ::-1].astype(float)
    b = np.argwhere(img_b.pixels)[:, ::-1].astype(float)
    d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
    return float(max(np.sqrt(d2.min(axis=1)).max(), np.sqrt(d2.min(axis=0)).max()))


def is_single_closed_cycle(img: co.BinaryImage) -> bool:
    """One 8-connected component in which every pixel has at least 2 neighbors."""
    pix = img.pixel_set()
    if not pix:
        return False
    dirs = co.imagecurve.DIRECTIONS
    if any(sum((x + dx, y + dy) in pix for dx, dy in dirs) < 2 for x, y in pix):
        return False
    seen = set()
    stack = [next(iter(pix))]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        stack.extend(q for dx, dy in dirs
                     if (q := (p[0] + dx, p[1] + dy)) in pix and q not in seen)
    return len(seen) == len(pix)
