"""Command-line interface: validate, approx, trace, upscale, smooth.

Exit codes: 0 success, 1 domain/precondition failure, 2 usage error.
"""

import argparse
import os
import re
import sys
import tempfile

import numpy as np

from . import imagecurve
from .curves import (
    Curve,
    ExtensionStrategy,
    apply_operator,
    curve_to_csv,
    sup_error,
)
from .kernels import (
    DivergenceError,
    KernelValidationError,
    TruncationError,
    bspline_kernel,
    fejer_kernel,
    validate_kernel,
)
from .operators import (
    make_baskakov,
    make_bernstein,
    make_generalized_sampling,
    make_szasz_mirakjan,
)
from .svgplot import render_polylines

OPERATORS = ("sampling-fejer", "sampling-bspline", "szasz", "baskakov", "bernstein")
STRATEGIES = {s.value: s for s in ExtensionStrategy}


class UsageError(Exception):
    """Command-line usage problem detected after parsing."""

SPECIMENS = {
    "spiral": Curve((0.0, 1.0), (
        lambda t: t * np.cos(np.pi * t),
        lambda t: t * np.sin(np.pi * t),
    )),
    "helix": Curve((0.0, 2.0), (
        lambda t: np.cos(2 * np.pi * t),
        lambda t: np.sin(2 * np.pi * t),
        lambda t: np.asarray(t, dtype=np.float64) + 0.0,
    )),
    "closed-figure": Curve((0.0, 1.0), (
        lambda t: np.cos(4 * np.pi * t) + 2 * np.cos(2 * np.pi * t),
        lambda t: np.sin(2 * np.pi * t),
    ), closed=True),
}


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("value must be > 0")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def _parse_kernel(name: str, order: int):
    if name == "fejer":
        return fejer_kernel()
    m = re.fullmatch(r"bspline(\d*)", name)
    if m:
        return bspline_kernel(int(m.group(1)) if m.group(1) else order)
    return None


def _build_family(operator: str, order: int, tol):
    """Family plus its natural adaptation strategy for open/closed curves."""
    if operator == "sampling-fejer":
        family = make_generalized_sampling(fejer_kernel(),
                                           tolerance=tol if tol else 1e-6)
        return family, ExtensionStrategy.CONSTANT_PAD
    if operator == "sampling-bspline":
        family = make_generalized_sampling(bspline_kernel(order))
        return family, ExtensionStrategy.CONSTANT_PAD
    if operator == "szasz":
        return make_szasz_mirakjan(), ExtensionStrategy.TRANSLATE_AND_PAD
    if operator == "baskakov":
        return make_baskakov(), ExtensionStrategy.TRANSLATE_AND_PAD
    return make_bernstein(1), ExtensionStrategy.AFFINE_REMAP


def _write_atomic(path: str, data: bytes):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".curveops-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def cmd_validate(args) -> int:
    kernel = _parse_kernel(args.kernel, args.order)
    if kernel is None:
        raise UsageError(f"unknown kernel {args.kernel!r}")
    tol = args.tol if args.tol else 1e-6
    grid = np.linspace(0.0, 1.0, args.grid)
    report = validate_kernel(kernel, grid, tol)
    print(f"kernel: {kernel.name}")
    print(f"max partition defect: {report.max_partition_defect:.6e}")
    print(f"absolute sum sup (upper estimate): {report.abs_sum_sup:.12g}")
    for (delta, n), mass in sorted(report.tail_mass.items()):
        print(f"tail mass (delta={delta:g}, n={n}): {mass:.6e}")
    ok = report.max_partition_defect <= tol
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _load_curve(args) -> Curve:
    if args.curve:
        return SPECIMENS[args.curve]
    if not getattr(args, "input", None):
        raise UsageError("need --curve NAME or --in points.csv")
    points = imagecurve.read_points_csv(_read_input(args.input).decode())
    if len(points) < 2:
        raise ValueError("point file must contain at least two points")
    pts = np.asarray(points)
    x1 = imagecurve.coord_function_pl(pts[:, 0], args.closed)
    x2 = imagecurve.coord_function_pl(pts[:, 1], args.closed)
    return Curve((0.0, 1.0), (x1, x2), closed=args.closed)


def _pick_strategy(args, family, default, closed):
    if args.strategy:
        strategy = STRATEGIES[args.strategy]
    elif closed and default is ExtensionStrategy.CONSTANT_PAD:
        strategy = ExtensionStrategy.PERIODIC
    else:
        strategy = default
    return strategy


def _emit_curve_outputs(args, original: Curve, approx: Curve) -> None:
    if args.out:
        _write_atomic(args.out, curve_to_csv(approx, args.grid).encode())
    if args.svg:
        _, orig_pts = original.sample(args.grid)
        _, appr_pts = approx.sample(args.grid)
        svg = render_polylines([
            (orig_pts[:, :2], "#1f77b4", "original"),
            (appr_pts[:, :2], "#d62728", "approximant"),
        ])
        _write_atomic(args.svg, svg.encode())


def cmd_approx(args) -> int:
    family, default = _build_family(args.operator, args.order, args.tol)
    curve = _load_curve(args)
    strategy = _pick_strategy(args, family, default, curve.closed)
    approx = apply_operator(family, curve, args.n, strategy, args.tol)
    err = sup_error(curve, approx, args.grid)
    print(f"operator: {family.name}  n: {args.n}  strategy: {strategy.value}")
    print(f"sup error on {args.grid}-point grid: {err:.6e}")
    _emit_curve_outputs(args, curve, approx)
    return 0


def cmd_trace(args) -> int:
    image = imagecurve.load_pbm(_read_input(args.input))
    chain, seqs = imagecurve.trace(image)
    doc = imagecurve.chaincode_to_json(chain)
    if args.out:
        _write_atomic(args.out, (doc + "\n").encode())
        csv_path = os.path.splitext(args.out)[0] + ".csv"
        _write_atomic(csv_path, imagecurve.write_points_csv(
            list(zip(seqs.u, seqs.v))).encode())
        print(f"wrote {args.out} and {csv_path}")
    else:
        print(doc)
    return 0


def cmd_upscale(args) -> int:
    image = imagecurve.load_pbm(_read_input(args.input))
    family, default = _build_family(args.operator, args.order, args.tol)
    chain, seqs = imagecurve.trace(image)
    n = args.n if args.n else 4 * len(seqs.u)
    strategy = _pick_strategy(args, family, default, chain.closed)
    result = imagecurve.upscale(image, args.factor, family, n, strategy, args.tol)
    _write_atomic(args.out, imagecurve.save_pbm(result, args.format))
    print(f"wrote {args.out} ({result.rows}x{result.cols}, n={n}, "
          f"strategy={strategy.value})")
    return 0


def cmd_smooth(args) -> int:
    family, default = _build_family(args.operator, args.order, args.tol)
    points = imagecurve.read_points_csv(_read_input(args.input).decode())
    strategy = _pick_strategy(args, family, default, args.closed)
    smooth = imagecurve.smooth_from_points(points, args.closed, family, args.n,
                                           strategy, args.tol)
    print(f"operator: {family.name}  n: {args.n}  strategy: {strategy.value}")
    if args.out:
        _write_atomic(args.out, curve_to_csv(smooth, args.grid).encode())
    if args.svg:
        pts = np.asarray(points)
        if args.closed:
            pts = np.vstack([pts, pts[:1]])
        _, appr = smooth.sample(args.grid)
        svg = render_polylines([(pts, "#1f77b4", "points"),
                                (appr, "#d62728", "smoothed")])
        _write_atomic(args.svg, svg.encode())
    return 0


def _add_operator_flags(p, n_required=True):
    p.add_argument("--operator", choices=OPERATORS, default="sampling-bspline")
    p.add_argument("--order", type=_positive_int, default=3,
                   help="B-spline kernel order (sampling-bspline only)")
    if n_required:
        p.add_argument("--n", type=_positive_int, required=True)
    else:
        p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default=None)
    p.add_argument("--tol", type=_positive_float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curveops",
        description="Approximate, trace, smooth and upscale curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a kernel's axioms numerically")
    p.add_argument("--kernel", required=True)
    p.add_argument("--order", type=_positive_int, default=3)
    p.add_argument("--tol", type=_positive_float, default=None)
    p.add_argument("--grid", type=_positive_int, default=17)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("approx", help="approximate a specimen or CSV polyline curve")
    p.add_argument("--curve", choices=sorted(SPECIMENS), default=None)
    p.add_argument("--in", dest="input", default=None, metavar="POINTS_CSV")
    p.add_argument("--closed", action="store_true")
    _add_operator_flags(p)
    p.add_argument("--grid", type=_positive_int, default=400)
    p.add_argument("--out", default=None, metavar="SAMPLES_CSV")
    p.add_argument("--svg", default=None, metavar="PLOT_SVG")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("trace", help="extract chain code and coordinates from a PBM")
    p.add_argument("--in", dest="input", required=True, metavar="IMAGE_PBM")
    p.add_argument("--out", default=None, metavar="CHAIN_JSON")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("upscale", help="re-render an image curve at higher resolution")
    p.add_argument("--in", dest="input", required=True, metavar="IMAGE_PBM")
    p.add_argument("--factor", type=_positive_float, required=True)
    _add_operator_flags(p, n_required=False)
    p.add_argument("--format", choices=("P1", "P4"), default="P1")
    p.add_argument("--out", required=True, metavar="IMAGE_PBM")
    p.set_defaults(func=cmd_upscale)

    p = sub.add_parser("smooth", help="smooth an ordered point list into a curve")
    p.add_argument("--in", dest="input", required=True, metavar="POINTS_CSV")
    p.add_argument("--closed", action="store_true")
    _add_operator_flags(p)
    p.add_argument("--grid", type=_positive_int, default=400)
    p.add_argument("--out", default=None, metavar="SAMPLES_CSV")
    p.add_argument("--svg", default=None, metavar="PLOT_SVG")
    p.set_defaults(func=cmd_smooth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: usage error: {exc}\n")
    except (ValueError, ArithmeticError, OSError,
            imagecurve.PbmFormatError, imagecurve.TraceError,
            KernelValidationError, TruncationError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
