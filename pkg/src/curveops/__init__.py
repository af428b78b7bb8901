"""Approximation of functions and curves by discrete operators, with tools for
extracting, smoothing, reconstructing and upscaling curves in binary images."""

from .backend import backend_name
from .kernels import (
    CompactSupport,
    DivergenceError,
    KernelValidationError,
    KernelValidationReport,
    PolynomialDecay,
    SamplingKernel,
    TruncationError,
    bspline,
    bspline_kernel,
    fejer,
    fejer_kernel,
    sinc,
    validate_kernel,
)
from .operators import (
    Exact,
    Interval,
    OperatorFamily,
    TailBounded,
    TruncationCertificate,
    evaluate,
    evaluate_many,
    make_baskakov,
    make_bernstein,
    make_generalized_sampling,
    make_szasz_mirakjan,
    tail_mass,
)
from .curves import (
    Curve,
    ExtensionStrategy,
    affine_transform,
    apply_operator,
    constant_curve,
    curve_to_csv,
    curve_to_json,
    extend_scalar,
    sup_error,
)
from .imagecurve import (
    BinaryImage,
    ChainCode,
    CoordinateSequences,
    PbmFormatError,
    TraceError,
    chaincode_to_json,
    coord_function_pc,
    coord_function_pl,
    find_start,
    image_to_curve,
    load_pbm,
    rasterize,
    read_points_csv,
    replay,
    save_pbm,
    smooth_from_points,
    trace,
    upscale,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
