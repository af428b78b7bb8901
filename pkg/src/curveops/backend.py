"""Backend selection for the hot numeric kernels.

``CURVEOPS_BACKEND`` picks the implementation:

* ``auto`` (default): numba-compiled kernels when numba imports, else numpy;
* ``numba``: require the compiled kernels, raise if numba is unavailable;
* ``numpy``: force the pure-numpy fallback.
"""

import os
import warnings

from . import _impl_numpy

_VALID = ("auto", "numba", "numpy")


def _select():
    choice = os.environ.get("CURVEOPS_BACKEND", "auto").strip().lower() or "auto"
    if choice not in _VALID:
        warnings.warn(f"CURVEOPS_BACKEND={choice!r} not in {_VALID}, using 'auto'",
                      stacklevel=2)
        choice = "auto"
    if choice == "numpy":
        return _impl_numpy, "numpy"
    try:
        from . import _impl_numba
        return _impl_numba, "numba"
    except ImportError:
        if choice == "numba":
            raise
        return _impl_numpy, "numpy"


impl, _name = _select()


def backend_name() -> str:
    """Name of the active implementation, 'numba' or 'numpy'."""
    return _name
