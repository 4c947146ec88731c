"""Hot kernels with a compiled core and a numpy fallback.

The Cython extension ``_ckernels`` is used when it has been built; otherwise
(or when ``FUCHSIAN_CARLESON_PURE_PYTHON=1`` is set) the numpy implementation
in ``_pykernels`` is used.  ``BACKEND`` names the active one.
"""

import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("FUCHSIAN_CARLESON_PURE_PYTHON", "") in ("", "0"):
    _active = compiled_backend
    BACKEND = "cython"
else:
    _active = python_backend
    BACKEND = "python"


def reduce_points(z, gen_a, gen_b, max_iter, tol):
    return _active.reduce_points(z, gen_a, gen_b, max_iter, tol)


__all__ = ["BACKEND", "compiled_backend", "python_backend", "reduce_points"]
