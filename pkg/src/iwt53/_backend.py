"""Kernel selection: the compiled ``_lift`` extension if it imports, else
``_purelift``. Set ``IWT53_PURE=1`` to force the Python kernels."""

import os

from iwt53 import _purelift

try:
    if os.environ.get("IWT53_PURE"):
        raise ImportError("pure kernels requested")
    from iwt53 import _lift as _fast
except ImportError:
    _fast = None

COMPILED = _fast is not None
NAME = "cython" if COMPILED else "python"


if COMPILED:

    def forward(xs, corrected):
        try:
            return _fast.forward(xs, corrected)
        except OverflowError:
            return _purelift.forward(xs, corrected)

    def inverse(approx, detail, corrected):
        try:
            return _fast.inverse(approx, detail, corrected)
        except OverflowError:
            return _purelift.inverse(approx, detail, corrected)

    detail_extrema = _fast.detail_extrema
    approx_extrema = _fast.approx_extrema

else:
    forward = _purelift.forward
    inverse = _purelift.inverse
    detail_extrema = _purelift.detail_extrema
    approx_extrema = _purelift.approx_extrema
