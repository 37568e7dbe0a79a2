"""Integer (5,3) lifting wavelet transform with a shift-add datapath model."""

from iwt53._backend import COMPILED, NAME as BACKEND
from iwt53.lifting import (
    BoundaryRule,
    RoundingMode,
    Signal,
    SubbandPair,
    floor_div_pow2,
    forward_1d,
    inverse_1d,
    merge,
    predict_forward,
    predict_inverse,
    split,
    update_forward,
    update_inverse,
)
from iwt53.multilevel import (
    Decomposition,
    Decomposition2D,
    Image,
    forward_2d,
    forward_multilevel,
    inverse_2d,
    inverse_multilevel,
    max_levels,
)

__version__ = "0.1.0"
