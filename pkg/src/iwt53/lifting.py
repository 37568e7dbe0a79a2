"""Single-level integer (5,3) lifting: split, predict, update and their inverses.

Forward::

    d[n] = odd[n]  - div2(even[n] + even[n+1])
    s[n] = even[n] + div4(d[n]   + d[n-1])

Inverse runs the same steps backwards with the signs flipped, so any
deterministic rounding applied identically in both directions reconstructs
the input exactly. Missing neighbours at the edges are mirrored:
``even[E] -> even[E-1]``, ``d[-1] -> d[0]``, ``d[O] -> d[O-1]``.

The step functions here are plain Python and serve as the reference route.
:func:`forward_1d` and :func:`inverse_1d` run the fused kernel from
:mod:`iwt53._backend` (compiled when available).
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field
from typing import Sequence, Union

from iwt53 import _backend

__all__ = [
    "RoundingMode",
    "BoundaryRule",
    "Signal",
    "SubbandPair",
    "split",
    "merge",
    "floor_div_pow2",
    "predict_forward",
    "predict_inverse",
    "update_forward",
    "update_inverse",
    "forward_1d",
    "inverse_1d",
]


class RoundingMode(enum.Enum):
    """How the divide-by-2 and divide-by-4 in the lifting steps round."""

    #: floor(v / 2**k), i.e. an arithmetic right shift.
    FLOOR_SHIFT = 0
    #: Arithmetic shift with a one-LSB correction for negative sums, which
    #: truncates toward zero.
    HARDWARE_CORRECTED = 1

    @property
    def corrected(self) -> bool:
        return self is RoundingMode.HARDWARE_CORRECTED


class BoundaryRule(enum.Enum):
    SYMMETRIC_MIRROR = "symmetric-mirror"


@dataclass(frozen=True)
class Signal:
    """Integer samples with a declared bit width.

    ``signed`` selects two's-complement range checking, otherwise samples
    must lie in ``[0, 2**bit_width)``.
    """

    samples: tuple
    bit_width: int = 8
    signed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(int(v) for v in self.samples))
        if not self.samples:
            raise ValueError("empty signal")
        if self.bit_width < 1:
            raise ValueError("bit_width must be positive")
        lo, hi = self.value_range
        for i, v in enumerate(self.samples):
            if not lo <= v <= hi:
                raise ValueError(
                    f"sample {i} = {v} not representable in {self.bit_width} "
                    f"{'signed' if self.signed else 'unsigned'} bits"
                )

    @property
    def value_range(self) -> tuple[int, int]:
        if self.signed:
            return -(1 << (self.bit_width - 1)), (1 << (self.bit_width - 1)) - 1
        return 0, (1 << self.bit_width) - 1

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]


@dataclass
class SubbandPair:
    """One level of output: ``approx`` (s) and ``detail`` (d)."""

    approx: list
    detail: list
    original_length: int = field(default=-1)

    def __post_init__(self):
        self.approx = list(self.approx)
        self.detail = list(self.detail)
        if self.original_length == -1:
            self.original_length = len(self.approx) + len(self.detail)
        n = self.original_length
        if n < 1 or len(self.approx) != (n + 1) // 2 or len(self.detail) != n // 2:
            raise ValueError(
                f"subband lengths ({len(self.approx)}, {len(self.detail)}) "
                f"inconsistent with original length {n}"
            )


SignalLike = Union[Signal, Sequence[int]]


def _samples(x: SignalLike) -> list:
    if isinstance(x, Signal):
        return list(x.samples)
    if type(x) is list and _backend.COMPILED:
        # the compiled kernel converts and type-checks every element itself
        return x
    return [operator.index(v) for v in x]


def _check_parity(even_len: int, odd_len: int) -> None:
    if even_len not in (odd_len, odd_len + 1):
        raise ValueError(
            f"parity length mismatch: {even_len} even vs {odd_len} odd samples"
        )


def _check_boundary(boundary: BoundaryRule) -> None:
    if boundary is not BoundaryRule.SYMMETRIC_MIRROR:
        raise ValueError(f"unsupported boundary rule {boundary!r}")


def split(x: SignalLike) -> tuple[list, list]:
    """Lazy wavelet: even-indexed and odd-indexed samples."""
    xs = _samples(x)
    if not xs:
        raise ValueError("empty signal")
    return xs[0::2], xs[1::2]


def merge(even: Sequence[int], odd: Sequence[int]) -> list:
    """Interleave ``even`` and ``odd`` back into one sequence."""
    _check_parity(len(even), len(odd))
    out = [0] * (len(even) + len(odd))
    out[0::2] = even
    out[1::2] = odd
    return out


def floor_div_pow2(v: int, k: int, mode: RoundingMode = RoundingMode.FLOOR_SHIFT) -> int:
    if k not in (1, 2):
        raise ValueError(f"shift amount must be 1 or 2, got {k}")
    if mode is RoundingMode.HARDWARE_CORRECTED and v < 0:
        return (v + (1 << k) - 1) >> k
    return v >> k


def _even_ext(even: Sequence[int], n: int) -> int:
    return even[n] if n < len(even) else even[len(even) - 1]


def _detail_ext(detail: Sequence[int], n: int) -> int:
    if n < 0:
        return detail[0]
    if n >= len(detail):
        return detail[len(detail) - 1]
    return detail[n]


def _check_step(even, other, boundary) -> None:
    _check_parity(len(even), len(other))
    if not other:
        raise ValueError("need at least one odd sample")
    _check_boundary(boundary)


def predict_forward(
    even: Sequence[int],
    odd: Sequence[int],
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> list:
    _check_step(even, odd, boundary)
    return [
        odd[n] - floor_div_pow2(even[n] + _even_ext(even, n + 1), 1, mode)
        for n in range(len(odd))
    ]


def predict_inverse(
    even: Sequence[int],
    detail: Sequence[int],
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> list:
    _check_step(even, detail, boundary)
    return [
        detail[n] + floor_div_pow2(even[n] + _even_ext(even, n + 1), 1, mode)
        for n in range(len(detail))
    ]


def update_forward(
    even: Sequence[int],
    detail: Sequence[int],
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> list:
    _check_step(even, detail, boundary)
    return [
        even[n]
        + floor_div_pow2(_detail_ext(detail, n) + _detail_ext(detail, n - 1), 2, mode)
        for n in range(len(even))
    ]


def update_inverse(
    approx: Sequence[int],
    detail: Sequence[int],
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> list:
    _check_step(approx, detail, boundary)
    return [
        approx[n]
        - floor_div_pow2(_detail_ext(detail, n) + _detail_ext(detail, n - 1), 2, mode)
        for n in range(len(approx))
    ]


def forward_1d(
    x: SignalLike,
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> SubbandPair:
    """One analysis level: split, predict, update."""
    xs = _samples(x)
    if len(xs) < 2:
        raise ValueError("signal too short to decompose")
    _check_boundary(boundary)
    approx, detail = _backend.forward(xs, mode.corrected)
    return SubbandPair(approx, detail, len(xs))


def inverse_1d(
    sb: SubbandPair,
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC_MIRROR,
) -> list:
    """One synthesis level: undo update, undo predict, merge."""
    n = sb.original_length
    if len(sb.approx) != (n + 1) // 2 or len(sb.detail) != n // 2 or n < 2:
        raise ValueError(
            f"subband lengths ({len(sb.approx)}, {len(sb.detail)}) "
            f"inconsistent with original length {n}"
        )
    _check_boundary(boundary)
    return _backend.inverse(sb.approx, sb.detail, mode.corrected)
