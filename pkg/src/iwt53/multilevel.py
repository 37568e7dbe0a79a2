"""Multi-level 1D decomposition and the separable 2D transform.

1D coefficients are stored flat, deepest approximation first::

    [ s_J | d_J | d_(J-1) | ... | d_1 ]

so the container always holds exactly ``N`` numbers. 2D coefficients use the
usual in-place quadrant layout: after each level the top-left region of the
current approximation holds LL, top-right HL (horizontal detail), bottom-left
LH (vertical detail), bottom-right HH, and the next level recurses into LL.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from iwt53.lifting import (
    BoundaryRule,
    RoundingMode,
    SignalLike,
    SubbandPair,
    _samples,
    forward_1d,
    inverse_1d,
)

__all__ = [
    "Decomposition",
    "Decomposition2D",
    "Image",
    "max_levels",
    "level_lengths",
    "forward_multilevel",
    "inverse_multilevel",
    "forward_2d",
    "inverse_2d",
]

MIRROR = BoundaryRule.SYMMETRIC_MIRROR


def max_levels(n: int) -> int:
    """How many times ``n`` samples can be halved (rounding up) before the
    approximation drops below two samples."""
    if n < 1:
        raise ValueError("length must be positive")
    levels = 0
    while n >= 2:
        n = (n + 1) // 2
        levels += 1
    return levels


def level_lengths(n: int, levels: int) -> list[tuple[int, int]]:
    """``(approx_len, detail_len)`` produced at each level, finest first."""
    out = []
    for _ in range(levels):
        out.append(((n + 1) // 2, n // 2))
        n = (n + 1) // 2
    return out


@dataclass
class Decomposition:
    levels: int
    coeffs: list
    original_length: int
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT
    level_lengths: list = field(default=None)

    def __post_init__(self):
        self.coeffs = list(self.coeffs)
        if self.level_lengths is None:
            self.level_lengths = level_lengths(self.original_length, self.levels)
        else:
            self.level_lengths = [tuple(p) for p in self.level_lengths]

    def validate(self) -> None:
        n = self.original_length
        if n < 1:
            raise ValueError("original length must be positive")
        if self.levels < 0 or self.levels > max_levels(n):
            raise ValueError("level count exceeds max_levels")
        if self.level_lengths != level_lengths(n, self.levels):
            raise ValueError(f"inconsistent level_lengths {self.level_lengths}")
        if len(self.coeffs) != n:
            raise ValueError(f"{len(self.coeffs)} coefficients for a length-{n} signal")

    @property
    def approx(self) -> list:
        """Deepest approximation subband."""
        k = self.level_lengths[-1][0] if self.levels else self.original_length
        return self.coeffs[:k]

    def detail(self, level: int) -> list:
        """Detail subband of ``level`` (1 = finest)."""
        if not 1 <= level <= self.levels:
            raise IndexError(f"level {level} outside 1..{self.levels}")
        start = self.level_lengths[-1][0]
        for j in range(self.levels, level, -1):
            start += self.level_lengths[j - 1][1]
        return self.coeffs[start : start + self.level_lengths[level - 1][1]]


def forward_multilevel(
    x: SignalLike,
    j: Optional[int] = None,
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = MIRROR,
) -> Decomposition:
    """Apply :func:`forward_1d` ``j`` times to the running approximation.

    ``j=None`` means :func:`max_levels`; a single-sample signal then comes
    back as a zero-level, approximation-only decomposition.
    """
    xs = _samples(x)
    if not xs:
        raise ValueError("empty signal")
    top = max_levels(len(xs))
    if j is None:
        j = top
    elif j < 1:
        raise ValueError("level count must be at least 1")
    elif j > top:
        raise ValueError("level count exceeds max_levels")
    approx = xs
    details = []
    for _ in range(j):
        sb = forward_1d(approx, mode, boundary)
        details.append(sb.detail)
        approx = sb.approx
    coeffs = list(approx)
    for d in reversed(details):
        coeffs.extend(d)
    return Decomposition(j, coeffs, len(xs), mode)


def inverse_multilevel(dec: Decomposition, boundary: BoundaryRule = MIRROR) -> list:
    dec.validate()
    lengths = dec.level_lengths
    pos = lengths[-1][0] if lengths else dec.original_length
    approx = dec.coeffs[:pos]
    for a_len, d_len in reversed(lengths):
        detail = dec.coeffs[pos : pos + d_len]
        pos += d_len
        approx = inverse_1d(SubbandPair(approx, detail, a_len + d_len), dec.mode, boundary)
    return list(approx)


@dataclass
class Image:
    width: int
    height: int
    pixels: list
    bit_width: int = 8

    def __post_init__(self):
        self.pixels = [int(p) for p in self.pixels]
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"{len(self.pixels)} pixels for a {self.width}x{self.height} image"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], bit_width: int = 8) -> "Image":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("rows must be non-empty and equally long")
        return cls(len(rows[0]), len(rows), [p for r in rows for p in r], bit_width)

    def rows(self) -> list[list[int]]:
        w = self.width
        return [self.pixels[r * w : (r + 1) * w] for r in range(self.height)]


@dataclass
class Decomposition2D:
    width: int
    height: int
    levels: int
    coeffs: list
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT

    def __post_init__(self):
        self.coeffs = list(self.coeffs)

    def validate(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if self.levels < 0 or self.levels > max_levels_2d(self.width, self.height):
            raise ValueError("level count exceeds max_levels")
        if len(self.coeffs) != self.width * self.height:
            raise ValueError(
                f"{len(self.coeffs)} coefficients for a {self.width}x{self.height} image"
            )

    @property
    def level_shapes(self) -> list[tuple[int, int]]:
        """(height, width) of the region transformed at each level, finest first."""
        h, w = self.height, self.width
        out = []
        for _ in range(self.levels):
            out.append((h, w))
            h, w = (h + 1) // 2, (w + 1) // 2
        return out

    def subbands(self, level: int) -> dict[str, list[list[int]]]:
        """LL, HL, LH and HH of ``level`` as lists of rows.

        LL is only the final approximation when ``level == self.levels``.
        """
        h, w = self.level_shapes[level - 1]
        lh, lw = (h + 1) // 2, (w + 1) // 2
        rows = [self.coeffs[r * self.width : r * self.width + w] for r in range(h)]
        return {
            "LL": [r[:lw] for r in rows[:lh]],
            "HL": [r[lw:] for r in rows[:lh]],
            "LH": [r[:lw] for r in rows[lh:]],
            "HH": [r[lw:] for r in rows[lh:]],
        }


def max_levels_2d(width: int, height: int) -> int:
    return min(max_levels(width), max_levels(height))


def _rows_pass(buf, stride, h, w, fn):
    for r in range(h):
        base = r * stride
        buf[base : base + w] = fn(buf[base : base + w])


def _cols_pass(buf, stride, h, w, fn):
    for c in range(w):
        sl = slice(c, c + (h - 1) * stride + 1, stride)
        buf[sl] = fn(buf[sl])


def forward_2d(
    img: Image,
    j: Optional[int] = None,
    mode: RoundingMode = RoundingMode.FLOOR_SHIFT,
    boundary: BoundaryRule = MIRROR,
) -> Decomposition2D:
    """Rows then columns at each level, recursing into LL."""
    if img.width < 2 or img.height < 2:
        raise ValueError("image must be at least 2x2")
    top = max_levels_2d(img.width, img.height)
    if j is None:
        j = top
    elif j < 1:
        raise ValueError("level count must be at least 1")
    elif j > top:
        raise ValueError("level count exceeds max_levels")

    def fwd(seq):
        sb = forward_1d(seq, mode, boundary)
        return sb.approx + sb.detail

    dec = Decomposition2D(img.width, img.height, j, img.pixels, mode)
    buf = dec.coeffs
    for h, w in dec.level_shapes:
        _rows_pass(buf, img.width, h, w, fwd)
        _cols_pass(buf, img.width, h, w, fwd)
    return dec


def inverse_2d(dec: Decomposition2D, boundary: BoundaryRule = MIRROR) -> Image:
    """Columns then rows at each level, deepest level first."""
    dec.validate()

    def inv(seq):
        k = (len(seq) + 1) // 2
        return inverse_1d(SubbandPair(seq[:k], seq[k:], len(seq)), dec.mode, boundary)

    buf = list(dec.coeffs)
    for h, w in reversed(dec.level_shapes):
        _cols_pass(buf, dec.width, h, w, inv)
        _rows_pass(buf, dec.width, h, w, inv)
    return Image(dec.width, dec.height, buf)
