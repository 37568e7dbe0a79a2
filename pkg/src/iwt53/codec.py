"""File formats: IWT1 coefficient containers, binary PGM, plain-text signals,
and the seeded test-signal generator.

IWT1 layout (all integers little-endian)::

    offset  size  field
    0       4     magic b"IWT1"
    4       1     version (1)
    5       1     dims (1 or 2)
    6       1     levels J
    7       1     rounding mode (0 floor shift, 1 hardware corrected)
    8       4     N                    (dims = 1)
    8       4+4   width, height        (dims = 2)
    ...     4*K   int32 coefficients, K = N or width*height

Coefficients follow the layouts of :mod:`iwt53.multilevel`. Nothing follows
the last coefficient.
"""

from __future__ import annotations

import io
import math
import os
import struct
from typing import BinaryIO, Iterable, TextIO, Union

from iwt53.lifting import RoundingMode, Signal
from iwt53.multilevel import Decomposition, Decomposition2D, Image

__all__ = [
    "ContainerError",
    "BadMagicError",
    "TruncatedError",
    "CountMismatchError",
    "HeaderError",
    "PgmError",
    "write_container",
    "read_container",
    "encode_container",
    "decode_container",
    "read_pgm",
    "write_pgm",
    "read_signal_text",
    "write_signal_text",
    "generate_test_signal",
    "splitmix64",
]

MAGIC = b"IWT1"
VERSION = 1
_PREFIX = struct.Struct("<4sBBBB")
_DIM1 = struct.Struct("<I")
_DIM2 = struct.Struct("<II")

PathOrFile = Union[str, os.PathLike, BinaryIO]


class ContainerError(ValueError):
    pass


class BadMagicError(ContainerError):
    pass


class TruncatedError(ContainerError):
    pass


class CountMismatchError(ContainerError):
    pass


class HeaderError(ContainerError):
    pass


class PgmError(ValueError):
    pass


def encode_container(dec: Union[Decomposition, Decomposition2D]) -> bytes:
    dec.validate()
    if isinstance(dec, Decomposition2D):
        dims = _DIM2.pack(dec.width, dec.height)
        ndim = 2
    else:
        dims = _DIM1.pack(dec.original_length)
        ndim = 1
    if dec.levels > 255:
        raise HeaderError("too many levels for the header")
    head = _PREFIX.pack(MAGIC, VERSION, ndim, dec.levels, dec.mode.value) + dims
    try:
        body = struct.pack(f"<{len(dec.coeffs)}i", *dec.coeffs)
    except struct.error as exc:
        raise ContainerError(f"coefficient outside int32 range: {exc}") from None
    return head + body


def decode_container(data: bytes) -> Union[Decomposition, Decomposition2D]:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError("not an IWT1 file")
    if len(data) < _PREFIX.size:
        raise TruncatedError("header truncated")
    _, version, ndim, levels, mode = _PREFIX.unpack_from(data)
    if version != VERSION:
        raise HeaderError(f"unsupported IWT1 version {version}")
    try:
        mode = RoundingMode(mode)
    except ValueError:
        raise HeaderError(f"unknown rounding mode {mode}") from None
    if ndim == 1:
        dims = _DIM1
    elif ndim == 2:
        dims = _DIM2
    else:
        raise HeaderError(f"dims must be 1 or 2, got {ndim}")
    start = _PREFIX.size + dims.size
    if len(data) < start:
        raise TruncatedError("header truncated")
    shape = dims.unpack_from(data, _PREFIX.size)
    count = math.prod(shape)
    body = len(data) - start
    if body < 4 * count:
        raise TruncatedError(f"expected {count} coefficients, found {body // 4}")
    if body != 4 * count:
        raise CountMismatchError(
            f"{body} coefficient bytes where {4 * count} were declared"
        )
    coeffs = list(struct.unpack_from(f"<{count}i", data, start))
    if ndim == 1:
        dec = Decomposition(levels, coeffs, shape[0], mode)
    else:
        dec = Decomposition2D(shape[0], shape[1], levels, coeffs, mode)
    try:
        dec.validate()
    except ValueError as exc:
        raise HeaderError(str(exc)) from None
    return dec


def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        return open(target, mode), True
    return target, False


def write_container(dec, sink: PathOrFile) -> int:
    """Write ``dec`` to a path or binary stream; returns the byte count."""
    data = encode_container(dec)
    f, owned = _open(sink, "wb")
    try:
        f.write(data)
    finally:
        if owned:
            f.close()
    return len(data)


def read_container(source: PathOrFile):
    f, owned = _open(source, "rb")
    try:
        data = f.read()
    finally:
        if owned:
            f.close()
    return decode_container(data)


def _pgm_tokens(data: bytes, count: int) -> tuple[list, int]:
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PgmError("malformed PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(source: PathOrFile) -> Image:
    """Binary (P5) greymap with maxval at most 255."""
    f, owned = _open(source, "rb")
    try:
        data = f.read()
    finally:
        if owned:
            f.close()
    magic = data[:2]
    if magic in (b"P2", b"P1", b"P3", b"P4", b"P6"):
        raise PgmError(f"unsupported PGM variant {magic.decode()}")
    if magic != b"P5":
        raise PgmError("malformed PGM header: missing P5 magic")
    try:
        (w, h, maxval), pos = _pgm_tokens(data[2:], 3)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise PgmError("malformed PGM header") from None
    pos += 2
    if w < 1 or h < 1 or maxval < 1:
        raise PgmError("malformed PGM header")
    if maxval > 255:
        raise PgmError(f"maxval {maxval} > 255 not supported")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PgmError("malformed PGM header")
    pixels = data[pos + 1 : pos + 1 + w * h]
    if len(pixels) != w * h:
        raise PgmError(f"PGM truncated: {len(pixels)} of {w * h} pixels")
    return Image(w, h, list(pixels))


def write_pgm(img: Image, sink: PathOrFile, maxval: int = 255) -> int:
    if not 1 <= maxval <= 255:
        raise PgmError(f"maxval {maxval} not supported")
    if any(not 0 <= p <= maxval for p in img.pixels):
        raise PgmError(f"pixel values must lie in 0..{maxval}")
    data = b"P5\n%d %d\n%d\n" % (img.width, img.height, maxval) + bytes(img.pixels)
    f, owned = _open(sink, "wb")
    try:
        f.write(data)
    finally:
        if owned:
            f.close()
    return len(data)


def read_signal_text(source: Union[str, os.PathLike, TextIO], bit_width: int = 32) -> Signal:
    """One integer per line; blank lines and ``#`` comments are skipped."""
    if isinstance(source, (str, os.PathLike)):
        with open(source) as f:
            text = f.read()
    else:
        text = source.read()
    values = []
    for lineno, line in enumerate(io.StringIO(text), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError:
            raise ValueError(f"line {lineno}: not an integer: {line!r}") from None
    if not values:
        raise ValueError("empty signal")
    signed = any(v < 0 for v in values)
    return Signal(values, bit_width, signed)


def write_signal_text(samples: Iterable[int], sink: Union[str, os.PathLike, TextIO]) -> None:
    text = "".join(f"{int(v)}\n" for v in samples)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w") as f:
            f.write(text)
    else:
        sink.write(text)


_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """SplitMix64 stream of 64-bit words."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def generate_test_signal(
    count: int, seed: int = 1, mean: float = 128.0, sd: float = 32.0
) -> Signal:
    """Clamped, rounded normal samples in ``0..255``.

    Two SplitMix64 words per sample, each turned into a 53-bit uniform, feed
    the cosine branch of Box-Muller; the result is rounded half up.
    """
    if count < 1:
        raise ValueError("count must be positive")
    words = splitmix64(seed)
    out = []
    for _ in range(count):
        u1 = 1.0 - (next(words) >> 11) * 2.0**-53
        u2 = (next(words) >> 11) * 2.0**-53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        out.append(min(255, max(0, math.floor(mean + sd * z + 0.5))))
    return Signal(out, 8)
