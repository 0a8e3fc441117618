"""Luma frames, raw I420 ingestion, blocks and half-pel sampling.

Motion vectors are stored in half-pel units throughout the package, so an
integer displacement of ``d`` pixels is the vector component ``2 * d``.
Half-pel samples use bilinear interpolation with round-half-up offsets::

    horizontal  (A + B + 1) >> 1
    vertical    (A + C + 1) >> 1
    diagonal    (A + B + C + D + 2) >> 2

where ``A B / C D`` are the four surrounding integer samples in raster order.
References falling outside the frame are errors; nothing is padded.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "FrameError",
    "Frame",
    "MotionVector",
    "BlockRef",
    "i420_frame_size",
    "load_raw_y",
    "count_raw_frames",
    "write_raw_i420",
    "sample_half_pel",
    "footprint_in_bounds",
    "extract_predicted_block",
    "motion_compensate",
]


class FrameError(ValueError):
    """Invalid frame data, dimensions or out-of-frame references."""


@dataclass(frozen=True, eq=False)
class Frame:
    """One 8-bit luma plane.

    ``luma`` is stored as a read-only ``(height, width)`` uint8 array; the
    row-major flattening is ``luma.ravel()``.
    """

    width: int
    height: int
    luma: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise FrameError(f"zero dimension: {self.width}x{self.height}")
        arr = np.asarray(self.luma)
        if arr.size != self.width * self.height:
            raise FrameError(
                f"luma has {arr.size} samples, expected {self.width * self.height}"
            )
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise FrameError("luma samples must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr.reshape(self.height, self.width), dtype=np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "luma", arr)

    @classmethod
    def from_array(cls, array) -> "Frame":
        array = np.asarray(array)
        if array.ndim != 2:
            raise FrameError(f"expected a 2-D array, got shape {array.shape}")
        return cls(array.shape[1], array.shape[0], array)

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.luma, other.luma)

    def __hash__(self):
        return hash((self.width, self.height, self.luma.tobytes()))


class MotionVector(NamedTuple):
    """Displacement in half-pel units (``x`` right, ``y`` down)."""

    x: int
    y: int

    @classmethod
    def from_pels(cls, dx: int, dy: int) -> "MotionVector":
        return cls(2 * dx, 2 * dy)

    @property
    def is_integer(self) -> bool:
        return self.x % 2 == 0 and self.y % 2 == 0

    def __add__(self, other):
        return MotionVector(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return MotionVector(self.x - other[0], self.y - other[1])


ZERO_MV = MotionVector(0, 0)


@dataclass(frozen=True)
class BlockRef:
    """An ``n`` x ``m`` block (width x height) of ``frame`` at ``(origin_x, origin_y)``."""

    frame: Frame
    origin_x: int
    origin_y: int
    n: int = 16
    m: int = 16

    def __post_init__(self):
        if self.n <= 0 or self.m <= 0:
            raise FrameError(f"invalid block size {self.n}x{self.m}")
        if not (0 <= self.origin_x <= self.frame.width - self.n
                and 0 <= self.origin_y <= self.frame.height - self.m):
            raise FrameError(
                f"block {self.n}x{self.m} at ({self.origin_x}, {self.origin_y}) "
                f"exceeds frame {self.frame.width}x{self.frame.height}"
            )

    @classmethod
    def at_grid(cls, frame: Frame, row: int, col: int, n: int = 16, m: int = 16) -> "BlockRef":
        return cls(frame, col * n, row * m, n, m)

    @property
    def pixels(self) -> np.ndarray:
        return self.frame.luma[self.origin_y:self.origin_y + self.m,
                               self.origin_x:self.origin_x + self.n]


# ---------------------------------------------------------------------------
# raw I420 files
# ---------------------------------------------------------------------------

def i420_frame_size(width: int, height: int) -> int:
    """Bytes per planar 4:2:0 frame: luma plus two quarter-size chroma planes."""
    return width * height + 2 * (width // 2) * (height // 2)


def load_raw_y(path, width: int, height: int, frame_index: int = 0) -> Frame:
    """Read the luma plane of frame ``frame_index`` from a raw I420 file.

    Parameters
    ----------
    path : str or path-like
        File of concatenated planar YUV 4:2:0 frames without headers.
    width, height : int
        Plane dimensions; never inferred from the file.
    frame_index : int
        Zero-based frame number.

    Raises
    ------
    FrameError
        Zero or negative dimensions, negative index, or a file too short to
        contain the requested frame.
    OSError
        The path cannot be read.
    """
    if width <= 0 or height <= 0:
        raise FrameError(f"zero dimension: {width}x{height}")
    if frame_index < 0:
        raise FrameError(f"negative frame index {frame_index}")
    plane = width * height
    offset = frame_index * i420_frame_size(width, height)
    with open(path, "rb") as fh:
        fh.seek(offset)
        data = fh.read(plane)
    if len(data) < plane:
        raise FrameError(
            f"{os.fspath(path)}: file too short for frame {frame_index} "
            f"({width}x{height} I420)"
        )
    return Frame(width, height, np.frombuffer(data, dtype=np.uint8))


def count_raw_frames(path, width: int, height: int) -> int:
    """Number of complete luma planes available in a raw I420 file."""
    size = os.path.getsize(path)
    per_frame = i420_frame_size(width, height)
    count = size // per_frame
    # a trailing frame whose luma is complete but chroma truncated is still usable
    if size - count * per_frame >= width * height:
        count += 1
    return count


def write_raw_i420(path, frames, chroma_value: int = 128) -> None:
    """Write luma frames as raw I420 with flat chroma planes."""
    with open(path, "wb") as fh:
        for frame in frames:
            fh.write(frame.luma.tobytes())
            chroma = 2 * (frame.width // 2) * (frame.height // 2)
            fh.write(bytes([chroma_value]) * chroma)


# ---------------------------------------------------------------------------
# half-pel sampling and motion compensation
# ---------------------------------------------------------------------------

def sample_half_pel(frame: Frame, x2: int, y2: int) -> int:
    """Sample ``frame`` at half-pel coordinates ``(x2 / 2, y2 / 2)``."""
    x0, y0 = x2 >> 1, y2 >> 1
    x1, y1 = x0 + (x2 & 1), y0 + (y2 & 1)
    if x0 < 0 or y0 < 0 or x1 >= frame.width or y1 >= frame.height:
        raise FrameError(f"half-pel coordinate ({x2}, {y2}) outside frame")
    luma = frame.luma
    a = int(luma[y0, x0])
    if x2 & 1 and y2 & 1:
        return (a + int(luma[y0, x1]) + int(luma[y1, x0]) + int(luma[y1, x1]) + 2) >> 2
    if x2 & 1:
        return (a + int(luma[y0, x1]) + 1) >> 1
    if y2 & 1:
        return (a + int(luma[y1, x0]) + 1) >> 1
    return a


def footprint_in_bounds(frame: Frame, block: BlockRef, mv: MotionVector) -> bool:
    """True when every reference sample needed to predict ``block`` with ``mv`` exists."""
    x_lo = block.origin_x + (mv.x >> 1)
    y_lo = block.origin_y + (mv.y >> 1)
    x_hi = x_lo + block.n - 1 + (mv.x & 1)
    y_hi = y_lo + block.m - 1 + (mv.y & 1)
    return x_lo >= 0 and y_lo >= 0 and x_hi < frame.width and y_hi < frame.height


def _predict(luma: np.ndarray, x0: int, y0: int, fx: int, fy: int, n: int, m: int) -> np.ndarray:
    # int32 result; caller guarantees bounds
    a = luma[y0:y0 + m, x0:x0 + n].astype(np.int32)
    if fx and fy:
        b = luma[y0:y0 + m, x0 + 1:x0 + n + 1]
        c = luma[y0 + 1:y0 + m + 1, x0:x0 + n]
        d = luma[y0 + 1:y0 + m + 1, x0 + 1:x0 + n + 1]
        return (a + b + c + d + 2) >> 2
    if fx:
        return (a + luma[y0:y0 + m, x0 + 1:x0 + n + 1] + 1) >> 1
    if fy:
        return (a + luma[y0 + 1:y0 + m + 1, x0:x0 + n] + 1) >> 1
    return a


def extract_predicted_block(ref_frame: Frame, block: BlockRef, mv: MotionVector) -> np.ndarray:
    """Motion-compensated prediction of ``block`` from ``ref_frame``.

    Returns an ``(m, n)`` int32 array. Raises `FrameError` when the displaced
    footprint, including half-pel support, leaves the reference frame.
    """
    if not footprint_in_bounds(ref_frame, block, mv):
        raise FrameError(f"displaced footprint for mv {tuple(mv)} outside reference frame")
    return _predict(ref_frame.luma, block.origin_x + (mv.x >> 1), block.origin_y + (mv.y >> 1),
                    mv.x & 1, mv.y & 1, block.n, block.m)


def motion_compensate(reference: Frame, field, n: int = 16, m: int = 16) -> Frame:
    """Assemble the predicted frame from a fully computed motion field."""
    out = np.zeros(reference.shape, dtype=np.uint8)
    for row in range(field.rows):
        for col in range(field.cols):
            block = BlockRef.at_grid(reference, row, col, n, m)
            pred = extract_predicted_block(reference, block, field.get(row, col, strict=True))
            out[block.origin_y:block.origin_y + m, block.origin_x:block.origin_x + n] = pred
    return Frame(reference.width, reference.height, out)
