"""Scalar measures used by the searches and the reports.

All block measures are exact integers.  The Lagrangian cost uses
`fractions.Fraction` so that decisions and goldens never depend on
floating-point rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .frame_model import BlockRef, Frame, FrameError, MotionVector, extract_predicted_block

__all__ = [
    "PSNR_CAP_DB",
    "CostModel",
    "DeviationAccumulator",
    "sad",
    "sad_arrays",
    "intra_sad",
    "sad_deviation_finalize",
    "exp_golomb_length",
    "mv_rate_bits",
    "lagrangian_cost",
    "prediction_psnr",
    "psnr_from_sse",
]

#: Reported PSNR when the prediction is exact.
PSNR_CAP_DB = 100.0


@dataclass(frozen=True)
class CostModel:
    """Rate weight ``lambda = lambda_scale * qp``."""

    qp: int
    lambda_scale: Fraction = Fraction(1)

    def __post_init__(self):
        if not 1 <= self.qp <= 31:
            raise ValueError(f"qp must be in 1..31, got {self.qp}")
        scale = Fraction(self.lambda_scale)
        if scale <= 0:
            raise ValueError("lambda_scale must be positive")
        object.__setattr__(self, "lambda_scale", scale)

    @property
    def lam(self) -> Fraction:
        return self.lambda_scale * self.qp


@dataclass
class DeviationAccumulator:
    """Streaming (min, sum, count) of candidate SADs.

    The deviation ``sum(|s - min|)`` equals ``sum - count * min`` because the
    minimum is a lower bound of every term, so individual SADs need not be kept.
    """

    sad_min: int | None = None
    sad_sum: int = 0
    count: int = 0

    def add(self, value: int) -> None:
        value = int(value)
        self.sad_min = value if self.sad_min is None else min(self.sad_min, value)
        self.sad_sum += value
        self.count += 1

    def add_many(self, values) -> None:
        values = np.asarray(values)
        if values.size == 0:
            return
        low = int(values.min())
        self.sad_min = low if self.sad_min is None else min(self.sad_min, low)
        self.sad_sum += int(values.sum(dtype=np.int64))
        self.count += int(values.size)

    def deviation(self) -> int:
        return sad_deviation_finalize(self)


def sad_arrays(a, b) -> int:
    """SAD of two equally shaped sample arrays."""
    a = np.asarray(a, dtype=np.int32)
    b = np.asarray(b, dtype=np.int32)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return int(np.abs(a - b).sum(dtype=np.int64))


def sad(current: BlockRef, reference: Frame, mv: MotionVector) -> int:
    """Sum of absolute differences between ``current`` and its displaced prediction."""
    return sad_arrays(current.pixels, extract_predicted_block(reference, current, mv))


def intra_sad(block: BlockRef) -> int:
    """Texture measure: sum of absolute deviations from the block mean.

    The mean is rounded half up to an integer, ``(sum + nm // 2) // nm``.
    """
    px = block.pixels.astype(np.int64)
    count = px.size
    mu = (int(px.sum()) + count // 2) // count
    return int(np.abs(px - mu).sum())


def sad_deviation_finalize(acc: DeviationAccumulator) -> int:
    if acc.count < 1:
        raise ValueError("empty deviation accumulator")
    return acc.sad_sum - acc.count * acc.sad_min


def exp_golomb_length(u: int) -> int:
    """Bit length of the order-0 exp-Golomb code for unsigned ``u``."""
    if u < 0:
        raise ValueError(f"exp-Golomb code needs u >= 0, got {u}")
    return 2 * ((u + 1).bit_length() - 1) + 1


def _signed_to_unsigned(d: int) -> int:
    return -2 * d if d <= 0 else 2 * d - 1


def mv_rate_bits(mv: MotionVector, predictor: MotionVector) -> int:
    """Bits to send ``mv`` differentially against ``predictor``.

    Each half-pel component difference is mapped to unsigned and charged its
    exp-Golomb length; the result is the two-component sum (minimum 2).
    """
    return (exp_golomb_length(_signed_to_unsigned(mv[0] - predictor[0]))
            + exp_golomb_length(_signed_to_unsigned(mv[1] - predictor[1])))


def lagrangian_cost(distortion: int, rate_bits: int, model: CostModel | Fraction | int) -> Fraction:
    """``J = D + lambda * R``.

    ``model`` may be a `CostModel` or a bare lambda value.
    """
    if distortion < 0 or rate_bits < 0:
        raise ValueError("distortion and rate must be non-negative")
    lam = model.lam if isinstance(model, CostModel) else Fraction(model)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return distortion + lam * rate_bits


def prediction_psnr(actual: Frame, predicted: Frame) -> float:
    """Luma PSNR in dB with 255 peak; exact predictions report `PSNR_CAP_DB`."""
    if actual.shape != predicted.shape:
        raise FrameError(f"dimension mismatch {actual.shape} vs {predicted.shape}")
    diff = actual.luma.astype(np.int64) - predicted.luma.astype(np.int64)
    sse = int((diff * diff).sum())
    return psnr_from_sse(sse, diff.size)


def psnr_from_sse(sse: int, count: int) -> float:
    if sse == 0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, 10.0 * math.log10(255.0 ** 2 * count / sse))
