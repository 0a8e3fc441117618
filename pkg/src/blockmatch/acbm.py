"""Adaptive cost block matching.

For each block the texture measure ``intra_sad`` is computed and PBM is run.
The PBM vector is kept when either

* ``intra_sad + sad_pbm < alpha + beta * qp**2``, or
* ``sad_pbm < gamma * intra_sad``;

otherwise the block is critical and FSBM is run as well, the lower-SAD of the
two results being kept (ties go to FSBM).  Both comparisons are strict and
evaluated in integers, ``gamma`` being an exact `Fraction`.

The frame drivers at the bottom also run plain FSBM and PBM so the three
algorithms share one reporting path.
"""
from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .frame_model import BlockRef, Frame, FrameError, MotionVector, ZERO_MV, motion_compensate
from .fsbm import SearchOutcome, fsbm_search, search_window
from .metrics import CostModel, intra_sad, lagrangian_cost, mv_rate_bits, psnr_from_sse
from .pbm import MotionField, pbm_search

__all__ = [
    "Path",
    "AcbmParams",
    "BlockDecision",
    "BlockResult",
    "FrameStats",
    "FrameResult",
    "ALGORITHMS",
    "acbm_decide",
    "acbm_block",
    "acbm_frame",
    "estimate_frame",
    "estimate_sequence",
    "median_predictor",
    "field_rate_bits",
]

ALGORITHMS = ("fsbm", "pbm", "acbm")


class Path(str, enum.Enum):
    COND1 = "pbm-accepted-cond1"
    COND2 = "pbm-accepted-cond2"
    FALLBACK = "fsbm-fallback"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AcbmParams:
    """Gating policy and search geometry; defaults are the published operating point."""

    alpha: int = 1000
    beta: int = 8
    gamma: Fraction = Fraction(1, 4)
    qp: int = 30
    p: int = 15
    n: int = 16
    m: int = 16
    lambda_scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        gamma = Fraction(self.gamma)
        if gamma < 0:
            raise ValueError("gamma must be non-negative")
        object.__setattr__(self, "gamma", gamma)
        if not 1 <= self.qp <= 31:
            raise ValueError(f"qp must be in 1..31, got {self.qp}")
        if self.p < 0:
            raise ValueError("search range must be >= 0")
        if self.n <= 0 or self.m <= 0:
            raise ValueError("block dimensions must be positive")

    @property
    def threshold(self) -> int:
        return self.alpha + self.beta * self.qp * self.qp

    @property
    def cost_model(self) -> CostModel:
        return CostModel(self.qp, self.lambda_scale)


@dataclass(frozen=True)
class BlockDecision:
    outcome: SearchOutcome
    path: Path
    intra_sad: int
    sad_pbm: int
    pbm_candidates: int


def acbm_decide(intra_sad: int, sad_pbm: int, params: AcbmParams) -> Path:
    if intra_sad + sad_pbm < params.threshold:
        return Path.COND1
    # sad_pbm < (num / den) * intra_sad, cross-multiplied
    if sad_pbm * params.gamma.denominator < params.gamma.numerator * intra_sad:
        return Path.COND2
    return Path.FALLBACK


def acbm_block(block: BlockRef, pos, ref_frame: Frame, current_field: MotionField,
               previous_field: MotionField | None, params: AcbmParams) -> BlockDecision:
    texture = intra_sad(block)
    pbm = pbm_search(block, pos, ref_frame, current_field, previous_field, params.p)
    path = acbm_decide(texture, pbm.sad, params)
    if path is not Path.FALLBACK:
        return BlockDecision(pbm, path, texture, pbm.sad, pbm.candidates_evaluated)
    full = fsbm_search(block, ref_frame, params.p)
    chosen = full if full.sad <= pbm.sad else pbm
    outcome = replace(chosen, candidates_evaluated=pbm.candidates_evaluated + full.candidates_evaluated)
    current_field.set(pos[0], pos[1], outcome.mv)
    return BlockDecision(outcome, path, texture, pbm.sad, pbm.candidates_evaluated)


# ---------------------------------------------------------------------------
# frame drivers and statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockResult:
    row: int
    col: int
    outcome: SearchOutcome
    full_window: bool
    rate_bits: int = 0
    decision: BlockDecision | None = None

    @property
    def path(self) -> Path | None:
        return None if self.decision is None else self.decision.path


@dataclass(frozen=True)
class FrameStats:
    """Per-frame summary.

    ``avg_candidates`` is the mean number of candidate positions searched per
    macroblock; ``avg_candidates_interior`` restricts it to blocks whose
    ``+-p`` window needed no clipping (``None`` when there are none).
    """

    blocks: int
    candidates: int
    interior_blocks: int
    interior_candidates: int
    fallbacks: int
    psnr_db: float
    sse: int
    samples: int
    mv_bits: int
    total_cost: Fraction
    path_counts: dict = dataclasses.field(default_factory=dict)

    @property
    def avg_candidates(self) -> Fraction:
        return Fraction(self.candidates, self.blocks)

    @property
    def avg_candidates_interior(self) -> Fraction | None:
        if not self.interior_blocks:
            return None
        return Fraction(self.interior_candidates, self.interior_blocks)

    @property
    def fallback_fraction(self) -> Fraction:
        return Fraction(self.fallbacks, self.blocks)


@dataclass
class FrameResult:
    field: MotionField
    blocks: list
    stats: FrameStats
    predicted: Frame

    @property
    def decisions(self) -> list:
        return [b.decision for b in self.blocks if b.decision is not None]


def median_predictor(field: MotionField, row: int, col: int) -> MotionVector:
    """Component-wise median of left, above and above-right; missing entries count as zero."""
    neigh = [field.get(row, col - 1), field.get(row - 1, col), field.get(row - 1, col + 1)]
    neigh = [ZERO_MV if v is None else v for v in neigh]
    return MotionVector(int(np.median([v.x for v in neigh])), int(np.median([v.y for v in neigh])))


def field_rate_bits(field: MotionField) -> np.ndarray:
    """Per-block differential mv bits against the median predictor."""
    out = np.zeros((field.rows, field.cols), dtype=np.int64)
    for row in range(field.rows):
        for col in range(field.cols):
            out[row, col] = mv_rate_bits(field.get(row, col, strict=True),
                                         median_predictor(field, row, col))
    return out


def _check_dims(current: Frame, reference: Frame, params: AcbmParams) -> None:
    if current.shape != reference.shape:
        raise FrameError(f"dimension mismatch {current.shape} vs {reference.shape}")
    if current.width % params.n or current.height % params.m:
        raise FrameError(
            f"frame {current.width}x{current.height} is not a multiple of the "
            f"{params.n}x{params.m} block size"
        )


def estimate_frame(current: Frame, reference: Frame, previous_field: MotionField | None,
                   params: AcbmParams, algorithm: str = "acbm") -> FrameResult:
    """Raster pass of ``algorithm`` over every block of ``current``."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    _check_dims(current, reference, params)
    n, m, p = params.n, params.m, params.p
    field = MotionField.for_frame(current, n, m)
    raw = []
    for row in range(field.rows):
        for col in range(field.cols):
            block = BlockRef.at_grid(current, row, col, n, m)
            decision = None
            if algorithm == "fsbm":
                outcome = fsbm_search(block, reference, p)
                field.set(row, col, outcome.mv)
            elif algorithm == "pbm":
                outcome = pbm_search(block, (row, col), reference, field, previous_field, p)
            else:
                decision = acbm_block(block, (row, col), reference, field, previous_field, params)
                outcome = decision.outcome
            full = search_window(block, reference, p).is_full(p)
            raw.append((row, col, outcome, full, decision))

    bits = field_rate_bits(field)
    model = params.cost_model
    blocks = [BlockResult(r, c, o, full, int(bits[r, c]), d) for r, c, o, full, d in raw]
    predicted = motion_compensate(reference, field, n, m)
    diff = current.luma.astype(np.int64) - predicted.luma.astype(np.int64)
    sse = int((diff * diff).sum())
    counts = {str(p_): 0 for p_ in Path} if algorithm == "acbm" else {}
    for b in blocks:
        if b.path is not None:
            counts[str(b.path)] += 1
    stats = FrameStats(
        blocks=len(blocks),
        candidates=sum(b.outcome.candidates_evaluated for b in blocks),
        interior_blocks=sum(b.full_window for b in blocks),
        interior_candidates=sum(b.outcome.candidates_evaluated for b in blocks if b.full_window),
        fallbacks=sum(b.path is Path.FALLBACK for b in blocks),
        psnr_db=psnr_from_sse(sse, diff.size),
        sse=sse,
        samples=diff.size,
        mv_bits=int(bits.sum()),
        total_cost=sum((lagrangian_cost(b.outcome.sad, b.rate_bits, model) for b in blocks),
                       Fraction(0)),
        path_counts=counts,
    )
    return FrameResult(field, blocks, stats, predicted)


def acbm_frame(current: Frame, reference: Frame, previous_field: MotionField | None,
               params: AcbmParams):
    """ACBM over one frame. Returns ``(field, decisions, stats)``."""
    result = estimate_frame(current, reference, previous_field, params, "acbm")
    return result.field, result.decisions, result.stats


def estimate_sequence(frames, params: AcbmParams, algorithm: str = "acbm"):
    """Predict frame ``k`` from frame ``k - 1`` for every ``k >= 1``.

    Yields one `FrameResult` per predicted frame; each frame's field is the
    temporal predictor source for the next.
    """
    previous_field = None
    reference = None
    for frame in frames:
        if reference is not None:
            result = estimate_frame(frame, reference, previous_field, params, algorithm)
            previous_field = result.field
            yield result
        reference = frame
