"""Predictive block matching.

Three steps per block:

1. gather predictors from the spatio-temporal neighbourhood,
2. keep the one with the lowest SAD,
3. refine it with one 8-neighbour integer-pel step followed by one
   8-neighbour half-pel step.

Spatial predictors come from the current frame's field (left, above,
above-right: already computed in raster order); temporal predictors come
from the previous frame's field (co-located, right, below: the positions
whose current-frame counterparts are not yet available).  At most
``7 + 8 + 8 = 23`` candidates are scored per block, whatever the range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame_model import ZERO_MV, BlockRef, Frame, MotionVector
from .fsbm import SearchOutcome, Window, half_pel_refine, search_window, tie_key
from .metrics import DeviationAccumulator, sad

__all__ = [
    "MotionField",
    "Predictor",
    "PredictorSet",
    "gather_predictors",
    "select_best_predictor",
    "pbm_refine",
    "pbm_search",
    "MAX_PBM_CANDIDATES",
]

MAX_PBM_CANDIDATES = 23

SOURCES = ("zero", "spatial-left", "spatial-above", "spatial-above-right",
           "temporal-colocated", "temporal-right", "temporal-below")


class MotionField:
    """Grid of per-block vectors with a computed flag per entry."""

    def __init__(self, rows: int, cols: int):
        if rows <= 0 or cols <= 0:
            raise ValueError(f"invalid field size {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.vectors = np.zeros((rows, cols, 2), dtype=np.int64)
        self.computed = np.zeros((rows, cols), dtype=bool)

    @classmethod
    def for_frame(cls, frame: Frame, n: int = 16, m: int = 16) -> "MotionField":
        return cls(frame.height // m, frame.width // n)

    def inside(self, row: int, col: int) -> bool:
        return 0 <= row < self.rows and 0 <= col < self.cols

    def get(self, row: int, col: int, strict: bool = False) -> MotionVector | None:
        """Vector at ``(row, col)``; ``None`` if outside or not computed yet."""
        if not self.inside(row, col) or not self.computed[row, col]:
            if strict:
                raise KeyError(f"motion vector at ({row}, {col}) not computed")
            return None
        vx, vy = self.vectors[row, col]
        return MotionVector(int(vx), int(vy))

    def set(self, row: int, col: int, mv: MotionVector) -> None:
        self.vectors[row, col] = mv
        self.computed[row, col] = True

    def __iter__(self):
        for row in range(self.rows):
            for col in range(self.cols):
                yield row, col, self.get(row, col)

    def __eq__(self, other):
        if not isinstance(other, MotionField):
            return NotImplemented
        return (np.array_equal(self.computed, other.computed)
                and np.array_equal(self.vectors[self.computed], other.vectors[other.computed]))


@dataclass(frozen=True)
class Predictor:
    mv: MotionVector
    source: str


class PredictorSet(list):
    """Ordered, duplicate-free list of `Predictor`, always headed by the zero vector."""

    @property
    def vectors(self) -> list[MotionVector]:
        return [p.mv for p in self]


def gather_predictors(pos, current_field: MotionField | None, previous_field: MotionField | None,
                      window: Window) -> PredictorSet:
    """Candidate vectors for the block at grid position ``pos = (row, col)``.

    Every candidate is clamped into ``window`` (see `search_window`) before
    de-duplication, so the first occurrence of a clamped vector wins.
    """
    row, col = pos
    raw = [(ZERO_MV, "zero")]
    if current_field is not None:
        raw += [(current_field.get(row, col - 1), "spatial-left"),
                (current_field.get(row - 1, col), "spatial-above"),
                (current_field.get(row - 1, col + 1), "spatial-above-right")]
    if previous_field is not None:
        raw += [(previous_field.get(row, col), "temporal-colocated"),
                (previous_field.get(row, col + 1), "temporal-right"),
                (previous_field.get(row + 1, col), "temporal-below")]
    out = PredictorSet()
    seen = set()
    for mv, source in raw:
        if mv is None:
            continue
        mv = window.clamp(mv)
        if mv in seen:
            continue
        seen.add(mv)
        out.append(Predictor(mv, source))
    return out


def _score(block: BlockRef, ref_frame: Frame, predictors) -> list[int]:
    return [sad(block, ref_frame, p.mv if isinstance(p, Predictor) else p) for p in predictors]


def select_best_predictor(block: BlockRef, ref_frame: Frame, predictors, sads=None):
    """Lowest-SAD predictor; the earlier entry wins ties. Returns ``(mv, sad)``."""
    if len(predictors) == 0:
        raise ValueError("empty predictor set")
    if sads is None:
        sads = _score(block, ref_frame, predictors)
    best = min(range(len(sads)), key=lambda i: (sads[i], i))
    p = predictors[best]
    return (p.mv if isinstance(p, Predictor) else MotionVector(*p)), sads[best]


def pbm_refine(block: BlockRef, ref_frame: Frame, center: MotionVector, center_sad: int,
               window: Window):
    """Integer-pel then half-pel 8-neighbour step around ``center``.

    Returns ``(mv, sad, extra_candidates)`` with at most 16 extra candidates.
    """
    best, best_sad = center, center_sad
    extra = 0
    for dy in (-2, 0, 2):
        for dx in (-2, 0, 2):
            if not dx and not dy:
                continue
            cand = MotionVector(center.x + dx, center.y + dy)
            if not window.contains(cand):
                continue
            extra += 1
            s = sad(block, ref_frame, cand)
            if s < best_sad or (s == best_sad and best != center and tie_key(cand) < tie_key(best)):
                best, best_sad = cand, s
    mv, final, half_extra = half_pel_refine(block, ref_frame, best, best_sad)
    return mv, final, extra + half_extra


def pbm_search(block: BlockRef, pos, ref_frame: Frame, current_field: MotionField,
               previous_field: MotionField | None, p: int) -> SearchOutcome:
    """Full three-step PBM for one block; writes the result into ``current_field``."""
    window = search_window(block, ref_frame, p)
    predictors = gather_predictors(pos, current_field, previous_field, window)
    sads = _score(block, ref_frame, predictors)
    mv, best = select_best_predictor(block, ref_frame, predictors, sads)
    mv, final, extra = pbm_refine(block, ref_frame, mv, best, window)
    acc = DeviationAccumulator()
    acc.add_many(sads)
    current_field.set(pos[0], pos[1], mv)
    return SearchOutcome(mv=mv, sad=final, candidates_evaluated=len(predictors) + extra,
                         sad_deviation=acc.deviation(), sad_min_integer=best)
