"""Full search block matching.

Every integer displacement in the ``(2p+1)^2`` window is scored, the window
being shrunk at frame borders so candidates stay fully inside the reference.
The integer winner is then refined over its 8 half-pel neighbours, giving
``(2p+1)^2 + 8`` candidates for an interior block (969 at ``p = 15``).

Equal-SAD candidates are ordered by `tie_key`: smaller ``|x| + |y|``, then
smaller ``y``, then smaller ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .frame_model import BlockRef, Frame, FrameError, MotionVector, footprint_in_bounds
from .metrics import DeviationAccumulator, sad

__all__ = [
    "SearchOutcome",
    "Window",
    "tie_key",
    "search_window",
    "fsbm_integer",
    "half_pel_refine",
    "fsbm_search",
    "fsbm_candidate_count",
    "HALF_PEL_NEIGHBOURS",
]

#: Offsets (half-pel units) of the 8 neighbours of a position, raster order.
HALF_PEL_NEIGHBOURS = tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dx or dy)


@dataclass(frozen=True)
class SearchOutcome:
    """Per-block search result.

    ``sad_deviation`` and ``sad_min_integer`` describe the first search stage
    only (the integer window for FSBM, the predictor set for PBM).
    """

    mv: MotionVector
    sad: int
    candidates_evaluated: int
    sad_deviation: int
    sad_min_integer: int


class Window(NamedTuple):
    """Inclusive integer-pel displacement bounds for one block."""

    dx_lo: int
    dx_hi: int
    dy_lo: int
    dy_hi: int

    @property
    def size(self) -> int:
        return (self.dx_hi - self.dx_lo + 1) * (self.dy_hi - self.dy_lo + 1)

    def is_full(self, p: int) -> bool:
        return self == (-p, p, -p, p)

    def clamp(self, mv: MotionVector) -> MotionVector:
        """Clamp a half-pel vector into the window."""
        return MotionVector(min(max(mv.x, 2 * self.dx_lo), 2 * self.dx_hi),
                            min(max(mv.y, 2 * self.dy_lo), 2 * self.dy_hi))

    def contains(self, mv: MotionVector) -> bool:
        return (2 * self.dx_lo <= mv.x <= 2 * self.dx_hi
                and 2 * self.dy_lo <= mv.y <= 2 * self.dy_hi)


def tie_key(mv) -> tuple[int, int, int]:
    return abs(mv[0]) + abs(mv[1]), mv[1], mv[0]


def search_window(block: BlockRef, ref_frame: Frame, p: int) -> Window:
    """The ``+-p`` window clipped so every displaced block is inside ``ref_frame``."""
    if p < 0:
        raise ValueError(f"search range must be >= 0, got {p}")
    if ref_frame.shape != block.frame.shape:
        raise FrameError("reference and current frames differ in size")
    return Window(max(-p, -block.origin_x), min(p, ref_frame.width - block.n - block.origin_x),
                  max(-p, -block.origin_y), min(p, ref_frame.height - block.m - block.origin_y))


def _sad_surface(block: BlockRef, ref_frame: Frame, win: Window) -> np.ndarray:
    """SADs indexed ``[dy - dy_lo, dx - dx_lo]``."""
    x0, y0 = block.origin_x + win.dx_lo, block.origin_y + win.dy_lo
    area = ref_frame.luma[y0:block.origin_y + win.dy_hi + block.m,
                          x0:block.origin_x + win.dx_hi + block.n].astype(np.int32)
    cur = block.pixels.astype(np.int32)
    views = sliding_window_view(area, (block.m, block.n))
    return np.abs(views - cur).sum(axis=(2, 3), dtype=np.int64)


def fsbm_integer(block: BlockRef, ref_frame: Frame, p: int):
    """Exhaustive integer-pel search.

    Returns
    -------
    mv : MotionVector
        Integer-pel winner (even components).
    sad : int
        Its SAD.
    acc : DeviationAccumulator
        Every candidate SAD of the clamped window.
    """
    win = search_window(block, ref_frame, p)
    surface = _sad_surface(block, ref_frame, win)
    acc = DeviationAccumulator()
    acc.add_many(surface)
    iy, ix = np.nonzero(surface == acc.sad_min)
    ties = [(int(dx) + win.dx_lo, int(dy) + win.dy_lo) for dy, dx in zip(iy, ix)]
    dx, dy = min(ties, key=tie_key)
    return MotionVector.from_pels(dx, dy), int(acc.sad_min), acc


def half_pel_refine(block: BlockRef, ref_frame: Frame, center: MotionVector, center_sad: int,
                    window: Window | None = None):
    """Try the 8 half-pel neighbours of ``center``.

    Neighbours whose footprint leaves the frame (or ``window``, when given)
    are skipped and not counted. The centre wins ties.

    Returns ``(mv, sad, extra_candidates)``.
    """
    best, best_sad = MotionVector(*center), int(center_sad)
    extra = 0
    for off in HALF_PEL_NEIGHBOURS:
        cand = MotionVector(center.x + off[0], center.y + off[1])
        if not footprint_in_bounds(ref_frame, block, cand):
            continue
        if window is not None and not window.contains(cand):
            continue
        extra += 1
        s = sad(block, ref_frame, cand)
        if s < best_sad or (s == best_sad and best != center and tie_key(cand) < tie_key(best)):
            best, best_sad = cand, s
    return best, best_sad, extra


def fsbm_search(block: BlockRef, ref_frame: Frame, p: int) -> SearchOutcome:
    mv, best, acc = fsbm_integer(block, ref_frame, p)
    mv, final, extra = half_pel_refine(block, ref_frame, mv, best)
    return SearchOutcome(mv=mv, sad=final, candidates_evaluated=acc.count + extra,
                         sad_deviation=acc.deviation(), sad_min_integer=best)


def fsbm_candidate_count(p: int) -> int:
    """Candidates of a full-window search: ``(2p+1)^2 + 8``."""
    return (2 * p + 1) ** 2 + 8
