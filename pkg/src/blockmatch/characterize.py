"""Known-motion characterization of FSBM.

A base frame is translated by nine known per-frame displacements to build a
ten-frame sequence. FSBM is run on every predicted frame against its
predecessor and each block is scored by its texture (``intra_sad``), the
flatness of its error surface (``sad_deviation``) and how far the found
vector is from the true one.

Sign convention: a content displacement ``d`` (frame ``k`` pixel ``(x, y)``
equals frame ``k-1`` pixel ``(x - dx, y - dy)``) is matched by the motion
vector ``-d``, so ``true_mv`` is recorded as ``-d``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .frame_model import BlockRef, Frame, FrameError, MotionVector
from .fsbm import fsbm_search
from .metrics import intra_sad

__all__ = [
    "DEFAULT_GLOBAL_MVS",
    "CSV_COLUMNS",
    "SynthSpec",
    "CharRecord",
    "noise_frame",
    "flat_frame",
    "mixed_frame",
    "gen_synthetic",
    "classify_block",
    "characterize_run",
    "summarize",
    "records_to_csv",
    "summary_to_json",
]

DEFAULT_GLOBAL_MVS = ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (2, -1), (-2, 2), (3, 2))

CSV_COLUMNS = ("frame", "row", "col", "intra_sad", "sad_deviation", "sad_min",
               "true_x", "true_y", "found_x", "found_y", "error_class")

ERROR_CLASSES = ("0", "1", "2", "3", "4", "5+")


# -- synthetic bases --------------------------------------------------------

def noise_frame(width: int = 176, height: int = 144, seed: int = 0) -> Frame:
    """Uniform 8-bit noise from NumPy's PCG64 generator."""
    rng = np.random.default_rng(seed)
    return Frame(width, height, rng.integers(0, 256, size=(height, width), dtype=np.uint8))


def flat_frame(width: int = 176, height: int = 144, value: int = 128) -> Frame:
    return Frame(width, height, np.full((height, width), value, dtype=np.uint8))


def mixed_frame(width: int = 176, height: int = 144, seed: int = 0, patch: int = 32,
                flat_value: int = 128) -> Frame:
    """Checkerboard of flat and noise-textured ``patch`` x ``patch`` squares."""
    noise = noise_frame(width, height, seed).luma
    yy, xx = np.mgrid[0:height, 0:width]
    textured = ((yy // patch) + (xx // patch)) % 2 == 1
    return Frame(width, height, np.where(textured, noise, np.uint8(flat_value)))


# -- sequence generation ----------------------------------------------------

@dataclass(frozen=True)
class SynthSpec:
    base: Frame
    global_mvs: tuple = DEFAULT_GLOBAL_MVS
    fill: str = "edge"

    def __post_init__(self):
        mvs = tuple((int(dx), int(dy)) for dx, dy in self.global_mvs)
        if len(mvs) != 9:
            raise ValueError(f"expected 9 displacements, got {len(mvs)}")
        if self.fill != "edge":
            raise ValueError(f"unsupported fill policy {self.fill!r}")
        object.__setattr__(self, "global_mvs", mvs)

    def cumulative(self) -> list[tuple[int, int]]:
        out = [(0, 0)]
        for dx, dy in self.global_mvs:
            out.append((out[-1][0] + dx, out[-1][1] + dy))
        return out


def _translate(base: Frame, dx: int, dy: int) -> Frame:
    if abs(dx) >= base.width or abs(dy) >= base.height:
        raise FrameError(f"displacement ({dx}, {dy}) exceeds frame size")
    xs = np.clip(np.arange(base.width) - dx, 0, base.width - 1)
    ys = np.clip(np.arange(base.height) - dy, 0, base.height - 1)
    return Frame(base.width, base.height, base.luma[np.ix_(ys, xs)])


def gen_synthetic(spec: SynthSpec):
    """Ten frames and the cumulative displacement of each.

    Frame ``k`` is the base moved by the sum of the first ``k`` displacements;
    uncovered borders replicate the nearest edge sample.
    """
    cumulative = spec.cumulative()
    return [_translate(spec.base, dx, dy) for dx, dy in cumulative], cumulative


def _content_box(frame: Frame, disp) -> tuple[int, int, int, int]:
    """Inclusive pixel box of ``frame`` that holds real (non-fill) content."""
    dx, dy = disp
    return (max(0, dx), min(frame.width - 1, frame.width - 1 + dx),
            max(0, dy), min(frame.height - 1, frame.height - 1 + dy))


def _inside(box, x0, x1, y0, y1) -> bool:
    return box[0] <= x0 and x1 <= box[1] and box[2] <= y0 and y1 <= box[3]


# -- classification ---------------------------------------------------------

def classify_block(found: MotionVector, truth) -> str:
    """Chebyshev error class of ``found`` (half-pel) against integer-pel ``truth``.

    The error is measured in half-pel units and halved with ceiling, so a
    pure half-pel miss is class 1. Errors of 5 pels or more are ``"5+"``.
    """
    err2 = max(abs(found[0] - 2 * truth[0]), abs(found[1] - 2 * truth[1]))
    err = -(-err2 // 2)
    return ERROR_CLASSES[min(err, 5)]


@dataclass(frozen=True)
class CharRecord:
    frame_index: int
    row: int
    col: int
    intra_sad: int
    sad_deviation: int
    sad_min: int
    true_mv: tuple
    found_mv: tuple
    error_class: str

    def as_row(self) -> list:
        return [self.frame_index, self.row, self.col, self.intra_sad, self.sad_deviation,
                self.sad_min, self.true_mv[0], self.true_mv[1], self.found_mv[0],
                self.found_mv[1], self.error_class]


def characterize_run(spec: SynthSpec, p: int = 15, n: int = 16, m: int = 16):
    """Run FSBM over the synthetic sequence and classify each eligible block.

    A block is eligible when it holds only real content and its full ``+-p``
    window lies inside the previous frame without touching replicated fill.

    Returns ``(records, summary)``.
    """
    frames, cumulative = gen_synthetic(spec)
    for dx, dy in cumulative:
        if max(abs(dx), abs(dy)) > p:
            raise ValueError(f"cumulative displacement ({dx}, {dy}) exceeds search range {p}")
    width, height = spec.base.width, spec.base.height
    records = []
    for k in range(1, len(frames)):
        cur, ref = frames[k], frames[k - 1]
        cur_box = _content_box(cur, cumulative[k])
        ref_box = _content_box(ref, cumulative[k - 1])
        dx, dy = spec.global_mvs[k - 1]
        truth = (-dx, -dy)
        for row in range(height // m):
            for col in range(width // n):
                x0, y0 = col * n, row * m
                if not _inside(cur_box, x0, x0 + n - 1, y0, y0 + m - 1):
                    continue
                if not _inside(ref_box, x0 - p, x0 + n - 1 + p, y0 - p, y0 + m - 1 + p):
                    continue
                block = BlockRef(cur, x0, y0, n, m)
                outcome = fsbm_search(block, ref, p)
                records.append(CharRecord(
                    frame_index=k, row=row, col=col,
                    intra_sad=intra_sad(block),
                    sad_deviation=outcome.sad_deviation,
                    sad_min=outcome.sad_min_integer,
                    true_mv=truth,
                    # integer pels, half components rounded toward zero
                    found_mv=(int(outcome.mv.x / 2), int(outcome.mv.y / 2)),
                    error_class=classify_block(outcome.mv, truth),
                ))
    return records, summarize(records)


def summarize(records) -> dict:
    """Per-class record counts and mean ``intra_sad`` / ``sad_deviation``."""
    classes = {}
    for cls in ERROR_CLASSES:
        sel = [r for r in records if r.error_class == cls]
        classes[cls] = {
            "count": len(sel),
            "mean_intra_sad": f"{np.mean([r.intra_sad for r in sel]):.2f}" if sel else None,
            "mean_sad_deviation": f"{np.mean([r.sad_deviation for r in sel]):.2f}" if sel else None,
        }
    return {"records": len(records), "classes": classes}


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.as_row())
    return buf.getvalue()


def summary_to_json(summary) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
