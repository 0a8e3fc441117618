import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockmatch.frame_model import BlockRef, Frame, MotionVector
from blockmatch.fsbm import Window, search_window
from blockmatch.metrics import sad
from blockmatch.pbm import (MAX_PBM_CANDIDATES, MotionField, Predictor, gather_predictors,
                            pbm_refine, pbm_search, select_best_predictor)

from conftest import make_shifted

FULL = Window(-15, 15, -15, 15)


def filled(rows, cols, fn):
    f = MotionField(rows, cols)
    for r in range(rows):
        for c in range(cols):
            f.set(r, c, MotionVector(*fn(r, c)))
    return f


def test_field_availability_flags():
    f = MotionField(3, 4)
    assert f.get(0, 0) is None
    f.set(0, 0, MotionVector(2, 3))
    assert f.get(0, 0) == (2, 3)
    assert f.get(-1, 0) is None and f.get(0, 4) is None
    with pytest.raises(KeyError):
        f.get(1, 1, strict=True)


def test_first_block_has_only_zero():
    preds = gather_predictors((0, 0), MotionField(9, 11), None, FULL)
    assert preds.vectors == [(0, 0)] and preds[0].source == "zero"


def test_interior_block_seven_distinct():
    cur = MotionField(5, 5)
    cur.set(2, 1, MotionVector(2, 0))    # left
    cur.set(1, 2, MotionVector(4, 0))    # above
    cur.set(1, 3, MotionVector(6, 0))    # above-right
    prev = filled(5, 5, lambda r, c: (10 * r + c, 1))
    preds = gather_predictors((2, 2), cur, prev, FULL)
    assert len(preds) == 7
    assert [p.source for p in preds] == ["zero", "spatial-left", "spatial-above",
                                         "spatial-above-right", "temporal-colocated",
                                         "temporal-right", "temporal-below"]
    assert preds.vectors[4:] == [(22, 1), (23, 1), (30, 1)]


def test_uncomputed_current_entries_are_ignored():
    cur = filled(5, 5, lambda r, c: (2 * r + 2, 2 * c + 2))
    cur.computed[:] = False
    cur.computed[2, 1] = True
    preds = gather_predictors((2, 2), cur, None, FULL)
    assert preds.vectors == [(0, 0), (6, 4)]


def test_all_zero_neighbours_dedup():
    cur = filled(3, 3, lambda r, c: (0, 0))
    prev = filled(3, 3, lambda r, c: (0, 0))
    assert gather_predictors((1, 1), cur, prev, FULL).vectors == [(0, 0)]


def test_predictors_clamped_to_window():
    prev = filled(3, 3, lambda r, c: (40, -41))
    preds = gather_predictors((1, 1), MotionField(3, 3), prev, Window(-3, 2, -15, 15))
    assert preds.vectors == [(0, 0), (4, -30)]


def test_select_best(noise_pair):
    cur, ref = noise_pair
    block = BlockRef(cur, 16, 16)
    truth = MotionVector.from_pels(3, -2)
    mv, s = select_best_predictor(block, ref, [Predictor(MotionVector(0, 0), "zero"),
                                               Predictor(truth, "temporal-colocated")])
    assert mv == truth and s == 0
    assert select_best_predictor(block, ref, [Predictor(MotionVector(2, 2), "zero")])[0] == (2, 2)
    with pytest.raises(ValueError):
        select_best_predictor(block, ref, [])


def test_select_ties_keep_earlier():
    f = Frame.from_array(np.full((48, 48), 3, dtype=np.uint8))
    block = BlockRef(f, 16, 16)
    preds = [Predictor(MotionVector(4, 4), "spatial-left"), Predictor(MotionVector(0, 0), "zero")]
    assert select_best_predictor(block, f, preds) == ((4, 4), 0)


def test_refine_flat_and_count():
    f = Frame.from_array(np.full((64, 64), 3, dtype=np.uint8))
    block = BlockRef(f, 16, 16)
    mv, s, extra = pbm_refine(block, f, MotionVector(0, 0), 0, search_window(block, f, 15))
    assert (mv, s, extra) == ((0, 0), 0, 16)


def test_refine_corrects_one_pel_error(noise_pair):
    cur, ref = noise_pair
    block = BlockRef(cur, 16, 16)
    start = MotionVector.from_pels(2, -1)
    mv, s, _ = pbm_refine(block, ref, start, sad(block, ref, start), search_window(block, ref, 15))
    assert mv == MotionVector.from_pels(3, -2) and s == 0


def _raster_pass(cur, ref, previous_field, p=15):
    field = MotionField.for_frame(cur)
    outcomes = {}
    for r in range(field.rows):
        for c in range(field.cols):
            outcomes[r, c] = pbm_search(BlockRef.at_grid(cur, r, c), (r, c), ref, field,
                                        previous_field, p)
            assert outcomes[r, c].candidates_evaluated <= MAX_PBM_CANDIDATES
    return field, outcomes


def reachable(cur, ref, r, c, mv):
    """True when the block's clamped window holds the true displacement."""
    return search_window(BlockRef.at_grid(cur, r, c), ref, 15).contains(mv)


def test_global_shift_recovered_after_first_row(rng):
    # a one-pel shift is reachable from the zero predictor by the refinement step
    cur, ref = make_shifted(rng, 96, 80, 1, 1)
    _, outcomes = _raster_pass(cur, ref, None)
    truth = MotionVector.from_pels(1, 1)
    for (r, c), o in outcomes.items():
        if reachable(cur, ref, r, c, truth):
            assert o.mv == truth and o.sad == 0


def test_temporal_predictor_carries_large_shift(rng):
    cur, ref = make_shifted(rng, 96, 80, 4, -3)
    truth = MotionVector.from_pels(4, -3)
    previous = filled(5, 6, lambda r, c: truth)
    _, outcomes = _raster_pass(cur, ref, previous)
    hits = [o.mv == truth and o.sad == 0 for (r, c), o in outcomes.items()
            if reachable(cur, ref, r, c, truth)]
    assert len(hits) >= 16 and all(hits)
    # without temporal help the zero-started search cannot reach four pels
    _, cold = _raster_pass(cur, ref, None)
    assert cold[0, 0].mv != truth


def test_first_block_flat():
    f = Frame.from_array(np.full((32, 32), 60, dtype=np.uint8))
    out = pbm_search(BlockRef(f, 0, 0), (0, 0), f, MotionField(2, 2), None, 15)
    assert out.mv == (0, 0) and out.sad == 0


class SpyField(MotionField):
    """Records every read to check the raster-order contract."""

    def __init__(self, rows, cols):
        super().__init__(rows, cols)
        self.reads = []

    def get(self, row, col, strict=False):
        self.reads.append((row, col))
        return super().get(row, col, strict)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_raster_dependency_and_bounds(seed):
    r = np.random.default_rng(seed)
    cur = Frame.from_array(r.integers(0, 256, (48, 64), dtype=np.uint8))
    ref = Frame.from_array(r.integers(0, 256, (48, 64), dtype=np.uint8))
    field = SpyField(3, 4)
    for row in range(3):
        for col in range(4):
            field.reads.clear()
            block = BlockRef.at_grid(cur, row, col)
            win = search_window(block, ref, 7)
            out = pbm_search(block, (row, col), ref, field, None, 7)
            for rr, cc in field.reads:
                if 0 <= rr < 3 and 0 <= cc < 4:
                    assert (rr, cc) < (row, col)
            assert out.sad <= out.sad_min_integer
            assert out.candidates_evaluated <= MAX_PBM_CANDIDATES
            assert abs(out.mv.x) <= 15 and abs(out.mv.y) <= 15
            assert 2 * win.dx_lo - 1 <= out.mv.x <= 2 * win.dx_hi + 1
