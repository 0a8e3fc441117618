import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockmatch.frame_model import (BlockRef, Frame, FrameError, MotionVector, count_raw_frames,
                                    extract_predicted_block, i420_frame_size, load_raw_y,
                                    sample_half_pel, write_raw_i420)

import oracles


def test_frame_rejects_bad_shapes():
    with pytest.raises(FrameError):
        Frame(0, 4, np.zeros(0, dtype=np.uint8))
    with pytest.raises(FrameError):
        Frame(4, 4, np.zeros(15, dtype=np.uint8))
    with pytest.raises(FrameError):
        Frame(2, 1, np.array([0, 256]))


def test_frame_is_read_only():
    f = Frame(2, 2, np.arange(4, dtype=np.uint8))
    with pytest.raises(ValueError):
        f.luma[0, 0] = 9


def test_block_must_fit():
    f = Frame(32, 32, np.zeros(1024, dtype=np.uint8))
    BlockRef(f, 16, 16)
    with pytest.raises(FrameError):
        BlockRef(f, 17, 0)
    with pytest.raises(FrameError):
        BlockRef(f, 0, -1)


# -- raw ingestion ----------------------------------------------------------

def test_load_identity(tmp_path):
    path = tmp_path / "a.yuv"
    path.write_bytes(bytes(range(16)))
    f = load_raw_y(path, 4, 4, 0)
    assert list(f.luma.ravel()) == list(range(16))


def test_load_second_i420_frame(tmp_path):
    path = tmp_path / "b.yuv"
    path.write_bytes(bytes(range(48)))
    assert i420_frame_size(4, 4) == 24
    f = load_raw_y(path, 4, 4, 1)
    assert list(f.luma.ravel()) == list(range(24, 40))


def test_load_qcif(tmp_path):
    path = tmp_path / "q.yuv"
    path.write_bytes(bytes(i420_frame_size(176, 144)))
    f = load_raw_y(path, 176, 144)
    assert (f.width, f.height) == (176, 144)


def test_load_errors(tmp_path):
    path = tmp_path / "c.yuv"
    path.write_bytes(bytes(30))
    with pytest.raises(FrameError, match="too short"):
        load_raw_y(path, 4, 4, 1)
    with pytest.raises(FrameError):
        load_raw_y(path, 0, 4)
    with pytest.raises(OSError):
        load_raw_y(tmp_path / "missing.yuv", 4, 4)


def test_write_then_count_roundtrip(tmp_path, rng):
    frames = [Frame.from_array(rng.integers(0, 256, (8, 16), dtype=np.uint8)) for _ in range(3)]
    path = tmp_path / "r.yuv"
    write_raw_i420(path, frames)
    assert count_raw_frames(path, 16, 8) == 3
    assert all(load_raw_y(path, 16, 8, k) == frames[k] for k in range(3))


# -- half-pel sampling ------------------------------------------------------

def test_sample_half_pel_cases():
    f = Frame.from_array(np.array([[200, 13], [255, 255]], dtype=np.uint8))
    assert sample_half_pel(f, 0, 0) == 200
    g = Frame.from_array(np.array([[10, 13], [0, 0]], dtype=np.uint8))
    assert sample_half_pel(g, 1, 0) == 12
    h = Frame.from_array(np.array([[0, 0], [255, 255]], dtype=np.uint8))
    assert sample_half_pel(h, 1, 1) == 128
    assert sample_half_pel(h, 0, 1) == 128


def test_sample_half_pel_out_of_bounds():
    f = Frame.from_array(np.zeros((2, 2), dtype=np.uint8))
    with pytest.raises(FrameError):
        sample_half_pel(f, 3, 0)
    with pytest.raises(FrameError):
        sample_half_pel(f, -1, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=4, max_size=4), st.integers(0, 2), st.integers(0, 2))
def test_half_pel_within_support(vals, x2, y2):
    f = Frame.from_array(np.array(vals, dtype=np.uint8).reshape(2, 2))
    v = sample_half_pel(f, x2, y2)
    assert min(vals) <= v <= max(vals)
    assert v == oracles.half_pel_sample(f.luma.tolist(), x2, y2)


# -- prediction -------------------------------------------------------------

def test_zero_mv_roundtrip_exhaustive(rng):
    f = Frame.from_array(rng.integers(0, 256, (12, 12), dtype=np.uint8))
    for n, m in [(4, 4), (3, 5)]:
        for oy in range(12 - m + 1):
            for ox in range(12 - n + 1):
                b = BlockRef(f, ox, oy, n, m)
                assert np.array_equal(extract_predicted_block(f, b, MotionVector(0, 0)),
                                      f.luma[oy:oy + m, ox:ox + n])


def test_shifted_frame_prediction_is_exact(noise_pair):
    cur, ref = noise_pair
    block = BlockRef(cur, 16, 16)
    pred = extract_predicted_block(ref, block, MotionVector.from_pels(3, -2))
    assert np.array_equal(pred, block.pixels)


@pytest.mark.parametrize("mv", [(1, 0), (0, 1), (1, 1), (-1, -3), (3, 5)])
def test_constant_frame_every_phase(mv):
    f = Frame.from_array(np.full((32, 32), 77, dtype=np.uint8))
    pred = extract_predicted_block(f, BlockRef(f, 8, 8, 8, 8), MotionVector(*mv))
    assert (pred == 77).all()


def test_half_pel_block_matches_oracle(rng):
    f = Frame.from_array(rng.integers(0, 256, (20, 20), dtype=np.uint8))
    rows = f.luma.tolist()
    block = BlockRef(f, 6, 6, 4, 4)
    for mv in [(1, 0), (0, -1), (-3, 3), (2, 2), (5, -5)]:
        got = extract_predicted_block(f, block, MotionVector(*mv))
        want = [[oracles.half_pel_sample(rows, 2 * (6 + i) + mv[0], 2 * (6 + j) + mv[1])
                 for i in range(4)] for j in range(4)]
        assert got.tolist() == want


def test_displaced_footprint_out_of_bounds():
    f = Frame.from_array(np.zeros((16, 16), dtype=np.uint8))
    b = BlockRef(f, 0, 0, 16, 16)
    with pytest.raises(FrameError):
        extract_predicted_block(f, b, MotionVector(1, 0))
    with pytest.raises(FrameError):
        extract_predicted_block(f, b, MotionVector(-2, 0))
