"""
Full search on a known translation
===================================

Build a noise frame, move it by a few pixels and let the exhaustive search
find the displacement again.
"""

import numpy as np

from blockmatch import BlockRef, Frame, MotionVector
from blockmatch.fsbm import fsbm_search

rng = np.random.default_rng(0)
big = rng.integers(0, 256, size=(176, 208), dtype=np.uint8)
reference = Frame.from_array(big[16:160, 16:192])
# current(x, y) = reference(x + 3, y - 2)
current = Frame.from_array(big[14:158, 19:195])

block = BlockRef.at_grid(current, 4, 5)
out = fsbm_search(block, reference, p=15)

# vectors are in half-pel units, so (3, -2) pels reads as (6, -4)
print("found mv      :", tuple(out.mv), " expected", tuple(MotionVector.from_pels(3, -2)))
print("sad           :", out.sad)
print("candidates    :", out.candidates_evaluated, "(961 integer + 8 half-pel)")
print("sad deviation :", out.sad_deviation)

# A corner block sees a clipped window and evaluates fewer positions.
corner = fsbm_search(BlockRef.at_grid(current, 0, 0), reference, p=15)
print("corner block candidates:", corner.candidates_evaluated)
