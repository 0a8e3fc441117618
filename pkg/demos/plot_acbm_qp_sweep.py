"""
Adaptive gating across quantizer steps
======================================

The hybrid accepts the predictive vector when the block is smooth enough
(``intra_sad + sad_pbm < alpha + beta * qp**2``) or the predictive match is
already good (``sad_pbm < gamma * intra_sad``).  Lower qp shrinks the first
threshold, so more blocks fall back to the full search.
"""

from fractions import Fraction

from blockmatch.acbm import AcbmParams, Path, acbm_decide, estimate_sequence
from blockmatch.characterize import SynthSpec, gen_synthetic, mixed_frame

# The gate itself is a pure function of three integers.
params = AcbmParams(qp=30)
for intra, sad_pbm in [(4000, 3000), (40000, 9000), (40000, 20000)]:
    print(f"intra_sad={intra:5d} sad_pbm={sad_pbm:5d} -> {acbm_decide(intra, sad_pbm, params)}")

frames, _ = gen_synthetic(SynthSpec(mixed_frame(176, 144, seed=1, patch=16)))

print("\nqp  avg_candidates  fallback%")
for qp in range(30, 15, -2):
    results = list(estimate_sequence(frames, AcbmParams(qp=qp), "acbm"))
    blocks = sum(r.stats.blocks for r in results)
    avg = Fraction(sum(r.stats.candidates for r in results), blocks)
    fb = Fraction(sum(r.stats.fallbacks for r in results), blocks)
    print(f"{qp:2d}  {float(avg):14.2f}  {100 * float(fb):9.2f}")

# Raising alpha never pushes a block to the fallback path.
results = list(estimate_sequence(frames, AcbmParams(alpha=10**9), "acbm"))
print("\nalpha=1e9 paths:", {str(p): sum(r.stats.path_counts[str(p)] for r in results) for p in Path})
