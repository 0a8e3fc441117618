"""Block matching motion estimation: full search, predictive search and the
adaptive-cost hybrid that gates between them."""

__version__ = "0.1.0"

from .frame_model import (BlockRef, Frame, FrameError, MotionVector, extract_predicted_block,
                          load_raw_y, motion_compensate, sample_half_pel, write_raw_i420)
from .metrics import (CostModel, DeviationAccumulator, intra_sad, lagrangian_cost, mv_rate_bits,
                      prediction_psnr, sad, sad_deviation_finalize)
from .fsbm import SearchOutcome, fsbm_integer, fsbm_search, half_pel_refine
from .pbm import MotionField, PredictorSet, gather_predictors, pbm_refine, pbm_search, select_best_predictor
from .acbm import (AcbmParams, BlockDecision, Path, acbm_block, acbm_decide, acbm_frame,
                   estimate_frame, estimate_sequence)
from .characterize import CharRecord, SynthSpec, characterize_run, classify_block, gen_synthetic
