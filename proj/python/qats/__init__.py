"""Fast ternary-segmentation decoding for hidden Markov models."""

from ._core import (
    InfeasibleError,
    Model,
    build_model,
    complete_log_lik,
    decode_qats,
    decode_viterbi,
    distance,
    expected_segments,
    load_model,
    quantiles,
    save_model,
    simulate,
    uniform_transition,
)

__all__ = [
    "InfeasibleError",
    "Model",
    "build_model",
    "complete_log_lik",
    "decode_qats",
    "decode_viterbi",
    "distance",
    "expected_segments",
    "load_model",
    "quantiles",
    "save_model",
    "simulate",
    "uniform_transition",
]
