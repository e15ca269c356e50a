from ._tsd import (
    Tracker,
    compute_dpmr,
    dft2,
    evaluate,
    gaussian_label,
    hann_window,
    solve_alpha,
    synth_sequence,
    temporal_weights,
)

__all__ = [
    "Tracker",
    "compute_dpmr",
    "dft2",
    "evaluate",
    "gaussian_label",
    "hann_window",
    "solve_alpha",
    "synth_sequence",
    "temporal_weights",
]
