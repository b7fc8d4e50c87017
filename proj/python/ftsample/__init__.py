"""Fourier sampling on zero-padded domains: transforms, bounds, pipelines."""

from ._core import (
    BoundReport,
    Error,
    __version__,
    bl_counting_check,
    claim1_check,
    continued_fraction_round,
    dft,
    dist_beta,
    dist_gamma,
    euler_phi,
    figure_data,
    l1_distance,
    observation_check,
    primed_index,
    recover_period,
    run_config,
    sample,
    smooth_number_in_range,
    theorem1_check,
    theorem_threshold,
    validate_config,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
