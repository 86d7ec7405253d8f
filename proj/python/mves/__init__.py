"""Minimum-volume enclosing simplex unmixing (Python bindings)."""

from ._mves import (
    AffineDimensionError,
    MvesError,
    PurityCapError,
    ValidationError,
    best_purity,
    edge_pixel_purity_bound,
    generate_scene,
    max_abundance_at_purity,
    purity_report,
    rms_angle_error,
    run_check_suite,
    simplex_volume,
    solve_mves,
)

__all__ = [
    "AffineDimensionError",
    "MvesError",
    "PurityCapError",
    "ValidationError",
    "best_purity",
    "edge_pixel_purity_bound",
    "generate_scene",
    "max_abundance_at_purity",
    "purity_report",
    "rms_angle_error",
    "run_check_suite",
    "simplex_volume",
    "solve_mves",
]
