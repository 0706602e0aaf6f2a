"""Geometry-based angle-of-arrival simulator (Rust extension)."""

from ._aoasim import (
    SPEED_OF_LIGHT,
    AntennaPattern,
    RunReport,
    Scenario,
    aoa_jacobian,
    aoa_to_aod,
    aod_pdf,
    aod_to_aoa,
    delayed_aoa_pdf,
    ellipse_params,
    extract_taps,
    sigma_from_hpbw,
    von_mises_pdf,
)

__all__ = [
    "SPEED_OF_LIGHT",
    "AntennaPattern",
    "RunReport",
    "Scenario",
    "aoa_jacobian",
    "aoa_to_aod",
    "aod_pdf",
    "aod_to_aoa",
    "delayed_aoa_pdf",
    "ellipse_params",
    "extract_taps",
    "sigma_from_hpbw",
    "von_mises_pdf",
]
