"""Cascaded RIS channel estimation with triple-structured compressive sensing."""

from ._tscs import (
    ConsistencyError,
    DimensionError,
    IoError,
    MetricUndefined,
    baseline_omp,
    baseline_row_structured,
    circ_xcorr_1d,
    circ_xcorr_2d,
    dft_matrix,
    mtscs_ce,
    nmse_db,
    simulate,
    sweep,
)

__all__ = [
    "ConsistencyError",
    "DimensionError",
    "IoError",
    "MetricUndefined",
    "baseline_omp",
    "baseline_row_structured",
    "circ_xcorr_1d",
    "circ_xcorr_2d",
    "dft_matrix",
    "mtscs_ce",
    "nmse_db",
    "simulate",
    "sweep",
]
