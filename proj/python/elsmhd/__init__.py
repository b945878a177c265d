"""Python bindings for the partitioned implicit midpoint MHD solver."""

from ._elsmhd import (
    compute_R,
    conserve_demo,
    control_step,
    csv_num,
    lindberg_amplitude,
    mesh_counts,
    theoretical_rate,
    theoretical_tau_bound,
    wave_zp,
)

__version__ = "0.1.0"

__all__ = [
    "compute_R",
    "conserve_demo",
    "control_step",
    "csv_num",
    "lindberg_amplitude",
    "mesh_counts",
    "theoretical_rate",
    "theoretical_tau_bound",
    "wave_zp",
]
