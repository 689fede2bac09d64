"""Python interface to the spectral anelastic channel-flow solver."""

from ._core import (  # noqa: F401
    ConfigInvalid,
    NumericalError,
    QEps,
    hardy_ratio,
    make_q_eps,
    mode_count,
    pressure_matrix,
    pressure_matrix_constant,
    probe_json,
    real_dimension,
    run_json,
    sweep_json,
    taylor_green,
    verify_profile,
)

__all__ = [
    "ConfigInvalid",
    "NumericalError",
    "QEps",
    "hardy_ratio",
    "make_q_eps",
    "mode_count",
    "pressure_matrix",
    "pressure_matrix_constant",
    "probe_json",
    "real_dimension",
    "run_json",
    "sweep_json",
    "taylor_green",
    "verify_profile",
]
