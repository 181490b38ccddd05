"""Light storage in an EIT vapor cell: steady spectra, slow light, storage and retrieval."""

from ._core import (
    AdiabaticityReport,
    MediumParams,
    NumericalError,
    ValidationError,
    absorption_profile,
    b_field_to_detuning,
    calibrate_control_for_fwhm,
    compute_kappa,
    control_for_group_velocity,
    group_velocity,
    load_config,
    mixing_angle,
    run,
    scenario_config,
    scenario_names,
    steady_transmission,
    sweep,
    to_polariton,
    transmission_fwhm,
)

__all__ = [
    "AdiabaticityReport",
    "MediumParams",
    "NumericalError",
    "ValidationError",
    "absorption_profile",
    "b_field_to_detuning",
    "calibrate_control_for_fwhm",
    "compute_kappa",
    "control_for_group_velocity",
    "group_velocity",
    "load_config",
    "mixing_angle",
    "run",
    "scenario_config",
    "scenario_names",
    "steady_transmission",
    "sweep",
    "to_polariton",
    "transmission_fwhm",
]
