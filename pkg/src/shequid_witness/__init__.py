"""Feasibility simulator for a two-SHeQUID gravitational entanglement witness."""

from .analysis import LockinResult, WitnessReport, lockin, null_calibration, witness_decision
from .config import ExperimentConfig, SweepSpec, emit_config, load_config, parse_config
from .coupling import (
    CouplingResult,
    compensating_field,
    em_line_force,
    em_phase,
    form_factor_line,
    form_factor_quad,
    grav_phase,
)
from .interferometer import (
    BranchPhases,
    EntanglementMeasures,
    JointState,
    Model,
    PairMode,
    branch_phases,
    detector_probability,
    entanglement_measures,
    joint_state,
    sagnac_phase,
)
from .noise_sim import NoiseParams, TimeSeries, simulate_run, temperature_series, vortex_events
from .superfluid import DriveParams, Geometry, SuperfluidParams, arm_mass, junction_time, rho_s

__version__ = "0.1.0"

__all__ = [
    "CouplingResult",
    "compensating_field",
    "em_line_force",
    "em_phase",
    "form_factor_line",
    "form_factor_quad",
    "grav_phase",
    "BranchPhases",
    "EntanglementMeasures",
    "JointState",
    "Model",
    "PairMode",
    "branch_phases",
    "detector_probability",
    "entanglement_measures",
    "joint_state",
    "sagnac_phase",
    "LockinResult",
    "WitnessReport",
    "lockin",
    "null_calibration",
    "witness_decision",
    "ExperimentConfig",
    "SweepSpec",
    "emit_config",
    "load_config",
    "parse_config",
    "NoiseParams",
    "TimeSeries",
    "simulate_run",
    "temperature_series",
    "vortex_events",
    "DriveParams",
    "Geometry",
    "SuperfluidParams",
    "arm_mass",
    "junction_time",
    "rho_s",
]
