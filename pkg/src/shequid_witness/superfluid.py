"""Superfluid He-4 material model and Josephson timing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# ideal (non-dissipative) Josephson behaviour is only claimed within 1 mK of T_lambda
REGIME_WINDOW = 1e-3


class RegimeError(ValueError):
    """Operating temperature outside the supported superfluid window."""


@dataclass
class SuperfluidParams:
    T_lambda: float = 2.17
    rho_lambda: float = 1.5e2
    T: float | None = None
    epsilon_r: float = 1.057
    allow_outside_regime: bool = False

    def __post_init__(self):
        if self.T is None:
            self.T = self.T_lambda - 20e-6

    def validate(self, prefix: str = "superfluid") -> None:
        if not self.T_lambda > 0:
            raise ValueError(f"{prefix}.T_lambda must be > 0, got {self.T_lambda}")
        if not self.rho_lambda > 0:
            raise ValueError(f"{prefix}.rho_lambda must be > 0, got {self.rho_lambda}")
        if not self.epsilon_r > 1:
            raise ValueError(f"{prefix}.epsilon_r must be > 1, got {self.epsilon_r}")
        if not self.T > 0:
            raise ValueError(f"{prefix}.T must be > 0, got {self.T}")
        _check_regime(self.T, self.T_lambda, self.allow_outside_regime, f"{prefix}.T")


@dataclass
class Geometry:
    L: float = 3e-2
    sigma: float = 4e-6
    d: float = 1e-2
    loop_area: float | None = None

    def __post_init__(self):
        if self.loop_area is None:
            self.loop_area = self.L**2

    def validate(self, prefix: str = "geometry") -> None:
        for name in ("L", "sigma", "d", "loop_area"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{prefix}.{name} must be > 0, got {value}")
        if not self.d < 2 * self.L:
            raise ValueError(
                f"{prefix}.d must be smaller than the far-arm distance 2L ({2 * self.L}), got {self.d}"
            )


@dataclass
class DriveParams:
    f_J: float = 5e3
    delta_d: float = 1e-6
    f_m: float = 1.0
    E_field: float = 0.0
    waveform: str = "sine"

    def validate(self, d: float, prefix: str = "drive") -> None:
        if not self.f_J > 0:
            raise ValueError(f"{prefix}.f_J must be > 0, got {self.f_J}")
        if not 0 <= self.delta_d < d:
            raise ValueError(f"{prefix}.delta_d must satisfy 0 <= delta_d < d ({d}), got {self.delta_d}")
        if not self.f_m > 0:
            raise ValueError(f"{prefix}.f_m must be > 0, got {self.f_m}")
        if not self.E_field >= 0:
            raise ValueError(f"{prefix}.E_field must be >= 0, got {self.E_field}")
        if self.waveform not in ("sine", "square"):
            raise ValueError(f"{prefix}.waveform must be 'sine' or 'square', got {self.waveform!r}")


def _check_regime(T, T_lambda, allow_outside_regime, name="T"):
    T = np.asarray(T, dtype=float)
    if np.any(T > T_lambda):
        raise RegimeError(f"{name}: temperature above lambda point ({T_lambda} K)")
    if not allow_outside_regime and np.any(T_lambda - T > REGIME_WINDOW):
        raise RegimeError(
            f"{name}: outside ideal Josephson regime (more than {REGIME_WINDOW * 1e3:g} mK below T_lambda)"
        )


def superfluid_density(T, T_lambda=2.17, rho_lambda=1.5e2, allow_outside_regime=False):
    """Superfluid mass density ``2.4 rho_lambda (1 - T/T_lambda)^(2/3)`` in kg/m^3.

    Accepts scalar or array temperatures. ``T == T_lambda`` gives exactly 0.
    """
    _check_regime(T, T_lambda, allow_outside_regime)
    # T_lambda - T is exact near the transition; 1 - T/T_lambda would cancel
    reduced = (T_lambda - np.asarray(T, dtype=float)) / T_lambda
    rho = 2.4 * rho_lambda * np.cbrt(reduced) ** 2
    return float(rho) if rho.ndim == 0 else rho


def rho_s(params: SuperfluidParams) -> float:
    """Superfluid density for the operating point held in ``params``."""
    return superfluid_density(params.T, params.T_lambda, params.rho_lambda, params.allow_outside_regime)


def arm_mass(geometry: Geometry, rho_s):
    """Superfluid mass carried by one arm: L * sigma * rho_s."""
    if np.any(np.asarray(rho_s) < 0):
        raise ValueError("rho_s must be non-negative")
    return geometry.L * geometry.sigma * rho_s


def junction_time(f_J: float) -> float:
    """Josephson characteristic time 1/(2 f_J)."""
    if not f_J > 0:
        raise ValueError(f"f_J must be > 0, got {f_J}")
    return 1.0 / (2.0 * f_J)
