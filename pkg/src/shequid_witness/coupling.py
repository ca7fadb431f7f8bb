"""Inter-arm coupling: gravitational branch phase, line-mass form factor,
electrostatic analog force/phase and the compensating-field solver.

Sign convention: attraction (gravity) gives a positive branch phase, repulsion
a negative one, so a repulsive electrostatic force can cancel gravity.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, optimize

from .constants import COULOMB_K, EPS0, G, HBAR
from .superfluid import Geometry, arm_mass, junction_time, rho_s

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12

# value quoted for the authors' cylinder calculation; reported next to ours
PUBLISHED_FORM_FACTOR = 0.5


class Orientation(str, Enum):
    """Direction of the applied field relative to the separation axis."""

    PERPENDICULAR = "perpendicular"  # field along the channels
    PARALLEL = "parallel"  # field along the arm separation


@dataclass
class CouplingResult:
    phi_grav: float
    phi_em: float
    form_factor_A: float
    mass: float
    delta_t: float
    d_effective: float

    @property
    def phi_total(self) -> float:
        return self.phi_grav + self.phi_em


def grav_phase(m, d, delta_t, A=1.0):
    """Branch phase ``A m^2 (G/hbar) delta_t / d`` (rad); broadcasts over arrays."""
    if np.any(np.asarray(d) <= 0):
        raise ValueError("degenerate separation: d must be > 0")
    if not delta_t > 0:
        raise ValueError(f"delta_t must be > 0, got {delta_t}")
    if not A > 0:
        raise ValueError(f"form factor A must be > 0, got {A}")
    if np.any(np.asarray(m) < 0):
        raise ValueError("mass must be non-negative")
    return A * m * m * (G / HBAR) * delta_t / d


def line_line_integral(L: float, d: float) -> float:
    """Closed form of  I = int_0^L int_0^L dx dy / sqrt((x-y)^2 + d^2).

    Written as 2[L asinh(L/d) - L^2/(d + sqrt(L^2+d^2))] so that it stays
    accurate for L << d.
    """
    return 2.0 * (L * np.arcsinh(L / d) - L * L / (d + np.hypot(L, d)))


def form_factor_line(L: float, d: float) -> float:
    """Form factor of two parallel uniform line masses of length L at separation d.

    Ratio of their mutual potential energy to that of two point masses of the
    same total mass at separation d; tends to 1 as L/d -> 0.
    """
    _check_positive(L=L, d=d)
    return d * line_line_integral(L, d) / (L * L)


def form_factor_quad(L: float, d: float, method: str = "reduced") -> float:
    """Form factor by adaptive quadrature.

    ``method="reduced"`` integrates the exact 1-D reduction of the double
    integral over the offset s = x - y with weight 2(L - s);
    ``method="double"`` runs the 2-D adaptive integral directly (slow for
    large L/d, kept as a cross-check).
    """
    _check_positive(L=L, d=d)
    u = L / d  # everything in units of d

    if method == "reduced":
        val, _ = integrate.quad(
            lambda s: 2.0 * (u - s) / np.sqrt(s * s + 1.0),
            0.0, u, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=500,
        )
    elif method == "double":
        val, _ = integrate.dblquad(
            lambda y, x: 1.0 / np.sqrt((x - y) ** 2 + 1.0),
            0.0, u, 0.0, u, epsabs=QUAD_EPSABS * u * u, epsrel=1e-11,
        )
    else:
        raise ValueError(f"unknown quadrature method {method!r}")
    return val / (u * u)


def effective_susceptibility(epsilon_r: float) -> float:
    """Clausius-Mossotti effective susceptibility 3(eps_r - 1)/(eps_r + 2)."""
    return 3.0 * (epsilon_r - 1.0) / (epsilon_r + 2.0)


def dipole_line_density(E_field: float, sigma: float, epsilon_r: float) -> float:
    """Induced dipole moment per unit length of a polarized column (C m / m)."""
    return EPS0 * effective_susceptibility(epsilon_r) * E_field * sigma


def dipole_pair_kernel(s, d, orientation=Orientation.PERPENDICULAR):
    """Separation-axis force between two unit dipoles, per unit Coulomb constant.

    ``s`` is the axial offset between the dipoles, ``d`` the transverse
    separation. Positive values are repulsive.
    """
    orientation = Orientation(orientation)
    r2 = s * s + d * d
    r7 = r2**3 * np.sqrt(r2)
    if orientation is Orientation.PERPENDICULAR:
        return d * (3.0 * d * d - 12.0 * s * s) / r7
    return d * (9.0 * s * s - 6.0 * d * d) / r7


def em_line_force(E_field: float, geometry: Geometry, epsilon_r: float,
                  orientation=Orientation.PERPENDICULAR) -> float:
    """Electrostatic force between the two polarized side-by-side columns (N).

    Each column is a finite line of length L carrying dipole density
    eps0 * chi_eff * E * sigma; the pair force is integrated over both lines.
    Positive = repulsive.
    """
    try:
        orientation = Orientation(orientation)
    except ValueError:
        raise ValueError(f"unsupported field orientation {orientation!r}") from None
    if not E_field >= 0:
        raise ValueError(f"E_field must be >= 0, got {E_field}")
    if E_field == 0:
        return 0.0
    L, d = geometry.L, geometry.d
    p_l = dipole_line_density(E_field, geometry.sigma, epsilon_r)
    # double integral over two aligned lines reduces to 2 * int_0^L (L - s) k(s) ds;
    # in units of d the kernel scales as d^-4 and each length integral as d
    u = L / d
    val, _ = integrate.quad(
        lambda s: 2.0 * (u - s) * dipole_pair_kernel(s, 1.0, orientation),
        0.0, u, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=500,
    )
    return COULOMB_K * p_l * p_l * val / (d * d)


def em_phase(F_E, d, delta_t):
    """Branch phase from a force F_E acting across d for delta_t (rad).

    Repulsive (positive) forces give a negative phase, opposite to gravity.
    """
    if np.any(np.asarray(d) <= 0):
        raise ValueError("degenerate separation: d must be > 0")
    return -F_E * d * delta_t / HBAR


def compensating_field(config, E_max: float | None = None, rtol: float = 1e-12) -> float:
    """Field E* whose electrostatic phase cancels the gravitational one.

    Brackets the root of |phi_E(E)| - phi_G on [0, E_hi], doubling E_hi up to
    ``E_max``, then refines with Brent's method.
    """
    E_max = config.coupling.E_max if E_max is None else E_max
    geom = config.geometry
    dt = junction_time(config.drive.f_J)
    m = arm_mass(geom, rho_s(config.superfluid))
    target = grav_phase(m, geom.d, dt, config.form_factor())
    if target == 0:
        return 0.0

    orientation = config.coupling.field_orientation
    if em_line_force(1.0, geom, config.superfluid.epsilon_r, orientation) <= 0:
        raise ValueError(
            f"compensation field out of range: orientation {Orientation(orientation).value!r} "
            "gives an attractive force"
        )

    def residual(E):
        F = em_line_force(E, geom, config.superfluid.epsilon_r, orientation)
        return abs(em_phase(F, geom.d, dt)) / target - 1.0

    hi = min(1.0, E_max)
    while residual(hi) < 0:
        if hi >= E_max:
            raise ValueError(f"compensation field out of range (E_max = {E_max:g} V/m)")
        hi = min(2.0 * hi, E_max)
    return optimize.brentq(residual, 0.0, hi, xtol=1e-300, rtol=rtol, maxiter=500)


def coupling_result(config, E_field: float | None = None) -> CouplingResult:
    geom = config.geometry
    E = config.drive.E_field if E_field is None else E_field
    dt = junction_time(config.drive.f_J)
    m = arm_mass(geom, rho_s(config.superfluid))
    A = config.form_factor()
    F = em_line_force(E, geom, config.superfluid.epsilon_r, config.coupling.field_orientation)
    return CouplingResult(
        phi_grav=grav_phase(m, geom.d, dt, A),
        phi_em=em_phase(F, geom.d, dt),
        form_factor_A=A,
        mass=m,
        delta_t=dt,
        d_effective=geom.d,
    )


def _check_positive(**kw):
    for name, value in kw.items():
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")
