"""Independent reference computations shared by several test modules."""
import numpy as np

from shequid_witness.constants import G, HBAR, M_HE4


def pointwise_signal(cfg, t):
    """Deterministic QG/nearest-only chain written out sample by sample."""
    sf, g, dr = cfg.superfluid, cfg.geometry, cfg.drive
    rho = 2.4 * sf.rho_lambda * ((sf.T_lambda - sf.T) / sf.T_lambda) ** (2.0 / 3.0)
    m = g.L * g.sigma * rho
    theta = 2 * M_HE4 * cfg.omega_perp * g.loop_area / HBAR
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        d = g.d - dr.delta_d * np.sin(2 * np.pi * dr.f_m * ti)
        phi = cfg.form_factor() * m * m * G / HBAR * (1 / (2 * dr.f_J)) / d
        out[i] = 0.5 * (1 + np.cos(phi / 2) * np.cos(theta + phi / 2))
    return out


def harmonic_oracle(cfg, n_harmonics, points=20_000):
    """Fourier coefficients of the pointwise signal over one modulation period.

    The rectangle rule on a periodic integrand converges spectrally, so a
    dense grid gives the continuous-time coefficients.
    """
    period = 1.0 / cfg.drive.f_m
    t = np.arange(points) * period / points
    y = pointwise_signal(cfg, t)
    w = 2 * np.pi * cfg.drive.f_m * t
    return np.array([2 * np.mean(y * np.exp(-1j * n * w)) for n in range(1, n_harmonics + 1)])
