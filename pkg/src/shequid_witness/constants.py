"""Physical constants (SI, CODATA 2018 rounded as used throughout the package)."""

G = 6.674e-11  # m^3 kg^-1 s^-2
HBAR = 1.0546e-34  # J s
M_HE4 = 6.6465e-27  # kg, He-4 atomic mass
EPS0 = 8.854e-12  # F/m
OMEGA_EARTH = 7.292e-5  # rad/s, sidereal rotation rate

COULOMB_K = 1.0 / (4.0 * 3.141592653589793 * EPS0)
