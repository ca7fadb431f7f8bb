"""Two side-by-side SHeQUIDs as a pair of path qubits.

Basis ordering for a joint amplitude ``a_jk``: j is the arm of interferometer 1,
k of interferometer 2, each either ``u`` (the arm adjacent to the other device)
or ``l`` (the far arm). Flattened order is (uu, ul, lu, ll).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import HBAR, M_HE4
from .coupling import grav_phase
from .superfluid import arm_mass, junction_time, superfluid_density

NORM_TOL = 1e-12


class Model(str, Enum):
    QG = "qg"
    CG = "cg"


class PairMode(str, Enum):
    NEAREST_ONLY = "nearest_only"
    FULL_PAIRWISE = "full_pairwise"


@dataclass
class BranchPhases:
    phi_uu: float | np.ndarray
    phi_ul: float | np.ndarray
    phi_lu: float | np.ndarray
    phi_ll: float | np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.phi_uu, self.phi_ul, self.phi_lu, self.phi_ll), axis=-1)


@dataclass
class JointState:
    """Four complex branch amplitudes; ``amplitudes`` has shape (..., 4)."""

    amplitudes: np.ndarray

    @property
    def a_uu(self):
        return self.amplitudes[..., 0]

    @property
    def a_ul(self):
        return self.amplitudes[..., 1]

    @property
    def a_lu(self):
        return self.amplitudes[..., 2]

    @property
    def a_ll(self):
        return self.amplitudes[..., 3]

    def norm(self):
        return np.sum(np.abs(self.amplitudes) ** 2, axis=-1)

    def density_matrix(self) -> np.ndarray:
        a = self.amplitudes
        return a[..., :, None] * a[..., None, :].conj()


@dataclass
class EntanglementMeasures:
    visibility: float
    concurrence: float
    negativity: float


def pair_distances(geometry, mode=PairMode.NEAREST_ONLY, d=None):
    """Center-to-center distances (d_uu, d_ul, d_lu, d_ll); None entries are dropped pairs."""
    d = geometry.d if d is None else d
    if PairMode(mode) is PairMode.NEAREST_ONLY:
        return d, None, None, None
    far = 2.0 * geometry.L
    # d_ll = 2L + d is a geometric completion: the far-far distance is not fixed by the design
    return d, far, far, far + d


def branch_phases(config, model=Model.QG, mode=PairMode.NEAREST_ONLY, *, m=None, d=None) -> BranchPhases:
    """Branch phases under the QG or CG hypothesis.

    ``m`` and ``d`` override the arm mass and near separation (scalars or
    arrays) so the simulator can evaluate time-varying traces.
    """
    if Model(model) is Model.CG:
        shape = np.broadcast(np.asarray(0.0 if m is None else m), np.asarray(0.0 if d is None else d)).shape
        z = np.zeros(shape) if shape else 0.0
        return BranchPhases(z, z, z, z)

    if m is None:
        sf = config.superfluid
        m = arm_mass(config.geometry, superfluid_density(sf.T, sf.T_lambda, sf.rho_lambda,
                                                          sf.allow_outside_regime))
    dt = junction_time(config.drive.f_J)
    A = config.form_factor()
    phases = []
    for dist in pair_distances(config.geometry, mode, d):
        if dist is None:
            phases.append(np.zeros_like(phases[0]) if np.ndim(phases[0]) else 0.0)
        else:
            phases.append(grav_phase(m, dist, dt, A))
    return BranchPhases(*phases)


def joint_state(phases: BranchPhases) -> JointState:
    """Equal-weight superposition with branch phases: a_jk = exp(i phi_jk) / 2."""
    phi = phases.as_array()
    if not np.all(np.isfinite(phi)):
        raise ValueError("branch phases must be finite")
    return JointState(np.exp(1j * phi) / 2.0)


def reduced_coherence(state: JointState):
    """Off-diagonal element <u|rho_1|l> of interferometer 1's reduced state."""
    return state.a_uu * state.a_lu.conj() + state.a_ul * state.a_ll.conj()


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Partial transpose on the second qubit of a (..., 4, 4) density matrix."""
    r = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    return np.swapaxes(r, -1, -3).reshape(rho.shape)


def negativity(state: JointState):
    """(||rho^T_B||_1 - 1)/2 from the eigenvalues of the partial transpose."""
    ev = np.linalg.eigvalsh(partial_transpose(state.density_matrix()))
    return (np.sum(np.abs(ev), axis=-1) - 1.0) / 2.0


def entanglement_measures(state: JointState) -> EntanglementMeasures:
    norm = state.norm()
    if np.any(np.abs(norm - 1.0) > NORM_TOL):
        raise ValueError(f"state is not normalized (norm = {norm})")
    V = 2.0 * np.abs(reduced_coherence(state))
    C = 2.0 * np.abs(state.a_uu * state.a_ll - state.a_ul * state.a_lu)
    N = negativity(state)
    if np.ndim(V) == 0:
        return EntanglementMeasures(float(V), float(C), float(N))
    return EntanglementMeasures(V, C, N)


def sagnac_phase(omega_perp, loop_area, m4=M_HE4):
    """Rotation-induced matter-wave phase 2 m4 Omega A / hbar (rad)."""
    if not loop_area > 0:
        raise ValueError(f"loop_area must be > 0, got {loop_area}")
    return 2.0 * m4 * omega_perp * loop_area / HBAR


def detector_probability(state: JointState, theta=0.0):
    """Probability of the '+' output port of interferometer 1 for local offset theta."""
    coh = 2.0 * reduced_coherence(state)
    p = 0.5 * (1.0 + np.real(np.exp(1j * np.asarray(theta)) * coh))
    return np.clip(p, 0.0, 1.0)
