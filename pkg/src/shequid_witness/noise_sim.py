"""Time-domain simulation of the piezo-modulated measurement protocol."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .interferometer import (
    Model,
    branch_phases,
    detector_probability,
    joint_state,
    sagnac_phase,
)
from .superfluid import arm_mass, superfluid_density

SIX_HOURS = 6 * 3600.0

# independent random streams inside one run; order is part of the seeding contract
_STREAMS = ("vortex", "temperature", "rotation", "readout")


@dataclass
class NoiseParams:
    vortex_rate: float = 1.0 / (4 * 3600)
    vortex_jump_rms: float = 1e-2
    baseline_drift_bound: float = 2e-3
    temp_rms: float = 50e-9
    temp_corr_time: float = 100.0
    rotation_noise_asd: float = 0.0
    readout_noise_rms: float = 1e-3

    def validate(self, prefix: str = "noise") -> None:
        for name, value in vars(self).items():
            if not value >= 0:
                raise ValueError(f"{prefix}.{name} must be >= 0, got {value}")
        if self.temp_rms > 0 and not self.temp_corr_time > 0:
            raise ValueError(f"{prefix}.temp_corr_time must be > 0 when temp_rms > 0")

    @classmethod
    def quiet(cls) -> "NoiseParams":
        """All noise sources switched off."""
        return cls(vortex_rate=0.0, vortex_jump_rms=0.0, baseline_drift_bound=0.0, temp_rms=0.0,
                   rotation_noise_asd=0.0, readout_noise_rms=0.0)


@dataclass
class TimeSeries:
    t: np.ndarray
    y: np.ndarray
    d_t: np.ndarray
    model: str
    heater_on: bool
    seed: int
    sample_rate: float
    config: object = None

    def __len__(self):
        return len(self.t)

    @property
    def duration(self) -> float:
        return len(self.t) / self.sample_rate


def stream_rngs(seed: int) -> dict[str, np.random.Generator]:
    """Per-source generators derived from one run seed."""
    children = np.random.SeedSequence(seed).spawn(len(_STREAMS))
    return {name: np.random.default_rng(ss) for name, ss in zip(_STREAMS, children)}


def run_seed(master_seed: int, index: int) -> int:
    """Seed of run ``index`` in an ensemble or sweep driven by ``master_seed``."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, np.uint64)[0] >> 1)


def vortex_events(params: NoiseParams, duration: float, seed=None, rng=None):
    """Poisson vortex events in [0, duration) as a list of (time, phase jump)."""
    if not duration > 0:
        raise ValueError(f"duration must be > 0, got {duration}")
    rng = np.random.default_rng(seed) if rng is None else rng
    if params.vortex_rate == 0:
        return []
    n = rng.poisson(params.vortex_rate * duration)
    times = np.sort(rng.uniform(0.0, duration, n))
    jumps = rng.normal(0.0, params.vortex_jump_rms, n)
    return list(zip(times.tolist(), jumps.tolist()))


def vortex_offsets(params: NoiseParams, t: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Accumulated vortex phase on the sample grid: step jumps plus a slow linear drift.

    The drift rate is drawn uniformly so that its 6 h accumulation stays
    strictly inside +/- baseline_drift_bound.
    """
    duration = float(t[-1] - t[0]) + (t[1] - t[0] if len(t) > 1 else 1.0)
    events = vortex_events(params, duration, rng=rng)
    offset = np.zeros_like(t)
    if events:
        times, jumps = np.array(events).T
        offset += np.concatenate(([0.0], np.cumsum(jumps)))[np.searchsorted(times, t - t[0], side="right")]
    drift = rng.uniform(-1.0, 1.0) * params.baseline_drift_bound / SIX_HOURS
    return offset + drift * (t - t[0])


def temperature_series(params: NoiseParams, duration: float, sample_rate: float, seed=None, rng=None):
    """Stationary AR(1) temperature offsets (K) with RMS temp_rms and correlation time temp_corr_time."""
    if not duration > 0 or not sample_rate > 0:
        raise ValueError("duration and sample_rate must be > 0")
    n = int(round(duration * sample_rate))
    rng = np.random.default_rng(seed) if rng is None else rng
    if params.temp_rms == 0:
        return np.zeros(n)
    a = math.exp(-1.0 / (sample_rate * params.temp_corr_time))
    w = rng.standard_normal(n)
    x0 = params.temp_rms * w[0]
    drive = params.temp_rms * math.sqrt(1.0 - a * a) * w[1:]
    x, _ = signal.lfilter([1.0], [1.0, -a], drive, zi=[a * x0])
    return np.concatenate(([x0], x))


@functools.lru_cache(maxsize=8)
def _sample_grid(n, sample_rate, f_m, waveform):
    t = np.arange(n) / sample_rate
    mod = modulation(t, f_m, waveform)
    t.flags.writeable = False
    mod.flags.writeable = False
    return t, mod


def modulation(t, f_m, waveform="sine"):
    """Unit piezo waveform; the separation is d - delta_d * modulation(t)."""
    s = np.sin(2.0 * np.pi * f_m * t)
    if waveform == "square":
        return np.sign(s)
    return s


def simulate_run(config, model=None, noise=None, heater_on=None, duration=None,
                 sample_rate=None, seed=None) -> TimeSeries:
    """Sample the detector output of interferometer 1 over one run.

    Unspecified arguments fall back to the values in ``config``. With the
    heater off the baths are phase-locked through the film, so the run
    behaves as CG whatever the model.
    """
    model = Model(config.model if model is None else model)
    noise = config.noise if noise is None else noise
    heater_on = config.heater_on if heater_on is None else heater_on
    duration = config.run.duration if duration is None else duration
    sample_rate = config.run.sample_rate if sample_rate is None else sample_rate
    seed = config.seed if seed is None else seed
    drive, geom, sf = config.drive, config.geometry, config.superfluid

    if not sample_rate >= 10 * drive.f_m:
        raise ValueError(f"sample_rate must be >= 10 * f_m ({10 * drive.f_m:g} Hz), got {sample_rate:g}")
    if not duration >= 10 / drive.f_m:
        raise ValueError(f"duration must be >= 10 / f_m ({10 / drive.f_m:g} s), got {duration:g}")

    rngs = stream_rngs(seed)
    n = int(round(duration * sample_rate))
    t, mod = _sample_grid(n, float(sample_rate), float(drive.f_m), drive.waveform)

    d_t = geom.d - drive.delta_d * mod

    theta = sagnac_phase(config.omega_perp, geom.loop_area) + vortex_offsets(noise, t, rngs["vortex"])
    if noise.rotation_noise_asd > 0:
        # white angular-velocity noise with one-sided ASD S has per-sample std S sqrt(fs/2)
        omega_noise = rngs["rotation"].normal(0.0, noise.rotation_noise_asd * math.sqrt(sample_rate / 2), n)
        theta = theta + sagnac_phase(omega_noise, geom.loop_area)

    effective = model if heater_on else Model.CG
    if effective is Model.CG:
        # all branch phases vanish: unit coherence, full-contrast fringe in theta
        y = 0.5 * (1.0 + np.cos(theta))
    else:
        temps = sf.T + temperature_series(noise, duration, sample_rate, rng=rngs["temperature"])[:n]
        m_t = arm_mass(geom, superfluid_density(temps, sf.T_lambda, sf.rho_lambda, sf.allow_outside_regime))
        state = joint_state(branch_phases(config, effective, config.mode, m=m_t, d=d_t))
        y = detector_probability(state, theta)
    y = _readout(y, noise, config.run, rngs["readout"])

    return TimeSeries(t=t.copy(), y=y, d_t=d_t, model=model.value, heater_on=bool(heater_on), seed=int(seed),
                      sample_rate=float(sample_rate), config=config)


def _readout(p, noise, run, rng):
    if run.readout_mode == "shot":
        return rng.binomial(run.shots_per_sample, p) / run.shots_per_sample
    if noise.readout_noise_rms > 0:
        noisy = rng.standard_normal(p.shape)
        noisy *= noise.readout_noise_rms
        noisy += p
        return noisy
    return p
