"""Lock-in demodulation, Monte Carlo null calibration and the QG/CG decision.

The statistical layer (detection statistic, empirical null, two-threshold
verdict) is a procedure defined by this package, not by the experiment
proposal; reports label it as such.
"""
from __future__ import annotations

import dataclasses
import functools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .interferometer import Model
from .noise_sim import TimeSeries, run_seed, simulate_run

log = logging.getLogger(__name__)

QG_CONSISTENT = "QG-consistent"
CG_CONSISTENT = "CG-consistent"
INCONCLUSIVE = "inconclusive"


@dataclass
class LockinResult:
    amplitudes: np.ndarray  # harmonic n = 1..N at index n-1
    phases: np.ndarray
    noise_floor: float
    integration_time: float
    n_samples: int
    truncated: int = 0  # samples dropped to reach whole modulation periods

    @property
    def complex_amplitudes(self) -> np.ndarray:
        return self.amplitudes * np.exp(1j * self.phases)

    @property
    def statistic(self) -> float:
        return float(self.amplitudes[0])


@dataclass
class WitnessReport:
    verdict: str
    detection_statistic: float
    p_value: float
    n_null: int
    alpha: float
    cg_threshold: float
    heater_ab_delta: float | None = None
    config_echo: object = None
    harmonics: list = field(default_factory=list)

    @property
    def p_value_text(self) -> str:
        if self.p_value == 0:
            return f"< {1 / self.n_null:.3g}"
        return f"{self.p_value:.4g}"


def lockin(series, f_m: float, n_harmonics: int = 2, sample_rate: float | None = None,
           noise_floor: bool = True) -> LockinResult:
    """Demodulate a uniformly sampled series at f_m and its harmonics.

    ``series`` is a :class:`TimeSeries` or a plain array (then
    ``sample_rate`` is required). Only whole modulation periods are used;
    the harmonic n complex amplitude is ``(2/N) sum y exp(-2 pi i n f_m t)``
    so that ``y ~ |Z| cos(2 pi n f_m t + arg Z)``.
    """
    if isinstance(series, TimeSeries):
        y, fs, t0 = np.asarray(series.y, float), series.sample_rate, float(series.t[0])
    else:
        if sample_rate is None:
            raise ValueError("sample_rate is required for a bare array")
        y, fs, t0 = np.asarray(series, float), float(sample_rate), 0.0
    if not f_m < fs / 2:
        raise ValueError(f"modulation frequency {f_m:g} Hz is at or above Nyquist ({fs / 2:g} Hz)")
    if n_harmonics < 1:
        raise ValueError("n_harmonics must be >= 1")
    n_periods = int(np.floor(len(y) * f_m / fs + 1e-9))
    if n_periods < 10:
        raise ValueError(f"series spans {len(y) * f_m / fs:.3g} modulation periods, need >= 10")

    n_use = int(round(n_periods * fs / f_m))
    n_use = min(n_use, len(y))
    truncated = len(y) - n_use
    if truncated:
        log.info("lock-in: dropped %d trailing samples to keep %d whole periods", truncated, n_periods)
    y = y[:n_use]

    z = np.empty(n_harmonics, dtype=complex)
    for n in range(1, n_harmonics + 1):
        c, s = _reference(n_use, fs, f_m * n, t0)
        z[n - 1] = 2.0 / n_use * complex(y @ c, -(y @ s))

    return LockinResult(
        amplitudes=np.abs(z),
        phases=np.angle(z),
        noise_floor=_noise_floor(y, n_periods, n_harmonics) if noise_floor else float("nan"),
        integration_time=n_use / fs,
        n_samples=n_use,
        truncated=truncated,
    )


@functools.lru_cache(maxsize=16)
def _reference(n, fs, f, t0):
    """Reference oscillator cos/sin(2 pi f t) on the sample grid (shared, read-only)."""
    w = 2.0 * np.pi * f * (t0 + np.arange(n) / fs)
    c, s = np.cos(w), np.sin(w)
    c.flags.writeable = False
    s.flags.writeable = False
    return c, s


def _noise_floor(y, n_periods, n_harmonics):
    """RMS single-bin amplitude over off-harmonic FFT bins below (N_h + 1) f_m."""
    spec = 2.0 / len(y) * np.abs(np.fft.rfft(y - y.mean()))
    top = min((n_harmonics + 1) * n_periods, len(spec) - 1)
    bins = np.arange(1, top + 1)
    bins = bins[bins % n_periods != 0]
    if bins.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(spec[bins] ** 2)))


def _null_amplitude(args):
    config, seed, n_harmonics = args
    series = simulate_run(config, model=Model.CG, heater_on=True, seed=seed)
    return lockin(series, config.drive.f_m, n_harmonics, noise_floor=False).statistic


def null_calibration(config, noise=None, n_runs: int = 200, seed: int | None = None,
                     n_jobs: int = 1, n_harmonics: int = 1) -> np.ndarray:
    """Harmonic-1 amplitudes of ``n_runs`` CG simulations.

    Run i uses ``run_seed(seed, i)``, so the result does not depend on
    ``n_jobs`` or scheduling order.
    """
    if n_runs < 100:
        raise ValueError(f"n_runs must be >= 100, got {n_runs}")
    seed = config.seed if seed is None else seed
    if noise is not None:
        config = dataclasses.replace(config, noise=noise)
    jobs = [(config, run_seed(seed, i), n_harmonics) for i in range(n_runs)]
    if n_jobs == 1:
        out = [_null_amplitude(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            out = list(pool.map(_null_amplitude, jobs, chunksize=max(1, n_runs // (4 * n_jobs))))
    return np.asarray(out)


def empirical_p_value(statistic: float, null) -> float:
    """Fraction of null samples at least as large as ``statistic``."""
    null = np.asarray(null, float)
    return float(np.count_nonzero(null >= statistic)) / null.size


def witness_decision(measured: LockinResult, null, alpha: float = 0.01, cg_threshold: float = 0.05,
                     heater_off: LockinResult | None = None, config=None) -> WitnessReport:
    """QG/CG verdict from the harmonic-1 amplitude and an empirical CG null.

    p < alpha -> QG-consistent; p > cg_threshold -> CG-consistent; in between
    inconclusive. With a heater-off lock-in result the heater A/B difference
    of harmonic-1 amplitudes is reported as well.
    """
    if null is None or len(null) == 0:
        raise ValueError("missing null distribution: run null_calibration first")
    if not 0 < alpha <= cg_threshold < 1:
        raise ValueError("need 0 < alpha <= cg_threshold < 1")
    stat = measured.statistic
    p = empirical_p_value(stat, null)
    if p < alpha:
        verdict = QG_CONSISTENT
    elif p > cg_threshold:
        verdict = CG_CONSISTENT
    else:
        verdict = INCONCLUSIVE
    return WitnessReport(
        verdict=verdict,
        detection_statistic=stat,
        p_value=p,
        n_null=len(null),
        alpha=alpha,
        cg_threshold=cg_threshold,
        heater_ab_delta=None if heater_off is None else stat - heater_off.statistic,
        config_echo=config,
        harmonics=list(zip(measured.amplitudes.tolist(), measured.phases.tolist())),
    )
