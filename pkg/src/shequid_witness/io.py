"""CSV and report formats.

TimeSeries CSV::

    # shequid-witness timeseries v1
    # sample_rate = 100.0
    # seed = 0
    # config: <one line of the resolved TOML config>
    ...
    t,y,d_t,model,heater_on,seed
    0.0,0.93,0.01,qg,1,0
"""
from __future__ import annotations

import csv

import numpy as np

from .config import ExperimentConfig, emit_config, parse_config
from .noise_sim import TimeSeries

TIMESERIES_MAGIC = "# shequid-witness timeseries v1"
TIMESERIES_HEADER = ["t", "y", "d_t", "model", "heater_on", "seed"]
CONFIG_PREFIX = "# config: "


def config_comment_lines(config: ExperimentConfig) -> list[str]:
    return [CONFIG_PREFIX + line for line in emit_config(config).splitlines()]


def config_from_comments(lines) -> ExperimentConfig | None:
    body = [ln[len(CONFIG_PREFIX):] for ln in lines if ln.startswith(CONFIG_PREFIX)]
    if not body:
        return None
    return parse_config("\n".join(body) + "\n")


def write_timeseries(series: TimeSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TIMESERIES_MAGIC + "\n")
        fh.write(f"# sample_rate = {series.sample_rate!r}\n")
        fh.write(f"# seed = {series.seed}\n")
        fh.write(f"# model = {series.model}\n")
        fh.write(f"# heater_on = {str(series.heater_on).lower()}\n")
        if series.config is not None:
            fh.write("\n".join(config_comment_lines(series.config)) + "\n")
        fh.write(",".join(TIMESERIES_HEADER) + "\n")
        tail = f",{series.model},{int(series.heater_on)},{series.seed}\n"
        fh.write("".join(f"{t!r},{y!r},{d!r}{tail}"
                         for t, y, d in zip(series.t.tolist(), series.y.tolist(), series.d_t.tolist())))


def read_timeseries(path) -> TimeSeries:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    if not rows or rows[0].split(",") != TIMESERIES_HEADER:
        raise ValueError(f"{path}: expected header {','.join(TIMESERIES_HEADER)}")
    meta = {}
    for ln in comments:
        if " = " in ln and not ln.startswith(CONFIG_PREFIX):
            k, v = ln[1:].split(" = ", 1)
            meta[k.strip()] = v.strip()
    if len(rows) < 2:
        raise ValueError(f"{path}: no samples")
    numeric = np.loadtxt(rows[1:], delimiter=",", usecols=(0, 1, 2), ndmin=2)
    t, y, d_t = numeric.T.copy()
    first = rows[1].split(",")
    model, heater, seed = first[3], first[4] == "1", int(first[5])
    if "sample_rate" in meta:
        fs = float(meta["sample_rate"])
    elif len(t) > 1:
        fs = 1.0 / float(np.median(np.diff(t)))
    else:
        raise ValueError(f"{path}: cannot determine sample rate")
    if len(t) > 2 and not np.allclose(np.diff(t), 1.0 / fs, rtol=1e-6, atol=0):
        raise ValueError(f"{path}: samples are not uniformly spaced at {fs:g} Hz")
    return TimeSeries(t=t, y=y, d_t=d_t, model=model, heater_on=heater, seed=seed,
                      sample_rate=fs, config=config_from_comments(comments))


REPORT_FIELDS = ["verdict", "detection_statistic", "p_value", "n_null", "alpha", "cg_threshold",
                 "heater_ab_delta", "seed", "model", "heater_on"]


def format_report(report, series_meta: dict | None = None) -> str:
    lines = [
        "QG/CG witness report",
        "(decision statistic, null model and thresholds are defined by this tool)",
        f"verdict              : {report.verdict}",
        f"harmonic-1 amplitude : {report.detection_statistic:.6e}",
        f"p-value              : {report.p_value_text}  (empirical, {report.n_null} CG null runs)",
        f"thresholds           : QG if p < {report.alpha:g}, CG if p > {report.cg_threshold:g}",
    ]
    for n, (amp, ph) in enumerate(report.harmonics, start=1):
        lines.append(f"harmonic {n}           : amplitude {amp:.6e}, phase {ph:+.4f} rad")
    if report.heater_ab_delta is not None:
        lines.append(f"heater A/B delta     : {report.heater_ab_delta:.6e}")
    for k, v in (series_meta or {}).items():
        lines.append(f"{k:<21}: {v}")
    if report.config_echo is not None:
        lines.append("")
        lines.extend(config_comment_lines(report.config_echo))
    return "\n".join(lines) + "\n"


def report_row(report, series_meta: dict | None = None) -> dict:
    meta = series_meta or {}
    return {
        "verdict": report.verdict,
        "detection_statistic": repr(report.detection_statistic),
        "p_value": repr(report.p_value),
        "n_null": report.n_null,
        "alpha": report.alpha,
        "cg_threshold": report.cg_threshold,
        "heater_ab_delta": "" if report.heater_ab_delta is None else repr(report.heater_ab_delta),
        "seed": meta.get("seed", ""),
        "model": meta.get("model", ""),
        "heater_on": meta.get("heater_on", ""),
    }


def write_rows_csv(path, fieldnames, rows, config: ExperimentConfig | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if config is not None:
            fh.write("\n".join(config_comment_lines(config)) + "\n")
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
