"""Monte-Carlo comparison of the WB estimators on random frequency-selective beams.

Each trial draws S Gaussian SB amplitudes and shifts them so the smallest one
equals a fixed minimum amplitude.  Every trial owns a random stream derived
from ``(seed, min_amplitude index, variance index, trial index)``, so results do
not depend on evaluation order or on the number of worker processes.
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .amplitude import InvalidInput, SubbandAmplitudeVector
from .estimators import Method, brute_force_oracle, evaluate_estimator

log = logging.getLogger(__name__)

DEFAULT_VARIANCES = (0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0)
DEFAULT_MIN_AMPLITUDES = (1.0, 2.0, 4.0)
CSV_HEADER = ("min_amplitude", "variance", "method", "rms_nsqe", "mean_nsqe", "trials", "seed")

ORACLE_SLACK = 1e-6


@dataclass
class SweepConfig:
    subband_count: int = 10
    variances: Sequence[float] = DEFAULT_VARIANCES
    min_amplitudes: Sequence[float] = DEFAULT_MIN_AMPLITUDES
    trials: int = 10_000
    seed: int = 0
    methods: Sequence[Method] = tuple(Method)
    oracle_check: bool = False
    oracle_grid_points: int = 1000

    def __post_init__(self):
        self.variances = tuple(float(v) for v in self.variances)
        self.min_amplitudes = tuple(float(m) for m in self.min_amplitudes)
        self.methods = tuple(sorted({Method.parse(m) for m in self.methods},
                                    key=lambda m: m.value))
        if self.subband_count < 2:
            raise InvalidInput("subband_count must be at least 2")
        if not self.variances or any(not (v > 0 and math.isfinite(v)) for v in self.variances):
            raise InvalidInput("variances must be positive and finite")
        if not self.min_amplitudes or any(not (m > 0 and math.isfinite(m))
                                          for m in self.min_amplitudes):
            raise InvalidInput("min_amplitudes must be positive and finite")
        if self.trials < 1:
            raise InvalidInput("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidInput("seed must be an unsigned 64-bit integer")
        if not self.methods:
            raise InvalidInput("at least one method is required")


@dataclass(frozen=True)
class SweepRow:
    min_amplitude: float
    variance: float
    method: str
    rms_nsqe: float
    mean_nsqe: float
    trials: int
    seed: int


def trial_rng(seed: int, min_index: int, variance_index: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(min_index, variance_index, trial))
    return np.random.Generator(np.random.PCG64(ss))


def generate_sb_amplitudes(S: int, variance: float, min_amplitude: float,
                           rng: np.random.Generator) -> SubbandAmplitudeVector:
    if S < 2:
        raise InvalidInput("need at least two subbands")
    if not (variance > 0 and min_amplitude > 0):
        raise InvalidInput("variance and min_amplitude must be positive")
    draws = rng.normal(0.0, math.sqrt(variance), size=S)
    shifted = draws + (min_amplitude - draws.min())
    # the argmin entry must land on min_amplitude exactly, not up to rounding
    shifted[np.argmin(draws)] = min_amplitude
    return SubbandAmplitudeVector(shifted)


@dataclass
class _PointResult:
    min_index: int
    variance_index: int
    sq_sum: dict = field(default_factory=dict)
    lin_sum: dict = field(default_factory=dict)


def _run_point(cfg: SweepConfig, mi: int, vi: int) -> _PointResult:
    out = _PointResult(mi, vi, {m: 0.0 for m in cfg.methods}, {m: 0.0 for m in cfg.methods})
    amin, var = cfg.min_amplitudes[mi], cfg.variances[vi]
    for t in range(cfg.trials):
        p = generate_sb_amplitudes(cfg.subband_count, var, amin, trial_rng(cfg.seed, mi, vi, t))
        for m in cfg.methods:
            res = evaluate_estimator(p, m)
            out.sq_sum[m] += res.rnsqe ** 2
            out.lin_sum[m] += res.rnsqe
            if cfg.oracle_check and m is Method.OPTIMAL:
                _, oracle_err = brute_force_oracle(p, cfg.oracle_grid_points)
                if res.total_sq_error > oracle_err + ORACLE_SLACK:
                    raise RuntimeError(
                        f"optimal estimator beaten by oracle at min={amin}, var={var}, "
                        f"trial={t}: {res.total_sq_error} > {oracle_err}")
    return out


def _run_point_args(args):
    return _run_point(*args)


def run_sweep(config: SweepConfig, workers: int = 1) -> list[SweepRow]:
    points = [(config, mi, vi) for mi in range(len(config.min_amplitudes))
              for vi in range(len(config.variances))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point_args, points))
    else:
        results = [_run_point_args(a) for a in points]

    rows = []
    for res in results:
        amin = config.min_amplitudes[res.min_index]
        var = config.variances[res.variance_index]
        log.debug("point min=%g var=%g done", amin, var)
        for m in config.methods:
            rows.append(SweepRow(
                min_amplitude=amin, variance=var, method=m.value,
                rms_nsqe=math.sqrt(res.sq_sum[m] / config.trials),
                mean_nsqe=res.lin_sum[m] / config.trials,
                trials=config.trials, seed=config.seed,
            ))
    rows.sort(key=lambda r: (r.min_amplitude, r.variance, r.method))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def write_csv(rows: Iterable[SweepRow], destination) -> None:
    path = Path(destination)
    ordered = sorted(rows, key=lambda r: (r.min_amplitude, r.variance, r.method))
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in ordered:
                w.writerow([_fmt(r.min_amplitude), _fmt(r.variance), r.method,
                            _fmt(r.rms_nsqe), _fmt(r.mean_nsqe), r.trials, r.seed])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
