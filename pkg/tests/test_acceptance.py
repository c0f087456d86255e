"""Exit criteria.  Each test records one PASS/FAIL line shown in the terminal summary."""
import math
import time

import numpy as np
import pytest

from t2amp.amplitude import (
    WbLevelGrid,
    quantize_sb_index_db,
    quantize_sb_linear,
    quantize_wb_index,
    rnsqe,
    sb_levels_for_beam,
)
from t2amp.cli import main
from t2amp.codebook import BeamSet, LayerCoefficients, assemble_layer, assemble_precoder
from t2amp.estimators import Method, brute_force_oracle, evaluate_estimator, region_candidates
from t2amp.harness import DEFAULT_VARIANCES, SweepConfig, run_sweep

from .conftest import random_vectors

EXACT = 1e-12


def test_ac1_golden_two_subband_example(report):
    x = [0.5, 1.0]
    lin = evaluate_estimator(x, Method.LINEAR)
    sub = evaluate_estimator(x, Method.SUBOPTIMAL)
    opt = evaluate_estimator(x, Method.OPTIMAL)
    cands = region_candidates(x)
    checks = {
        "linear wb": abs(lin.wb_amplitude - 0.75) <= EXACT,
        "linear recon": np.allclose(lin.sb_reconstruction, [0.375, 0.75], rtol=0, atol=EXACT),
        "linear rnsqe": abs(lin.rnsqe - 0.25) <= EXACT,
        "regions": np.allclose([c.lower for c in cands[1:]] + [c.upper for c in cands[:-1]],
                               [2 / 3, 4 / 3, 2 / 3, 4 / 3], rtol=0, atol=EXACT)
                   and cands[0].lower == -math.inf and cands[-1].upper == math.inf,
        "p*": np.allclose([c.unconstrained_min for c in cands], [3 / 4, 1, 3 / 2], rtol=0, atol=EXACT),
        "clamped": np.allclose([c.clamped_min for c in cands], [2 / 3, 1, 3 / 2], rtol=0, atol=EXACT),
        "g": np.allclose([c.objective for c in cands], [5 / 36, 0, 1 / 8], rtol=0, atol=EXACT),
        "optimal wb": abs(opt.wb_amplitude - 1.0) <= EXACT,
        "optimal rnsqe": abs(opt.rnsqe) <= EXACT,
        "suboptimal wb": abs(sub.wb_amplitude - 0.9) <= EXACT,
        "suboptimal recon": np.allclose(sub.sb_reconstruction, [0.45, 0.9], rtol=0, atol=EXACT),
        "suboptimal rnsqe": abs(sub.rnsqe - 0.1) <= EXACT,
    }
    failed = [k for k, ok in checks.items() if not ok]
    report("AC1 golden worked example", not failed, f"failed={failed}" if failed else "all exact")
    assert not failed


def test_ac2_oracle_equivalence(report):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst = 0.0
    for x in random_vectors(rng, 1000, 2, 20, 10.0):
        opt = evaluate_estimator(x, Method.OPTIMAL)
        _, oracle_err = brute_force_oracle(x, 10**6)
        worst = max(worst, abs(opt.total_sq_error - oracle_err))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6
    report("AC2 oracle equivalence (1e3 vectors, 1e6 grid)", ok,
           f"max |diff|={worst:.3g} <= 1e-6, {dt:.1f}s")
    assert ok


def test_ac3_per_instance_dominance(report):
    rng = np.random.default_rng(99)
    violations = 0
    for x in random_vectors(rng, 10_000, 2, 20, 10.0):
        e_opt = evaluate_estimator(x, Method.OPTIMAL).total_sq_error
        e_lin = evaluate_estimator(x, Method.LINEAR).total_sq_error
        e_sub = evaluate_estimator(x, Method.SUBOPTIMAL).total_sq_error
        violations += (e_opt > e_lin) + (e_opt > e_sub)
    report("AC3 optimal dominates per instance (1e4 vectors)", violations == 0,
           f"violations={violations}")
    assert violations == 0


def test_ac4_constant_vectors(report):
    worst = 0.0
    for c in (1.0, 2.0, 4.0):
        for S in (2, 10):
            x = [c] * S
            worst = max(worst,
                        evaluate_estimator(x, Method.LINEAR).rnsqe,
                        evaluate_estimator(x, Method.OPTIMAL).rnsqe,
                        abs(evaluate_estimator(x, Method.SUBOPTIMAL).rnsqe - 0.2))
    ok = worst <= EXACT
    report("AC4 constant-vector limits", ok, f"max deviation={worst:.3g}")
    assert ok


def test_ac5_sweep_orderings(report):
    cfg = SweepConfig(subband_count=10, variances=DEFAULT_VARIANCES,
                      min_amplitudes=(1.0, 2.0, 4.0), trials=10_000, seed=2018)
    t0 = time.perf_counter()
    rows = run_sweep(cfg)
    dt = time.perf_counter() - t0
    points = {}
    for r in rows:
        points.setdefault((r.min_amplitude, r.variance), {})[r.method] = r.rms_nsqe
    failures = []
    for (amin, var), v in sorted(points.items()):
        if not v["optimal"] <= min(v["linear"], v["suboptimal"]):
            failures.append(f"optimal not best at min={amin} var={var}")
        if var >= 4 and not v["suboptimal"] < v["linear"]:
            failures.append(f"suboptimal !< linear at min={amin} var={var}")
        if var <= 0.01 and not v["linear"] < v["suboptimal"]:
            failures.append(f"linear !< suboptimal at min={amin} var={var}")
    report("AC5 sweep orderings (S=10, 1e4 trials)", not failures,
           f"{len(points)} points, {dt:.1f}s" + (f", {failures}" if failures else ""))
    assert not failures


def test_ac6_quantizer_units(report):
    problems = []
    for anchor in (0.0, -6.02, 13.7):
        grid = WbLevelGrid.from_anchor(anchor)
        if [quantize_wb_index(grid.levels_db[m], grid) for m in range(8)] != list(range(8)):
            problems.append(f"wb idempotence anchor={anchor}")
        for k1 in range(8):
            pair = sb_levels_for_beam(grid, k1)
            if (quantize_sb_index_db(pair.high_db, pair), quantize_sb_index_db(pair.low_db, pair)) != (1, 0):
                problems.append(f"sb endpoints anchor={anchor} k1={k1}")
    for wb in (0.8, 1.0, 3.3, 1e-3):
        if quantize_sb_linear([0.75 * wb], wb)[0] != 1.0:
            problems.append(f"threshold wb={wb}")
    rng = np.random.default_rng(5)
    for _ in range(100):
        x, y = rng.uniform(0.01, 10, 8), rng.uniform(0, 10, 8)
        for alpha in (0.5, 3.0):
            if abs(rnsqe(alpha * x, alpha * y) - rnsqe(x, y)) > EXACT:
                problems.append(f"scale invariance alpha={alpha}")
    report("AC6 quantizer unit suite", not problems, f"problems={problems[:3]}" if problems else "ok")
    assert not problems


def test_ac7_precoder_normalization(report):
    rng = np.random.default_rng(7)
    dims, over = (4, 2), (4, 4)
    worst = 0.0
    for _ in range(1000):
        L = int(rng.integers(2, 5))
        S = int(rng.integers(1, 5))
        flat = rng.choice(dims[0] * over[0] * dims[1] * over[1], size=L, replace=False)
        beams = BeamSet(dims, over, tuple((int(f // 8), int(f % 8)) for f in flat))
        layers = []
        for _ in range(2):
            bits = int(rng.integers(2, 4))
            coeffs = LayerCoefficients(
                wb_amp=rng.uniform(0.05, 1.0, 2 * L),
                sb_amp=rng.choice([0.5, 1.0], size=(S, 2 * L)),
                phases=np.exp(2j * np.pi * rng.integers(0, 2**bits, size=(S, 2 * L)) / 2**bits),
                phase_bits=bits,
            )
            layers.append(assemble_layer(beams, coeffs, int(rng.integers(0, S))))
        w1 = assemble_precoder(layers[:1], 1).columns
        w2 = assemble_precoder(layers, 2).columns
        worst = max(worst, abs(np.linalg.norm(w1) - 1.0),
                    *np.abs(np.linalg.norm(w2, axis=0) - 1 / math.sqrt(2)))
    ok = worst <= 1e-9
    report("AC7 precoder normalization (1e3 sets)", ok, f"max deviation={worst:.3g}")
    assert ok


@pytest.mark.parametrize("workers", [(1, 1), (1, 3)])
def test_ac8_sweep_determinism(report, tmp_path, workers):
    args = ["sweep", "--subbands", "10", "--variances", "0.01,1,8", "--min-amplitudes", "1,2,4",
            "--trials", "200", "--seed", "0xC0FFEE"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    rc = (main(args + ["--out", str(a), "--workers", str(workers[0])]),
          main(args + ["--out", str(b), "--workers", str(workers[1])]))
    ok = rc == (0, 0) and a.read_bytes() == b.read_bytes()
    report(f"AC8 byte-identical sweep CSV (workers {workers[0]} vs {workers[1]})", ok,
           f"exit codes={rc}")
    assert ok
