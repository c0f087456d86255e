"""Standard WB/SB amplitude quantizers and the RNSQE error metric.

Amplitudes are carried on a linear scale everywhere; the dB domain only
appears at the 3-bit wideband grid and the dB form of the 1-bit subband rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's preconditions."""


#: Grid step of both the WB and the SB quantizer, as printed (10*log10(2)).
STEP_DB = 10.0 * math.log10(2.0)

#: Multiplier used when converting a linear amplitude to dB.  20 treats the
#: values as amplitudes; set to 10 to treat them as powers.
DB_FACTOR = 20.0

NUM_WB_LEVELS = 8

#: Fraction of the WB amplitude at which the linear 1-bit SB quantizer switches.
SB_THRESHOLD = 0.75


def to_db(amplitude, db_factor: float = DB_FACTOR):
    return db_factor * np.log10(amplitude)


def from_db(value_db, db_factor: float = DB_FACTOR):
    return 10.0 ** (np.asarray(value_db, dtype=float) / db_factor)


def _check_finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput(f"{name} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class SubbandAmplitudeVector:
    """Per-subband linear amplitudes of one logical beam."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise InvalidInput("need at least one subband")
        if not np.all(np.isfinite(v)):
            raise InvalidInput("subband amplitudes must be finite")
        if np.any(v < 0):
            raise InvalidInput("subband amplitudes must be non-negative")
        if not np.any(v > 0):
            raise InvalidInput("all-zero subband amplitude vector")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def S(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.S

    def energy(self) -> float:
        return float(np.dot(self.values, self.values))


def as_amplitudes(x) -> SubbandAmplitudeVector:
    if isinstance(x, SubbandAmplitudeVector):
        return x
    return SubbandAmplitudeVector(x)


@dataclass(frozen=True)
class WbLevelGrid:
    anchor_db: float
    levels_db: np.ndarray = field(repr=False)
    step_db: float = STEP_DB

    @classmethod
    def from_anchor(cls, anchor_db: float) -> "WbLevelGrid":
        anchor_db = _check_finite(anchor_db, "anchor_db")
        levels = anchor_db - (NUM_WB_LEVELS - 1 - np.arange(NUM_WB_LEVELS)) * STEP_DB
        levels.setflags(write=False)
        return cls(anchor_db, levels)

    def amplitude(self, k1: int, *, k0_is_zero: bool = True,
                  db_factor: float = DB_FACTOR) -> float:
        """Linear amplitude signalled by WB index ``k1``.

        With ``k0_is_zero`` index 0 reconstructs to zero amplitude even though
        its grid level is used for the nearest-level search.
        """
        k1 = _check_index(k1, NUM_WB_LEVELS, "k1")
        if k1 == 0 and k0_is_zero:
            return 0.0
        return float(from_db(self.levels_db[k1], db_factor))


@dataclass(frozen=True)
class SbLevelPair:
    high_db: float
    low_db: float


@dataclass(frozen=True)
class EstimatorResult:
    wb_amplitude: float
    sb_reconstruction: np.ndarray
    r_vector: np.ndarray
    total_sq_error: float
    rnsqe: float


def _check_index(k, n: int, name: str) -> int:
    if isinstance(k, bool) or int(k) != k or not 0 <= int(k) < n:
        raise InvalidInput(f"{name} must be an integer in 0..{n - 1}, got {k!r}")
    return int(k)


def build_wb_grid(wb_amplitudes_db: Sequence[float]) -> WbLevelGrid:
    """Grid of eight WB levels anchored at the strongest beam (all in dB)."""
    vals = np.asarray(wb_amplitudes_db, dtype=float).ravel()
    if vals.size == 0:
        raise InvalidInput("need at least one WB amplitude")
    if not np.all(np.isfinite(vals)):
        raise InvalidInput("WB amplitudes must be finite")
    return WbLevelGrid.from_anchor(float(vals.max()))


def _nearest_upward(x: float, levels: np.ndarray) -> int:
    # ties resolve to the larger index
    dist = np.abs(x - levels)
    return int(len(levels) - 1 - np.argmin(dist[::-1]))


def quantize_wb_index(p_wb_db: float, grid: WbLevelGrid) -> int:
    x = _check_finite(p_wb_db, "p_wb_db")
    return _nearest_upward(x, grid.levels_db)


def sb_levels_for_beam(grid: WbLevelGrid, k1: int) -> SbLevelPair:
    k1 = _check_index(k1, NUM_WB_LEVELS, "k1")
    high = float(grid.levels_db[k1])
    return SbLevelPair(high_db=high, low_db=high - STEP_DB)


def quantize_sb_index_db(p_sb_db: float, pair: SbLevelPair) -> int:
    """1-bit SB index by nearest level in dB: 0 for the low level, 1 for the high."""
    x = _check_finite(p_sb_db, "p_sb_db")
    return 1 if abs(x - pair.high_db) <= abs(x - pair.low_db) else 0


def quantize_sb_linear(p_sb, p_wb: float) -> np.ndarray:
    """Quantized SB ratios in {1/2, 1}: 1 where p_sb >= 3/4 * p_wb."""
    p_wb = _check_finite(p_wb, "p_wb")
    if p_wb <= 0:
        raise InvalidInput(f"p_wb must be positive, got {p_wb}")
    values = as_amplitudes(p_sb).values
    return np.where(values >= SB_THRESHOLD * p_wb, 1.0, 0.5)


def rnsqe(observed, reconstructed) -> float:
    """Root normalized squared quantization error."""
    obs = np.asarray(observed.values if isinstance(observed, SubbandAmplitudeVector)
                     else observed, dtype=float).ravel()
    rec = np.asarray(reconstructed, dtype=float).ravel()
    if obs.shape != rec.shape:
        raise InvalidInput(f"length mismatch: {obs.size} vs {rec.size}")
    energy = float(np.dot(obs, obs))
    if not energy > 0:
        raise InvalidInput("observed vector has zero energy")
    err = obs - rec
    return math.sqrt(float(np.dot(err, err)) / energy)


def make_result(p_sb, wb: float) -> EstimatorResult:
    """Apply the linear SB quantizer at ``wb`` and score the reconstruction."""
    p = as_amplitudes(p_sb)
    r = quantize_sb_linear(p, wb)
    recon = wb * r
    err = recon - p.values
    for arr in (r, recon):
        arr.setflags(write=False)
    return EstimatorResult(
        wb_amplitude=float(wb),
        sb_reconstruction=recon,
        r_vector=r,
        total_sq_error=float(np.dot(err, err)),
        rnsqe=rnsqe(p, recon),
    )
