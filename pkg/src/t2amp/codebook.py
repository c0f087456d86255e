"""Type-2 precoder assembly and the WB-only / joint WB+SB amplitude feedback path.

Logical beam ``i`` in ``0..2L-1`` is polarization ``i // L`` of physical beam
``i % L``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .amplitude import (
    DB_FACTOR,
    NUM_WB_LEVELS,
    InvalidInput,
    WbLevelGrid,
    as_amplitudes,
    build_wb_grid,
    quantize_sb_linear,
    quantize_wb_index,
    to_db,
)
from .estimators import Method, wb_for_method

_NORM_TOL = 1e-12
_PHASE_TOL = 1e-9


class FeedbackMode(str, enum.Enum):
    WB_ONLY = "wb_only"
    JOINT_WB_AND_SB = "joint_wb_and_sb"


@dataclass(frozen=True)
class QuantizedFeedback:
    k1: tuple[int, ...]
    k2: tuple[tuple[int, ...], ...]
    mode: FeedbackMode
    grid: WbLevelGrid | None = field(default=None, compare=False)

    def __post_init__(self):
        if any(not 0 <= k < NUM_WB_LEVELS for k in self.k1):
            raise InvalidInput(f"k1 entries must lie in 0..7: {self.k1}")
        if self.mode is FeedbackMode.WB_ONLY and self.k2:
            raise InvalidInput("WB-only feedback carries no SB indices")
        if self.mode is FeedbackMode.JOINT_WB_AND_SB:
            if len(self.k2) != len(self.k1):
                raise InvalidInput("one SB index row per logical beam required")
            if any(k not in (0, 1) for row in self.k2 for k in row):
                raise InvalidInput("k2 entries must be 0 or 1")


def generate_dft_beam(antenna_dims: tuple[int, int], oversampling: tuple[int, int],
                      theta1: int, theta2: int) -> np.ndarray:
    """Unit-norm oversampled 2D DFT beam of length ``N1 * N2`` (n1-major order)."""
    (N1, N2), (O1, O2) = antenna_dims, oversampling
    if min(N1, N2, O1, O2) < 1:
        raise InvalidInput("antenna dimensions and oversampling must be positive")
    if not (0 <= theta1 < N1 * O1 and 0 <= theta2 < N2 * O2):
        raise InvalidInput(f"beam index ({theta1}, {theta2}) out of range")
    u1 = np.exp(2j * np.pi * np.arange(N1) * theta1 / (N1 * O1))
    u2 = np.exp(2j * np.pi * np.arange(N2) * theta2 / (N2 * O2))
    return np.kron(u1, u2) / math.sqrt(N1 * N2)


@dataclass(frozen=True)
class BeamSet:
    antenna_dims: tuple[int, int]
    oversampling: tuple[int, int]
    beam_indices: tuple[tuple[int, int], ...]
    beams: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        idx = tuple((int(a), int(b)) for a, b in self.beam_indices)
        if len(idx) not in (2, 3, 4):
            raise InvalidInput(f"L must be 2, 3 or 4, got {len(idx)}")
        if len(set(idx)) != len(idx):
            raise InvalidInput("beam index pairs must be distinct")
        beams = np.stack([generate_dft_beam(self.antenna_dims, self.oversampling, *t)
                          for t in idx])
        beams.setflags(write=False)
        object.__setattr__(self, "beam_indices", idx)
        object.__setattr__(self, "beams", beams)

    @property
    def L(self) -> int:
        return len(self.beam_indices)

    @property
    def ports_per_polarization(self) -> int:
        return self.antenna_dims[0] * self.antenna_dims[1]


def psk_phase(index: int, bits: int) -> complex:
    if bits not in (2, 3):
        raise InvalidInput("phase alphabet must be QPSK (2 bits) or 8PSK (3 bits)")
    return complex(np.exp(2j * np.pi * index / 2**bits))


@dataclass(frozen=True)
class LayerCoefficients:
    """Amplitude and co-phasing coefficients of one layer, indexed by logical beam.

    ``sb_amp`` and ``phases`` have shape ``(num_subbands, 2L)``.
    """

    wb_amp: np.ndarray
    sb_amp: np.ndarray
    phases: np.ndarray
    phase_bits: int = 2

    def __post_init__(self):
        wb = np.asarray(self.wb_amp, dtype=float).ravel()
        sb = np.atleast_2d(np.asarray(self.sb_amp, dtype=float))
        ph = np.atleast_2d(np.asarray(self.phases, dtype=complex))
        n = wb.size
        if n % 2 or n // 2 not in (2, 3, 4):
            raise InvalidInput(f"expected 2L amplitudes with L in 2..4, got {n}")
        if sb.shape[1] != n or ph.shape != sb.shape:
            raise InvalidInput("SB amplitude and phase arrays must be (subbands, 2L)")
        if np.any(wb < 0) or np.any(sb < 0):
            raise InvalidInput("amplitudes must be non-negative")
        if np.any(np.abs(np.abs(ph) - 1.0) > _NORM_TOL):
            raise InvalidInput("phases must have unit modulus")
        if self.phase_bits not in (2, 3):
            raise InvalidInput("phase_bits must be 2 or 3")
        steps = np.angle(ph) * 2**self.phase_bits / (2 * np.pi)
        if np.any(np.abs(steps - np.round(steps)) > _PHASE_TOL):
            raise InvalidInput(f"phases are not {2**self.phase_bits}-PSK points")
        for arr in (wb, sb, ph):
            arr.setflags(write=False)
        object.__setattr__(self, "wb_amp", wb)
        object.__setattr__(self, "sb_amp", sb)
        object.__setattr__(self, "phases", ph)

    @property
    def L(self) -> int:
        return self.wb_amp.size // 2

    @property
    def num_subbands(self) -> int:
        return self.sb_amp.shape[0]


@dataclass(frozen=True)
class PrecoderMatrix:
    columns: np.ndarray  # (2*N1*N2, rank)

    @property
    def rank(self) -> int:
        return self.columns.shape[1]


def assemble_layer(beams: BeamSet, coeffs: LayerCoefficients, subband: int) -> np.ndarray:
    """Unnormalized layer vector ``[w_0; w_1]`` for one subband."""
    L = beams.L
    if coeffs.L != L:
        raise InvalidInput(f"coefficients are for L={coeffs.L}, beams have L={L}")
    if not 0 <= subband < coeffs.num_subbands:
        raise InvalidInput(f"subband {subband} out of range")
    weights = coeffs.wb_amp * coeffs.sb_amp[subband] * coeffs.phases[subband]
    blocks = [weights[r * L:(r + 1) * L] @ beams.beams for r in (0, 1)]
    return np.concatenate(blocks)


def assemble_precoder(layers: Sequence[np.ndarray], rank: int) -> PrecoderMatrix:
    if rank not in (1, 2):
        raise InvalidInput("only rank 1 and rank 2 are supported")
    if len(layers) != rank:
        raise InvalidInput(f"rank {rank} needs {rank} layer vectors, got {len(layers)}")
    cols = np.stack([np.asarray(v, dtype=complex).ravel() for v in layers], axis=1)
    norms = np.linalg.norm(cols, axis=0)
    if np.any(norms == 0):
        raise InvalidInput("zero layer vector cannot be normalized")
    target = 1.0 if rank == 1 else 1.0 / math.sqrt(2.0)
    return PrecoderMatrix(cols * (target / norms))


def compute_feedback(per_beam_sb_amplitudes, mode=FeedbackMode.JOINT_WB_AND_SB,
                     wb_method=Method.LINEAR, *, db_factor: float = DB_FACTOR
                     ) -> QuantizedFeedback:
    """WB (and optionally SB) amplitude indices for all logical beams of a layer."""
    mode = FeedbackMode(mode)
    vecs = [as_amplitudes(v) for v in per_beam_sb_amplitudes]
    if not vecs:
        raise InvalidInput("need at least one logical beam")
    if len({v.S for v in vecs}) != 1:
        raise InvalidInput("all beams must report the same number of subbands")
    wbs = [wb_for_method(v, wb_method) for v in vecs]
    grid = build_wb_grid([float(to_db(w, db_factor)) for w in wbs])
    k1 = tuple(quantize_wb_index(float(to_db(w, db_factor)), grid) for w in wbs)
    k2: tuple[tuple[int, ...], ...] = ()
    if mode is FeedbackMode.JOINT_WB_AND_SB:
        k2 = tuple(tuple(int(r == 1.0) for r in quantize_sb_linear(v, w))
                   for v, w in zip(vecs, wbs))
    return QuantizedFeedback(k1=k1, k2=k2, mode=mode, grid=grid)


def reconstruct_amplitudes(feedback: QuantizedFeedback, *, k0_is_zero: bool = True,
                           db_factor: float = DB_FACTOR) -> tuple[np.ndarray, np.ndarray | None]:
    """Linear WB amplitudes (2L,) and SB factors (S, 2L) implied by the indices.

    SB factors are in {1/2, 1}, or ``None`` for WB-only feedback.
    """
    if feedback.grid is None:
        raise InvalidInput("feedback carries no WB grid")
    wb = np.array([feedback.grid.amplitude(k, k0_is_zero=k0_is_zero, db_factor=db_factor)
                   for k in feedback.k1])
    if feedback.mode is FeedbackMode.WB_ONLY:
        return wb, None
    sb = np.where(np.asarray(feedback.k2) == 1, 1.0, 0.5).T
    return wb, sb
