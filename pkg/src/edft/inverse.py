"""Inverse transforms: recovery, interpolation and extrapolation.

Evaluating the inverse sum at the input's known times returns the original
samples; at masked times it interpolates the gaps, and beyond the
observation window it extrapolates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_model import FrequencyGrid

__all__ = ["ReconstructionRequest", "inedft", "extrapolate_uniform"]

# bound on the size of the temporary exponent block (complex entries)
_BLOCK = 1 << 20


@dataclass(frozen=True, eq=False)
class ReconstructionRequest:
    """Spectrum ``F`` on ``grid`` to be evaluated at ``out_times`` (seconds)."""

    F: np.ndarray
    grid: FrequencyGrid
    out_times: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.F, dtype=complex).ravel()
        t = np.asarray(self.out_times, dtype=float).ravel()
        if F.size != self.grid.N:
            raise ValueError(f"F has {F.size} entries but the grid has {self.grid.N}")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "out_times", t)


def inedft(req, grid: FrequencyGrid = None, out_times=None) -> np.ndarray:
    """Inverse transform ``y_m = (1/N) sum_n F_n exp(+j 2 pi f_n t_m)``.

    Accepts either a :class:`ReconstructionRequest` or ``(F, grid, out_times)``.
    """
    if not isinstance(req, ReconstructionRequest):
        if grid is None or out_times is None:
            raise TypeError("inedft needs a ReconstructionRequest or (F, grid, out_times)")
        req = ReconstructionRequest(req, grid, out_times)
    F, f, t = req.F, req.grid.freqs, req.out_times
    N = f.size
    y = np.empty(t.size, complex)
    step = max(1, _BLOCK // N)
    for i in range(0, t.size, step):
        tb = t[i:i + step]
        y[i:i + step] = np.exp(2j * np.pi * np.outer(tb, f)) @ F
    return y / N


def extrapolate_uniform(F, grid: FrequencyGrid) -> np.ndarray:
    """N-point inverse FFT of ``F`` on a uniform grid.

    Entry ``m`` is the reconstruction at ``t = m / (2 f_u)``.  For a
    transform of ``K`` samples starting at ``t = 0`` the first ``K`` entries
    reproduce the input, entries just above ``K - 1`` are the forward
    extrapolation and entries near ``N - 1`` the backward one.
    """
    if not grid.is_uniform:
        raise ValueError("extrapolate_uniform requires a uniform FFT grid")
    F = np.asarray(F, dtype=complex).ravel()
    if F.size != grid.N:
        raise ValueError(f"F has {F.size} entries but the grid has {grid.N}")
    return np.fft.ifft(F)
