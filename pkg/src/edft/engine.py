"""Iterative Extended DFT.

Each iteration builds ``R = E diag(W) E^H / N`` from the current weights and
returns

* ``F = W * (x R^{-1} E)``                (Fourier transform)
* ``S = (x R^{-1} E) / diag(E^H R^{-1} E)`` (amplitude spectrum)

and feeds ``W = |S|^2`` into the next iteration.  Three interchangeable
execution paths evaluate the same step:

``fast``
    uniform, gap-free samples on an FFT-compatible grid; Levinson-Durbin
    plus a Gohberg-Semencul accumulation, O(K^2 + N log N) per iteration.
``gapped``
    uniform samples with missing entries; Toeplitz ``R`` restricted to the
    known rows and columns and inverted densely.
``dense``
    anything else (jittered times, arbitrary grids); full K x K solve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

import numpy as np

from .errors import SingularOrIndefinite, TooFewNonzeroWeights
from .kernel import (
    MAX_CONDITION,
    ExponentMatrix,
    build_exponent_matrix,
    correlation_from_weights,
    diag_quadratic_form,
    hermitian_solve,
    levinson_toeplitz,
    masked_toeplitz_inverse,
    toeplitz_apply_inverse,
)
from .signal_model import FrequencyGrid, SampledSequence, validate_sequence

__all__ = [
    "StopCode",
    "EngineOptions",
    "IterationRecord",
    "SpectrumResult",
    "edft_iteration",
    "run_edft",
    "run_edft_batch",
    "run_edft_2d",
    "resolution_curve",
    "select_path",
    "resolve_path",
    "prepare_input",
    "make_step",
    "iterate_weights",
]

WeightHook = Callable[[int, np.ndarray], np.ndarray]


class StopCode(enum.IntEnum):
    MAX_ITERATIONS = 0
    BUDGET_DEVIATION = 1
    THRESHOLD_REACHED = 2


@dataclass(frozen=True)
class EngineOptions:
    max_iterations: int = 30
    rel_deviation: float = 0.0005
    rel_threshold: float = 0.0001
    initial_weights: Optional[np.ndarray] = None
    max_cond: float = MAX_CONDITION

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if not (self.rel_deviation > 0 and self.rel_threshold > 0):
            raise ValueError("tolerances must be positive")


@dataclass
class IterationRecord:
    """Outputs of one accepted iteration and the weights that produced them."""

    F: np.ndarray
    S: np.ndarray
    weights: np.ndarray
    ratio: np.ndarray
    budget_deviation: float


@dataclass
class SpectrumResult:
    F: np.ndarray
    S: np.ndarray
    iterations_done: int
    stop_code: StopCode
    final_weights: np.ndarray
    grid: FrequencyGrid
    k_known: int
    # F/S, i.e. W * diag(E^H R^-1 E), kept separately to avoid 0/0 where S vanishes
    ratio: np.ndarray
    budget_deviation: float = 0.0
    path: str = "dense"
    history: List[IterationRecord] = field(default_factory=list, repr=False)

    @property
    def N(self) -> int:
        return self.F.size

    @property
    def power_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10 * np.log10(np.abs(self.S) ** 2)

    @property
    def psd_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10 * np.log10(np.abs(self.F) ** 2 / self.N)


# -- single steps -------------------------------------------------------------
#
# A step maps weights W to (x R^-1 E, diag(E^H R^-1 E)).

def _fft_phase(grid: FrequencyGrid, t0: float) -> Optional[np.ndarray]:
    if t0 == 0.0:
        return None
    return np.exp(-2j * np.pi * grid.freqs * t0)


def _fast_step(x: np.ndarray, N: int, phase, W: np.ndarray):
    K = x.size
    r = np.fft.ifft(W)[:K]
    r[0] = r[0].real
    state = levinson_toeplitz(r)
    xr, re = toeplitz_apply_inverse(state, r, x)
    ere = np.real(np.fft.fft(re, N))
    xre = np.fft.fft(xr, N)
    if phase is not None:
        xre = xre * phase
    return xre, ere


def _gapped_step(x0: np.ndarray, mask: np.ndarray, N: int, phase, max_cond, W: np.ndarray):
    K = x0.size
    r = np.fft.ifft(W)[:K]
    r[0] = r[0].real
    invr, er = masked_toeplitz_inverse(r, mask, max_cond=max_cond)
    xr = np.conj(invr) @ x0
    ere = np.real(np.fft.fft(er, N))
    xre = np.fft.fft(xr, N)
    if phase is not None:
        xre = xre * phase
    return xre, ere


def _dense_step(x: np.ndarray, E: ExponentMatrix, max_cond, W: np.ndarray):
    R = correlation_from_weights(E, W, check=False)
    RE = hermitian_solve(R.to_dense(), E.entries, max_cond=max_cond)
    ere = diag_quadratic_form(E.entries, RE, imag_tol=np.inf)
    return x @ RE, ere


def edft_iteration(x, E: ExponentMatrix, W, *, max_cond: float = MAX_CONDITION):
    """One EDFT step for the known samples of ``x``.

    Returns ``(F, S, ERE)``; ``W`` is not modified.  Uses the Levinson path
    when ``E`` is FFT compatible, the dense solve otherwise.
    """
    if isinstance(x, SampledSequence):
        x = x.known_values
    x = np.asarray(x, dtype=complex).ravel()
    K, N = E.shape
    if x.size != K:
        raise ValueError(f"sequence has {x.size} samples but E has {K} rows")
    correlation_from_weights(E, W)  # admissibility check
    W = np.asarray(W, dtype=float)
    if E.fft_compatible and K >= 2:
        t0 = float(E.times[0])
        phase = np.exp(-2j * np.pi * E.freqs * t0) if t0 != 0.0 else None
        xre, ere = _fast_step(x, N, phase, W)
    else:
        xre, ere = _dense_step(x, E, max_cond, W)
    return W * xre, xre / ere, ere


# -- iteration driver ----------------------------------------------------------

def iterate_weights(step, W0: np.ndarray, k_known: int, opts: EngineOptions,
                    weight_hook: Optional[WeightHook] = None,
                    update: Optional[Callable] = None, max_iterations: Optional[int] = None):
    """Run the weight-update loop with the three stop rules.

    ``step(W)`` returns ``(xre, ere)``.  ``update(F, S)`` gives the next
    weights (default ``|S|^2``).  Returns ``(F, S, ratio, W_next, done, code,
    deviation, history)``.
    """
    N = W0.size
    I = opts.max_iterations if max_iterations is None else max_iterations
    F = np.zeros(N, complex)
    S = np.zeros(N, complex)
    ratio = np.zeros(N)
    W = np.asarray(W0, dtype=float)
    history: List[IterationRecord] = []
    sums: List[float] = []
    code, done, deviation = StopCode.MAX_ITERATIONS, I, 0.0
    for it in range(1, I + 1):
        if weight_hook is not None:
            W = np.asarray(weight_hook(it, W.copy()), dtype=float)
        try:
            xre, ere = step(W)
            dev = abs(np.dot(W, ere) / (N * k_known) - 1.0)
        except SingularOrIndefinite:
            dev = math.inf
        if not dev <= opts.rel_deviation:
            code, done, deviation = StopCode.BUDGET_DEVIATION, it - 1, dev
            break
        deviation = dev
        F = W * xre
        S = xre / ere
        ratio = W * ere
        history.append(IterationRecord(F, S, W, ratio, dev))
        W = (np.abs(S) ** 2) if update is None else update(F, S)
        sums.append(float(np.sum(W)))
        if it > 1 and sums[0] > 0:
            if abs(sums[-2] - sums[-1]) / sums[0] <= opts.rel_threshold:
                code, done = StopCode.THRESHOLD_REACHED, it
                break
    return F, S, ratio, W, done, code, deviation, history


def make_step(x: SampledSequence, grid: FrequencyGrid, path: str,
              max_cond: float = MAX_CONDITION):
    """Return ``step(W) -> (x R^-1 E, diag(E^H R^-1 E))`` for the given path."""
    t0 = float(x.times[0])
    N = grid.N
    if path == "fast":
        phase = _fft_phase(grid, t0)
        return lambda W: _fast_step(x.values, N, phase, W)
    if path == "gapped":
        phase = _fft_phase(grid, t0)
        return lambda W: _gapped_step(x.values, x.known_mask, N, phase, max_cond, W)
    xc = x.compact()
    E = build_exponent_matrix(xc.times, grid)
    return lambda W: _dense_step(xc.values, E, max_cond, W)


def resolve_path(x: SampledSequence, grid: FrequencyGrid, path: str = "auto") -> str:
    auto = select_path(x, grid)
    if path == "auto":
        return auto
    if path not in ("fast", "gapped", "dense"):
        raise ValueError(f"unknown path {path!r}")
    if path != "dense" and path != auto:
        raise ValueError(f"path {path!r} is not applicable to this input (auto: {auto})")
    return path


def prepare_input(x: SampledSequence, grid) -> tuple:
    """Validate, resolve an integer grid and truncate to at most N known samples."""
    validate_sequence(x)
    grid = _as_grid(grid, x)
    if x.k_known > grid.N:
        x = x.truncate_known(grid.N)
    return x, grid


def select_path(x: SampledSequence, grid: FrequencyGrid) -> str:
    """Pick ``fast``, ``gapped`` or ``dense`` for this input."""
    g = x.uniform_grid()
    if (g is not None and grid.fft_compatible(g.sample_period)
            and x.K <= grid.N and x.k_known >= 2):
        return "gapped" if x.has_gaps else "fast"
    return "dense"


def _as_grid(grid, x: SampledSequence) -> FrequencyGrid:
    if isinstance(grid, FrequencyGrid):
        return grid
    g = x.uniform_grid()
    T = g.sample_period if g is not None else x.mean_period
    return FrequencyGrid.uniform(int(grid), 0.5 / T)


def run_edft(x: SampledSequence, grid: Union[FrequencyGrid, int],
             opts: Optional[EngineOptions] = None, *, path: str = "auto",
             weight_hook: Optional[WeightHook] = None) -> SpectrumResult:
    """Extended DFT of ``x`` on ``grid``.

    Parameters
    ----------
    x : SampledSequence
        Input samples; masked-out entries are treated as unknown.
    grid : FrequencyGrid or int
        Analysis frequencies.  An integer ``N`` selects the uniform FFT grid
        with ``f_u = 1 / (2 T)``.
    opts : EngineOptions, optional
        Iteration limits and tolerances.
    path : {"auto", "fast", "gapped", "dense"}
        Force an execution path; ``auto`` picks the cheapest valid one.
    weight_hook : callable, optional
        ``hook(iteration, W) -> W`` applied before every iteration.  Intended
        for tests that inject inadmissible weights.
    """
    opts = opts or EngineOptions()
    x, grid = prepare_input(x, grid)
    N = grid.N
    kk = x.k_known
    path = resolve_path(x, grid, path)

    I = opts.max_iterations
    if kk == N:
        W0 = np.ones(N)
        I = 1
    elif opts.initial_weights is not None:
        W0 = np.asarray(opts.initial_weights, dtype=float).ravel()
        if W0.size != N:
            raise ValueError(f"initial weights have length {W0.size}, expected {N}")
        if np.any(W0 < 0) or not np.all(np.isfinite(W0)) or np.count_nonzero(W0 > 0) < kk:
            raise TooFewNonzeroWeights("initial weights need at least K positive entries")
    else:
        W0 = np.ones(N)

    if not np.any(x.known_values):
        z = np.zeros(N, complex)
        return SpectrumResult(z, z.copy(), 1, StopCode.MAX_ITERATIONS, W0, grid, kk,
                              np.zeros(N), 0.0, path)

    t0 = float(x.times[0])
    if path == "fast" and kk == N:
        F = np.fft.fft(x.values, N)
        phase = _fft_phase(grid, t0)
        if phase is not None:
            F = F * phase
        S = F / N
        ratio = np.full(N, float(N))
        rec = IterationRecord(F, S, W0, ratio, 0.0)
        return SpectrumResult(F, S, 1, StopCode.MAX_ITERATIONS, np.abs(S) ** 2, grid, kk,
                              ratio, 0.0, path, [rec])

    step = make_step(x, grid, path, opts.max_cond)
    F, S, ratio, W, done, code, dev, history = iterate_weights(
        step, W0, kk, opts, weight_hook, max_iterations=I)
    return SpectrumResult(F, S, done, code, W, grid, kk, ratio, dev, path, history)


def resolution_curve(res, f_u: Optional[float] = None, T_mean: Optional[float] = None,
                     K_known: Optional[int] = None) -> np.ndarray:
    """Relative frequency resolution ``(F/S) / (2 f_u T_mean K)``.

    Equals 1 everywhere for the classical DFT in one Nyquist zone.
    """
    ratio = getattr(res, "ratio", None)
    if ratio is None:
        ratio = np.real(res.F / res.S)
    if f_u is None:
        f_u = res.grid.upper_freq
    if K_known is None:
        K_known = res.k_known
    if T_mean is None:
        raise ValueError("T_mean is required")
    return np.real(np.asarray(ratio)) / (2.0 * f_u * T_mean * K_known)


# -- batch and 2-D ---------------------------------------------------------------

def run_edft_batch(X, N: int, opts: Optional[EngineOptions] = None, mask=None,
                   T: float = 1.0) -> List[Optional[SpectrumResult]]:
    """Column-wise EDFT of a matrix; each column has its own loop and stop code.

    Columns without any known sample give ``None``.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    M = np.isfinite(X) if mask is None else (np.asarray(mask, bool) & np.isfinite(X))
    grid = FrequencyGrid.uniform(N, 0.5 / T)
    out: List[Optional[SpectrumResult]] = []
    for col in range(X.shape[1]):
        if not M[:, col].any():
            out.append(None)
            continue
        seq = SampledSequence.uniform(np.where(M[:, col], X[:, col], 0), T, M[:, col])
        out.append(run_edft(seq, grid, opts))
    return out


def _columns_F(X, N, opts, mask) -> np.ndarray:
    res = run_edft_batch(X, N, opts, mask)
    return np.column_stack([np.zeros(N, complex) if r is None else r.F for r in res])


def run_edft_2d(x, rows_out: Optional[int] = None, cols_out: Optional[int] = None,
                opts: Optional[EngineOptions] = None, mask=None) -> np.ndarray:
    """Two-dimensional EDFT: columns first, then rows of the intermediate.

    NaN entries (or ``mask == False``) are unknown.  A vector input is
    transformed along its length and keeps its orientation.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.size == 0:
        raise ValueError("expected a non-empty 2-D array")
    m, n = x.shape
    rows_out = m if rows_out is None else int(rows_out)
    cols_out = n if cols_out is None else int(cols_out)
    if mask is not None:
        mask = np.asarray(mask, bool)
    if m == 1 or n == 1:
        if m == 1:
            return _columns_F(x.T, cols_out, opts, None if mask is None else mask.T).T
        return _columns_F(x, rows_out, opts, mask)
    f = _columns_F(x, rows_out, opts, mask)
    return _columns_F(f.T, cols_out, opts, None).T
