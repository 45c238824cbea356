"""Reference estimators used to cross-check the EDFT.

* classical DFT on arbitrary times and frequencies
* biased autocorrelation and the full-order Capon (minimum variance) PSD
* the iterative filter-bank Capon estimator on the time-reversed input
* generalized weighted least squares with a user supplied ``Q``
* the high-resolution DFT (HRDFT), which feeds ``|F|^2 / N`` back as weights
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Union

import numpy as np
import scipy.linalg

from .engine import (
    EngineOptions,
    SpectrumResult,
    StopCode,
    iterate_weights,
    make_step,
    prepare_input,
    resolve_path,
)
from .errors import SingularAutocorrelation, SingularOrIndefinite, SingularQ, SequenceError
from .kernel import MAX_CONDITION, build_exponent_matrix, correlation_from_weights, hermitian_solve
from .signal_model import FrequencyGrid, SampledSequence, validate_sequence

__all__ = [
    "DFTResult",
    "CaponFilter",
    "HRDFTResult",
    "classical_dft",
    "biased_autocorrelation",
    "autocorrelation_matrix",
    "capon_filter",
    "capon_classic_psd",
    "capon_iterative",
    "gwls_spectrum",
    "hrdft",
]


class DFTResult(NamedTuple):
    F: np.ndarray
    S: np.ndarray
    # F / S; the classical DFT spends K_known on every frequency
    ratio: np.ndarray
    grid: FrequencyGrid
    k_known: int


def _grid_for(x: SampledSequence, grid) -> FrequencyGrid:
    # same integer-N convention as the engine
    return prepare_input(x, grid)[1] if not isinstance(grid, FrequencyGrid) else grid


def classical_dft(x: SampledSequence, grid: Union[FrequencyGrid, int]) -> DFTResult:
    """``F_n = sum_k x_k exp(-j 2 pi f_n t_k)`` over the known samples, ``S = F / K_known``."""
    validate_sequence(x)
    grid = _grid_for(x, grid)
    N = grid.N
    g = x.uniform_grid()
    if g is not None and grid.fft_compatible(g.sample_period):
        # masked entries are stored as zeros, so the FFT sums the known samples only
        v = x.values
        if v.size > N:
            # f_n k T = n k / N is N-periodic in k: fold the sequence
            v = np.pad(v, (0, -v.size % N)).reshape(-1, N).sum(axis=0)
        F = np.fft.fft(v, N)
        if g.t0 != 0.0:
            F = F * np.exp(-2j * np.pi * grid.freqs * float(x.times[0]))
    else:
        F = np.exp(-2j * np.pi * np.outer(grid.freqs, x.known_times)) @ x.known_values
    kk = x.k_known
    return DFTResult(F, F / kk, np.full(N, float(kk)), grid, kk)


def _require_uniform_full(x: SampledSequence) -> None:
    validate_sequence(x)
    if x.K > 1 and x.uniform_grid() is None:
        raise SequenceError("a uniformly sampled sequence is required")
    if x.has_gaps:
        raise SequenceError("a gap-free sequence is required")


def biased_autocorrelation(x: SampledSequence) -> np.ndarray:
    """``r(l) = (1/K) sum_{k=0}^{K-l-1} x_{k+l} conj(x_k)`` for ``l = 0 .. K-1``."""
    _require_uniform_full(x)
    v = x.values
    K = v.size
    return np.array([np.dot(v[l:], np.conj(v[:K - l])) for l in range(K)]) / K


def autocorrelation_matrix(r) -> np.ndarray:
    """Hermitian Toeplitz ``R_x[i, j] = r(i - j)`` with ``r(-l) = conj(r(l))``."""
    r = np.asarray(r, dtype=complex)
    return scipy.linalg.toeplitz(r, np.conj(r))


def _steering(K: int, T: float, freqs) -> np.ndarray:
    # columns E_w with entries exp(-j w k T)
    return np.exp(-2j * np.pi * np.outer(np.arange(K) * T, np.atleast_1d(freqs)))


@dataclass(frozen=True, eq=False)
class CaponFilter:
    """Minimum-variance filter with unity gain at ``center_freq``."""

    h: np.ndarray
    center_freq: float
    T: float = 1.0

    def response(self, f) -> np.ndarray:
        """``E_w^T h`` at frequencies ``f`` (Hz)."""
        return _steering(self.h.size, self.T, f).T @ self.h


def _solve_autocorrelation(Rx, B, max_cond):
    try:
        return hermitian_solve(Rx, B, max_cond=max_cond)
    except SingularOrIndefinite as exc:
        raise SingularAutocorrelation(str(exc)) from exc


def capon_filter(x: SampledSequence, center_freq: float, *,
                 max_cond: float = MAX_CONDITION) -> CaponFilter:
    """``h = R_x^-1 E* / (E^T R_x^-1 E*)`` from the biased autocorrelation of ``x``."""
    Rx = autocorrelation_matrix(biased_autocorrelation(x))
    T = x.uniform_grid().sample_period if x.K > 1 else 1.0
    e = _steering(x.K, T, center_freq)[:, 0]
    g = _solve_autocorrelation(Rx, np.conj(e), max_cond)
    return CaponFilter(g / np.dot(e, g), float(center_freq), T)


def capon_classic_psd(x: SampledSequence, grid: Union[FrequencyGrid, int], *,
                      max_cond: float = MAX_CONDITION) -> np.ndarray:
    """Full-order Capon power spectrum ``1 / (E_n^T R_x^-1 E_n^*)``."""
    _require_uniform_full(x)
    grid = _grid_for(x, grid)
    Rx = autocorrelation_matrix(biased_autocorrelation(x))
    T = x.uniform_grid().sample_period if x.K > 1 else 1.0
    E = _steering(x.K, T, grid.freqs)
    G = _solve_autocorrelation(Rx, np.conj(E), max_cond)
    q = np.real(np.sum(E * G, axis=0))
    if not np.all(q > 0):
        raise SingularAutocorrelation("quadratic form is not positive")
    return 1.0 / q


def capon_iterative(x: SampledSequence, grid: Union[FrequencyGrid, int],
                    opts: Optional[EngineOptions] = None, *, weight_hook=None) -> SpectrumResult:
    """Iterative filter-bank Capon estimate on the time-reversed input.

    Each iteration forms ``R = E diag(W) E^H / N`` and returns
    ``S = x~ (R^T)^-1 E* / (E^T (R^T)^-1 E*)`` with ``x~`` the known samples in
    reverse order, then sets ``W = |S|^2``.  The stop rules are those of the
    EDFT, evaluated on the same ``diag(E^H R^-1 E)``.  ``F`` in the result is
    ``W`` times the numerator, so ``F / S`` is the usual resolution ratio.
    """
    opts = opts or EngineOptions()
    x, grid = prepare_input(x, grid)
    xc = x.compact()
    xr = xc.values[::-1].copy()
    E = build_exponent_matrix(xc.times, grid)
    N, kk = grid.N, xc.K

    def step(W):
        R = correlation_from_weights(E, W, check=False)
        RE = hermitian_solve(R.to_dense(), E.entries, max_cond=opts.max_cond)
        # (R^T)^-1 E* = conj(R^-1 E); E^T conj(R^-1 E) = conj(diag(E^H R^-1 E))
        ere = np.real(np.sum(np.conj(E.entries) * RE, axis=0))
        if not np.all(ere > 0):
            raise SingularOrIndefinite("quadratic form is not positive")
        return xr @ np.conj(RE), ere

    I = opts.max_iterations
    W0 = np.ones(N)
    if kk == N:
        I = 1
    elif opts.initial_weights is not None:
        W0 = np.asarray(opts.initial_weights, dtype=float).ravel()
    F, S, ratio, W, done, code, dev, history = iterate_weights(
        step, W0, kk, opts, weight_hook, max_iterations=I)
    return SpectrumResult(F, S, done, code, W, grid, kk, ratio, dev, "capon", history)


def gwls_spectrum(x: SampledSequence, grid: Union[FrequencyGrid, int], Q) -> np.ndarray:
    """Generalized weighted least squares amplitude ``(E_n^T Q^-1 x^T) / (E_n^T Q^-1 E_n^*)``.

    ``Q`` is the K_known x K_known Hermitian positive definite noise weighting.
    """
    validate_sequence(x)
    grid = _grid_for(x, grid)
    xc = x.compact()
    E = build_exponent_matrix(xc.times, grid).entries
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (xc.K, xc.K):
        raise ValueError(f"Q must be {xc.K} x {xc.K}, got {Q.shape}")
    if not np.allclose(Q, Q.conj().T, rtol=1e-12, atol=1e-14 * np.max(np.abs(Q))):
        raise SingularQ("Q is not Hermitian")
    try:
        G = hermitian_solve(Q, np.column_stack([xc.values, np.conj(E)]))
    except SingularOrIndefinite as exc:
        raise SingularQ(str(exc)) from exc
    num = E.T @ G[:, 0]
    den = np.sum(E * G[:, 1:], axis=0)
    return num / den


@dataclass
class HRDFTResult:
    F: np.ndarray
    iterations_done: int
    stop_code: StopCode
    final_weights: np.ndarray
    grid: FrequencyGrid
    k_known: int
    history: List[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def N(self) -> int:
        return self.F.size

    @property
    def psd_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10 * np.log10(np.abs(self.F) ** 2 / self.N)


def hrdft(x: SampledSequence, grid: Union[FrequencyGrid, int],
          opts: Optional[EngineOptions] = None, *, path: str = "auto") -> HRDFTResult:
    """High-resolution DFT: ``F = x R^-1 E W`` with ``W <- |F|^2 / N``.

    Runs exactly ``max_iterations`` iterations; the only early exit is a
    numerical failure (budget deviation or a singular ``R``), reported as
    stop code 1 with the last good ``F`` kept.
    """
    opts = opts or EngineOptions()
    x, grid = prepare_input(x, grid)
    N, kk = grid.N, x.k_known
    path = resolve_path(x, grid, path)
    step = make_step(x, grid, path, opts.max_cond)
    W = np.ones(N)
    I = 1 if kk == N else opts.max_iterations
    F = np.zeros(N, complex)
    history: List[np.ndarray] = []
    done, code = I, StopCode.MAX_ITERATIONS
    if not np.any(x.known_values):
        return HRDFTResult(F, 1, code, W, grid, kk, [F])
    for it in range(1, I + 1):
        try:
            xre, ere = step(W)
            dev = abs(np.dot(W, ere) / (N * kk) - 1.0)
        except SingularOrIndefinite:
            dev = math.inf
        if not dev <= opts.rel_deviation:
            done, code = it - 1, StopCode.BUDGET_DEVIATION
            break
        F = W * xre
        history.append(F)
        W = np.abs(F) ** 2 / N
    return HRDFTResult(F, done, code, W, grid, kk, history)
