"""Linear-algebra primitives behind the EDFT iterations.

Conventions
-----------
``E`` is the K x N matrix with entries ``exp(-j 2 pi f_n t_k)`` and the
correlation operator is ``R = E diag(W) E^H / N``, so
``R[l, k] = (1/N) sum_n W_n exp(j 2 pi f_n (t_k - t_l))``.

For uniform sampling on an FFT-compatible grid ``R`` is Hermitian Toeplitz
and is carried as its lag sequence ``r`` with ``r[m] = R[l, l + m]``, which is
the length-K prefix of ``ifft(W)``.  The Levinson-Durbin predictor is computed
for the Toeplitz matrix whose *first column* is ``r``, i.e. ``R^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import (
    NonPositiveDiagonal,
    RecursionBreakdown,
    SingularOrIndefinite,
    TooFewNonzeroWeights,
)
from .signal_model import FrequencyGrid

__all__ = [
    "ExponentMatrix",
    "CorrelationOperator",
    "LevinsonState",
    "build_exponent_matrix",
    "correlation_from_weights",
    "hermitian_solve",
    "levinson_toeplitz",
    "toeplitz_apply_inverse",
    "masked_toeplitz_inverse",
    "diag_quadratic_form",
    "MAX_CONDITION",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class ExponentMatrix:
    entries: np.ndarray
    times: np.ndarray
    freqs: np.ndarray
    # R is Toeplitz and r = ifft(W)[:K] (uniform times, f_n T = n/N)
    fft_compatible: bool = False

    @property
    def shape(self):
        return self.entries.shape


def build_exponent_matrix(times, grid: FrequencyGrid) -> ExponentMatrix:
    times = np.asarray(times, dtype=float).ravel()
    if times.size == 0:
        raise ValueError("times must not be empty")
    freqs = grid.freqs
    fft_ok = False
    if times.size >= 2 and grid.is_uniform:
        T = (times[-1] - times[0]) / (times.size - 1)
        k = np.arange(times.size)
        if T > 0 and np.allclose(times, times[0] + k * T, rtol=0, atol=1e-9 * T) \
                and grid.fft_compatible(T):
            fft_ok = True
            N = grid.N
            # exact integer phase for the kT part; t0 only contributes a column phase
            idx = np.outer(k, np.arange(N)) % N
            entries = np.exp(-2j * np.pi * idx / N)
            if times[0] != 0.0:
                entries = entries * np.exp(-2j * np.pi * freqs * times[0])[None, :]
    if not fft_ok:
        entries = np.exp(-2j * np.pi * np.outer(times, freqs))
    entries.setflags(write=False)
    return ExponentMatrix(entries, times, freqs, fft_ok)


@dataclass(frozen=True, eq=False)
class CorrelationOperator:
    """``R`` either as a Toeplitz lag sequence or as a dense Hermitian matrix."""

    toeplitz: Optional[np.ndarray] = None
    dense: Optional[np.ndarray] = field(default=None)

    @property
    def is_toeplitz(self) -> bool:
        return self.toeplitz is not None

    @property
    def size(self) -> int:
        return (self.toeplitz if self.is_toeplitz else self.dense).shape[0]

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        r = self.toeplitz
        return scipy.linalg.toeplitz(np.conj(r), r)


def _check_weights(W, n_required: int) -> np.ndarray:
    W = np.asarray(W, dtype=float).ravel()
    if not np.all(np.isfinite(W)) or np.any(W < 0):
        raise TooFewNonzeroWeights("weights must be finite and nonnegative")
    if np.count_nonzero(W > 0) < n_required:
        raise TooFewNonzeroWeights(
            f"weight vector needs at least {n_required} positive entries, "
            f"has {np.count_nonzero(W > 0)}"
        )
    return W


def correlation_from_weights(E: ExponentMatrix, W, *, check: bool = True) -> CorrelationOperator:
    """``R = E diag(W) E^H / N``.

    Returns the Toeplitz lag form when ``E`` is FFT compatible.
    """
    K, N = E.shape
    W = _check_weights(W, K) if check else np.asarray(W, dtype=float).ravel()
    if W.size != N:
        raise ValueError(f"weight vector has length {W.size}, expected {N}")
    if E.fft_compatible and N >= K:
        r = np.fft.ifft(W)[:K]
        r[0] = r[0].real
        return CorrelationOperator(toeplitz=r)
    R = (E.entries * (W / N)) @ E.entries.conj().T
    R = 0.5 * (R + R.conj().T)
    return CorrelationOperator(dense=R)


def hermitian_solve(R, B, *, max_cond: float = MAX_CONDITION) -> np.ndarray:
    """Solve ``R X = B`` for Hermitian positive definite ``R`` (Cholesky)."""
    if isinstance(R, CorrelationOperator):
        R = R.to_dense()
    R = np.asarray(R)
    if not np.all(np.isfinite(R)):
        raise SingularOrIndefinite("correlation matrix has non-finite entries")
    try:
        c = scipy.linalg.cho_factor(R, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularOrIndefinite("matrix is not positive definite") from exc
    d = np.abs(np.diag(c[0]))
    # diag(L)^2 ratio is a cheap lower bound; confirm with the 2-norm estimate
    if d.min() == 0 or (d.max() / d.min()) ** 2 > max_cond or np.linalg.cond(R) > max_cond:
        raise SingularOrIndefinite("matrix condition number exceeds %.0e" % max_cond)
    return scipy.linalg.cho_solve(c, B, check_finite=False)


class LevinsonState(NamedTuple):
    """Predictor ``[1, a]`` and error ``V`` with ``T [1; a] = V e_0``, where
    ``T`` is the Hermitian Toeplitz matrix with first column ``r``."""

    a: np.ndarray
    V: float


def levinson_toeplitz(r) -> LevinsonState:
    """Levinson-Durbin recursion on the lag sequence ``r``.

    ``a`` excludes the leading 1 and has length ``K - 1``.
    """
    r = np.asarray(r, dtype=complex).ravel()
    K = r.size
    if K == 0:
        raise ValueError("empty lag sequence")
    r0 = r[0].real
    if not r0 > 0 or not np.isfinite(r0):
        raise RecursionBreakdown("r[0] must be real and positive")
    if K == 1:
        return LevinsonState(np.zeros(0, complex), float(r0))
    a = np.array([-r[1] / r0])
    V = r0 - (r[1] * np.conj(r[1])).real / r0
    if not V > 0:
        raise RecursionBreakdown("prediction error became non-positive at order 1")
    for n in range(1, K - 1):
        alfa = r[n + 1] + np.dot(a, r[n:0:-1])
        rho = -alfa / V
        V = V - (alfa * np.conj(alfa)).real / V
        if not V > 0:
            raise RecursionBreakdown(f"prediction error became non-positive at order {n + 1}")
        a = np.concatenate([a + rho * np.conj(a[::-1]), [rho]])
    return LevinsonState(a, float(V))


def toeplitz_apply_inverse(state: LevinsonState, r, x) -> tuple[np.ndarray, np.ndarray]:
    """Apply ``R^{-1}`` through the Gohberg-Semencul structure.

    Returns ``xr = x R^{-1}`` and the lag accumulator ``re`` such that
    ``real(fft(re, N))`` equals ``diag(E^H R^{-1} E)`` on any FFT grid with
    ``N >= K``.  ``R`` has first row ``r``.
    """
    a = np.concatenate([[1.0 + 0j], np.asarray(state.a, dtype=complex)])
    x = np.asarray(x, dtype=complex).ravel()
    K = a.size
    if x.size != K or np.size(r) != K:
        raise ValueError("dimension mismatch between predictor, lags and data")
    XR = np.zeros(K, complex)
    RE = np.zeros(K, complex)
    # rc holds the lower part of column k-1 of B = V * T^{-1}, starting with [1; a]
    rc = a.copy()
    half = K // 2
    for k in range(1, half + 1):
        j = k - 1            # current column / ring index
        j0 = K - k           # mirrored column
        inner = slice(k, K - k)
        ring = slice(j, j0 + 1)
        RE[0] += 2 * rc[j]
        RE[j0 - j] += 2 * rc[j0]
        RE[1:K - 2 * k + 1] += 4 * rc[inner]
        XR[j] += np.dot(np.conj(rc[ring]), x[ring])
        XR[j0] += np.dot(rc[ring][::-1], x[ring])
        XR[inner] += rc[inner] * x[j] + np.conj(rc[inner])[::-1] * x[j0]
        # Trench update: next column of B from the current one
        idx = np.arange(k, K - k)
        rc[inner] = (rc[idx - 1] + np.conj(a[k]) * a[idx]
                     - a[j0] * np.conj(a[idx + 1])[::-1])
    if K % 2:
        m = half
        RE[0] += rc[m]
        XR[m] += x[m] * rc[m]
    return XR / state.V, RE / state.V


def masked_toeplitz_inverse(r, known_mask, *, max_cond: float = MAX_CONDITION):
    """Inverse of ``R`` restricted to the known rows/columns.

    Returns ``(invr, er)``: the K x K matrix holding ``inv(R[t, t])`` on the
    known index set ``t`` and zeros elsewhere, and its lag accumulator so that
    ``real(fft(er, N)) = diag(E^H invr E)``.
    """
    r = np.asarray(r, dtype=complex).ravel()
    mask = np.asarray(known_mask, dtype=bool).ravel()
    K = r.size
    t = np.flatnonzero(mask)
    R = scipy.linalg.toeplitz(np.conj(r), r)
    sub = R[np.ix_(t, t)]
    invr = np.zeros((K, K), complex)
    inv_sub = hermitian_solve(sub, np.eye(t.size), max_cond=max_cond)
    invr[np.ix_(t, t)] = inv_sub
    er = np.empty(K, complex)
    er[0] = np.trace(invr)
    for k in range(1, K):
        er[k] = np.sum(np.diagonal(invr, k)) + np.conj(np.sum(np.diagonal(invr, -k)))
    return invr, er


def diag_quadratic_form(E, RE, *, imag_tol: float = 1e-9) -> np.ndarray:
    """``diag(E^H RE)`` as a real vector, with ``RE = R^{-1} E``."""
    if isinstance(E, ExponentMatrix):
        E = E.entries
    d = np.sum(np.conj(E) * RE, axis=0)
    scale = np.max(np.abs(d.real)) if d.size else 0.0
    if np.any(np.abs(d.imag) > imag_tol * max(scale, 1e-300)):
        raise NonPositiveDiagonal("quadratic form has a non-negligible imaginary part")
    d = d.real
    if not np.all(d > 0):
        raise NonPositiveDiagonal("quadratic form is not strictly positive")
    return d
