"""Sequences, time grids and frequency grids shared by the rest of the package.

Times are seconds and frequencies are Hz throughout; conversion to angular
frequency happens only inside the exponent kernels.  Missing samples are
carried by an explicit boolean mask instead of NaN sentinels.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .errors import EmptySequence, InfValue, NonMonotonicTimes, SequenceError

__all__ = [
    "GridKind",
    "SampledSequence",
    "FrequencyGrid",
    "UniformGridDescriptor",
    "make_uniform_times",
    "validate_sequence",
    "read_samples_csv",
    "write_samples_csv",
    "format_float",
]

# relative tolerance for recognising a uniform time grid
_UNIFORM_RTOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class UniformGridDescriptor(NamedTuple):
    """Uniform sampling ``t_k = (k0 + k) * sample_period``."""

    sample_period: float
    k0: int = 0

    @property
    def t0(self) -> float:
        return self.k0 * self.sample_period


def make_uniform_times(K: int, T: float) -> np.ndarray:
    """Return the time vector ``[0, T, ..., (K-1) T]``."""
    if int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    if not (T > 0) or not math.isfinite(T):
        raise ValueError(f"sampling period must be positive, got {T!r}")
    return np.arange(int(K), dtype=float) * float(T)


@dataclass(frozen=True, eq=False)
class SampledSequence:
    """K complex samples, their sampling instants and a known-sample mask.

    ``values`` at masked-out positions are ignored by every routine; the
    constructors store zeros there.
    """

    values: np.ndarray
    times: np.ndarray
    known_mask: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).ravel()
        times = np.asarray(self.times, dtype=float).ravel()
        mask = np.asarray(self.known_mask, dtype=bool).ravel()
        if not (values.shape == times.shape == mask.shape):
            raise SequenceError(
                "values, times and known_mask must have equal lengths "
                f"({values.size}, {times.size}, {mask.size})"
            )
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "known_mask", _frozen(mask))

    # -- constructors -----------------------------------------------------

    @classmethod
    def uniform(cls, values, T: float = 1.0, known_mask=None, k0: int = 0) -> "SampledSequence":
        """Uniformly sampled sequence; NaN entries are treated as missing."""
        values = np.asarray(values, dtype=complex).ravel()
        times = (k0 * float(T) + make_uniform_times(max(values.size, 1), T))[: values.size]
        return cls.from_arrays(values, times, known_mask)

    @classmethod
    def from_arrays(cls, values, times, known_mask=None) -> "SampledSequence":
        """Build a sequence, turning NaN values into masked-out samples."""
        values = np.array(values, dtype=complex).ravel()
        nan = np.isnan(values)
        if known_mask is None:
            mask = ~nan
        else:
            mask = np.asarray(known_mask, dtype=bool).ravel() & ~nan
        values[~mask] = 0.0
        return cls(values, times, mask)

    # -- views --------------------------------------------------------------

    def __len__(self) -> int:
        return self.values.size

    @property
    def K(self) -> int:
        return self.values.size

    @property
    def k_known(self) -> int:
        return int(np.count_nonzero(self.known_mask))

    @property
    def has_gaps(self) -> bool:
        return self.k_known < self.K

    @property
    def known_values(self) -> np.ndarray:
        return self.values[self.known_mask]

    @property
    def known_times(self) -> np.ndarray:
        return self.times[self.known_mask]

    def compact(self) -> "SampledSequence":
        """Drop missing samples, giving a (generally nonuniform) sequence."""
        return SampledSequence(self.known_values, self.known_times,
                               np.ones(self.k_known, dtype=bool))

    def with_mask(self, known_mask) -> "SampledSequence":
        return SampledSequence.from_arrays(self.values, self.times,
                                           np.asarray(known_mask, bool) & self.known_mask)

    def truncate_known(self, n: int) -> "SampledSequence":
        """Keep everything up to and including the ``n``-th known sample."""
        idx = np.flatnonzero(self.known_mask)
        if idx.size <= n:
            return self
        stop = idx[n - 1] + 1 if n > 0 else 0
        return SampledSequence(self.values[:stop], self.times[:stop], self.known_mask[:stop])

    def uniform_grid(self) -> Optional[UniformGridDescriptor]:
        """Return the uniform grid descriptor if ``times`` are equally spaced
        on an integer lattice ``(k0 + k) T``, else ``None``."""
        t = self.times
        if t.size < 2:
            return None
        T = (t[-1] - t[0]) / (t.size - 1)
        if not T > 0:
            return None
        tol = _UNIFORM_RTOL * max(T, abs(t[0]), abs(t[-1]))
        if np.max(np.abs(t - (t[0] + T * np.arange(t.size)))) > tol:
            return None
        k0 = round(t[0] / T)
        if abs(t[0] - k0 * T) > tol:
            return None
        return UniformGridDescriptor(float(T), int(k0))

    @property
    def mean_period(self) -> float:
        """Mean sampling period of the known samples.

        For a uniform grid with gaps this is ``K T / K_known``; otherwise the
        span of the known times divided by ``K_known - 1``.
        """
        g = self.uniform_grid()
        kk = self.k_known
        if g is not None:
            return self.K * g.sample_period / kk
        t = self.known_times
        if t.size < 2:
            return 1.0
        return float((t[-1] - t[0]) / (t.size - 1))


def validate_sequence(seq: SampledSequence) -> None:
    """Raise if ``seq`` cannot be transformed.

    Non-finite values are only allowed at masked-out positions.
    """
    if seq.K == 0 or seq.k_known == 0:
        raise EmptySequence("sequence has no known samples")
    if not np.all(np.isfinite(seq.known_values)):
        raise InfValue("known samples contain Inf or NaN")
    if not np.all(np.isfinite(seq.times)):
        raise InfValue("sampling times contain Inf or NaN")
    if seq.K > 1 and np.any(np.diff(seq.times) <= 0):
        raise NonMonotonicTimes("sampling times must be strictly increasing")


class GridKind(enum.Enum):
    UNIFORM_FFT = "uniform"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Analysis frequencies in Hz.

    A uniform FFT grid stores ``n * 2 f_u / N`` in natural DFT order with the
    upper half wrapped to negative values, i.e. ``numpy.fft.fftfreq`` order,
    so every frequency lies in ``[-f_u, f_u)``.
    """

    freqs: np.ndarray
    upper_freq: float
    kind: GridKind = GridKind.ARBITRARY

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float).ravel()
        if freqs.size < 1:
            raise ValueError("frequency grid must not be empty")
        if not np.all(np.isfinite(freqs)):
            raise ValueError("frequency grid contains non-finite values")
        if not self.upper_freq > 0:
            raise ValueError("upper frequency must be positive")
        object.__setattr__(self, "freqs", _frozen(freqs))
        object.__setattr__(self, "upper_freq", float(self.upper_freq))

    @classmethod
    def uniform(cls, N: int, upper_freq: float = 0.5) -> "FrequencyGrid":
        if int(N) != N or N < 1:
            raise ValueError(f"N must be a positive integer, got {N!r}")
        freqs = np.fft.fftfreq(int(N), d=1.0 / (2.0 * upper_freq))
        return cls(freqs, upper_freq, GridKind.UNIFORM_FFT)

    @classmethod
    def arbitrary(cls, freqs, upper_freq: Optional[float] = None) -> "FrequencyGrid":
        freqs = np.asarray(freqs, dtype=float)
        if upper_freq is None:
            upper_freq = float(np.max(np.abs(freqs))) or 0.5
        return cls(freqs, upper_freq, GridKind.ARBITRARY)

    @property
    def N(self) -> int:
        return self.freqs.size

    @property
    def is_uniform(self) -> bool:
        return self.kind is GridKind.UNIFORM_FFT

    @property
    def spacing(self) -> float:
        """Frequency step ``2 f_u / N`` of a uniform grid."""
        return 2.0 * self.upper_freq / self.N

    def fft_compatible(self, T: float) -> bool:
        """True if ``f_n T = n / N`` (mod 1), i.e. a plain FFT evaluates E."""
        return self.is_uniform and math.isclose(2.0 * self.upper_freq * T, 1.0,
                                                rel_tol=_UNIFORM_RTOL)

    def shifted_order(self) -> np.ndarray:
        """Index permutation that sorts the grid into ``[-f_u, f_u)`` order."""
        if self.is_uniform:
            return np.fft.fftshift(np.arange(self.N))
        return np.argsort(self.freqs, kind="stable")

    def index_of(self, f: float) -> int:
        """Index of the grid frequency closest to ``f``."""
        return int(np.argmin(np.abs(self.freqs - f)))


# -- CSV ------------------------------------------------------------------

def format_float(x: float) -> str:
    """Locale-independent text with full round-trip precision."""
    return format(float(x), ".17g")


def read_samples_csv(path) -> SampledSequence:
    """Parse a ``t,re,im`` sample file; rows ``t,,`` mark missing samples."""
    times, values, mask = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SequenceError(f"{path}: empty file")
        cols = [h.strip().lower() for h in header]
        if cols[:1] != ["t"] or "re" not in cols:
            raise SequenceError(f"{path}: expected header 't,re,im', got {header}")
        i_re = cols.index("re")
        i_im = cols.index("im") if "im" in cols else None
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                t = float(row[0])
                re_s = row[i_re].strip() if len(row) > i_re else ""
                im_s = row[i_im].strip() if i_im is not None and len(row) > i_im else ""
                if re_s == "" and im_s == "":
                    values.append(0.0)
                    mask.append(False)
                else:
                    values.append(complex(float(re_s or 0.0), float(im_s or 0.0)))
                    mask.append(True)
            except (ValueError, IndexError) as exc:
                raise SequenceError(f"{path}:{lineno}: cannot parse row {row}") from exc
            times.append(t)
    return SampledSequence(np.array(values, dtype=complex), np.array(times), np.array(mask, bool))


def write_samples_csv(path, times: Iterable[float], values, known_mask=None) -> None:
    times = np.asarray(times, dtype=float).ravel()
    values = np.asarray(values, dtype=complex).ravel()
    mask = np.ones(times.size, bool) if known_mask is None else np.asarray(known_mask, bool)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "re", "im"])
        for t, v, m in zip(times, values, mask):
            if m:
                w.writerow([format_float(t), format_float(v.real), format_float(v.imag)])
            else:
                w.writerow([format_float(t), "", ""])
