"""Deterministic test signals for the simulation scenarios.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a
given seed reproduces the same stream on every platform.  Signals are
synthesised as continuous-time sums of complex exponentials, which lets the
same realisation be sampled on uniform, jittered or gapped time grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import MonotonicityViolated
from .signal_model import FrequencyGrid, SampledSequence, make_uniform_times

__all__ = [
    "TestSignalSpec",
    "TrueSpectrum",
    "MarpleKayTruth",
    "SkipResult",
    "gen_complex_test_signal",
    "adc_quantize",
    "gen_jittered_times",
    "gen_jittered_times_relative",
    "random_skip",
    "gen_marple_kay_surrogate",
]

# frequency step of the synthesis comb; fine enough that the band noise is
# aperiodic over any practical observation window
_SYNTH_STEP = 1.0 / 8192


@dataclass(frozen=True)
class TestSignalSpec:
    """Parameters of the three-component complex test signal.

    ``noise_power`` is the total power of the band-limited noise and
    ``pulse_energy`` the energy of the band-limited pulse (flat spectrum over
    ``pulse_band``).  ``adc_bits=None`` skips quantisation.
    """

    __test__ = False

    noise_band: Tuple[float, float] = (-0.5, -0.25)
    pulse_band: Tuple[float, float] = (0.0, 0.25)
    exponent_freq: float = 0.35
    exponent_power: float = 1.0
    K: int = 64
    T: float = 1.0
    adc_bits: Optional[int] = 10
    seed: int = 0
    noise_power: float = 0.25
    pulse_energy: float = 1.0
    pulse_center: Optional[float] = None
    f_upper: float = 0.5
    n_freqs: int = 1000

    def __post_init__(self):
        for name in ("noise_band", "pulse_band"):
            lo, hi = getattr(self, name)
            if not (-self.f_upper <= lo < hi <= self.f_upper):
                raise ValueError(f"{name} {lo, hi} must satisfy -f_u <= lo < hi <= f_u")
        if not -self.f_upper <= self.exponent_freq <= self.f_upper:
            raise ValueError("exponent frequency outside [-f_u, f_u]")
        if self.adc_bits is not None and self.adc_bits < 1:
            raise ValueError("adc_bits must be >= 1")
        if self.K < 1 or not self.T > 0:
            raise ValueError("K must be >= 1 and T > 0")


@dataclass
class TrueSpectrum:
    """Expected power per analysis bin (sums to the mean signal power)."""

    grid: FrequencyGrid
    power: np.ndarray

    @property
    def psd_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10 * np.log10(self.power)


def _band_power_per_bin(grid: FrequencyGrid, band, total: float) -> np.ndarray:
    lo, hi = band
    f = grid.freqs
    inside = (f >= lo) & (f < hi)
    out = np.zeros(grid.N)
    if inside.any() and total > 0:
        out[inside] = total / inside.sum()
    return out


class _ComplexTestSignal:
    """Continuous-time realisation that can be sampled at arbitrary times."""

    def __init__(self, spec: TestSignalSpec):
        self.spec = spec
        rng = np.random.default_rng(spec.seed)
        lo, hi = spec.noise_band
        self.noise_f = np.arange(lo + _SYNTH_STEP / 2, hi, _SYNTH_STEP)
        scale = np.sqrt(spec.noise_power / self.noise_f.size / 2)
        self.noise_c = scale * (rng.standard_normal(self.noise_f.size)
                                + 1j * rng.standard_normal(self.noise_f.size))
        self.phase = rng.uniform(0, 2 * np.pi)
        lo, hi = spec.pulse_band
        self.pulse_bw = hi - lo
        self.pulse_fc = 0.5 * (lo + hi)
        # flat spectral magnitude a over the band: energy = a^2 * bandwidth
        self.pulse_a = np.sqrt(spec.pulse_energy / self.pulse_bw)
        tc = spec.pulse_center
        self.pulse_tc = (spec.K - 1) * spec.T / 2 if tc is None else tc

    def __call__(self, t) -> np.ndarray:
        s = self.spec
        t = np.asarray(t, dtype=float)
        x = np.exp(2j * np.pi * np.outer(t, self.noise_f)) @ self.noise_c
        u = t - self.pulse_tc
        x += (self.pulse_a * self.pulse_bw * np.sinc(self.pulse_bw * u)
              * np.exp(2j * np.pi * self.pulse_fc * u))
        x += np.sqrt(s.exponent_power) * np.exp(1j * (2 * np.pi * s.exponent_freq * t + self.phase))
        return x

    def truth(self, grid: FrequencyGrid, quant_power: float = 0.0) -> TrueSpectrum:
        s = self.spec
        p = _band_power_per_bin(grid, s.noise_band, s.noise_power)
        window = s.K * s.T
        p += _band_power_per_bin(grid, s.pulse_band, s.pulse_energy / window)
        p[grid.index_of(s.exponent_freq)] += s.exponent_power
        p += quant_power / grid.N
        return TrueSpectrum(grid, p)


def _peak_component(values: np.ndarray) -> float:
    return float(max(np.max(np.abs(values.real)), np.max(np.abs(values.imag)), 1e-300))


def adc_quantize(x, bits: int, full_scale: Optional[float] = None):
    """Mid-rise uniform quantiser applied to real and imaginary parts.

    ``2**bits`` levels ``(i + 1/2) * step - full_scale`` span
    ``[-full_scale, full_scale]``; values outside clip to the end levels.
    The default full scale is the peak absolute component of the input.
    Accepts a :class:`SampledSequence` or an array and returns the same kind.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    seq = x if isinstance(x, SampledSequence) else None
    v = np.asarray(seq.values if seq is not None else x, dtype=complex)
    if full_scale is None:
        known = v[seq.known_mask] if seq is not None else v
        full_scale = _peak_component(known) if known.size else 1.0
    if not full_scale > 0:
        raise ValueError("full_scale must be positive")
    levels = 2 ** int(bits)
    step = 2.0 * full_scale / levels

    def q(a):
        i = np.clip(np.floor((a + full_scale) / step), 0, levels - 1)
        return (i + 0.5) * step - full_scale

    out = q(v.real) + 1j * q(v.imag)
    if seq is None:
        return out
    return SampledSequence.from_arrays(np.where(seq.known_mask, out, 0), seq.times, seq.known_mask)


def gen_complex_test_signal(spec: TestSignalSpec = TestSignalSpec(), times=None,
                            grid: Optional[FrequencyGrid] = None):
    """Sample the complex test signal and return ``(sequence, truth)``.

    ``times`` defaults to the uniform grid ``k T``.  The same seed gives the
    same underlying signal whatever the sampling times, so uniform and
    jittered sequences are comparable.
    """
    sig = _ComplexTestSignal(spec)
    if times is None:
        times = make_uniform_times(spec.K, spec.T)
    times = np.asarray(times, dtype=float)
    clean = sig(times)
    values = clean
    qpow = 0.0
    if spec.adc_bits is not None:
        values = adc_quantize(clean, spec.adc_bits)
        qpow = float(np.mean(np.abs(values - clean) ** 2))
    if grid is None:
        grid = FrequencyGrid.uniform(spec.n_freqs, spec.f_upper)
    return SampledSequence.from_arrays(values, times), sig.truth(grid, qpow)


def gen_jittered_times(K: int, T: float, jitter_range: float, seed: int = 0) -> np.ndarray:
    """``t_k = k T + tau_k`` with ``tau_k ~ U[0, jitter_range]``."""
    if jitter_range < 0:
        raise ValueError("jitter_range must be nonnegative")
    rng = np.random.default_rng(seed)
    t = make_uniform_times(K, T) + rng.uniform(0.0, 1.0, K) * jitter_range
    if K > 1 and np.any(np.diff(t) <= 0):
        raise MonotonicityViolated("jittered times are not strictly increasing")
    return t


def gen_jittered_times_relative(K: int, Ts: float, jitter: float, seed: int = 0) -> np.ndarray:
    """``t_k = (k + jitter * u_k) Ts`` with ``u_k ~ U[0, 1)``; jitter in units of Ts."""
    return gen_jittered_times(K, Ts, jitter * Ts, seed)


class SkipResult(NamedTuple):
    gapped: SampledSequence
    compact: SampledSequence
    mean_period: float


def random_skip(x: SampledSequence, n_remove: int, seed: int = 0) -> SkipResult:
    """Mark ``n_remove`` randomly chosen known samples as missing."""
    known = np.flatnonzero(x.known_mask)
    if n_remove < 0 or n_remove >= known.size:
        raise ValueError(f"cannot remove {n_remove} of {known.size} known samples")
    rng = np.random.default_rng(seed)
    drop = rng.choice(known, size=n_remove, replace=False) if n_remove else np.array([], int)
    mask = x.known_mask.copy()
    mask[drop] = False
    gapped = x.with_mask(mask)
    return SkipResult(gapped, gapped.compact(), gapped.mean_period)


@dataclass
class MarpleKayTruth:
    """Line components ``(frequency, power)`` plus a colored noise band."""

    lines: Sequence[Tuple[float, float]] = ((0.1, 0.1), (0.2, 1.0), (0.21, 1.0))
    noise_band: Tuple[float, float] = (0.2, 0.5)
    noise_power: float = 0.1
    noise_f: np.ndarray = field(default=None, repr=False)
    noise_density: np.ndarray = field(default=None, repr=False)

    def power_per_bin(self, grid: FrequencyGrid) -> np.ndarray:
        """Two-sided power per analysis bin (real signal: split between +-f)."""
        p = np.zeros(grid.N)
        for f, pw in self.lines:
            p[grid.index_of(f)] += pw / 2
            p[grid.index_of(-f)] += pw / 2
        lo, hi = self.noise_band
        for sgn in (1, -1):
            band = (lo, hi) if sgn > 0 else (-hi, -lo)
            p += _band_power_per_bin(grid, band, self.noise_power / 2)
        return p


def gen_marple_kay_surrogate(seed: int = 0, K: int = 64, noise_power: float = 0.1):
    """Real 64-point sequence mimicking the classic Marple & Kay test data.

    Two unit-power sinusoids at 0.2 and 0.21 Hz, a 0.1-power sinusoid at
    0.1 Hz (10 dB down) and colored noise in [0.2, 0.5] Hz whose density
    peaks mid-band.  Returns ``(sequence, truth)`` with ``T = 1`` s.
    """
    rng = np.random.default_rng(seed)
    truth = MarpleKayTruth(noise_power=noise_power)
    t = make_uniform_times(K, 1.0)
    x = np.zeros(K)
    for f, pw in truth.lines:
        x += np.sqrt(2 * pw) * np.cos(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
    lo, hi = truth.noise_band
    nf = np.arange(lo + _SYNTH_STEP / 2, hi, _SYNTH_STEP)
    shape = np.sin(np.pi * (nf - lo) / (hi - lo)) ** 2
    dens = shape / shape.sum() * noise_power
    # real band noise: each cosine carries power |c|^2 / 2
    c = np.sqrt(dens) * (rng.standard_normal(nf.size) + 1j * rng.standard_normal(nf.size))
    x += np.real(np.exp(2j * np.pi * np.outer(t, nf)) @ c)
    truth.noise_f = nf
    truth.noise_density = dens
    return SampledSequence.uniform(x, 1.0), truth
