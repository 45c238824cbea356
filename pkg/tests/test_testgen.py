import numpy as np
import pytest

from edft.baselines import classical_dft
from edft.engine import run_edft
from edft.errors import MonotonicityViolated
from edft.signal_model import FrequencyGrid, SampledSequence
from edft.testgen import (
    TestSignalSpec,
    adc_quantize,
    gen_complex_test_signal,
    gen_jittered_times,
    gen_jittered_times_relative,
    gen_marple_kay_surrogate,
    random_skip,
)

GRID = FrequencyGrid.uniform(1000)


def _band(f, lo, hi):
    return (f >= lo) & (f < hi)


def test_default_signal_has_three_separated_components():
    seq, truth = gen_complex_test_signal(TestSignalSpec(seed=0))
    assert seq.K == 64 and not seq.has_gaps
    f = truth.grid.freqs
    # truth: noise band, pulse band and exponent bin above an ADC-only floor
    floor = truth.power[_band(f, 0.27, 0.33)]
    assert np.ptp(floor) < 1e-15 and floor[0] < 1e-7
    assert truth.power[truth.grid.index_of(0.35)] > 0.99
    d = classical_dft(seq, truth.grid)
    p = 10 * np.log10(np.abs(d.S) ** 2)
    gap = p[_band(f, 0.27, 0.31) | _band(f, 0.39, 0.48) | _band(f, -0.23, -0.02)].mean()
    assert p[_band(f, -0.5, -0.25)].mean() > gap + 10
    assert p[_band(f, 0.0, 0.25)].mean() > gap
    assert p[truth.grid.index_of(0.35)] > gap + 25


def test_exponent_only_has_unit_modulus():
    spec = TestSignalSpec(noise_power=0, pulse_energy=0, adc_bits=None)
    seq, _ = gen_complex_test_signal(spec)
    np.testing.assert_allclose(np.abs(seq.values), 1, atol=1e-13)


def test_generator_is_deterministic():
    a, _ = gen_complex_test_signal(TestSignalSpec(seed=3))
    b, _ = gen_complex_test_signal(TestSignalSpec(seed=3))
    c, _ = gen_complex_test_signal(TestSignalSpec(seed=4))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize("seed", range(5))
def test_truth_sums_to_signal_power(seed):
    seq, truth = gen_complex_test_signal(TestSignalSpec(seed=seed))
    power = np.mean(np.abs(seq.values) ** 2)
    assert truth.power.sum() == pytest.approx(power, rel=0.10)


def test_same_seed_same_signal_on_other_times():
    spec = TestSignalSpec(seed=5, adc_bits=None)
    uni, _ = gen_complex_test_signal(spec)
    t = np.arange(64) + 0.0
    again, _ = gen_complex_test_signal(spec, times=t)
    np.testing.assert_array_equal(uni.values, again.values)


def test_invalid_band():
    with pytest.raises(ValueError):
        TestSignalSpec(noise_band=(-0.6, -0.2))
    with pytest.raises(ValueError):
        TestSignalSpec(pulse_band=(0.2, 0.1))
    with pytest.raises(ValueError):
        TestSignalSpec(adc_bits=0)


def test_adc_high_resolution_is_transparent():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    np.testing.assert_allclose(adc_quantize(x, 52), x, atol=1e-12)


def test_adc_one_bit_levels():
    x = np.array([-3, -0.2, 0.0, 0.7, 5]) + 1j * np.array([0.3, -0.9, 2, -2, 0])
    q = adc_quantize(x, 1, full_scale=1.0)
    assert set(np.unique(q.real)) <= {-0.5, 0.5}
    assert set(np.unique(q.imag)) <= {-0.5, 0.5}


def test_adc_ten_bit_floor_near_minus_60_db():
    spec = TestSignalSpec(noise_power=0, pulse_energy=0, adc_bits=None, K=1024)
    clean, _ = gen_complex_test_signal(spec)
    q = adc_quantize(clean.values, 10)
    floor_db = 10 * np.log10(np.mean(np.abs(q - clean.values) ** 2))
    assert -65 < floor_db < -55


def test_adc_keeps_mask():
    seq = SampledSequence.uniform([0.3, np.nan, -0.7])
    q = adc_quantize(seq, 4)
    np.testing.assert_array_equal(q.known_mask, seq.known_mask)
    assert q.values[1] == 0


def test_jitter_examples():
    np.testing.assert_array_equal(gen_jittered_times(8, 1.0, 0.0, seed=1), np.arange(8))
    t = gen_jittered_times(64, 1.0, 0.8, seed=2)
    assert np.mean(np.diff(t)) == pytest.approx(1.0, abs=0.02)
    assert np.all(np.diff(t) > 0)
    np.testing.assert_array_equal(t, gen_jittered_times(64, 1.0, 0.8, seed=2))


def test_jitter_relative_form():
    np.testing.assert_array_equal(gen_jittered_times_relative(16, 2.0, 0.4, seed=3),
                                  gen_jittered_times(16, 2.0, 0.8, seed=3))


def test_jitter_monotonicity_violation():
    with pytest.raises(MonotonicityViolated):
        gen_jittered_times(64, 1.0, 3.0, seed=0)


@pytest.mark.parametrize("n,period", [(16, 64 / 48), (24, 64 / 40), (32, 2.0)])
def test_random_skip_mean_period(n, period):
    seq, _ = gen_complex_test_signal()
    r = random_skip(seq, n, seed=1)
    assert r.gapped.k_known == 64 - n
    assert r.compact.K == 64 - n
    assert r.mean_period == pytest.approx(period)


def test_random_skip_zero_and_too_many():
    seq, _ = gen_complex_test_signal()
    r = random_skip(seq, 0)
    np.testing.assert_array_equal(r.gapped.values, seq.values)
    with pytest.raises(ValueError):
        random_skip(seq, 64)


def test_marple_kay_is_real_with_symmetric_spectrum():
    seq, _ = gen_marple_kay_surrogate(0)
    assert seq.K == 64
    assert np.all(seq.values.imag == 0)
    d = classical_dft(seq, 64)
    np.testing.assert_allclose(d.F[1:], np.conj(d.F[1:][::-1]), atol=1e-12)


def test_marple_kay_dft_merges_close_lines():
    seq, _ = gen_marple_kay_surrogate(0)
    d = classical_dft(seq, GRID)
    o = GRID.shifted_order()
    f, p = GRID.freqs[o], np.abs(d.S[o]) ** 2
    sel = np.flatnonzero((f > 0.19) & (f < 0.22))
    maxima = [i for i in sel if p[i] > p[i - 1] and p[i] >= p[i + 1]]
    assert len(maxima) == 1


def test_marple_kay_weak_line_is_ten_db_down():
    seq, truth = gen_marple_kay_surrogate(0)
    res = run_edft(seq, GRID)
    p = 10 * np.log10(np.abs(res.S) ** 2)
    drop = p[GRID.index_of(0.2)] - p[GRID.index_of(0.1)]
    assert drop == pytest.approx(10, abs=2)
    tp = truth.power_per_bin(GRID)
    assert tp[GRID.index_of(0.1)] == pytest.approx(0.05)
    # line power plus the edge of the noise band
    assert tp[GRID.index_of(-0.21)] == pytest.approx(0.5, rel=1e-3)


def test_marple_kay_deterministic():
    a, _ = gen_marple_kay_surrogate(9)
    b, _ = gen_marple_kay_surrogate(9)
    assert np.array_equal(a.values, b.values)
