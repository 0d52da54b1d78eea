import math

import numpy as np
import pytest

from floqdiss.bath import BathSpec, SpectralDensity, rate_kernel, thermal_weight
from floqdiss.exceptions import ResonantDivergence, ZeroFrequency


def test_thermal_weight_ln2():
    # e^{ln 2} - 1 = 1
    assert thermal_weight(math.log(2.0), 1.0) == pytest.approx(1.0, rel=1e-14)


def test_thermal_weight_zero_temperature():
    assert thermal_weight(0.7, math.inf) == 0.0
    assert thermal_weight(-0.7, math.inf) == 1.0


def test_thermal_weight_identity():
    # N(-w) - N(w) = 1
    rng = np.random.default_rng(7)
    for _ in range(100):
        beta = rng.uniform(0.05, 30.0)
        w = rng.uniform(0.01, 10.0)
        diff = thermal_weight(-w, beta) - thermal_weight(w, beta)
        assert diff == pytest.approx(1.0, abs=1e-12)


def test_thermal_weight_overflow_guard():
    n = thermal_weight(10.0, 100.0)  # beta*w = 1000 > 700
    assert 0.0 < n < 1e-300 or n == 0.0
    assert thermal_weight(-10.0, 100.0) == pytest.approx(1.0, abs=1e-15)


def test_thermal_weight_zero_frequency():
    with pytest.raises(ZeroFrequency):
        thermal_weight(0.0, 1.0)


def test_rate_kernel_constant_ln2():
    bath = BathSpec(beta=1.0, density=SpectralDensity.constant(1.0))
    assert rate_kernel(math.log(2.0), bath) == pytest.approx(1.0, rel=1e-14)


def test_rate_kernel_ohmic_zero_limit():
    bath = BathSpec(beta=2.0, density=SpectralDensity.ohmic(eta=1.0, omega_c=10.0))
    assert rate_kernel(1e-15, bath, eps_freq=1e-9) == pytest.approx(0.5, rel=1e-12)
    # approaching from either side outside the guard band
    for w in (1e-6, -1e-6):
        assert rate_kernel(w, bath) == pytest.approx(0.5, rel=1e-4)


def test_rate_kernel_constant_divergence():
    bath = BathSpec(beta=1.0, density=SpectralDensity.constant(1.0))
    with pytest.raises(ResonantDivergence):
        rate_kernel(0.0, bath)


def test_kernel_detailed_balance():
    # kernel(-w)/kernel(w) = e^{beta w}
    rng = np.random.default_rng(11)
    baths = [
        BathSpec(beta=0.7, density=SpectralDensity.constant(2.0)),
        BathSpec(beta=3.0, density=SpectralDensity.ohmic(eta=0.5, omega_c=5.0)),
    ]
    for bath in baths:
        for _ in range(50):
            w = rng.uniform(0.01, 5.0)
            ratio = rate_kernel(-w, bath) / rate_kernel(w, bath)
            assert ratio == pytest.approx(math.exp(bath.beta * w), rel=1e-12)


def test_spectral_density_validation():
    with pytest.raises(ValueError):
        SpectralDensity.constant(-1.0)
    with pytest.raises(ValueError):
        SpectralDensity.ohmic(eta=1.0, omega_c=0.0)
    with pytest.raises(ValueError):
        SpectralDensity.constant(1.0).value(-0.5)


def test_bath_spec_validation():
    density = SpectralDensity.constant(1.0)
    with pytest.raises(ValueError):
        BathSpec(beta=0.0, density=density)
    BathSpec(beta=math.inf, density=density)  # zero temperature is allowed


def test_ohmic_density_value():
    d = SpectralDensity.ohmic(eta=2.0, omega_c=4.0)
    assert d.value(1.0) == pytest.approx(2.0 * math.exp(-0.25), rel=1e-14)
    assert d.value(0.0) == 0.0
