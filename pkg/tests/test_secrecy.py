import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secrecylab import (
    DomainError,
    SecrecyBudget,
    SystemConfig,
    WiretapRates,
    db_to_linear,
    eve_snr_ccdf,
    lambda_quantity,
    linear_to_db,
    secrecy_outage_probability,
    transmit_probability,
)
from secrecylab.secrecy import capacity_bob


def test_lambda_example():
    assert lambda_quantity(0.01, 4) == pytest.approx(10.924767, abs=1e-6)


def test_lambda_zero_without_budget():
    assert lambda_quantity(1.0, 7) == 0.0
    assert SecrecyBudget(1.0, 3).unconstrained


def test_lambda_large_n_limit():
    # (N-1)(eps^(1/(1-N)) - 1) -> ln(1/eps)
    assert lambda_quantity(0.01, 10 ** 7) == pytest.approx(math.log(100.0), rel=1e-5)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-8, 0.999), st.integers(2, 200))
def test_lambda_decreasing_in_n(eps, n):
    assert lambda_quantity(eps, n + 1) < lambda_quantity(eps, n)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-8, 0.5), st.floats(1.01, 10.0), st.integers(2, 50))
def test_lambda_decreasing_in_eps(eps, factor, n):
    assert lambda_quantity(eps, n) > lambda_quantity(min(1.0, eps * factor), n)


@pytest.mark.parametrize("bad", [0.0, -0.1, 1.5, math.nan])
def test_epsilon_domain(bad):
    with pytest.raises(DomainError):
        lambda_quantity(bad, 4)


def test_config_validation_and_db():
    cfg = SystemConfig.from_db(4, 20.0)
    assert cfg.power_linear == pytest.approx(100.0)
    assert cfg.power_db == pytest.approx(20.0)
    for kwargs in ({"n_antennas": 1, "power_linear": 1.0}, {"n_antennas": 4, "power_linear": 0.0},
                   {"n_antennas": 4, "power_linear": 1.0, "eve_variance": 0.0},
                   {"n_antennas": 4, "power_linear": 1.0, "rng_seed": -1}):
        with pytest.raises(DomainError):
            SystemConfig(**kwargs)


def test_db_round_trip():
    assert linear_to_db(db_to_linear(13.7)) == pytest.approx(13.7)
    assert np.allclose(db_to_linear(np.array([0.0, 10.0])), [1.0, 10.0])


def test_rates_validation():
    r = WiretapRates(3.0, 1.0)
    assert r.rate_redundancy == 2.0
    with pytest.raises(DomainError):
        WiretapRates(1.0, 2.0)
    with pytest.raises(DomainError):
        WiretapRates(1.0, -0.1)


def test_ccdf_basic_shape():
    g = np.linspace(0, 50, 200)
    c = eve_snr_ccdf(g, 0.3, 4)
    assert c[0] == 1.0
    assert np.all(np.diff(c) < 0)
    assert eve_snr_ccdf(1e12, 0.3, 4) < 1e-20


def test_ccdf_large_n_exponential_limit():
    g = np.linspace(0, 5, 11)
    assert np.allclose(eve_snr_ccdf(g, 0.4, 10 ** 6), np.exp(-g * 0.6 / 0.4), atol=1e-5)


def test_outage_is_ccdf_at_redundancy():
    rates = WiretapRates(4.0, 2.0)
    assert secrecy_outage_probability(rates, 0.3, 4) == pytest.approx(eve_snr_ccdf(3.0, 0.3, 4), rel=1e-14)


def test_outage_certain_without_noise():
    assert secrecy_outage_probability(WiretapRates(10.0, 1.0), 1.0, 4) == 1.0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 10.0), st.floats(0.01, 5.0))
def test_outage_monotone(phi, re, dre):
    lo = secrecy_outage_probability(WiretapRates(re + dre + 1, 1), phi, 4)
    hi = secrecy_outage_probability(WiretapRates(re + 1, 1), phi, 4)
    assert lo <= hi
    assert secrecy_outage_probability(WiretapRates(re + 1, 1), min(0.999, phi * 1.01), 4) >= hi


def test_transmit_probability():
    assert transmit_probability(0.0, 4) == 1.0
    assert transmit_probability(2.0, 4) == pytest.approx(0.857123460, abs=1e-9)
    with pytest.raises(DomainError):
        transmit_probability(-1.0, 4)


def test_capacity_scalar_and_array_agree():
    h2 = np.array([0.1, 1.0, 7.0])
    arr = capacity_bob(100.0, 0.3, h2)
    for x, y in zip(h2, arr):
        assert capacity_bob(100.0, 0.3, float(x)) == y
    with pytest.raises(DomainError):
        capacity_bob(100.0, 0.0, 1.0)
