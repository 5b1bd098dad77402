"""Frequency-response layer: values, monotonicity, cascade algebra, domains."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mcchannel import (
    ComplexResponse,
    DiffusionChannel,
    FrequencyBand,
    ParameterError,
    ReceptionSystem,
    cascade_gain_db,
    cascade_phase_delay,
    cascade_response,
    diffusion3d_response,
    diffusion_gain_db,
    diffusion_phase_delay,
    diffusion_response,
    reception_gain_db,
    reception_phase_delay,
    reception_response,
)

CH = DiffusionChannel(mu=83.0, x_r=14.0)
RS = ReceptionSystem(k_f=1e-3, k_r=4e-3, r=4.0)
W1, W2 = 5e-4, 0.4

# Hand-computed reference values for CH / RS at the band edges:
# root = sqrt(x_r^2 w / (2 mu)) evaluated independently.
ROOT_W1 = 0.024297354707521816
MAG_G_W1 = 0.9759954497634531
GAIN_G_W1_DB = -0.21104414148645445
DELAY_G_W1 = 48.59470941504363
MAG_G_W2 = 0.5029658664409482
PHASE_G_W2 = -0.6872329711433424
MAG_H_W1 = 0.9922778767136676
MAG_H_CORNER = 0.7071067811865476
MAG_H_W2 = 0.009999500037496875
DELAY_H_W1 = 248.70998909352286
DELAY_H_CORNER = 196.34954084936206
MAG_M_W1 = 0.9684586925734803


def test_diffusion_response_matches_reference_values():
    low = diffusion_response(CH, W1)
    assert_allclose(low.magnitude, MAG_G_W1, rtol=1e-12)
    assert_allclose(low.phase, -ROOT_W1, rtol=1e-12)
    high = diffusion_response(CH, W2)
    assert_allclose(high.magnitude, MAG_G_W2, rtol=1e-12)
    assert_allclose(high.phase, PHASE_G_W2, rtol=1e-12)
    assert_allclose(diffusion_gain_db(CH, W1), GAIN_G_W1_DB, rtol=1e-12)
    assert_allclose(diffusion_phase_delay(CH, W1), DELAY_G_W1, rtol=1e-12)


def test_zero_distance_collapses_to_identity():
    ident = DiffusionChannel(mu=83.0, x_r=0.0)
    for w in (1e-6, 1e-2, 1e3):
        resp = diffusion_response(ident, w)
        assert resp.magnitude == 1.0
        assert resp.phase == 0.0
        assert diffusion_gain_db(ident, w) == 0.0
        assert diffusion_phase_delay(ident, w) == 0.0


def test_array_evaluation_matches_scalar():
    grid = np.logspace(-5, 2, 17)
    mag, phase = diffusion_response(CH, grid)
    gain = diffusion_gain_db(CH, grid)
    delay = diffusion_phase_delay(CH, grid)
    for i, w in enumerate(grid):
        one = diffusion_response(CH, float(w))
        assert one.magnitude == mag[i]
        assert one.phase == phase[i]
        assert diffusion_gain_db(CH, float(w)) == gain[i]
        assert diffusion_phase_delay(CH, float(w)) == delay[i]
    hm, hp = reception_response(RS, grid)
    for i, w in enumerate(grid):
        one = reception_response(RS, float(w))
        assert one.magnitude == hm[i]
        assert one.phase == hp[i]


def test_responses_decrease_with_frequency():
    # Magnitude, dB gain, phase, and phase delay of both stages are all
    # strictly decreasing in omega; sample densely over several decades.
    # The diffusion magnitude itself is only probed up to 1e2 rad/s: above
    # that its exponent passes ~-700 and the float value underflows to 0,
    # turning strict decrease into ties (checked separately below).
    grid = np.logspace(-6, 6, 2048)
    mag_g, phase_g = diffusion_response(CH, np.logspace(-6, 2, 2048))
    assert np.all(np.diff(mag_g) < 0)
    assert np.all(np.diff(phase_g) < 0)
    assert np.all(np.diff(diffusion_gain_db(CH, grid)) < 0)
    assert np.all(np.diff(diffusion_phase_delay(CH, grid)) < 0)
    mag_h, phase_h = reception_response(RS, grid)
    assert np.all(np.diff(mag_h) < 0)
    assert np.all(np.diff(phase_h) < 0)
    assert np.all(np.diff(reception_phase_delay(RS, grid)) < 0)
    assert diffusion_response(CH, 1e6).magnitude == 0.0


def test_gain_db_consistent_with_magnitude():
    grid = np.logspace(-4, 1, 64)
    mag_g, _ = diffusion_response(CH, grid)
    assert_allclose(diffusion_gain_db(CH, grid), 20.0 * np.log10(mag_g),
                    rtol=0, atol=1e-12)
    mag_h, _ = reception_response(RS, grid)
    assert_allclose(reception_gain_db(RS, grid), 20.0 * np.log10(mag_h),
                    rtol=0, atol=1e-12)


def test_reception_reference_values():
    assert RS.dc_gain == 1.0
    assert RS.corner == RS.k_r
    assert_allclose(reception_response(RS, W1).magnitude, MAG_H_W1, rtol=1e-12)
    assert_allclose(reception_response(RS, W2).magnitude, MAG_H_W2, rtol=1e-12)
    assert_allclose(reception_phase_delay(RS, W1), DELAY_H_W1, rtol=1e-12)
    assert_allclose(reception_phase_delay(RS, RS.k_r), DELAY_H_CORNER, rtol=1e-12)


def test_reception_at_zero_frequency():
    resp = reception_response(RS, 0.0)
    assert resp.magnitude == RS.dc_gain
    assert resp.phase == 0.0
    # The phase-delay limit at omega -> 0 is 1 / k_r.
    assert reception_phase_delay(RS, 0.0) == 1.0 / RS.k_r
    near = reception_phase_delay(RS, 1e-9)
    assert abs(near - 1.0 / RS.k_r) < 1e-6


def test_reception_half_power_at_corner():
    resp = reception_response(RS, RS.k_r)
    assert_allclose(resp.magnitude, RS.dc_gain / math.sqrt(2.0), rtol=1e-12)
    assert_allclose(resp.magnitude, MAG_H_CORNER, rtol=1e-12)
    assert_allclose(resp.phase, -math.pi / 4.0, rtol=1e-12)


def test_cascade_combines_stage_responses():
    m = cascade_response(CH, RS, W1)
    assert_allclose(m.magnitude, MAG_M_W1, rtol=1e-12)
    g = diffusion_response(CH, W1)
    h = reception_response(RS, W1)
    assert m.magnitude == g.magnitude * h.magnitude
    assert m.phase == g.phase + h.phase
    # and in complex arithmetic
    assert abs(m.as_complex - g.as_complex * h.as_complex) < 1e-15

    grid = np.logspace(-4, 0, 32)
    assert_allclose(cascade_gain_db(CH, RS, grid),
                    diffusion_gain_db(CH, grid) + reception_gain_db(RS, grid),
                    rtol=0, atol=0)
    assert_allclose(cascade_phase_delay(CH, RS, grid),
                    diffusion_phase_delay(CH, grid)
                    + reception_phase_delay(RS, grid), rtol=0, atol=0)


def test_three_dimensional_variant_scales_magnitude_only():
    # The 3-D point-source response differs by the frequency-independent
    # prefactor 1 / (4 pi mu d); the phase is identical, so delay- and
    # gain-variation measures coincide with the 1-D stage.
    d = 14.0
    prefactor = 1.0 / (4.0 * math.pi * CH.mu * d)
    grid = np.logspace(-4, 0, 32)
    mag1, phase1 = diffusion_response(CH, grid)
    mag3, phase3 = diffusion3d_response(CH.mu, d, grid)
    assert_allclose(mag3, prefactor * mag1, rtol=1e-15)
    assert_allclose(phase3, phase1, rtol=0, atol=0)
    one = diffusion3d_response(CH.mu, d, W2)
    assert isinstance(one, ComplexResponse)
    assert_allclose(one.magnitude, prefactor * MAG_G_W2, rtol=1e-12)


def test_band_period():
    band = FrequencyBand(W1, W2)
    assert_allclose(band.period, 2.0 * math.pi / W1, rtol=1e-15)


def test_complex_response_polar_to_complex():
    resp = ComplexResponse(2.0, -math.pi / 2.0)
    assert abs(resp.as_complex - complex(0.0, -2.0)) < 1e-15


@pytest.mark.parametrize("ctor, kwargs", [
    (DiffusionChannel, dict(mu=0.0, x_r=1.0)),
    (DiffusionChannel, dict(mu=-1.0, x_r=1.0)),
    (DiffusionChannel, dict(mu=math.nan, x_r=1.0)),
    (DiffusionChannel, dict(mu=83.0, x_r=-1.0)),
    (ReceptionSystem, dict(k_f=0.0, k_r=4e-3, r=4.0)),
    (ReceptionSystem, dict(k_f=1e-3, k_r=-4e-3, r=4.0)),
    (ReceptionSystem, dict(k_f=1e-3, k_r=4e-3, r=0.0)),
    (FrequencyBand, dict(omega1=0.0, omega2=1.0)),
    (FrequencyBand, dict(omega1=0.4, omega2=5e-4)),
    (FrequencyBand, dict(omega1=1.0, omega2=1.0)),
])
def test_invalid_parameters_raise(ctor, kwargs):
    with pytest.raises(ParameterError):
        ctor(**kwargs)


def test_invalid_frequencies_raise():
    with pytest.raises(ParameterError):
        diffusion_response(CH, 0.0)
    with pytest.raises(ParameterError):
        diffusion_response(CH, -1.0)
    with pytest.raises(ParameterError):
        diffusion_phase_delay(CH, 0.0)
    with pytest.raises(ParameterError):
        diffusion_response(CH, np.array([1.0, -2.0]))
    with pytest.raises(ParameterError):
        reception_response(RS, -1e-9)
    with pytest.raises(ParameterError):
        reception_response(RS, math.inf)
    with pytest.raises(ParameterError):
        diffusion3d_response(83.0, 0.0, 1.0)
