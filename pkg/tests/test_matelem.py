"""Closed-form transition elements against each other and against quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugepair.core import SystemParams
from gaugepair.matelem import (
    OscillatorId,
    Process,
    displacement_element,
    exponential_matrix,
    form_factor_oracle,
    gaussian_form_factor,
    longitudinal_absorption,
    longitudinal_emission,
    mode_scale,
    rho_fourier_element,
    scalar_absorption,
    scalar_emission,
    transition_element,
)

PARAMS = SystemParams()

k_vectors = st.tuples(
    st.floats(min_value=-5.0, max_value=5.0),
    st.floats(min_value=-2.0, max_value=2.0),
    st.floats(min_value=-2.0, max_value=2.0),
).filter(lambda k: sum(c * c for c in k) > 1e-6)

oscillators = st.sampled_from([OscillatorId.A, OscillatorId.B])


def test_form_factor_is_gaussian_in_kd():
    assert gaussian_form_factor(PARAMS, 0.0) == 1.0
    kd = 1.5
    k_x = kd / PARAMS.dipole_d
    assert gaussian_form_factor(PARAMS, k_x) == pytest.approx(math.exp(-0.5 * kd * kd))


@settings(max_examples=100, deadline=None)
@given(k=k_vectors, osc=oscillators)
def test_absorption_conjugation_carries_the_metric_sign(k, osc):
    # scalar absorption is the METRIC adjoint of emission (extra minus);
    # longitudinal modes have ordinary norm and plain Hermitian conjugation
    emit = scalar_emission(PARAMS, osc, k)
    absorb = scalar_absorption(PARAMS, osc, k)
    assert absorb == pytest.approx(-emit.conjugate(), abs=1e-15)
    emit_l = longitudinal_emission(PARAMS, osc, k)
    absorb_l = longitudinal_absorption(PARAMS, osc, k)
    assert absorb_l == pytest.approx(+emit_l.conjugate(), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(k=k_vectors, osc=oscillators)
def test_longitudinal_is_frequency_weighted_scalar(k, osc):
    omega = math.sqrt(sum(c * c for c in k)) * PARAMS.c
    ratio = osc.frequency(PARAMS) / omega
    emit_s = scalar_emission(PARAMS, osc, k)
    emit_l = longitudinal_emission(PARAMS, osc, k)
    assert emit_l == pytest.approx(-ratio * emit_s, abs=1e-18)


def test_emission_pair_cancels_on_resonance():
    # at omega_gamma = omega_A the longitudinal element is exactly minus the
    # scalar one, which is what kills the subsidiary residual on shell
    k = (PARAMS.omega_a / PARAMS.c, 0.0, 0.0)
    s = scalar_emission(PARAMS, OscillatorId.A, k)
    l = longitudinal_emission(PARAMS, OscillatorId.A, k)
    assert l == pytest.approx(-s, rel=1e-15)


@settings(max_examples=100, deadline=None)
@given(k=k_vectors, osc=oscillators)
def test_rho_fourier_reflection_conjugates(k, osc):
    direct = rho_fourier_element(PARAMS, osc, k)
    reflected = rho_fourier_element(PARAMS, osc, k, sign=-1)
    assert reflected == pytest.approx(direct.conjugate(), abs=1e-18)


def test_transition_element_dispatch():
    k = (0.9, 0.0, 0.0)
    te = transition_element(PARAMS, Process.LONG_ABSORB, OscillatorId.B, k)
    assert te.value == longitudinal_absorption(PARAMS, OscillatorId.B, k)
    assert te.process is Process.LONG_ABSORB
    assert te.k_vector == k


def test_mode_scale_frequency_dependence():
    assert mode_scale(PARAMS, 4.0) == pytest.approx(0.5 * mode_scale(PARAMS, 1.0))


# -- displacement elements -----------------------------------------------------

def test_displacement_ground_elements():
    lam_d = 0.8
    gauss = math.exp(-0.5 * lam_d * lam_d)
    assert displacement_element(0, 0, lam_d) == pytest.approx(gauss)
    assert displacement_element(0, 1, lam_d) == pytest.approx(1j * lam_d * gauss)
    assert displacement_element(1, 0, lam_d) == pytest.approx(1j * lam_d * gauss)
    # diagonal picks up the Laguerre factor (1 - lam_d^2)
    assert displacement_element(1, 1, lam_d) == pytest.approx(
        (1.0 - lam_d * lam_d) * gauss
    )


@settings(max_examples=80, deadline=None)
@given(
    m=st.integers(0, 6),
    n=st.integers(0, 6),
    lam_d=st.floats(min_value=-2.0, max_value=2.0),
)
def test_displacement_symmetric_and_bounded(m, n, lam_d):
    e = displacement_element(m, n, lam_d)
    assert displacement_element(n, m, lam_d) == pytest.approx(e, abs=1e-12)
    assert abs(e) <= 1.0 + 1e-12  # unitary operator elements


def test_displacement_column_is_near_unit_norm():
    # exp(i lam x) is unitary; the column norm approaches 1 as rows are added
    lam_d = 0.6
    col = [abs(displacement_element(m, 0, lam_d)) ** 2 for m in range(12)]
    assert sum(col) == pytest.approx(1.0, abs=1e-12)


def test_exponential_matrix_carries_center_phase():
    k_x = 1.1
    size = 3
    mat_a = exponential_matrix(PARAMS, OscillatorId.A, k_x, size)
    mat_b = exponential_matrix(PARAMS, OscillatorId.B, k_x, size)
    phase = np.exp(-1j * k_x * PARAMS.separation_l)
    assert np.allclose(mat_b, phase * mat_a, atol=1e-14)
    assert mat_a[0, 1] == pytest.approx(
        displacement_element(0, 1, -k_x * PARAMS.dipole_d)
    )


# -- the wavefunction oracle -----------------------------------------------------

@pytest.mark.parametrize("kd", [1e-3, 0.3, 1.0, 2.2, 3.0])
def test_oracle_matches_closed_element(kd):
    k_x = kd / PARAMS.dipole_d
    closed = -1j * kd * gaussian_form_factor(PARAMS, k_x)
    numeric = form_factor_oracle(PARAMS, OscillatorId.A, k_x)
    assert abs(numeric - closed) <= 1e-10 * abs(closed)


def test_oracle_rejects_nonfinite():
    with pytest.raises(ValueError):
        form_factor_oracle(PARAMS, OscillatorId.A, float("nan"))
