import math

import numpy as np
import pytest

from vtflow.build_cutoff import build_cutoff
from vtflow.build_cutoff import certify_cutoff
from vtflow.build_cutoff import required_power
from vtflow.calculate_l_length import calculate_l_length
from vtflow.calculate_l_length import straight_curve
from vtflow.calculate_l_length import trace_h
from vtflow.calculate_muller_quantities import calculate_muller_quantities
from vtflow.domain_chart import build_domain
from vtflow.errors import InvariantError
from vtflow.minimize_l import d_frak_field
from vtflow.minimize_l import d_frak_gradient_squared
from vtflow.minimize_l import in_parabolic_region
from vtflow.minimize_l import minimize_l
from vtflow.minimize_l import reduced_distance


def unit_offset(chart, distance=1.0):
    return chart.base_point + np.array([distance, 0.0])


def test_trace_h_examples(flat_chart):
    points = flat_chart.coordinates[:2, :2]
    np.testing.assert_array_equal(trace_h(flat_chart, points, 0.3), 0.0)

    shrinking = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 1.0})
    np.testing.assert_allclose(trace_h(shrinking, points, 0.7), -2.0, rtol=1e-12)

    sphere = build_domain({'family': 'scaled_sphere', 'dimension': 2, 'counts': [8, 8]})
    np.testing.assert_allclose(trace_h(sphere, np.zeros((1, 2)), 0.5), 2.0 / (1.0 + 2.0 * 0.5), rtol=1e-12)


def test_l_length_closed_forms(flat_chart):
    start = flat_chart.base_point
    end = unit_offset(flat_chart)
    assert calculate_l_length(flat_chart, straight_curve(start, start, 1.0)) == 0.0
    assert calculate_l_length(flat_chart, straight_curve(start, end, 1.0)) == pytest.approx(0.5, rel=1e-12)
    constant_speed = calculate_l_length(flat_chart, straight_curve(start, end, 1.0, speed='constant'))
    assert constant_speed == pytest.approx(2.0 / 3.0, rel=1e-2)
    assert constant_speed > 0.5


def test_l_length_refinement_is_second_order(flat_chart):
    start = flat_chart.base_point
    end = unit_offset(flat_chart)
    exact = 2.0 / 3.0
    errors = [abs(calculate_l_length(flat_chart, straight_curve(start, end, 1.0, segments=k,
                                                              speed='constant')) - exact)
              for k in (32, 64)]
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.2)


def test_curve_validation(flat_chart):
    with pytest.raises(InvariantError):
        straight_curve(flat_chart.base_point, flat_chart.base_point, 1.0, segments=4)
    with pytest.raises(ValueError):
        straight_curve(flat_chart.base_point, flat_chart.base_point, 0.0)


def test_minimize_l_on_flat_torus(flat_chart):
    result = minimize_l(flat_chart, unit_offset(flat_chart), 1.0)
    assert result.value == pytest.approx(0.5, abs=1e-3)
    assert result.converged
    assert result.warning == ''
    assert result.geodesic_residual < 0.5
    finer = minimize_l(flat_chart, unit_offset(flat_chart), 1.0, segments=64)
    assert finer.geodesic_residual < result.geodesic_residual

    trivial = minimize_l(flat_chart, flat_chart.base_point, 1.0)
    assert trivial.value == pytest.approx(0.0, abs=1e-10)


def test_minimize_l_never_exceeds_straight_candidates(flat_chart):
    end = flat_chart.base_point + np.array([0.7, -0.4])
    result = minimize_l(flat_chart, end, 0.5)
    for speed in ('optimal', 'constant'):
        candidate = straight_curve(flat_chart.base_point, end, 0.5, speed=speed)
        assert result.value <= calculate_l_length(flat_chart, candidate) + 1e-12


def test_constant_trace_hook_adds_separable_term(flat_chart):
    def offset(points, taus):
        return np.full(np.shape(points)[:-1], 0.3)
    result = minimize_l(flat_chart, unit_offset(flat_chart), 1.0, h_function=offset)
    assert result.value == pytest.approx(0.5 + 2.0 / 3.0 * 0.3, abs=1e-3)


def test_reduced_distance_closed_forms(flat_chart):
    ell, d, _ = reduced_distance(flat_chart, unit_offset(flat_chart), 1.0)
    assert ell == pytest.approx(0.25, abs=1e-3)
    assert d == pytest.approx(1.0, abs=1e-3)
    ell, d, _ = reduced_distance(flat_chart, flat_chart.base_point, 1.0)
    assert (ell, d) == (pytest.approx(0.0, abs=1e-9), pytest.approx(0.0, abs=1e-4))


@pytest.mark.parametrize('factor', [2.0, 4.0])
def test_reduced_distance_scales_inversely_with_time(flat_chart, factor):
    x = unit_offset(flat_chart)
    base = reduced_distance(flat_chart, x, 0.5)[0]
    scaled = reduced_distance(flat_chart, x, 0.5 * factor)[0]
    assert scaled == pytest.approx(base / factor, rel=1e-3)


def test_parabolic_distance_is_monotone_along_a_ray(flat_chart):
    values = [reduced_distance(flat_chart, unit_offset(flat_chart, r), 1.0)[1] for r in (0.25, 0.5, 1.0, 1.5)]
    assert values == sorted(values)


def test_parabolic_distance_on_rescaled_torus():
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [16, 16], 'scale': 2.0, 'rate': 0.0})
    _, d, _ = reduced_distance(chart, unit_offset(chart), 1.0)
    assert d == pytest.approx(2.0, abs=2e-3)


def test_parabolic_distance_gradient(flat_chart):
    gradient = d_frak_gradient_squared(flat_chart, unit_offset(flat_chart), 1.0)
    assert gradient <= 3.0
    assert gradient == pytest.approx(1.0, abs=1e-2)


def test_d_frak_field_uses_distance_on_static_charts(flat_chart):
    field = d_frak_field(flat_chart, 0.5)
    assert field[flat_chart.base_node] == 0.0
    np.testing.assert_array_equal(field, flat_chart.distance_field(0.5))


def test_d_frak_field_on_shrinking_torus_with_stride():
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 0.5})
    field = d_frak_field(chart, 0.25, stride=4, segments=16)
    assert np.isnan(field[1, 1])
    assert np.isfinite(field[4, 4])
    assert field[4, 4] == pytest.approx(0.0, abs=1e-3)


def test_minimize_l_rejects_expanding_torus():
    expanding = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': -1.0})
    with pytest.raises(InvariantError, match='not a backward super Ricci flow'):
        minimize_l(expanding, unit_offset(expanding), 0.5, segments=8)
    with pytest.raises(InvariantError):
        reduced_distance(expanding, unit_offset(expanding), 0.5, segments=8)

    result = minimize_l(expanding, unit_offset(expanding), 0.5, segments=8, check_admissibility=False)
    assert np.isfinite(result.value)


def test_parabolic_region_membership():
    d = np.array([0.5, 1.5, np.nan])
    np.testing.assert_array_equal(in_parabolic_region(d, 0.1, 1.0, 1.0), [True, False, False])
    assert not in_parabolic_region(d, 1.5, 1.0, 1.0).any()


def test_muller_quantities_on_flat_torus():
    chart = build_domain({'family': 'flat_torus', 'dimension': 2, 'counts': [16, 16],
                          'vector': {'family': 'sine', 'amplitude': 0.5}})
    sample = calculate_muller_quantities(chart, 0.5)
    assert np.abs(sample.d_v).max() == 0.0
    assert np.abs(sample.h_v).max() == 0.0
    assert np.abs(sample.r_v).max() == 0.0
    assert sample.theorem_hypothesis()
    assert sample.lemma_hypothesis(0.0)
    assert sample.trace_hypothesis()


def test_muller_quantities_on_round_sphere():
    chart = build_domain({'family': 'round_sphere', 'dimension': 2, 'counts': [9, 9],
                          'vector': {'family': 'unit_coordinate'}})
    sample = calculate_muller_quantities(chart, 0.5)
    np.testing.assert_allclose(sample.d_v, 2.0, rtol=1e-9)
    np.testing.assert_allclose(sample.r_v, 1.0, rtol=1e-9)
    assert sample.theorem_hypothesis()


def test_muller_quantities_on_shrinking_torus():
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 1.0})
    sample = calculate_muller_quantities(chart, 0.5)
    np.testing.assert_allclose(sample.d_v, -4.0, atol=1e-6)
    np.testing.assert_allclose(sample.trace, -2.0, rtol=1e-12)
    assert not sample.theorem_hypothesis()
    assert not sample.lemma_hypothesis(0.0)


def test_trace_hypothesis_undefined_at_zero(flat_chart):
    sample = calculate_muller_quantities(flat_chart, 0.0)
    assert np.isnan(sample.h_v).all()
    with pytest.raises(ValueError):
        sample.trace_hypothesis()
    with pytest.raises(ValueError):
        calculate_muller_quantities(flat_chart, -1.0)


def test_cutoff_support_properties():
    profile = certify_cutoff(build_cutoff(2.0, 1.0))
    assert profile.value(0.0, 0.0) == 1.0
    assert profile.value(2.0, 0.0) == 0.0
    assert profile.value(0.5, 1.0) == 0.0
    assert profile.value(3.0, 2.0) == 0.0
    assert profile.constants['certified']
    for name in ('phi_one_inside', 'phi_zero_outside', 'phi_nonincreasing', 'phi_flat_inside',
                 'chi_one_early', 'chi_zero_late', 'values_in_unit_interval', 'psi_origin_one'):
        assert profile.constants[name], name


def test_cutoff_power_follows_alpha():
    assert required_power(0.5) == 2
    assert required_power(0.75) == 3
    assert build_cutoff(1.0, 1.0, alpha=0.5).power == 3
    assert build_cutoff(1.0, 1.0, alpha=0.9).power == 7
    with pytest.raises(ValueError):
        build_cutoff(1.0, 1.0, alpha=1.0)
    with pytest.raises(ValueError):
        certify_cutoff(build_cutoff(1.0, 1.0), samples=10)


def test_cutoff_constants_are_stable_under_refinement():
    coarse = certify_cutoff(build_cutoff(2.0, 1.0), samples=10000).constants
    fine = certify_cutoff(build_cutoff(2.0, 1.0), samples=20000).constants
    for name in ('C_alpha', 'C_half', 'C_three_quarter', 'D', 'C0'):
        assert math.isfinite(coarse[name])
        assert fine[name] == pytest.approx(coarse[name], rel=1e-2)
