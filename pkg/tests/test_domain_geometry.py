import math

import numpy as np
import pytest

from vtflow.calculate_ric_v_bound import radial_drift_bound
from vtflow.calculate_ric_v_bound import ric_v_h0_lower_bound
from vtflow.calculate_ric_v_bound import ric_v_lower_bound
from vtflow.calculate_ricci_curvature import calculate_ric_v
from vtflow.calculate_ricci_curvature import calculate_ricci_curvature
from vtflow.calculate_ricci_curvature import curvature_sample
from vtflow.calculate_v_laplacian import calculate_v_laplacian
from vtflow.calculate_v_laplacian import v_laplacian_comparison_rhs
from vtflow.check_backward_super_ricci import admissibility_constants
from vtflow.check_backward_super_ricci import check_backward_super_ricci
from vtflow.domain_chart import build_domain
from vtflow.domain_chart import grid_geometry
from vtflow.errors import InvariantError
from vtflow.grid_derivatives import first_derivative
from vtflow.grid_derivatives import second_derivative


def torus(counts=16, **extra):
    spec = {'family': 'flat_torus', 'dimension': 2, 'counts': [counts, counts]}
    spec.update(extra)
    return build_domain(spec)


def test_flat_torus_metric_is_identity(flat_chart):
    metric = flat_chart.metric_field(0.3)
    np.testing.assert_array_equal(metric, np.broadcast_to(np.eye(2), (16, 16, 2, 2)))
    np.testing.assert_array_equal(flat_chart.time_derivative_field(0.3), 0.0)


def test_conformal_metric_at_half():
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 1.0})
    metric = chart.metric_at(chart.coordinates[3, 5], 0.5)
    np.testing.assert_allclose(metric, math.exp(-1.0) * np.eye(2), rtol=1e-14)


def test_coarse_grid_rejected():
    with pytest.raises(InvariantError, match='grid too coarse'):
        torus(counts=4)


def test_unknown_family_rejected():
    with pytest.raises(InvariantError, match='unresolved domain family'):
        build_domain({'family': 'klein_bottle'})


def test_non_positive_conformal_factor_rejected():
    with pytest.raises(InvariantError, match='non-positive conformal factor'):
        build_domain({'family': 'conformal_torus', 'counts': [8, 8], 'scale': 0.0})
    chart = build_domain({'family': 'scaled_sphere', 'counts': [8, 8], 'offset': 1.0, 'rate': -1.0})
    with pytest.raises(InvariantError, match='non-positive conformal factor'):
        chart.metric_field(2.0)


def test_periodic_indexing_wraps(flat_chart):
    assert flat_chart.wrap((16, -1)) == (0, 15)
    assert flat_chart.wrap((3 + 32, 4 - 16)) == (3, 4)


def test_debug_mode_checks_positive_definiteness(monkeypatch):
    monkeypatch.setenv('VTFLOW_DEBUG', '1')
    chart = build_domain({'family': 'scaled_sphere', 'counts': [8, 8]})
    assert chart.debug
    chart.metric_field(0.1)


def test_grid_geometry_is_read_only_and_cached(flat_chart):
    geometry = grid_geometry(flat_chart, 0.0)
    assert grid_geometry(flat_chart, 5.0) is geometry
    with pytest.raises(ValueError):
        geometry.metric[0, 0, 0, 0] = 2.0


def test_second_derivative_edges_are_exact_for_cubics():
    x = np.linspace(0.0, 1.0, 9)
    field = x**3
    np.testing.assert_allclose(second_derivative(field, 0, x[1] - x[0], False), 6.0 * x, atol=1e-10)
    np.testing.assert_allclose(first_derivative(x**2, 0, x[1] - x[0], False), 2.0 * x, atol=1e-12)


def test_flat_ricci_is_zero(flat_chart):
    assert np.abs(calculate_ricci_curvature(flat_chart, 0.0)).max() <= 1e-9


def test_unit_sphere_ricci_equals_metric():
    chart = build_domain({'family': 'round_sphere', 'dimension': 2, 'counts': [9, 9]})
    ricci = calculate_ricci_curvature(chart, 0.0)
    np.testing.assert_allclose(ricci, chart.metric_field(0.0), rtol=1e-12)


def test_warped_torus_ricci_matches_conformal_change_formula():
    # g = exp(2 psi) I with psi = 0.1 sin(x1): Ric = -(Delta psi) I = 0.1 sin(x1) I
    chart = build_domain({'family': 'warped_torus', 'dimension': 2, 'counts': [64, 64], 'amplitude': 0.1})
    ricci = calculate_ricci_curvature(chart, 0.0)
    expected = 0.1 * np.sin(chart.coordinates[..., 0])
    np.testing.assert_allclose(ricci[..., 0, 0], expected, atol=2e-3)
    np.testing.assert_allclose(ricci[..., 1, 1], expected, atol=2e-3)
    np.testing.assert_allclose(ricci[..., 0, 1], 0.0, atol=1e-10)


def test_curvature_sample_is_consistent():
    chart = torus(vector={'family': 'sine', 'amplitude': 1.0})
    sample = curvature_sample(chart, (3, 17), 0.0)
    assert sample.node == (3, 1)
    np.testing.assert_array_equal(sample.ric_v, sample.ricci - 0.5 * sample.lie_derivative)
    np.testing.assert_allclose(sample.lie_derivative, sample.lie_derivative.T, atol=1e-10)


def test_backward_super_ricci_verdicts():
    flat = check_backward_super_ricci(torus(), [0.0, 0.5, 1.0])
    assert flat.passed and flat.margin == 0.0

    scaled = build_domain({'family': 'scaled_sphere', 'dimension': 2, 'counts': [9, 9]})
    equality = check_backward_super_ricci(scaled, [0.0, 0.25, 0.5])
    assert equality.passed
    assert abs(equality.margin) <= 1e-9

    expanding = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': -1.0})
    failing = check_backward_super_ricci(expanding, [0.0, 0.5])
    assert not failing.passed
    assert failing.margin < 0.0


def test_super_ricci_verdict_invariant_under_constant_rescaling():
    scaled = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'scale': 3.0, 'rate': 0.0})
    report = check_backward_super_ricci(scaled, [0.0, 1.0])
    assert report.passed and report.margin == 0.0


def test_super_ricci_needs_times(flat_chart):
    with pytest.raises(ValueError):
        check_backward_super_ricci(flat_chart, [])


def test_admissibility_constants_track_shrinking_metric():
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 1.0})
    constants = admissibility_constants(chart, [0.0, 0.5, 1.0])
    # h = -g relative to g everywhere
    for _, c in constants:
        assert c == pytest.approx(1.0, rel=1e-12)


def test_v_laplacian_examples():
    chart = torus(counts=64)
    x = chart.coordinates[..., 0]
    np.testing.assert_allclose(calculate_v_laplacian(chart, np.cos(x), 0.0), -np.cos(x), atol=2e-3)

    drifted = torus(counts=64, vector={'family': 'constant', 'components': [1.0, 0.0]})
    np.testing.assert_allclose(calculate_v_laplacian(drifted, np.sin(x), 0.0), -np.sin(x) + np.cos(x), atol=5e-3)


def test_v_laplacian_second_order_convergence():
    errors = []
    for counts in (32, 64):
        chart = torus(counts=counts, vector={'family': 'constant', 'components': [1.0, 0.0]})
        x = chart.coordinates[..., 0]
        errors.append(np.abs(calculate_v_laplacian(chart, np.sin(x), 0.0) - (np.cos(x) - np.sin(x))).max())
    assert 3.2 <= errors[0] / errors[1] <= 4.8


def test_v_laplacian_of_constant_vanishes():
    for spec in ({'family': 'flat_torus'}, {'family': 'warped_torus'}, {'family': 'round_sphere'},
                 {'family': 'conformal_torus', 'rate': 1.0}):
        chart = build_domain(dict(spec, counts=[12, 12], vector={'family': 'sine'}))
        assert np.abs(calculate_v_laplacian(chart, np.full(chart.counts, 3.0), 0.2)).max() <= 1e-12


def test_ric_v_lower_bound_examples(flat_chart):
    assert ric_v_lower_bound(flat_chart) == 0.0
    constant = torus(vector={'family': 'constant', 'components': [0.3, -0.2]})
    assert ric_v_lower_bound(constant) == 0.0
    sine = torus(counts=32, vector={'family': 'sine', 'amplitude': 1.0})
    assert ric_v_lower_bound(sine) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(calculate_ric_v(sine, 0.0)[..., 0, 0], -np.cos(sine.coordinates[..., 0]), atol=1e-14)


def test_ric_v_lower_bound_rejects_empty_region(flat_chart):
    with pytest.raises(ValueError):
        ric_v_lower_bound(flat_chart, np.zeros((16, 16), dtype=bool))


def test_ric_v_h0_bound_of_shrinking_torus():
    # Ric_V - h0 = g, so no negative part
    chart = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': 1.0})
    assert ric_v_h0_lower_bound(chart, None, [0.0, 0.5]) == 0.0
    expanding = build_domain({'family': 'conformal_torus', 'dimension': 2, 'counts': [8, 8], 'rate': -1.0})
    assert ric_v_h0_lower_bound(expanding, None, [0.0, 0.5]) == pytest.approx(1.0, rel=1e-12)


def test_radial_drift_bound_is_monotone():
    chart = torus(counts=32, vector={'family': 'constant', 'components': [0.5, 0.0]})
    values = [radial_drift_bound(chart, radius) for radius in (0.5, 1.0, 2.0)]
    assert values == sorted(values)
    assert values[-1] <= 0.5 + 1e-6


def test_comparison_rhs_examples():
    assert v_laplacian_comparison_rhs(1.0, 0.0, 2) == 1.0
    assert v_laplacian_comparison_rhs(1.0, 1.0, 2) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-12)
    assert v_laplacian_comparison_rhs(2.0, 0.0, 3, v=lambda r: 0.1 * r) == pytest.approx(1.2)
    with pytest.raises(ValueError):
        v_laplacian_comparison_rhs(0.0, 1.0, 2)
