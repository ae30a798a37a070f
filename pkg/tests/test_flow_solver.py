import numpy as np
import pytest

from vtflow.calculate_bochner_residual import calculate_bochner_residual
from vtflow.calculate_energy_density import calculate_energy_density
from vtflow.calculate_energy_density import calculate_omega
from vtflow.calculate_energy_density import coordinate_variance
from vtflow.calculate_energy_density import heat_oracle_error
from vtflow.calculate_tension_field import calculate_tension_field
from vtflow.calculate_tension_field import vt_rhs
from vtflow.condition_c_witness import build_witness
from vtflow.domain_chart import build_domain
from vtflow.errors import FlowAbort
from vtflow.errors import InvariantError
from vtflow.map_state import FlowConfig
from vtflow.map_state import MapState
from vtflow.map_state import initial_state
from vtflow.step_flow import FRAME_COLUMNS
from vtflow.step_flow import FrameProbe
from vtflow.step_flow import run_flow
from vtflow.step_flow import step
from vtflow.target_model import build_target


def torus(counts=16, dimension=2, **vector):
    spec = {'family': 'flat_torus', 'dimension': dimension, 'counts': [counts] * dimension}
    if vector:
        spec['vector'] = vector
    return build_domain(spec)


def sine_state(chart, target, amplitude=1.0):
    return initial_state(chart, target, {'family': 'sine_mode', 'amplitude': amplitude, 'axis': 0, 'component': 0})


def test_constant_map_has_zero_tension_and_energy(flat_chart, unit_sphere):
    state = initial_state(flat_chart, unit_sphere, {'family': 'constant', 'center': [0.3, -0.1]})
    assert np.abs(calculate_tension_field(state)).max() == 0.0
    assert calculate_energy_density(state).max() == 0.0
    witness = build_witness({'f': 'cos_distance', 'radius': 0.5, 'q': 0.3}, unit_sphere, 2)
    assert calculate_omega(state, witness).max() == 0.0


def test_identity_map_is_harmonic(flat_chart, euclidean_plane):
    state = initial_state(flat_chart, euclidean_plane, {'family': 'identity'})
    np.testing.assert_allclose(calculate_tension_field(state), 0.0, atol=1e-12)
    np.testing.assert_allclose(calculate_energy_density(state), 2.0, rtol=1e-12)


def test_equator_into_sphere_is_harmonic(unit_sphere):
    chart = torus(64)
    x = chart.coordinates[..., 0]
    state = MapState(u=np.stack([np.cos(x), np.sin(x)], axis=-1), time=0.0, chart=chart, target=unit_sphere)
    assert np.abs(calculate_tension_field(state)).max() <= 5e-3


def test_vt_rhs_reduces_to_tension_without_v_and_t(flat_chart, euclidean_plane):
    state = sine_state(flat_chart, euclidean_plane)
    np.testing.assert_array_equal(vt_rhs(state), calculate_tension_field(state))


def test_vt_rhs_tensor_term_on_circle():
    chart = torus(16, dimension=1)
    target = build_target({'family': 'euclidean', 'dimension': 1}, {'family': 'constant', 'value': 1.0})
    state = initial_state(chart, target, {'family': 'identity'})
    np.testing.assert_allclose(vt_rhs(state)[..., 0], 1.0, rtol=1e-12)


def test_vt_rhs_drift_term(euclidean_plane):
    chart = torus(64, family='constant', components=[1.0, 0.0])
    state = sine_state(chart, euclidean_plane)
    x = chart.coordinates[..., 0]
    np.testing.assert_allclose(vt_rhs(state)[..., 0], -np.sin(x) + np.cos(x), atol=2e-3)


def test_omega_of_sine_mode(euclidean_plane):
    chart = torus(64)
    witness = build_witness({'f': 'custom_polynomial', 'constant': 2.0, 'radius': 1.0}, euclidean_plane, 2)
    state = sine_state(chart, euclidean_plane)
    expected = np.cos(chart.coordinates[..., 0])**2 / 4.0
    np.testing.assert_allclose(calculate_omega(state, witness), expected, atol=1e-3)


def test_omega_aborts_when_witness_not_positive(flat_chart, euclidean_plane):
    witness = build_witness({'f': 'custom_polynomial', 'constant': 1.0, 'linear': [-1.0, 0.0], 'radius': 0.5},
                            euclidean_plane, 2)
    state = initial_state(flat_chart, euclidean_plane, {'family': 'constant', 'center': [2.0, 0.0]})
    with pytest.raises(FlowAbort, match='condition C breach'):
        calculate_omega(state, witness)


def test_heat_equation_oracle(euclidean_plane):
    chart = torus(32)
    state = sine_state(chart, euclidean_plane, amplitude=0.5)
    config = FlowConfig(dt=1e-3, t_end=0.2, record_every=50)
    run = run_flow(state, config, FrameProbe(oracle={'amplitude': 0.5}), echo=False)
    assert run.final_state.time == pytest.approx(0.2)
    assert [frame.step for frame in run.frames] == [0, 50, 100, 150, 200]
    assert max(frame.oracle_error for frame in run.frames) <= 1e-3
    assert heat_oracle_error(run.final_state, 0.5) == run.frames[-1].oracle_error


def test_constant_map_is_a_fixed_point(flat_chart, euclidean_plane):
    state = initial_state(flat_chart, euclidean_plane, {'family': 'constant', 'center': [0.1, 0.2]})
    run = run_flow(state, FlowConfig(dt=0.01, t_end=0.1, scheme='rk4'), echo=False)
    np.testing.assert_array_equal(run.final_state.u, state.u)
    assert all(frame.sup_e == 0.0 for frame in run.frames)
    assert coordinate_variance(run.final_state) == 0.0


def test_backward_flow_matches_forward_on_static_metric(euclidean_plane):
    chart = torus(16)
    forward = FlowConfig(dt=0.01, t_end=0.5, record_every=10)
    backward = FlowConfig(dt=0.01, t_end=0.5, record_every=10, direction='backward')
    state = sine_state(chart, euclidean_plane, amplitude=0.3)
    ahead = run_flow(state, forward, echo=False)
    behind = run_flow(state.with_values(state.u, backward.initial_time), backward, echo=False)
    np.testing.assert_array_equal(ahead.final_state.u, behind.final_state.u)
    assert behind.frames[0].time == 0.5
    assert behind.final_state.time == pytest.approx(0.0, abs=1e-12)
    assert [f.sup_e for f in ahead.frames] == [f.sup_e for f in behind.frames]


def test_backward_time_labels():
    config = FlowConfig(dt=0.25, t_end=1.0, direction='backward')
    assert config.steps == 4
    assert [config.time_at(k) for k in range(5)] == [1.0, 0.75, 0.5, 0.25, 0.0]


def test_rk4_and_euler_agree_on_small_steps(euclidean_plane):
    state = sine_state(torus(16), euclidean_plane, amplitude=0.3)
    euler = step(state, FlowConfig(dt=1e-4, t_end=1.0))
    rk4 = step(state, FlowConfig(dt=1e-4, t_end=1.0, scheme='rk4'))
    assert np.abs(euler.u - rk4.u).max() <= 1e-8


def test_flow_configuration_is_validated():
    with pytest.raises(InvariantError):
        FlowConfig(dt=0.0, t_end=1.0)
    with pytest.raises(InvariantError):
        FlowConfig(dt=0.1, t_end=0.0)
    with pytest.raises(InvariantError, match='unresolved flow scheme'):
        FlowConfig(dt=0.1, t_end=1.0, scheme='leapfrog')


def test_stability_gate(flat_chart, euclidean_plane):
    state = sine_state(flat_chart, euclidean_plane)
    config = FlowConfig(dt=0.1, t_end=1.0)
    with pytest.raises(InvariantError, match='stability gate'):
        run_flow(state, config, echo=False)
    limit = FlowConfig(dt=0.01, t_end=1.0).check_stability(flat_chart)
    assert limit == pytest.approx(0.9 * (2.0 * np.pi / 16)**2 / 4.0)


def test_initial_data_must_lie_in_omega(flat_chart, euclidean_plane):
    witness = build_witness({'f': 'quadratic_cap', 'cap_height': 1.0, 'radius': 0.3,
                             'f_star': 'euclidean_squared'}, euclidean_plane, 2)
    with pytest.raises(InvariantError, match='image left Omega'):
        initial_state(flat_chart, euclidean_plane, {'family': 'constant', 'center': [0.5, 0.0]}, witness=witness)


def test_omega_escape_aborts_with_nodes():
    # T^1_00 (du^0)^2 pushes the second component out of the ball of radius 0.3
    target = build_target({'family': 'euclidean', 'dimension': 2},
                          {'family': 'constant', 'component': [1, 0, 0], 'value': 40.0})
    witness = build_witness({'f': 'quadratic_cap', 'cap_height': 1.0, 'radius': 0.3,
                             'f_star': 'euclidean_squared'}, target, 2)
    chart = torus(16)
    state = initial_state(chart, target, {'family': 'sine_mode', 'amplitude': 0.2}, witness=witness)
    with pytest.raises(FlowAbort, match='image left Omega') as caught:
        run_flow(state, FlowConfig(dt=0.01, t_end=2.0, record_every=10), echo=False)
    error = caught.value
    assert error.exit_code == 6
    assert error.nodes
    assert error.frames[-1].status.startswith('aborted: image left Omega')
    assert error.last_state.invariant_breach() is None


def test_frame_rows_follow_columns(flat_chart, euclidean_plane):
    run = run_flow(sine_state(flat_chart, euclidean_plane, 0.1), FlowConfig(dt=0.01, t_end=0.02), echo=False)
    rows = run.rows()
    assert len(rows[0]) == len(FRAME_COLUMNS)
    assert rows[-1][-1] == 'ok'
    assert np.isnan(run.frames[0].sup_omega)
    assert run.as_dicts()[0]['step'] == 0


def test_bochner_residual_vanishes_on_trivial_maps(flat_chart, euclidean_plane):
    constant = initial_state(flat_chart, euclidean_plane, {'family': 'constant', 'center': [0.1, 0.2]})
    assert calculate_bochner_residual(constant, dt_probe=1e-4) == 0.0
    linear = initial_state(flat_chart, euclidean_plane, {'family': 'identity'})
    assert calculate_bochner_residual(linear, dt_probe=1e-4) <= 1e-10
    with pytest.raises(ValueError):
        calculate_bochner_residual(linear)


def test_bochner_residual_second_order(euclidean_plane):
    residuals = [calculate_bochner_residual(sine_state(torus(counts), euclidean_plane), dt_probe=1e-4)
                 for counts in (32, 64)]
    assert 3.2 <= residuals[0] / residuals[1] <= 4.8


def test_bochner_residual_with_drift_and_tensor_converges():
    target = build_target({'family': 'euclidean', 'dimension': 2},
                          {'family': 'constant', 'component': [0, 0, 0], 'value': 0.2})
    residuals = []
    for counts in (32, 64):
        chart = torus(counts, family='constant', components=[0.5, 0.25])
        residuals.append(calculate_bochner_residual(sine_state(chart, target, 0.5), dt_probe=1e-5))
    assert residuals[1] < residuals[0] / 3.0


@pytest.mark.parametrize('scheme', ['euler', 'rk4'])
def test_step_commutes_with_periodic_shifts(rng, scheme):
    chart = torus(16, family='constant', components=[0.5, 0.25])
    target = build_target({'family': 'sphere', 'dimension': 2},
                          {'family': 'constant', 'component': [0, 1, 0], 'value': 0.1})
    u = 0.3 * rng.standard_normal(chart.counts + (2,))
    config = FlowConfig(dt=0.005, t_end=1.0, scheme=scheme)

    shift = (3, 5)
    stepped_then_shifted = np.roll(step(MapState(u, 0.0, chart, target), config).u, shift, axis=(0, 1))
    shifted_then_stepped = step(MapState(np.roll(u, shift, axis=(0, 1)), 0.0, chart, target), config).u
    np.testing.assert_array_equal(stepped_then_shifted, shifted_then_stepped)


def test_total_energy_does_not_increase_for_the_heat_equation(euclidean_plane, rng):
    chart = torus(32)
    state = sine_state(chart, euclidean_plane, amplitude=0.5)
    state = state.with_values(state.u + 0.05 * rng.standard_normal(state.u.shape), state.time)
    limit = FlowConfig(dt=1e-3, t_end=1.0).stability_limit(chart)
    config = FlowConfig(dt=0.5 * limit, t_end=60 * 0.5 * limit)

    run = run_flow(state, config, echo=False)
    energies = np.array([frame.total_energy for frame in run.frames])
    assert len(energies) == config.steps + 1
    assert (np.diff(energies) <= 1e-10).all()
    assert energies[-1] < energies[0]


def test_recorded_bochner_residual_uses_trajectory_neighbors(euclidean_plane):
    chart = torus(32)
    state = sine_state(chart, euclidean_plane, amplitude=0.5)
    config = FlowConfig(dt=1e-3, t_end=0.006, record_every=2)
    run = run_flow(state, config, FrameProbe(bochner=True), echo=False)

    states = [state]
    for index in range(1, config.steps + 1):
        states.append(step(states[-1], config, new_time=config.time_at(index)))
    assert [frame.step for frame in run.frames] == [0, 2, 4, 6]
    for frame in run.frames[1:-1]:
        k = frame.step
        expected = calculate_bochner_residual(states[k], neighbors=(states[k - 1], states[k + 1]))
        assert frame.max_bochner_residual == pytest.approx(expected, rel=1e-12)
    final = calculate_bochner_residual(states[-1], dt_probe=1e-4)
    assert run.frames[-1].max_bochner_residual == pytest.approx(final, rel=1e-12)
