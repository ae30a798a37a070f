# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate Bochner residual
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate Bochner residual" is a function that measures how far a numerical flow iterate is from satisfying the Bochner-Weitzenbock identity for the energy density of a VT-harmonic map heat flow, forward or backward in time.
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.calculate_energy_density import calculate_energy_density
from vtflow.calculate_ricci_curvature import calculate_ric_v
from vtflow.calculate_tension_field import second_fundamental_form
from vtflow.calculate_tension_field import vt_rhs
from vtflow.calculate_v_laplacian import calculate_v_laplacian
from vtflow.domain_chart import grid_geometry


def _energy_rate(state, dt_probe, neighbors, direction):
    """Time derivative of e(u) in the flow's own time parameter."""

    if neighbors is not None:
        previous, following = neighbors
        return ((calculate_energy_density(following) - calculate_energy_density(previous))
                / (following.time - previous.time))
    if dt_probe is None:
        raise ValueError('bochner residual needs neighboring states or a probe step')

    # Probe states u +- dt F; the backward flow moves against F in tau
    velocity = vt_rhs(state)
    if direction == 'backward':
        velocity = -velocity
    plus = state.with_values(state.u + dt_probe * velocity, state.time + dt_probe)
    minus = state.with_values(state.u - dt_probe * velocity, state.time - dt_probe)
    return (calculate_energy_density(plus) - calculate_energy_density(minus)) / (2.0 * dt_probe)


def calculate_bochner_residual(state, dt_probe=None, neighbors=None, direction='forward', return_field=False):
    """
    Description: evaluates (1/2)(Delta_V -+ d_t)|du|^2 minus the Bochner-Weitzenbock right-hand side
    Inputs: 'state' -- a MapState that is a flow iterate
            'dt_probe' -- step of the probe states used for d_t |du|^2 when no neighbors are given
            'neighbors' -- optional tuple (previous state, following state) of the recorded trajectory
            'direction' -- 'forward' or 'backward'
            'return_field' -- return the residual grid field instead of its max norm
    Returned Value: Returns the max abs residual over the grid, or the residual field
    Preconditions: neighbors or dt_probe given
    """

    if direction not in ('forward', 'backward'):
        raise ValueError(f'unknown flow direction {direction!r}')
    chart = state.chart
    time = state.time
    geometry = grid_geometry(chart, time)
    inverse = geometry.inverse
    du = state.differential
    second = second_fundamental_form(state)
    target = state.target
    target_metric = target.metric(state.u)

    # Left-hand side
    energy = calculate_energy_density(state)
    rate = _energy_rate(state, dt_probe, neighbors, direction)
    laplacian = calculate_v_laplacian(chart, energy, time)
    if direction == 'forward':
        lhs = 0.5 * (laplacian - rate)
    else:
        lhs = 0.5 * (laplacian + rate)

    # Pullback <du e_a, du e_b> with both indices raised
    pullback = np.einsum('...ij,...ia,...jb->...ab', target_metric, du, du)
    raised = np.einsum('...ac,...cd,...db->...ab', inverse, pullback, inverse)

    hessian_term = np.einsum('...ac,...bd,...ij,...iab,...jcd->...', inverse, inverse, target_metric, second, second)
    ricci_term = np.einsum('...ab,...ab->...', calculate_ric_v(chart, time), raised)
    curvature_term = np.einsum('...ac,...bd,...ijkl,...ia,...jb,...kc,...ld->...',
                               inverse, inverse, target.riemann(state.u), du, du, du, du)

    # Derivative of T along du e_a, applied to (du e_b, du e_b)
    directional = np.einsum('...ijkl,...la->...ijka', target.tensor_derivative(state.u), du)
    applied = np.einsum('...ijka,...jb,...kd,...bd->...ia', directional, du, du, inverse)
    derivative_term = np.einsum('...ia,...ip,...pc,...ac->...', applied, target_metric, du, inverse)

    # T(nabla du, du) + T(du, nabla du)
    tensor = target.tensor_values(state.u)
    mixed = (np.einsum('...ijk,...jab,...kd,...bd->...ia', tensor, second, du, inverse)
             + np.einsum('...ijk,...jd,...kab,...bd->...ia', tensor, du, second, inverse))
    tensor_term = np.einsum('...ia,...ip,...pc,...ac->...', mixed, target_metric, du, inverse)

    # Metric evolution term h = d g / 2
    evolution_term = np.einsum('...ab,...ab->...', 0.5 * chart.time_derivative_field(time), raised)
    if direction == 'backward':
        evolution_term = -evolution_term

    rhs = hessian_term + ricci_term - curvature_term - derivative_term - tensor_term + evolution_term
    residual = lhs - rhs
    if return_field:
        return residual
    return float(np.abs(residual).max())
