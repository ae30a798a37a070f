# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate energy density
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate energy density" is a set of functions that evaluate the energy density e(u) = |du|^2, the estimated quantity omega = e(u) / f(u)^2, the total energy and the frame diagnostics recorded along a flow.
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.domain_chart import grid_geometry
from vtflow.errors import FlowAbort


def calculate_energy_density(state, node=None, time=None):
    """
    Description: computes e(u) = g^ab h_ij(u) d_a u^i d_b u^j
    Inputs: 'state' -- a MapState
            'node' -- optional node index; the full field is returned when omitted
            'time' -- time of the domain metric; the state time when omitted
    Returned Value: Returns the energy density at the node or on the grid
    Preconditions: map inside the target chart
    """

    geometry = grid_geometry(state.chart, state.time if time is None else time)
    du = state.differential
    energy = np.einsum('...ab,...ij,...ia,...jb->...', geometry.inverse, state.target.metric(state.u), du, du)
    if node is None:
        return energy
    return float(energy[state.chart.wrap(node)])


def calculate_omega(state, witness, node=None):
    """
    Description: computes omega = e(u) / f(u)^2
    Inputs: 'state' -- a MapState
            'witness' -- a ConditionCWitness
            'node' -- optional node index; the full field is returned when omitted
    Returned Value: Returns omega at the node or on the grid
    Preconditions: f(u) > 0 at every node, otherwise the flow is aborted
    """

    values = witness.f(state.u)
    if values.min() <= 0.0:
        nodes = [tuple(int(i) for i in n) for n in np.argwhere(values <= 0.0)]
        raise FlowAbort('condition C breach: f(u) <= 0', last_state=state, nodes=nodes)
    omega = calculate_energy_density(state) / values**2
    if node is None:
        return omega
    return float(omega[state.chart.wrap(node)])


def total_energy(state):
    """Integral of e(u) against the Riemannian volume of the chart."""

    geometry = grid_geometry(state.chart, state.time)
    volume = np.sqrt(np.linalg.det(geometry.metric)) * np.prod(state.chart.spacing)
    return float(np.sum(calculate_energy_density(state) * volume))


def coordinate_variance(state):
    """Largest variance across nodes among the target coordinates of the map."""

    values = state.u.reshape(-1, state.target.dimension)
    return float(values.var(axis=0).max())


def heat_oracle_error(state, amplitude, axis=0, component=0, start_time=0.0, offset=0.0):
    """
    Description: sup error of a sine-mode run against the heat solution amplitude exp(-t) sin(x^axis)
    Inputs: 'state' -- a MapState of a flat-torus flow into Euclidean space with V = 0, T = 0
            'amplitude' -- initial amplitude of the sine mode
            'axis' -- domain axis of the mode
            'component' -- target component carrying the mode
            'start_time' -- time of the initial data
            'offset' -- constant value of the mode's target component
    Returned Value: Returns the sup-norm error over the grid
    Preconditions: unit wavenumber initial data at start_time
    """

    elapsed = abs(state.time - start_time)
    exact = offset + amplitude * np.exp(-elapsed) * np.sin(state.chart.coordinates[..., axis])
    return float(np.abs(state.u[..., component] - exact).max())
