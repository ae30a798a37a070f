# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate tension field
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate tension field" is a set of functions that evaluate the second fundamental form of a grid map, its trace the tension field and the right-hand side tau(u) + du(V) + Tr_g T(du, du) of the VT-harmonic map heat flow.
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.domain_chart import grid_geometry


def second_fundamental_form(state, time=None):
    """
    Description: computes nabla du with [..., i, a, b] = d_ab u^i - Gamma^c_ab d_c u^i + Gamma^i_jk(u) d_a u^j d_b u^k
    Inputs: 'state' -- a MapState
            'time' -- time of the domain metric; the state time when omitted
    Returned Value: Returns an array grid + (n, m, m)
    Preconditions: map inside the target chart
    """

    geometry = grid_geometry(state.chart, state.time if time is None else time)
    du = state.differential
    return (state.hessian
            - np.einsum('...cab,...ic->...iab', geometry.christoffel, du)
            + np.einsum('...ijk,...ja,...kb->...iab', state.target.christoffel(state.u), du, du))


def calculate_tension_field(state, node=None, time=None):
    """
    Description: computes the tension field tau(u) = Tr_g nabla du
    Inputs: 'state' -- a MapState
            'node' -- optional node index; the full field is returned when omitted
            'time' -- time of the domain metric; the state time when omitted
    Returned Value: Returns a target tangent vector (n,) or a grid field of them
    Preconditions: map inside the target chart
    """

    geometry = grid_geometry(state.chart, state.time if time is None else time)
    tension = np.einsum('...ab,...iab->...i', geometry.inverse, second_fundamental_form(state, time))
    if node is None:
        return tension
    return tension[state.chart.wrap(node)]


def vt_rhs(state, node=None, time=None):
    """
    Description: computes the flow right-hand side tau(u) + du(V) + Tr_g T(du, du)
    Inputs: 'state' -- a MapState
            'node' -- optional node index; the full field is returned when omitted
            'time' -- time of the domain metric and V; the state time when omitted
    Returned Value: Returns a target tangent vector (n,) or a grid field of them
    Preconditions: map inside the target chart
    """

    time = state.time if time is None else time
    geometry = grid_geometry(state.chart, time)
    du = state.differential
    drift = np.einsum('...a,...ia->...i', geometry.vector, du)
    twist = np.einsum('...ab,...ijk,...ja,...kb->...i',
                      geometry.inverse, state.target.tensor_values(state.u), du, du)
    rhs = calculate_tension_field(state, time=time) + drift + twist
    if node is None:
        return rhs
    return rhs[state.chart.wrap(node)]
