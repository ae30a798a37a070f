# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate V-Laplacian
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate V-Laplacian" is a function that applies the drift Laplacian Delta_V = Delta_g + V to a scalar grid field using second-order differences, together with the comparison bound for Delta_V of a distance function.
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.domain_chart import grid_geometry
from vtflow.grid_derivatives import grid_gradient
from vtflow.grid_derivatives import grid_hessian


def laplace_beltrami(chart, scalar_field, time):
    """Delta_g of a scalar grid field: g^ab (d_ab f - Gamma^c_ab d_c f)."""

    geometry = grid_geometry(chart, time)
    gradient = grid_gradient(scalar_field, chart.spacing, chart.periodic)
    hessian = grid_hessian(scalar_field, chart.spacing, chart.periodic)
    covariant = hessian - np.einsum('...cab,...c->...ab', geometry.christoffel, gradient)
    return np.einsum('...ab,...ab->...', geometry.inverse, covariant)


def calculate_v_laplacian(chart, scalar_field, time, node=None):
    """
    Description: applies Delta_V = Delta_g + V^a d_a to a scalar field
    Inputs: 'chart' -- a DomainChart
            'scalar_field' -- array with the chart grid shape
            'time' -- time at which the metric and V are evaluated
            'node' -- optional node index; the full field is returned when omitted
    Returned Value: Returns the V-Laplacian at the node or on the grid
    Preconditions: scalar field defined on the full grid
    """

    scalar_field = np.asarray(scalar_field, dtype=float)
    if scalar_field.shape != chart.counts:
        raise ValueError(f'scalar field shape {scalar_field.shape} does not match the grid {chart.counts}')
    geometry = grid_geometry(chart, time)
    gradient = grid_gradient(scalar_field, chart.spacing, chart.periodic)
    result = laplace_beltrami(chart, scalar_field, time) + np.einsum('...a,...a->...', geometry.vector, gradient)
    if node is None:
        return result
    return float(result[chart.wrap(node)])


def v_laplacian_comparison_rhs(r, a, m, v=0.0):
    """
    Description: comparison upper bound sqrt((m-1)A) coth(sqrt(A/(m-1)) r) + v(r) for Delta_V r
    Inputs: 'r' -- distance, positive
            'a' -- Ric_V lower bound constant A >= 0
            'm' -- source dimension, at least 2
            'v' -- a number or a nondecreasing callable v(r) bounding <V, grad r>
    Returned Value: Returns the bound; (m-1)/r + v(r) when A = 0
    Preconditions: r > 0, A >= 0, m >= 2
    """

    if r <= 0.0:
        raise ValueError(f'distance must be positive, got {r!r}')
    if a < 0.0:
        raise ValueError(f'curvature constant must be nonnegative, got {a!r}')
    if m < 2:
        raise ValueError(f'dimension must be at least 2, got {m!r}')
    drift = v(r) if callable(v) else float(v)
    if a == 0.0:
        return (m - 1) / r + drift
    return np.sqrt((m - 1) * a) / np.tanh(np.sqrt(a / (m - 1)) * r) + drift
