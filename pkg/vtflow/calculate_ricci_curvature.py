# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate Ricci curvature
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate Ricci curvature" is a set of functions that evaluate the Ricci tensor of a domain chart, the Lie derivative of its metric along the vector field V and the Bakry-Emery tensor Ric_V = Ric - L_V g / 2.
# ---------------------------------------------------------------------------

from dataclasses import dataclass

import numpy as np

from vtflow.grid_derivatives import grid_gradient
from vtflow.tensor_algebra import ricci_from_christoffel
from vtflow.tensor_algebra import symmetrize


@dataclass(frozen=True)
class CurvatureSample:
    node: tuple
    time: float
    ricci: np.ndarray
    lie_derivative: np.ndarray
    ric_v: np.ndarray


def calculate_ricci_curvature(chart, time, node=None):
    """
    Description: evaluates the Ricci tensor of the chart metric
    Inputs: 'chart' -- a DomainChart
            'time' -- time at which the metric is evaluated
            'node' -- optional node index; the full grid field is returned when omitted
    Returned Value: Returns a symmetric (m, m) matrix, or a grid field of them
    Preconditions: chart metric positive definite at the requested time
    """

    # Use the family formula where one exists
    if chart.ricci is not None:
        ricci = symmetrize(chart.ricci(chart.coordinates, time))
    else:
        christoffel = chart.christoffel_field(time)
        christoffel_gradient = grid_gradient(christoffel, chart.spacing, chart.periodic)
        ricci = ricci_from_christoffel(christoffel, christoffel_gradient)

    if node is None:
        return ricci
    return ricci[chart.wrap(node)]


def calculate_lie_derivative(chart, time, node=None):
    """Lie derivative of the metric along V: V^c d_c g_ab + g_cb d_a V^c + g_ac d_b V^c."""

    metric = chart.metric_field(time)
    vector = chart.vector_field_values(time)
    jacobian = chart.vector_jacobian_field(time)
    metric_gradient = chart.metric_gradient_field(time)
    lie = (np.einsum('...c,...abc->...ab', vector, metric_gradient)
           + np.einsum('...cb,...ca->...ab', metric, jacobian)
           + np.einsum('...ac,...cb->...ab', metric, jacobian))
    lie = symmetrize(lie)
    if node is None:
        return lie
    return lie[chart.wrap(node)]


def calculate_ric_v(chart, time):
    return calculate_ricci_curvature(chart, time) - 0.5 * calculate_lie_derivative(chart, time)


def curvature_sample(chart, node, time):
    """Packs Ric, L_V g and Ric_V at one node into a CurvatureSample."""

    node = chart.wrap(node)
    ricci = calculate_ricci_curvature(chart, time, node)
    lie = calculate_lie_derivative(chart, time, node)
    return CurvatureSample(node=node, time=time, ricci=ricci, lie_derivative=lie, ric_v=ricci - 0.5 * lie)
