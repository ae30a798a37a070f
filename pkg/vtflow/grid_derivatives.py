# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Grid derivatives
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Grid derivatives" provides second-order finite differences on structured chart grids. Periodic axes use centered differences with wrap-around; non-periodic axes switch to one-sided second-order stencils at the two edges.
# ---------------------------------------------------------------------------

import numpy as np


def _check_axis(field, axis, periodic):
    count = field.shape[axis]
    if count < 3 or (not periodic and count < 4):
        raise ValueError(f'axis {axis} has {count} nodes, too few for a second-order stencil')


def first_derivative(field, axis, spacing, periodic):
    """
    Description: differentiates a grid field once along one grid axis
    Inputs: 'field' -- array with the grid axes first (component axes may follow)
            'axis' -- grid axis to differentiate along
            'spacing' -- node spacing along the axis
            'periodic' -- True if the axis wraps around
    Returned Value: Returns an array of the same shape as field
    Preconditions: at least 3 nodes on a periodic axis and 4 nodes otherwise
    """

    _check_axis(field, axis, periodic)
    if periodic:
        return (np.roll(field, -1, axis=axis) - np.roll(field, 1, axis=axis)) / (2.0 * spacing)
    return np.gradient(field, spacing, axis=axis, edge_order=2)


def second_derivative(field, axis, spacing, periodic):
    """
    Description: differentiates a grid field twice along one grid axis
    Inputs: 'field' -- array with the grid axes first (component axes may follow)
            'axis' -- grid axis to differentiate along
            'spacing' -- node spacing along the axis
            'periodic' -- True if the axis wraps around
    Returned Value: Returns an array of the same shape as field
    Preconditions: at least 3 nodes on a periodic axis and 4 nodes otherwise
    """

    _check_axis(field, axis, periodic)
    if periodic:
        return (np.roll(field, -1, axis=axis) - 2.0 * field + np.roll(field, 1, axis=axis)) / spacing**2

    # Move the differentiated axis to the front
    values = np.moveaxis(field, axis, 0)
    result = np.empty_like(values, dtype=float)
    result[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / spacing**2
    # One-sided (2, -5, 4, -1) stencils at the edges
    result[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / spacing**2
    result[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / spacing**2
    return np.moveaxis(result, 0, axis)


def grid_gradient(field, spacing, periodic):
    """Stacks first derivatives along every grid axis into a new last axis."""

    return np.stack([first_derivative(field, axis, spacing[axis], periodic[axis])
                     for axis in range(len(spacing))], axis=-1)


def grid_hessian(field, spacing, periodic):
    """Second derivatives along every pair of grid axes, appended as two last axes."""

    dimension = len(spacing)
    result = np.empty(field.shape + (dimension, dimension))
    for a in range(dimension):
        result[..., a, a] = second_derivative(field, a, spacing[a], periodic[a])
        for b in range(a + 1, dimension):
            inner = first_derivative(field, b, spacing[b], periodic[b])
            mixed = first_derivative(inner, a, spacing[a], periodic[a])
            result[..., a, b] = mixed
            result[..., b, a] = mixed
    return result
