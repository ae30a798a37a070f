# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate Ric_V bounds
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate Ric_V bounds" is a set of functions that measure the curvature constants the gradient estimates assume: the lower bound -A of Ric_V, the Theorem-1 constant K with Ric_V - h0 >= -K, the smallest eigenvalue of Ric_V and the radial drift bound v(R).
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.calculate_ricci_curvature import calculate_ric_v
from vtflow.tensor_algebra import relative_eigenvalues

RADIAL_STEP = 1e-6


def _region_mask(chart, region):
    if region is None:
        return np.ones(chart.counts, dtype=bool)
    mask = np.asarray(region, dtype=bool)
    if mask.shape != chart.counts:
        raise ValueError(f'region shape {mask.shape} does not match the grid {chart.counts}')
    if not mask.any():
        raise ValueError('region is empty')
    return mask


def ric_v_smallest_eigenvalue(chart, region=None, time=0.0):
    """Smallest eigenvalue of Ric_V relative to g over the sampled region."""

    mask = _region_mask(chart, region)
    smallest = relative_eigenvalues(calculate_ric_v(chart, time), chart.metric_field(time))[..., 0]
    return float(smallest[mask].min())


def ric_v_lower_bound(chart, region=None, time=0.0):
    """
    Description: measures the constant A >= 0 with Ric_V >= -A g over a region
    Inputs: 'chart' -- a DomainChart
            'region' -- boolean grid mask of sampled nodes; every node when omitted
            'time' -- evaluation time
    Returned Value: Returns A = max(0, -smallest relative eigenvalue of Ric_V)
    Preconditions: region not empty
    """

    return max(0.0, -ric_v_smallest_eigenvalue(chart, region, time))


def ric_v_h0_lower_bound(chart, region=None, times=(0.0,)):
    """
    Description: measures the constant K >= 0 with Ric_V - h0 >= -K g, h0 = d_tau g / 2, over a region and a set of times
    Inputs: 'chart' -- a DomainChart
            'region' -- boolean grid mask of sampled nodes; every node when omitted
            'times' -- iterable of sample times
    Returned Value: Returns K
    Preconditions: region and times not empty
    """

    mask = _region_mask(chart, region)
    times = list(times)
    if not times:
        raise ValueError('time grid is empty')
    worst = np.inf
    for time in times:
        form = calculate_ric_v(chart, time) - 0.5 * chart.time_derivative_field(time)
        smallest = relative_eigenvalues(form, chart.metric_field(time))[..., 0]
        worst = min(worst, float(smallest[mask].min()))
    return max(0.0, -worst)


def sup_vector_norm(chart, time=0.0):
    """Supremum of |V|_g over the grid."""

    metric = chart.metric_field(time)
    vector = chart.vector_field_values(time)
    return float(np.sqrt(np.einsum('...a,...ab,...b->...', vector, metric, vector).max()))


def radial_drift_bound(chart, radius, time=0.0):
    """
    Description: measures v(R) = sup of <V, grad r> over nodes with 0 < r <= R, r the distance from the base point
    Inputs: 'chart' -- a DomainChart with a distance callback
            'radius' -- ball radius R
            'time' -- evaluation time
    Returned Value: Returns v(R), zero when no node qualifies or the drift is never positive
    Preconditions: radius positive
    """

    if radius <= 0.0:
        raise ValueError(f'radius must be positive, got {radius!r}')
    points = chart.coordinates
    distance = chart.distance_field(time)
    mask = (distance > 10.0 * RADIAL_STEP) & (distance <= radius)
    if not mask.any():
        return 0.0

    # Centered differences of the distance callback give the partials of r
    selected = points[mask]
    partials = np.empty(selected.shape)
    for axis in range(chart.dimension):
        step = np.zeros(chart.dimension)
        step[axis] = RADIAL_STEP
        partials[:, axis] = (chart.distance(selected + step, time)
                             - chart.distance(selected - step, time)) / (2.0 * RADIAL_STEP)
    drift = np.einsum('ka,ka->k', chart.vector_field_values(time)[mask], partials)
    return max(0.0, float(drift.max()))
