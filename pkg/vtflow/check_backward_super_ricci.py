# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Check backward super Ricci flow
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Check backward super Ricci flow" is a function that tests the tensor inequality d_tau g <= 2 Ric over a time grid and reports the admissibility constants c_tau of the flow.
# ---------------------------------------------------------------------------

from dataclasses import dataclass, field

import numpy as np

from vtflow.calculate_ricci_curvature import calculate_ricci_curvature
from vtflow.tensor_algebra import relative_eigenvalues

SUPER_RICCI_SLACK = 1e-9


@dataclass
class SuperRicciReport:
    passed: bool
    margin: float
    worst_time: float
    worst_node: tuple
    admissibility: list = field(default_factory=list)


def _sorted_times(time_grid):
    times = np.sort(np.asarray(list(time_grid), dtype=float))
    if times.size == 0:
        raise ValueError('time grid is empty')
    return times


def _smallest_h_eigenvalue(chart, time):
    metric = chart.metric_field(time)
    h0 = 0.5 * chart.time_derivative_field(time)
    return float(relative_eigenvalues(h0, metric).min())


def admissibility_constants(chart, time_grid):
    """
    Description: computes c_tau = sup over [0, tau] of the negative part of the smallest eigenvalue of h = d_tau g / 2 relative to g
    Inputs: 'chart' -- a DomainChart
            'time_grid' -- iterable of sample times
    Returned Value: Returns a list of (tau, c_tau) pairs in ascending tau
    Preconditions: time grid not empty
    """

    constants = []
    running = 0.0
    for time in _sorted_times(time_grid):
        running = max(running, -_smallest_h_eigenvalue(chart, time))
        constants.append((float(time), running))
    return constants


def check_backward_super_ricci(chart, time_grid):
    """
    Description: checks that the chart metric is a backward super Ricci flow on a time grid
    Inputs: 'chart' -- a DomainChart with a metric time derivative
            'time_grid' -- iterable of sample times tau
    Returned Value: Returns a SuperRicciReport with the worst relative eigenvalue of 2 Ric - d_tau g as margin
    Preconditions: time grid not empty
    """

    times = _sorted_times(time_grid)
    margin = np.inf
    worst_time = float(times[0])
    worst_node = tuple(0 for _ in range(chart.dimension))
    for time in times:
        metric = chart.metric_field(time)
        defect = 2.0 * calculate_ricci_curvature(chart, time) - chart.time_derivative_field(time)
        smallest = relative_eigenvalues(defect, metric)[..., 0]
        if smallest.min() < margin:
            margin = float(smallest.min())
            worst_time = float(time)
            worst_node = tuple(int(i) for i in np.unravel_index(np.argmin(smallest), smallest.shape))

    return SuperRicciReport(passed=margin >= -SUPER_RICCI_SLACK,
                            margin=margin,
                            worst_time=worst_time,
                            worst_node=worst_node,
                            admissibility=admissibility_constants(chart, times))
