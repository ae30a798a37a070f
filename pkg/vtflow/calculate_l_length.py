# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate L-length
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate L-length" is a set of functions that evaluate the trace H = tr_g(d_tau g / 2) and the L-length of a space-time curve. The length is computed after the substitution s = 2 sqrt(tau), which turns the sqrt(tau) weight into a regular integrand.
# ---------------------------------------------------------------------------

from dataclasses import dataclass

import numpy as np

from vtflow.errors import InvariantError

MINIMUM_SEGMENTS = 8


@dataclass(frozen=True)
class SpaceTimeCurve:
    """Knots gamma(tau_k), k = 0..K, with tau_0 = 0 and fixed endpoints."""

    points: np.ndarray
    taus: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        taus = np.asarray(self.taus, dtype=float)
        if points.ndim != 2 or taus.shape != (points.shape[0],):
            raise InvariantError('curve knots and knot times do not match')
        if points.shape[0] - 1 < MINIMUM_SEGMENTS:
            raise InvariantError(f'curve needs at least {MINIMUM_SEGMENTS} segments')
        if taus[0] != 0.0 or np.any(np.diff(taus) <= 0.0):
            raise InvariantError('knot times must start at 0 and increase')
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'taus', taus)

    @property
    def tau_bar(self):
        return float(self.taus[-1])

    @property
    def segments(self):
        return self.points.shape[0] - 1


def knot_times(tau_bar, segments, spacing='sqrt'):
    """Knot times uniform in s = 2 sqrt(tau) ('sqrt') or in tau ('uniform')."""

    if tau_bar <= 0.0:
        raise ValueError(f'tau_bar must be positive, got {tau_bar!r}')
    if spacing == 'sqrt':
        s = np.linspace(0.0, 2.0 * np.sqrt(tau_bar), segments + 1)
        taus = s**2 / 4.0
    elif spacing == 'uniform':
        taus = np.linspace(0.0, tau_bar, segments + 1)
    else:
        raise ValueError(f'unknown knot spacing {spacing!r}')
    taus[-1] = tau_bar
    return taus


def straight_curve(start, end, tau_bar, segments=32, spacing='sqrt', speed='optimal'):
    """
    Description: builds the straight chart segment from start to end as a space-time curve
    Inputs: 'start' -- chart point gamma(0)
            'end' -- chart point gamma(tau_bar)
            'tau_bar' -- final time
            'segments' -- number of curve segments K
            'spacing' -- knot placement, 'sqrt' or 'uniform'
            'speed' -- 'optimal' (linear in s = 2 sqrt(tau)) or 'constant' (linear in tau)
    Returned Value: Returns a SpaceTimeCurve
    Preconditions: tau_bar > 0
    """

    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    taus = knot_times(tau_bar, segments, spacing)
    if speed == 'optimal':
        fraction = np.sqrt(taus / tau_bar)
    elif speed == 'constant':
        fraction = taus / tau_bar
    else:
        raise ValueError(f'unknown curve speed {speed!r}')
    points = start + fraction[:, None] * (end - start)
    points[0] = start
    points[-1] = end
    return SpaceTimeCurve(points=points, taus=taus)


def trace_h(chart, points, tau):
    """
    Description: computes H = g^ab h_ab with h = d_tau g / 2
    Inputs: 'chart' -- a DomainChart
            'points' -- chart points (..., m)
            'tau' -- time
    Returned Value: Returns H at the points
    Preconditions: metric time derivative available (analytic or differenced)
    """

    points = np.asarray(points, dtype=float)
    metric = chart.metric_at(points, tau)
    h = 0.5 * chart.metric_time_derivative_at(points, tau)
    return np.einsum('...ab,...ab->...', np.linalg.inv(metric), h)


def length_terms(chart, points, taus, h_function=None):
    """Kinetic and potential terms of the discrete L-length for every segment."""

    s = 2.0 * np.sqrt(taus)
    ds = np.diff(s)
    tau_mid = (0.5 * (s[1:] + s[:-1]))**2 / 4.0
    delta = np.diff(points, axis=0)
    midpoints = 0.5 * (points[1:] + points[:-1])
    metric = chart.metric_at(midpoints, tau_mid)
    kinetic = np.einsum('ka,kab,kb->k', delta, metric, delta) / ds
    trace = h_function(midpoints, tau_mid) if h_function is not None else trace_h(chart, midpoints, tau_mid)
    potential = ds * tau_mid * trace
    return kinetic, potential


def calculate_l_length(chart, curve, h_function=None):
    """
    Description: computes the L-length of a curve, the integral of sqrt(tau)(H + |gamma'|^2) over [0, tau_bar]
    Inputs: 'chart' -- a DomainChart
            'curve' -- a SpaceTimeCurve, piecewise linear in s = 2 sqrt(tau)
            'h_function' -- optional callable (points, taus) -> H replacing the trace of h
    Returned Value: Returns the L-length
    Preconditions: curve valid
    """

    if curve.tau_bar <= 0.0:
        raise ValueError('tau_bar must be positive')

    # L = sum |d gamma|_g^2 / ds + ds tau H, midpoint rule in s
    kinetic, potential = length_terms(chart, curve.points, curve.taus, h_function)
    return float(np.sum(kinetic) + np.sum(potential))
