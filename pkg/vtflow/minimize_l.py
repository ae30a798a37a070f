# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Minimize L-length
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ and scipy 1.8+ in a Python 3.9+ distribution.
# Description: "Minimize L-length" is a set of functions that find minimal L-geodesics from the base point by quasi-Newton descent on the interior knots of a space-time curve, and derive the reduced distance l, the parabolic distance d = sqrt(4 tau l) and the parabolic region Q_{R, Lambda}.
# ---------------------------------------------------------------------------

from dataclasses import dataclass

import numpy as np
from scipy.optimize import fmin_l_bfgs_b

from vtflow.calculate_l_length import SpaceTimeCurve
from vtflow.calculate_l_length import length_terms
from vtflow.calculate_l_length import straight_curve
from vtflow.calculate_l_length import trace_h
from vtflow.check_backward_super_ricci import check_backward_super_ricci
from vtflow.domain_chart import periodic_displacement
from vtflow.errors import InvariantError
from vtflow.tensor_algebra import christoffel_from_metric

SPATIAL_STEP = 1e-6
GRADIENT_TOLERANCE = 1e-8
RESIDUAL_WINDOW = 0.1


@dataclass(frozen=True)
class GeodesicResult:
    value: float
    curve: SpaceTimeCurve
    converged: bool
    iterations: int
    gradient_norm: float
    geodesic_residual: float
    warning: str = ''


def _spatial_partials(function, points, step=SPATIAL_STEP):
    """Centered differences of a pointwise callback, derivative index appended last."""

    dimension = points.shape[-1]
    parts = []
    for axis in range(dimension):
        shift = np.zeros(dimension)
        shift[axis] = step
        parts.append((function(points + shift) - function(points - shift)) / (2.0 * step))
    return np.stack(parts, axis=-1)


def _trace_function(chart, h_function):
    if h_function is not None:
        return h_function
    return lambda points, taus: trace_h(chart, points, taus)


def _length_and_gradient(interior, start, end, taus, chart, h_function):
    dimension = start.shape[0]
    points = np.vstack([start, interior.reshape(-1, dimension), end])
    kinetic, potential = length_terms(chart, points, taus, h_function)

    s = 2.0 * np.sqrt(taus)
    ds = np.diff(s)
    tau_mid = (0.5 * (s[1:] + s[:-1]))**2 / 4.0
    delta = np.diff(points, axis=0)
    midpoints = 0.5 * (points[1:] + points[:-1])
    trace = _trace_function(chart, h_function)

    # Derivatives of every segment term with respect to its midpoint and its increment
    metric = chart.metric_at(midpoints, tau_mid)
    metric_partials = _spatial_partials(lambda p: chart.metric_at(p, tau_mid), midpoints)
    trace_partials = _spatial_partials(lambda p: trace(p, tau_mid), midpoints)
    lowered = np.einsum('kab,kb->ka', metric, delta) / ds[:, None]
    at_midpoint = (np.einsum('ka,kb,kabc->kc', delta, delta, metric_partials) / ds[:, None]
                   + (ds * tau_mid)[:, None] * trace_partials)

    gradient = np.zeros(points.shape)
    gradient[1:] += 2.0 * lowered + 0.5 * at_midpoint
    gradient[:-1] += -2.0 * lowered + 0.5 * at_midpoint
    return float(np.sum(kinetic) + np.sum(potential)), gradient[1:-1].ravel()


def geodesic_residual(chart, curve, h_function=None):
    """
    Description: max g-norm of nabla_X X - grad H / 2 + X / (2 tau) + 2 h(X) over interior knots with tau >= tau_bar / 10
    Inputs: 'chart' -- a DomainChart
            'curve' -- a SpaceTimeCurve
            'h_function' -- optional replacement for the trace of h
    Returned Value: Returns the residual of the L-geodesic equation, a convergence diagnostic
    Preconditions: curve valid
    """

    taus = curve.taus
    points = curve.points
    trace = _trace_function(chart, h_function)
    worst = 0.0
    for k in range(1, curve.segments):
        if taus[k] < RESIDUAL_WINDOW * curve.tau_bar:
            continue
        before = taus[k] - taus[k - 1]
        after = taus[k + 1] - taus[k]
        # Three-point differences on the nonuniform knot times
        velocity = (points[k + 1] - points[k - 1]) / (before + after)
        acceleration = 2.0 * ((points[k + 1] - points[k]) / after
                              - (points[k] - points[k - 1]) / before) / (before + after)
        point = points[k][None, :]
        tau = np.array([taus[k]])
        metric = chart.metric_at(point, tau)[0]
        inverse = np.linalg.inv(metric)
        partials = _spatial_partials(lambda p: chart.metric_at(p, tau), point)
        christoffel = christoffel_from_metric(metric[None], partials)[0]
        trace_gradient = inverse @ _spatial_partials(lambda p: trace(p, tau), point)[0]
        h = 0.5 * chart.metric_time_derivative_at(point, tau)[0]
        residual = (acceleration + np.einsum('kij,i,j->k', christoffel, velocity, velocity)
                    - 0.5 * trace_gradient + velocity / (2.0 * taus[k]) + 2.0 * inverse @ h @ velocity)
        worst = max(worst, float(np.sqrt(residual @ metric @ residual)))
    return worst


def nearest_image(chart, x):
    """Chart point of x closest to the base point, unwrapping periodic axes."""

    lengths = tuple(hi - lo for lo, hi in zip(chart.lower, chart.upper))
    return chart.base_point + periodic_displacement(x, chart.base_point, lengths, chart.periodic)


def minimize_l(chart, x, tau_bar, segments=32, h_function=None, tolerance=GRADIENT_TOLERANCE,
               max_iterations=5000, check_admissibility=True):
    """
    Description: minimizes the L-length over curves from the base point at tau = 0 to x at tau_bar
    Inputs: 'chart' -- a DomainChart
            'x' -- chart coordinates of the endpoint
            'tau_bar' -- final time, positive
            'segments' -- curve segments K
            'h_function' -- optional callable (points, taus) -> H replacing the trace of h (test hook)
            'tolerance' -- max-norm of the knot gradient that counts as converged
            'max_iterations' -- iteration cap of the descent
            'check_admissibility' -- verify d_tau g <= 2 Ric on [0, tau_bar] first
    Returned Value: Returns a GeodesicResult; on non-convergence the best curve with a warning
    Preconditions: tau_bar > 0 and the chart a backward super Ricci flow
    """

    if tau_bar <= 0.0:
        raise ValueError(f'tau_bar must be positive, got {tau_bar!r}')
    if check_admissibility and not chart.static:
        report = check_backward_super_ricci(chart, np.linspace(0.0, tau_bar, 5))
        if not report.passed:
            raise InvariantError(f'not a backward super Ricci flow on [0, {tau_bar!r}] '
                                 f'(margin {report.margin!r} at tau={report.worst_time!r})')

    start = np.array(chart.base_point, dtype=float)
    end = nearest_image(chart, np.asarray(x, dtype=float))
    initial = straight_curve(start, end, tau_bar, segments)
    taus = initial.taus
    dimension = chart.dimension

    interior, value, info = fmin_l_bfgs_b(_length_and_gradient,
                                          initial.points[1:-1].ravel(),
                                          args=(start, end, taus, chart, h_function),
                                          m=20, factr=10.0, pgtol=tolerance, maxiter=max_iterations)
    points = np.vstack([start, interior.reshape(-1, dimension), end])
    curve = SpaceTimeCurve(points=points, taus=taus)
    gradient_norm = float(np.abs(info['grad']).max()) if info['grad'].size else 0.0
    converged = info['warnflag'] == 0 or gradient_norm < tolerance
    warning = ''
    if not converged:
        warning = f'descent stopped before convergence: {info["task"]!r}'
    elif gradient_norm >= tolerance:
        warning = f'knot gradient {gradient_norm!r} above tolerance'
    return GeodesicResult(value=float(value),
                          curve=curve,
                          converged=converged,
                          iterations=int(info['nit']),
                          gradient_norm=gradient_norm,
                          geodesic_residual=geodesic_residual(chart, curve, h_function),
                          warning=warning)


def d_frak_from_length(length, tau_bar):
    """d = sqrt(4 tau l) = sqrt(2 sqrt(tau) L), clamped at zero."""

    return float(np.sqrt(max(0.0, 2.0 * np.sqrt(tau_bar) * length)))


def reduced_distance(chart, x, tau_bar, **options):
    """
    Description: computes the reduced distance l = L / (2 sqrt(tau)) and the parabolic distance d = sqrt(4 tau l)
    Inputs: 'chart' -- a DomainChart
            'x' -- chart coordinates of the endpoint
            'tau_bar' -- final time, positive
            'options' -- keyword options of minimize_l
    Returned Value: Returns a tuple (l, d, GeodesicResult)
    Preconditions: as for minimize_l
    """

    result = minimize_l(chart, x, tau_bar, **options)
    return result.value / (2.0 * np.sqrt(tau_bar)), d_frak_from_length(result.value, tau_bar), result


def d_frak(chart, x, tau_bar, **options):
    return reduced_distance(chart, x, tau_bar, **options)[1]


def d_frak_field(chart, tau_bar, stride=1, **options):
    """
    Description: parabolic distance at grid nodes
    Inputs: 'chart' -- a DomainChart
            'tau_bar' -- time, positive
            'stride' -- node stride for the minimizations; skipped nodes hold NaN
            'options' -- keyword options of minimize_l
    Returned Value: Returns a grid field; the exact distance d_g on static charts with a distance callback
    Preconditions: tau_bar > 0
    """

    if tau_bar <= 0.0:
        raise ValueError(f'tau_bar must be positive, got {tau_bar!r}')
    if chart.static and chart.distance is not None:
        return chart.distance_field(tau_bar)
    values = np.full(chart.counts, np.nan)
    for node in np.ndindex(*chart.counts):
        if all(i % stride == 0 for i in node):
            values[node] = d_frak(chart, chart.coordinates[node], tau_bar, **options)
    return values


def in_parabolic_region(d_values, tau, radius, horizon):
    """Membership in Q_{R, Lambda} = {d <= R, 0 <= tau <= Lambda}; NaN entries are outside."""

    d_values = np.asarray(d_values, dtype=float)
    if not 0.0 <= tau <= horizon:
        return np.zeros(d_values.shape, dtype=bool)
    return np.isfinite(d_values) & (d_values <= radius)


def d_frak_gradient_squared(chart, x, tau_bar, step=None, **options):
    """
    Description: measures |grad d|_g^2 at x by centered differences of d over neighboring points
    Inputs: 'chart' -- a DomainChart
            'x' -- chart coordinates
            'tau_bar' -- time, positive
            'step' -- difference step; the smallest grid spacing when omitted
            'options' -- keyword options of minimize_l
    Returned Value: Returns the squared gradient norm
    Preconditions: x away from the base point
    """

    x = np.asarray(x, dtype=float)
    step = min(chart.spacing) if step is None else step
    partials = np.empty(chart.dimension)
    for axis in range(chart.dimension):
        shift = np.zeros(chart.dimension)
        shift[axis] = step
        partials[axis] = (d_frak(chart, x + shift, tau_bar, **options)
                          - d_frak(chart, x - shift, tau_bar, **options)) / (2.0 * step)
    metric = chart.metric_at(x, tau_bar)
    return float(partials @ np.linalg.inv(metric) @ partials)
