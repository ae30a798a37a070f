# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate Muller quantities
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate Muller quantities" is a function that evaluates D(V), H(V) and R(V) of a backward flow g(tau) on the chart grid and exposes the hypothesis checks built on them.
# ---------------------------------------------------------------------------

from dataclasses import dataclass

import numpy as np

from vtflow.calculate_ricci_curvature import calculate_ricci_curvature
from vtflow.calculate_v_laplacian import laplace_beltrami
from vtflow.grid_derivatives import grid_gradient

TIME_STEP = 1e-5
HYPOTHESIS_SLACK = 1e-9


@dataclass(frozen=True)
class MullerSample:
    """D(V), H(V), R(V) with the trace H and |V|^2 at the same nodes; H(V) is NaN at tau = 0."""

    d_v: np.ndarray
    h_v: np.ndarray
    r_v: np.ndarray
    trace: np.ndarray
    vector_norm_squared: np.ndarray
    tau: float

    def theorem_hypothesis(self):
        """D(V) >= 0."""

        return bool(np.all(self.d_v >= -HYPOTHESIS_SLACK))

    def lemma_hypothesis(self, k):
        """D(V) >= -2K (H + |V|^2)."""

        return bool(np.all(self.d_v >= -2.0 * k * (self.trace + self.vector_norm_squared) - HYPOTHESIS_SLACK))

    def trace_hypothesis(self):
        """H(V) >= -H / tau."""

        if self.tau <= 0.0:
            raise ValueError('H(V) is undefined at tau = 0')
        return bool(np.all(self.h_v >= -self.trace / self.tau - HYPOTHESIS_SLACK))


def _trace_field(chart, tau):
    metric = chart.metric_field(tau)
    h = 0.5 * chart.time_derivative_field(tau)
    return np.einsum('...ab,...ab->...', np.linalg.inv(metric), h)


def calculate_muller_quantities(chart, tau, node=None):
    """
    Description: computes D(V) = -d_tau H - Delta H - 2|h|^2 + 4 div h(V) - 2 g(grad H, V) + 2 Ric(V, V) - 2 h(V, V), H(V) = -d_tau H - H / tau - 2 g(grad H, V) + 2 h(V, V) and R(V) = Ric(V, V) - h(V, V)
    Inputs: 'chart' -- a DomainChart whose vector field is V
            'tau' -- backward time
            'node' -- optional node index; full grid fields are returned when omitted
    Returned Value: Returns a MullerSample
    Preconditions: tau > 0 for H(V); it is NaN at tau = 0
    """

    if tau < 0.0:
        raise ValueError(f'tau must be nonnegative, got {tau!r}')
    metric = chart.metric_field(tau)
    inverse = np.linalg.inv(metric)
    christoffel = chart.christoffel_field(tau)
    vector = chart.vector_field_values(tau)
    h = 0.5 * chart.time_derivative_field(tau)

    # Trace H and its derivatives
    trace = _trace_field(chart, tau)
    trace_rate = (_trace_field(chart, tau + TIME_STEP) - _trace_field(chart, tau - TIME_STEP)) / (2.0 * TIME_STEP)
    trace_gradient = grid_gradient(trace, chart.spacing, chart.periodic)
    trace_laplacian = laplace_beltrami(chart, trace, tau)

    # |h|^2 and (div h)(V) with (nabla_a h)_bc = d_a h_bc - Gamma^d_ab h_dc - Gamma^d_ac h_bd
    h_norm = np.einsum('...ac,...bd,...ab,...cd->...', inverse, inverse, h, h)
    h_partials = grid_gradient(h, chart.spacing, chart.periodic)
    covariant = (np.einsum('...bca->...abc', h_partials)
                 - np.einsum('...dab,...dc->...abc', christoffel, h)
                 - np.einsum('...dac,...bd->...abc', christoffel, h))
    divergence = np.einsum('...ab,...abc,...c->...', inverse, covariant, vector)

    gradient_along = np.einsum('...a,...a->...', trace_gradient, vector)
    ricci_vv = np.einsum('...a,...ab,...b->...', vector, calculate_ricci_curvature(chart, tau), vector)
    h_vv = np.einsum('...a,...ab,...b->...', vector, h, vector)
    norm_squared = np.einsum('...a,...ab,...b->...', vector, metric, vector)

    d_v = (-trace_rate - trace_laplacian - 2.0 * h_norm + 4.0 * divergence
           - 2.0 * gradient_along + 2.0 * ricci_vv - 2.0 * h_vv)
    if tau > 0.0:
        h_v = -trace_rate - trace / tau - 2.0 * gradient_along + 2.0 * h_vv
    else:
        h_v = np.full(trace.shape, np.nan)
    r_v = ricci_vv - h_vv

    if node is not None:
        index = chart.wrap(node)
        d_v, h_v, r_v, trace, norm_squared = (np.asarray(a[index]) for a in (d_v, h_v, r_v, trace, norm_squared))
    return MullerSample(d_v=d_v, h_v=h_v, r_v=r_v, trace=trace, vector_norm_squared=norm_squared, tau=tau)
