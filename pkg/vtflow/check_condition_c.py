# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Check condition C
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Check condition C" is a set of functions that certify a target domain Omega: the four gates of Condition (C) for a witness f, the generalized regular ball properties of the convex function f*, the smallness gates on the sup norm of T and the sweep over (eps1, eps2).
# ---------------------------------------------------------------------------

from dataclasses import dataclass, field

import numpy as np

from vtflow.calculate_sectional_curvature import calculate_sectional_curvature
from vtflow.calculate_tensor_norms import calculate_tensor_norms
from vtflow.condition_c_witness import gradient_norm
from vtflow.condition_c_witness import sample_outside_ring
from vtflow.tensor_algebra import relative_eigenvalues

GATE_SLACK = 1e-8
BOUND_SLACK = 1e-12
EPSILON_SWEEP = (1e-2, 5e-2, 1e-1)
CONDITION_NOTES = (
    'condition (B) of the complete-manifold estimate is read as condition (C)',
    'f <= m2 and |grad f| <= m3 are enforced; the later bound "f <= m3" is read as a typo',
)


@dataclass
class CertReport:
    verdict: bool
    gate_margin: float
    sup_f: float
    inf_f: float
    sup_grad_f: float
    norm_t: float
    norm_grad_t: float
    kappa: float
    gates: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    reason: str = ''


def _covariant_hessian(target, function, points):
    partials = function.partials(points)
    return function.second_partials(points) - np.einsum('...kij,...k->...ij', target.christoffel(points), partials)


def _samples(samples, dimension):
    points = np.asarray(samples, dtype=float).reshape(-1, dimension)
    if points.shape[0] == 0:
        raise ValueError('sample set is empty')
    return points


def check_condition_c(target, witness, samples, kappa=None, norms=None, seed=0):
    """
    Description: evaluates the four gates of Condition (C) at every sample
    Inputs: 'target' -- a TargetModel
            'witness' -- a ConditionCWitness
            'samples' -- array (K, n) of chart points covering Omega
            'kappa' -- sectional curvature bound; measured on the samples when omitted
            'norms' -- tuple (norm of T, norm of nabla T); measured on the samples when omitted
            'seed' -- seed for the sampling-based measurements
    Returned Value: Returns a CertReport
    Preconditions: samples not empty
    """

    points = _samples(samples, target.dimension)
    values = witness.f(points)
    grad_norm = gradient_norm(target, witness.f, points)
    if kappa is None:
        kappa = calculate_sectional_curvature(target, points, seed)
    if norms is None:
        norms = calculate_tensor_norms(target, points, seed)
    norm_t, norm_grad_t = norms
    notes = list(CONDITION_NOTES)

    if values.min() <= 0.0:
        bad = [tuple(p) for p in points[values <= 0.0]]
        return CertReport(verdict=False, gate_margin=-np.inf, sup_f=float(values.max()), inf_f=float(values.min()),
                          sup_grad_f=float(grad_norm.max()), norm_t=norm_t, norm_grad_t=norm_grad_t, kappa=kappa,
                          gates={'i': False, 'ii': False, 'iii': False, 'iv': False}, violations=bad, notes=notes,
                          reason='f must be positive on Omega')

    # Gate (i): -Hess f - f c h - Q h >= 0 relative to h
    constant = ((witness.s0 - 1) / witness.s0 * kappa
                + norm_grad_t**2 / (4.0 * witness.eps1)
                + norm_t**2 / witness.eps2)
    metric = target.metric(points)
    form = (-_covariant_hessian(target, witness.f, points)
            - (values * constant)[:, None, None] * metric
            - witness.q * metric)
    smallest = relative_eigenvalues(form, metric)[:, 0]
    gate_i = smallest >= -GATE_SLACK

    # Gates (ii) and (iii): pointwise bounds on f and |grad f|
    gate_ii = (values >= witness.m1 - BOUND_SLACK) & (values <= witness.m2 + BOUND_SLACK)
    gate_iii = grad_norm <= witness.m3 + BOUND_SLACK
    gate_iv = witness.q > witness.q_threshold

    gates = {'i': bool(gate_i.all()), 'ii': bool(gate_ii.all()), 'iii': bool(gate_iii.all()), 'iv': bool(gate_iv)}
    failing = ~(gate_i & gate_ii & gate_iii)
    failed = [name for name, passed in gates.items() if not passed]
    return CertReport(verdict=all(gates.values()),
                      gate_margin=float(smallest.min()),
                      sup_f=float(values.max()),
                      inf_f=float(values.min()),
                      sup_grad_f=float(grad_norm.max()),
                      norm_t=float(norm_t),
                      norm_grad_t=float(norm_grad_t),
                      kappa=float(kappa),
                      gates=gates,
                      violations=[tuple(float(c) for c in p) for p in points[failing]],
                      notes=notes,
                      reason='' if not failed else 'failing gates: ' + ', '.join(failed))


def check_generalized_regular_ball(target, witness, samples, condition_report=None, seed=0):
    """
    Description: checks that Omega is a generalized regular ball: f* nonnegative and convex on the samples, Omega equal to the sublevel set {f* < r}, and Condition (C) passing
    Inputs: 'target' -- a TargetModel
            'witness' -- a ConditionCWitness with f_star and sublevel_radius
            'samples' -- array (K, n) of chart points covering the closure of Omega
            'condition_report' -- a CertReport from check_condition_c; computed when omitted
            'seed' -- seed for the sampling-based measurements
    Returned Value: Returns a CertReport whose gates add 'nonnegative', 'convex' and 'sublevel'
    Preconditions: witness carries f_star
    """

    if witness.f_star is None or witness.sublevel_radius is None:
        raise ValueError('generalized regular ball check needs f_star and a sublevel radius')
    points = _samples(samples, target.dimension)
    if condition_report is None:
        condition_report = check_condition_c(target, witness, points, seed=seed)
    radius = witness.sublevel_radius
    values = witness.f_star(points)
    notes = list(condition_report.notes)

    nonnegative = values >= 0.0
    smallest = relative_eigenvalues(_covariant_hessian(target, witness.f_star, points), target.metric(points))[:, 0]
    convex = smallest >= -GATE_SLACK

    # Samples lie in the closure of {f* < r}; the outside ring must not
    inside = values <= radius * (1.0 + 1e-9) + 1e-12
    ring = sample_outside_ring(target, witness.domain_radius, seed=seed)
    ring_values = witness.f_star(ring)
    if np.ptp(np.concatenate([values, ring_values])) == 0.0:
        notes.append('f* is constant: Omega is the whole sampled chart')
        outside = True
    else:
        outside = bool((ring_values >= radius).all())

    gates = dict(condition_report.gates)
    gates.update(nonnegative=bool(nonnegative.all()), convex=bool(convex.all()),
                 sublevel=bool(inside.all()) and outside)
    failing = ~(nonnegative & convex & inside)
    failed = [name for name, passed in gates.items() if not passed]
    violations = list(condition_report.violations) + [tuple(float(c) for c in p) for p in points[failing]]
    return CertReport(verdict=all(gates.values()),
                      gate_margin=min(condition_report.gate_margin, float(smallest.min())),
                      sup_f=condition_report.sup_f,
                      inf_f=condition_report.inf_f,
                      sup_grad_f=condition_report.sup_grad_f,
                      norm_t=condition_report.norm_t,
                      norm_grad_t=condition_report.norm_grad_t,
                      kappa=condition_report.kappa,
                      gates=gates,
                      violations=violations,
                      notes=notes,
                      reason='' if not failed else 'failing gates: ' + ', '.join(failed))


def t_smallness_gate(witness, norm_t, which='theorem2'):
    """
    Description: smallness gate on the sup norm of T
    Inputs: 'witness' -- a ConditionCWitness
            'norm_t' -- measured sup norm of T
            'which' -- 'theorem1' (threshold 2Q/m3 - m3/m1) or 'theorem2' (threshold 2Q/m3)
    Returned Value: Returns a tuple (passed, threshold); the threshold is infinite when m3 = 0
    Preconditions: none
    """

    if which not in ('theorem1', 'theorem2'):
        raise ValueError(f'unknown smallness gate {which!r}')
    if witness.m3 == 0.0:
        return True, np.inf
    threshold = 2.0 * witness.q / witness.m3
    if which == 'theorem1':
        threshold -= witness.m3 / witness.m1
    return bool(norm_t < threshold), threshold


def select_epsilons(target, witness, samples, seed=0, grid=EPSILON_SWEEP):
    """
    Description: sweeps (eps1, eps2) over a grid and keeps the passing pair with the largest gate (i) margin
    Inputs: 'target' -- a TargetModel
            'witness' -- a ConditionCWitness; its own eps1, eps2 are ignored
            'samples' -- array (K, n) of chart points covering Omega
            'seed' -- seed for the sampling-based measurements
            'grid' -- candidate values for both epsilons
    Returned Value: Returns a tuple (witness with the selected epsilons, its CertReport); the best failing pair when none passes
    Preconditions: samples not empty
    """

    points = _samples(samples, target.dimension)
    kappa = calculate_sectional_curvature(target, points, seed)
    norms = calculate_tensor_norms(target, points, seed)
    best = None
    for eps1 in grid:
        for eps2 in grid:
            candidate = witness.with_epsilons(eps1, eps2)
            report = check_condition_c(target, candidate, points, kappa=kappa, norms=norms)
            key = (report.verdict, report.gate_margin)
            if best is None or key > best[0]:
                best = (key, candidate, report)
    best[2].notes.append(f'eps1={best[1].eps1!r} and eps2={best[1].eps2!r} selected from the sweep grid')
    return best[1], best[2]
