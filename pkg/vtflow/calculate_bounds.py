# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate bounds
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate bounds" is a set of functions that evaluate the closed-form gradient bounds: the local bounds (963) and (89) of the complete-manifold estimate, the backward-flow bound on omega, the corollary bounds on balls, complete and closed manifolds, and the constancy gate.
# ---------------------------------------------------------------------------

import math
from dataclasses import dataclass, replace

INFEASIBLE_K2 = 'K2 not positive: complete-manifold bounds infeasible'
CLAMPED_K1 = 'K1 negative: sqrt(max(K1, 0)) used'


@dataclass(frozen=True)
class BoundEvaluation:
    value: float
    feasible: bool = True
    flags: tuple = ()


def _infeasible(*flags):
    return BoundEvaluation(value=float('nan'), feasible=False, flags=tuple(flags))


def _clamped_k1(report):
    if report.K1 < 0.0:
        return 0.0, (CLAMPED_K1,)
    return report.K1, ()


def bound_963(report, radius, horizon):
    """
    Description: evaluates m2 (sqrt(C0) m3 / (K2 R) + C4 (sqrt(K1) + sqrt(1/R) + 1/R) / sqrt(K2) + 1 / (sqrt(K2) sqrt(Lambda)))
    Inputs: 'report' -- a ConstantsReport with the complete-manifold constants
            'radius' -- ball radius R
            'horizon' -- time Lambda
    Returned Value: Returns a BoundEvaluation; infeasible when K2 <= 0
    Preconditions: R > 0, Lambda > 0
    """

    if not report.K2 > 0.0:
        return _infeasible(INFEASIBLE_K2)
    k1, flags = _clamped_k1(report)
    root_k2 = math.sqrt(report.K2)
    value = report.m2 * (math.sqrt(report.C0) * report.m3 / (report.K2 * radius)
                         + report.C4 * (math.sqrt(k1) + math.sqrt(1.0 / radius) + 1.0 / radius) / root_k2
                         + 1.0 / (root_k2 * math.sqrt(horizon)))
    return BoundEvaluation(value=value, flags=flags)


def bound_89(report, radius, sup_grad_initial):
    """
    Description: evaluates (m2/m1) sup|grad u0| + m2 (2m sqrt(C0)/R + sqrt(2m sqrt(C0)/R^2 + 4 K2 (K1 + (C2 + 2 C0)/R^2 + C3/R))) / (2 K2)
    Inputs: 'report' -- a ConstantsReport with the complete-manifold constants
            'radius' -- ball radius R
            'sup_grad_initial' -- sup of |grad u0| over the ball
    Returned Value: Returns a BoundEvaluation; the discriminant is clamped at 0 with a flag
    Preconditions: R > 0
    """

    if not report.K2 > 0.0:
        return _infeasible(INFEASIBLE_K2)
    m = report.dimension
    root_c0 = math.sqrt(report.C0)
    discriminant = (2.0 * m * root_c0 / radius**2
                    + 4.0 * report.K2 * (report.K1 + (report.C2 + 2.0 * report.C0) / radius**2 + report.C3 / radius))
    flags = ()
    if discriminant < 0.0:
        discriminant = 0.0
        flags = ('discriminant of bound (89) clamped at 0',)
    value = ((report.m2 / report.m1) * sup_grad_initial
             + report.m2 * (2.0 * m * root_c0 / radius + math.sqrt(discriminant)) / (2.0 * report.K2))
    return BoundEvaluation(value=value, flags=flags)


def bound_thm1(report, radius, horizon, epsilon=None, strict_proof=False):
    """
    Description: evaluates the bound on sup omega over Q_{R/2, Lambda/4} of the backward-flow estimate
    Inputs: 'report' -- a ConstantsReport with C1_t1, C2_t1, K, the cutoff constants and norm_v
            'radius' -- R
            'horizon' -- Lambda
            'epsilon' -- epsilon of the estimate; the report's when omitted
            'strict_proof' -- use the coefficient C1_t1 - 6 epsilon - m3^2 of the derivation instead of 5 epsilon
    Returned Value: Returns a BoundEvaluation; infeasible when the denominator is not positive
    Preconditions: R > 0, Lambda > 0, epsilon > 0
    """

    epsilon = report.epsilon if epsilon is None else epsilon
    if not epsilon > 0.0:
        return _infeasible('epsilon not positive: backward-flow bound infeasible')
    m = report.dimension
    m3 = report.m3
    denominator = report.C1_t1 - (6.0 if strict_proof else 5.0) * epsilon - m3**2
    if not denominator > 0.0:
        return _infeasible('denominator C1_t1 - 5 epsilon - m3^2 not positive: backward-flow bound infeasible')
    flags = []
    c34 = report.C_three_quarter
    bracket = (c34**2 / epsilon * (m**2 + 9.0 / 4.0) / radius**4
               + report.D**2 / (4.0 * epsilon * horizon**2)
               + c34**2 * report.K**2 / (4.0 * epsilon)
               + 9.0 * c34**4 / (epsilon * radius**4)
               + report.norm_v * report.C_half**2 / (4.0 * epsilon * radius**2))
    if m3 > 0.0:
        bracket += 243.0 * c34**4 / (16.0 * m3**2 * radius**4)
    else:
        flags.append('m3 = 0: the 243 C_{3/4}^4 term is dropped')
    first = report.C2_t1 / denominator
    if first < 0.0:
        first = 0.0
        flags.append('negative leading term of the backward-flow bound clamped at 0')
    if strict_proof:
        flags.append('strict proof coefficient C1_t1 - 6 epsilon - m3^2 used')
    return BoundEvaluation(value=first + math.sqrt(bracket) / denominator, flags=tuple(flags))


def corollary_constancy_gate(a, eps1, eps2, m3, m1):
    """Ric_V >= a with a >= eps1/2 - (3 - 4 eps2)/(4 (1 - eps2)) (m3/m1)^2."""

    if not 0.0 < eps2 < 1.0:
        raise ValueError(f'eps2 must lie in (0, 1), got {eps2!r}')
    return a >= eps1 / 2.0 - (3.0 - 4.0 * eps2) / (4.0 * (1.0 - eps2)) * (m3 / m1)**2


def bounds_corollaries(report, radius):
    """
    Description: evaluates the static corollary bounds on a ball and on the complete manifold
    Inputs: 'report' -- a ConstantsReport with the complete-manifold constants and ric_v_floor
            'radius' -- ball radius R
    Returned Value: Returns a dict with BoundEvaluation entries 'ball' and 'complete' and the boolean 'constancy_gate'
    Preconditions: R > 0
    """

    gate = (not math.isnan(report.ric_v_floor)
            and corollary_constancy_gate(report.ric_v_floor, report.eps1, report.eps2, report.m3, report.m1))
    if not report.K2 > 0.0:
        return {'ball': _infeasible(INFEASIBLE_K2), 'complete': _infeasible(INFEASIBLE_K2), 'constancy_gate': gate}
    k1, flags = _clamped_k1(report)
    root_k2 = math.sqrt(report.K2)
    ball = report.m2 * (math.sqrt(report.C0) * report.m3 / (report.K2 * radius)
                        + report.C4 * (math.sqrt(k1) + math.sqrt(1.0 / radius) + 1.0 / radius) / root_k2)
    complete = BoundEvaluation(value=report.m2 * math.sqrt(k1 / report.K2), flags=flags)
    if gate:
        complete = BoundEvaluation(value=0.0, flags=flags + ('constancy gate satisfied: the map is constant',))
    return {'ball': BoundEvaluation(value=ball, flags=flags), 'complete': complete, 'constancy_gate': gate}


def bounds_closed(report, time, sup_grad_initial):
    """
    Description: evaluates the closed-manifold bounds m2 (C4 sqrt(K1)/sqrt(K2) + 1/(sqrt(K2) sqrt(t))) and (m2/m1) sup|grad u0| + m2 sqrt(K1/K2)
    Inputs: 'report' -- a ConstantsReport with the complete-manifold constants
            'time' -- elapsed flow time, positive
            'sup_grad_initial' -- sup of |grad u0|
    Returned Value: Returns a tuple (time-decay BoundEvaluation, initial-data BoundEvaluation)
    Preconditions: time > 0
    """

    if not report.K2 > 0.0:
        return _infeasible(INFEASIBLE_K2), _infeasible(INFEASIBLE_K2)
    if time <= 0.0:
        raise ValueError(f'elapsed time must be positive, got {time!r}')
    k1, flags = _clamped_k1(report)
    root_k2 = math.sqrt(report.K2)
    decay = report.m2 * (report.C4 * math.sqrt(k1) / root_k2 + 1.0 / (root_k2 * math.sqrt(time)))
    initial = (report.m2 / report.m1) * sup_grad_initial + report.m2 * math.sqrt(k1 / report.K2)
    return BoundEvaluation(value=decay, flags=flags), BoundEvaluation(value=initial, flags=flags)


def evaluate_bounds(report, lambdas=(), strict_proof=False):
    """
    Description: evaluates every bound at the report's R and Lambda and records values and flags in the report
    Inputs: 'report' -- a ConstantsReport with hypothesis and derived constants
            'lambdas' -- additional horizons; bound_963 is recorded at the smallest horizon
            'strict_proof' -- passed to bound_thm1
    Returned Value: Returns a new ConstantsReport
    Preconditions: R and Lambda set
    """

    horizon = min([report.Lambda] + list(lambdas))
    evaluations = {'bound_963': bound_963(report, report.R, horizon),
                   'bound_89': bound_89(report, report.R, report.sup_grad_initial)}
    if not math.isnan(report.C1_t1):
        evaluations['bound_thm1'] = bound_thm1(report, report.R, report.Lambda, strict_proof=strict_proof)
    corollaries = bounds_corollaries(report, report.R)
    evaluations['bound_cor_dfg_ball'] = corollaries['ball']
    evaluations['bound_cor_dfg_complete'] = corollaries['complete']
    evaluations['bound_closed_initial'] = bounds_closed(report, 1.0, report.sup_grad_initial_closed)[1]

    values = {name: evaluation.value for name, evaluation in evaluations.items()}
    report = replace(report, **values)
    for evaluation in evaluations.values():
        report = report.flagged(*evaluation.flags)
    if corollaries['constancy_gate']:
        report = report.flagged('corollary constancy gate satisfied')
    return report
