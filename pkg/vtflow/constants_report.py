# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Constants report
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Constants report" is the ledger of every constant entering the gradient estimates. Hypothesis constants are measured by the certification stages; the derived constants of the complete-manifold estimate (K1, K2, C1..C4) and of the backward-flow estimate (C1_t1, C2_t1) are computed here.
# ---------------------------------------------------------------------------

import math
from dataclasses import dataclass, field, fields, replace

NAN = float('nan')
DEFAULT_NOTES = (
    'H in the L-length is the trace of h = d_tau g / 2',
    'C3 evaluates the drift bound v at the ball radius R',
    'Q_{R, Lambda} adds the constraint tau in [0, Lambda]',
    'backward-flow constants are namespaced C1_t1 and C2_t1 to avoid the cutoff constants C_alpha',
    'eps3 follows 2 eps3 = 1 - eps2; the line "eps3 = 4(1 - eps2)" is read as a typo',
)


@dataclass(frozen=True)
class ConstantsReport:
    # Hypothesis side
    dimension: int = 2
    A: float = 0.0
    K: float = 0.0
    H_lemma: float = 0.0
    kappa: float = 0.0
    s0: int = 1
    m1: float = NAN
    m2: float = NAN
    m3: float = NAN
    Q: float = NAN
    norm_t: float = 0.0
    norm_grad_t: float = 0.0
    norm_v: float = 0.0
    epsilon: float = NAN
    eps1: float = NAN
    eps2: float = NAN
    eps3: float = NAN
    R: float = NAN
    Lambda: float = NAN
    C0: float = NAN
    C_half: float = NAN
    C_three_quarter: float = NAN
    D: float = NAN
    v_at_R: float = 0.0
    ric_v_floor: float = NAN
    sup_grad_initial: float = 0.0
    sup_grad_initial_closed: float = 0.0
    # Complete-manifold estimate
    K1: float = NAN
    K2: float = NAN
    C1: float = NAN
    C2: float = NAN
    C3: float = NAN
    C4: float = NAN
    # Backward-flow estimate
    C1_t1: float = NAN
    C2_t1: float = NAN
    # Evaluated bounds
    bound_963: float = NAN
    bound_89: float = NAN
    bound_thm1: float = NAN
    bound_cor_dfg_ball: float = NAN
    bound_cor_dfg_complete: float = NAN
    bound_closed_initial: float = NAN
    flags: tuple = ()
    notes: tuple = field(default=DEFAULT_NOTES)

    def flagged(self, *messages):
        new = tuple(m for m in messages if m not in self.flags)
        return replace(self, flags=self.flags + new)

    def as_rows(self):
        """(name, value) rows for every numeric field, followed by flags and notes."""

        rows = [(f.name, getattr(self, f.name)) for f in fields(self) if f.name not in ('flags', 'notes')]
        rows += [('flag', message) for message in self.flags]
        rows += [('note', message) for message in self.notes]
        return rows


def constants_theorem2(report):
    """
    Description: fills K1, K2, C1, C2, C3, C4 of the complete-manifold estimate
    Inputs: 'report' -- a ConstantsReport with A, eps1, eps2, m1, m3, Q, norm_t, C0, v_at_R and dimension
    Returned Value: Returns a new ConstantsReport; a negative K1 is kept and flagged
    Preconditions: m1 > 0 and 0 < eps2 < 1
    """

    if not 0.0 < report.eps2 < 1.0:
        raise ValueError(f'eps2 must lie in (0, 1), got {report.eps2!r}')
    if not report.m1 > 0.0:
        raise ValueError(f'm1 must be positive, got {report.m1!r}')
    ratio = (report.m3 / report.m1)**2
    k1 = 2.0 * (report.A + report.eps1) - (3.0 - 4.0 * report.eps2) / (2.0 * (1.0 - report.eps2)) * ratio
    k2 = 2.0 * report.Q * report.m1 - report.norm_t * report.m3 * report.m1
    c1 = math.sqrt((report.dimension - 1) * report.A)
    c2 = report.C0 + math.sqrt(report.C0) * (report.dimension - 1)
    c3 = report.v_at_R + c1
    c4 = max(c2 + 2.0 * report.C0, c3)
    report = replace(report, K1=k1, K2=k2, C1=c1, C2=c2, C3=c3, C4=c4)
    if k1 < 0.0:
        report = report.flagged('K1 negative: sqrt(max(K1, 0)) used')
    if k2 <= 0.0:
        report = report.flagged('K2 not positive: complete-manifold bounds infeasible')
    return report


def automatic_epsilon(c1_t1, m3):
    return min(0.05, (c1_t1 - m3**2) / 10.0)


def constants_theorem1(report, epsilon=None):
    """
    Description: fills eps3, C1_t1, C2_t1 and epsilon of the backward-flow estimate
    Inputs: 'report' -- a ConstantsReport with K, eps1, eps2, m1, m3, Q, norm_t
            'epsilon' -- epsilon of the estimate; min(0.05, (C1_t1 - m3^2) / 10) when omitted
    Returned Value: Returns a new ConstantsReport
    Preconditions: m1 > 0 and 0 < eps2 < 1
    """

    if not 0.0 < report.eps2 < 1.0:
        raise ValueError(f'eps2 must lie in (0, 1), got {report.eps2!r}')
    if not report.m1 > 0.0:
        raise ValueError(f'm1 must be positive, got {report.m1!r}')
    eps3 = (1.0 - report.eps2) / 2.0
    c1 = 2.0 * report.Q * report.m1 - report.norm_t * report.m3 * report.m1
    c2 = 2.0 * (report.K + report.eps1) - (8.0 * eps3 - 1.0) / (4.0 * eps3) * (report.m3 / report.m1)**2
    if epsilon is None:
        epsilon = automatic_epsilon(c1, report.m3)
    report = replace(report, eps3=eps3, C1_t1=c1, C2_t1=c2, epsilon=float(epsilon))
    if epsilon <= 0.0:
        report = report.flagged('epsilon not positive: backward-flow bound infeasible')
    return report
