# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Verify run
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Verify run" is a function that compares the quantities measured on recorded flow frames with the evaluated gradient bounds, or checks Liouville-type decay to a constant map, and returns a per-frame verdict table.
# ---------------------------------------------------------------------------

import math
from dataclasses import dataclass, field

from vtflow.calculate_bounds import bound_963
from vtflow.calculate_bounds import bounds_closed

VERIFY_MODES = ('963', '89', 'thm1', 'liouville', 'closed', 'oracle')
DEFAULT_TOLERANCE = {'liouville': 1e-6, 'oracle': 1e-3}
VARIANCE_TOLERANCE = 1e-8
TIME_SLACK = 1e-12
VERIFICATION_COLUMNS = ('mode', 'step', 'time', 'quantity', 'measured', 'bound', 'margin', 'verdict')


@dataclass(frozen=True)
class VerificationRow:
    step: int
    time: float
    quantity: str
    measured: float
    bound: float

    @property
    def margin(self):
        return self.bound - self.measured

    @property
    def verdict(self):
        if math.isnan(self.measured):
            return 'missing'
        return 'pass' if self.measured <= self.bound else 'fail'


@dataclass
class VerificationReport:
    mode: str
    passed: bool = True
    skipped: bool = False
    reason: str = ''
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def worst_margin(self):
        margins = [row.margin for row in self.rows if not math.isnan(row.margin)]
        return min(margins) if margins else float('nan')

    def as_rows(self):
        return [[self.mode, row.step, row.time, row.quantity, row.measured, row.bound, row.margin, row.verdict]
                for row in self.rows]


def _read(frame, name):
    value = frame[name] if isinstance(frame, dict) else getattr(frame, name)
    if name == 'status':
        return str(value)
    if name == 'step':
        return int(value)
    return float(value)


def _fail(report, reason):
    report.passed = False
    report.reason = reason
    return report


def _skip(report, reason):
    report.skipped = True
    report.reason = reason
    return report


def _check_rows(report, frames, quantity, bound_for):
    for frame in frames:
        bound = bound_for(frame)
        if bound is None:
            continue
        report.rows.append(VerificationRow(step=_read(frame, 'step'), time=_read(frame, 'time'), quantity=quantity,
                                           measured=_read(frame, quantity), bound=bound))
    if not report.rows:
        return _skip(report, f'no recorded frame carries {quantity} for mode {report.mode}')
    failed = [row for row in report.rows if row.verdict != 'pass']
    if failed:
        first = failed[0]
        return _fail(report, f'{quantity} = {first.measured!r} exceeds bound {first.bound!r} at step {first.step}')
    return report


def _eventually_nonincreasing(values):
    # last increase must occur in the first half of the series
    increases = [i for i in range(1, len(values)) if values[i] > values[i - 1]]
    return not increases or increases[-1] <= len(values) // 2


def verify_run(frames, report, mode, lambdas=(), tolerance=None, strict_proof=False):
    """
    Description: verifies recorded frames against the evaluated bounds of a constants report
    Inputs: 'frames' -- recorded frames, Frame objects or dicts read back from frames.csv
            'report' -- a ConstantsReport with evaluated bounds
            'mode' -- one of '963', '89', 'thm1', 'liouville', 'closed', 'oracle'
            'lambdas' -- horizons checked by mode 963; the report's Lambda when empty
            'tolerance' -- final sup|grad u| tolerance (liouville) or sup error (oracle)
            'strict_proof' -- recorded in the notes; the thm1 bound is taken from the report
    Returned Value: Returns a VerificationReport; skipped with a reason when the constants are infeasible
    Preconditions: frames nonempty
    """

    if mode not in VERIFY_MODES:
        raise ValueError(f'unknown verification mode {mode!r}')
    if not frames:
        raise ValueError('no frames to verify')
    result = VerificationReport(mode=mode)
    if tolerance is None:
        tolerance = DEFAULT_TOLERANCE.get(mode, 0.0)

    for frame in frames:
        status = _read(frame, 'status')
        if status.startswith('aborted'):
            return _fail(result, 'flow ' + status)

    infeasible = [flag for flag in report.flags if 'infeasible' in flag]
    start = _read(frames[0], 'time')

    if mode == '89':
        if math.isnan(report.bound_89):
            return _skip(result, '; '.join(infeasible) or 'bound (89) not evaluated')
        return _check_rows(result, frames, 'sup_grad_ball', lambda frame: report.bound_89)

    if mode == '963':
        if not report.K2 > 0.0:
            return _skip(result, '; '.join(infeasible) or 'K2 not positive')
        horizons = sorted(lambdas) or [report.Lambda]
        for horizon in horizons:
            bound = bound_963(report, report.R, horizon).value
            result.notes.append(f'Lambda = {horizon!r}: bound (963) = {bound!r}')
            _check_rows(result, frames, 'sup_grad_ball',
                        lambda frame: bound if _read(frame, 'time') - start >= horizon - TIME_SLACK else None)
            if not result.passed:
                return result
            result.skipped = False
            result.reason = ''
        if not result.rows:
            return _skip(result, 'no frame reaches the smallest horizon')
        return result

    if mode == 'thm1':
        if math.isnan(report.bound_thm1):
            return _skip(result, '; '.join(infeasible) or 'backward-flow bound not evaluated')
        if strict_proof:
            result.notes.append('strict proof coefficient in use')
        return _check_rows(result, frames, 'sup_omega_q',
                           lambda frame: None if math.isnan(_read(frame, 'sup_omega_q')) else report.bound_thm1)

    if mode == 'closed':
        if not report.K2 > 0.0:
            return _skip(result, '; '.join(infeasible) or 'K2 not positive')

        def closed_bound(frame):
            elapsed = _read(frame, 'time') - start
            if elapsed <= 0.0:
                return None
            decay, initial = bounds_closed(report, elapsed, report.sup_grad_initial_closed)
            return min(decay.value, initial.value)
        return _check_rows(result, frames, 'sup_grad', closed_bound)

    if mode == 'oracle':
        return _check_rows(result, frames, 'oracle_error', lambda frame: tolerance)

    # liouville
    gradients = [_read(frame, 'sup_grad') for frame in frames]
    last = frames[-1]
    result.rows.append(VerificationRow(step=_read(last, 'step'), time=_read(last, 'time'), quantity='sup_grad',
                                       measured=gradients[-1], bound=tolerance))
    result.rows.append(VerificationRow(step=_read(last, 'step'), time=_read(last, 'time'),
                                       quantity='coordinate_variance',
                                       measured=_read(last, 'coordinate_variance'), bound=VARIANCE_TOLERANCE))
    if not _eventually_nonincreasing(gradients):
        return _fail(result, 'sup|grad u| is not eventually nonincreasing')
    failed = [row for row in result.rows if row.verdict != 'pass']
    if failed:
        return _fail(result, f'{failed[0].quantity} = {failed[0].measured!r} not below {failed[0].bound!r}')
    return result
