# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Run pipeline
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ and scipy 1.8+ in a Python 3.9+ distribution.
# Description: "Run pipeline" is a set of functions that execute the stages of a scenario in order: domain checks, target certification, cutoff certification, flow, bound evaluation and verification. Every stage writes its artifacts before the next one starts, so a failing stage leaves the earlier artifacts in place.
# ---------------------------------------------------------------------------

import math
import os
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from vtflow.build_cutoff import build_cutoff
from vtflow.build_cutoff import certify_cutoff
from vtflow.calculate_bounds import evaluate_bounds
from vtflow.calculate_energy_density import calculate_energy_density
from vtflow.calculate_muller_quantities import calculate_muller_quantities
from vtflow.calculate_ric_v_bound import radial_drift_bound
from vtflow.calculate_ric_v_bound import ric_v_h0_lower_bound
from vtflow.calculate_ric_v_bound import ric_v_lower_bound
from vtflow.calculate_ric_v_bound import ric_v_smallest_eigenvalue
from vtflow.calculate_ric_v_bound import sup_vector_norm
from vtflow.check_backward_super_ricci import check_backward_super_ricci
from vtflow.check_condition_c import check_condition_c
from vtflow.check_condition_c import check_generalized_regular_ball
from vtflow.check_condition_c import select_epsilons
from vtflow.check_condition_c import t_smallness_gate
from vtflow.condition_c_witness import build_witness
from vtflow.condition_c_witness import sample_region
from vtflow.constants_report import ConstantsReport
from vtflow.constants_report import constants_theorem1
from vtflow.constants_report import constants_theorem2
from vtflow.csv_output import read_frames
from vtflow.csv_output import write_constants
from vtflow.csv_output import write_csv
from vtflow.csv_output import write_frames
from vtflow.csv_output import write_verification
from vtflow.errors import CertificationError
from vtflow.errors import FlowAbort
from vtflow.errors import VerificationFailure
from vtflow.errors import VtflowError
from vtflow.map_state import initial_state
from vtflow.minimize_l import d_frak_field
from vtflow.minimize_l import d_frak_gradient_squared
from vtflow.minimize_l import in_parabolic_region
from vtflow.minimize_l import reduced_distance
from vtflow.step_flow import FrameProbe
from vtflow.step_flow import run_flow
from vtflow.verify_run import VerificationReport
from vtflow.verify_run import verify_run

CHECK_TIMES = 5
BALL_NOTE = 'no distance callback on this chart: balls around the base point are taken as the whole chart'


@dataclass
class DomainChecks:
    A: float
    K: float
    H_lemma: float
    ric_v_floor: float
    norm_v: float
    v_at_R: float
    super_ricci: Optional[Any] = None
    muller_passed: Optional[bool] = None
    notes: list = field(default_factory=list)


@dataclass
class Certification:
    witness: Any
    reports: dict
    gate: tuple
    gate_name: str

    @property
    def condition(self):
        return self.reports['condition_c']


def _say(echo, message):
    if echo:
        print('\t' + message)


def _check_times(scenario):
    return np.linspace(scenario.flow.t_start, scenario.flow.t_end, CHECK_TIMES)


def _ball_mask(chart, radius, time):
    """Nodes within distance radius of the base point; every node when the chart has no distance."""

    if chart.distance is None:
        return np.ones(chart.counts, dtype=bool)
    return chart.distance_field(time) <= radius


def _path(scenario, name):
    return os.path.join(scenario.out, name)


def check_domain(scenario, echo=True):
    """
    Description: measures the domain constants A, K, v(R), |V| and the Ric_V floor, and checks the backward super Ricci flow and Muller hypotheses of backward scenarios
    Inputs: 'scenario' -- a loaded Scenario
            'echo' -- print progress lines
    Returned Value: Returns a DomainChecks
    Preconditions: none
    """

    chart = scenario.domain
    radius = scenario.values['cutoff.radius']
    times = _check_times(scenario)
    notes = [] if chart.distance is not None else [BALL_NOTE]

    _say(echo, 'Measuring Ric_V bounds...')
    floors = []
    lower = 0.0
    for time in times:
        floors.append(ric_v_smallest_eigenvalue(chart, None, time))
        lower = max(lower, ric_v_lower_bound(chart, _ball_mask(chart, radius, time), time))
    k_constant = ric_v_h0_lower_bound(chart, _ball_mask(chart, radius, times[0]), times)
    norm_v = max(sup_vector_norm(chart, time) for time in times)
    if chart.distance is not None:
        v_at_r = max(radial_drift_bound(chart, radius, time) for time in times)
    else:
        v_at_r = norm_v
        notes.append('v(R) replaced by sup |V| on a chart without a distance callback')
    checks = DomainChecks(A=lower, K=k_constant, H_lemma=0.0, ric_v_floor=min(floors), norm_v=norm_v,
                          v_at_R=v_at_r, notes=notes)

    if scenario.flow.direction == 'backward':
        _say(echo, 'Checking backward super Ricci flow...')
        checks.super_ricci = check_backward_super_ricci(chart, times)
        if not checks.super_ricci.passed:
            raise CertificationError(f'domain is not a backward super Ricci flow (margin {checks.super_ricci.margin!r} '
                                     f'at tau={checks.super_ricci.worst_time!r})', [checks.super_ricci])
        _say(echo, 'Checking Muller quantities...')
        hypothesis = scenario.values['estimate.muller_hypothesis']
        passed = True
        worst = 0.0
        for tau in times[times > 0.0]:
            sample = calculate_muller_quantities(chart, float(tau))
            held = sample.theorem_hypothesis() if hypothesis == 'theorem' else sample.lemma_hypothesis(k_constant)
            passed = passed and held
            worst = max(worst, float(np.max(-tau * sample.h_v)))
        checks.muller_passed = passed
        checks.H_lemma = worst
        if not passed:
            checks.notes.append(f'D(V) hypothesis ({hypothesis} form) fails: backward-flow verification excluded')
    return checks


def _gate_name(scenario):
    return 'theorem1' if 'thm1' in scenario.values['estimate.modes'] else 'theorem2'


def certify_target(scenario, echo=True):
    """
    Description: builds the witness and certifies Condition (C), the generalized regular ball and the smallness gate on T
    Inputs: 'scenario' -- a loaded Scenario
            'echo' -- print progress lines
    Returned Value: Returns a Certification
    Preconditions: none; raises CertificationError when a gate fails
    """

    target = scenario.target
    seed = scenario.seed
    spec = dict(scenario.witness_spec)
    sweep = spec.get('eps1') == 'sweep' or spec.get('eps2') == 'sweep'
    for key in ('eps1', 'eps2'):
        if spec.get(key) == 'sweep':
            spec[key] = 0.01

    _say(echo, 'Building Condition C witness...')
    witness = build_witness(spec, target, scenario.domain.dimension, seed)
    samples = sample_region(target, witness.domain_radius, int(spec.get('samples', 24)), seed)

    _say(echo, 'Certifying Condition C...')
    if sweep:
        witness, condition = select_epsilons(target, witness, samples, seed)
    else:
        condition = check_condition_c(target, witness, samples, seed=seed)
    reports = {'condition_c': condition}
    if witness.f_star is not None:
        _say(echo, 'Certifying generalized regular ball...')
        reports['regular_ball'] = check_generalized_regular_ball(target, witness, samples, condition, seed)

    gate_name = _gate_name(scenario)
    gate = t_smallness_gate(witness, condition.norm_t, gate_name)
    certification = Certification(witness=witness, reports=reports, gate=gate, gate_name=gate_name)
    write_certification(_path(scenario, 'certification.csv'), certification)

    failing = [name for name, report in reports.items() if not report.verdict]
    if failing:
        reasons = '; '.join(f'{name}: {reports[name].reason}' for name in failing)
        raise CertificationError(f'target certification failed ({reasons})', list(reports.values()))
    if not gate[0]:
        raise CertificationError(f'|T| = {condition.norm_t!r} fails the {gate_name} smallness gate '
                                 f'(threshold {gate[1]!r})', list(reports.values()))
    return certification


def certify_scenario_cutoff(scenario, echo=True):
    """Builds and certifies the cutoff of the scenario's R, Lambda and alpha; writes cutoff.csv."""

    values = scenario.values
    _say(echo, 'Certifying cutoff...')
    profile = certify_cutoff(build_cutoff(values['cutoff.radius'], values['cutoff.horizon'], values['cutoff.alpha']),
                             values['cutoff.samples'])
    rows = [('R', profile.radius), ('Lambda', profile.horizon), ('alpha', profile.alpha), ('power', profile.power)]
    rows += list(profile.constants.items())
    write_csv(_path(scenario, 'cutoff.csv'), ('name', 'value'), rows)
    if not profile.constants['certified']:
        failed = [name for name, value in profile.constants.items() if value is False]
        raise CertificationError(f'cutoff certification failed: {", ".join(failed) or "non-finite constants"}')
    return profile


def write_certification(path, certification):
    rows = []
    for name, report in certification.reports.items():
        rows += [(name, gate, passed, '') for gate, passed in report.gates.items()]
        rows += [(name, 'gate_margin', '', report.gate_margin), (name, 'kappa', '', report.kappa),
                 (name, 'norm_t', '', report.norm_t), (name, 'norm_grad_t', '', report.norm_grad_t),
                 (name, 'sup_f', '', report.sup_f), (name, 'inf_f', '', report.inf_f),
                 (name, 'sup_grad_f', '', report.sup_grad_f)]
        rows += [(name, 'note', '', note) for note in report.notes]
    witness = certification.witness
    rows += [('witness', key, '', float(getattr(witness, key))) for key in ('m1', 'm2', 'm3', 'q', 'eps1', 'eps2')]
    rows.append(('t_smallness', certification.gate_name, certification.gate[0], certification.gate[1]))
    return write_csv(path, ('check', 'item', 'passed', 'value'), rows)


def _initial(scenario, witness):
    return initial_state(scenario.domain, scenario.target, scenario.initial_spec,
                         time=scenario.flow.initial_time, witness=witness)


class ParabolicMask:
    """Maps a time tau to the nodes of Q_{R/2, Lambda/4}; d is exact on static charts with a distance."""

    def __init__(self, scenario):
        self.chart = scenario.domain
        self.radius = 0.5 * scenario.values['cutoff.radius']
        self.horizon = 0.25 * scenario.values['cutoff.horizon']
        self.stride = scenario.values['reduced.stride']
        self.segments = scenario.values['reduced.segments']
        self.cache = {}

    def distances(self, tau):
        if self.chart.distance is not None and (self.chart.static or tau <= 0.0):
            return self.chart.distance_field(tau)
        if tau <= 0.0:
            return None
        if tau not in self.cache:
            self.cache[tau] = d_frak_field(self.chart, tau, self.stride, segments=self.segments)
        return self.cache[tau]

    def __call__(self, tau):
        if not 0.0 <= tau <= self.horizon:
            return None
        distances = self.distances(tau)
        if distances is None:
            return None
        return in_parabolic_region(distances, tau, self.radius, self.horizon)


def build_probe(scenario, witness):
    values = scenario.values
    oracle = None
    if 'oracle' in values['estimate.modes']:
        initial = scenario.initial_spec
        component = int(initial.get('component', 0))
        center = initial.get('center', [0.0] * scenario.target.dimension)
        oracle = {'amplitude': float(initial.get('amplitude', 0.0)), 'axis': int(initial.get('axis', 0)),
                  'component': component, 'start_time': scenario.flow.initial_time,
                  'offset': float(center[component])}
    return FrameProbe(witness=witness,
                      ball_mask=_ball_mask(scenario.domain, 0.5 * values['cutoff.radius'], scenario.flow.initial_time),
                      parabolic_mask=ParabolicMask(scenario) if scenario.flow.direction == 'backward' else None,
                      oracle=oracle,
                      bochner=scenario.flow.bochner,
                      direction=scenario.flow.direction)


def simulate(scenario, witness, echo=True):
    """
    Description: runs the flow of a scenario and writes frames.csv, also when the flow aborts
    Inputs: 'scenario' -- a loaded Scenario
            'witness' -- the certified ConditionCWitness whose Omega the image must stay in
            'echo' -- print progress lines
    Returned Value: Returns a FlowRun
    Preconditions: stability gate checked at load time
    """

    state = _initial(scenario, witness)
    _say(echo, f'Running {scenario.flow.direction} flow over {scenario.flow.steps} steps...')
    try:
        run = run_flow(state, scenario.flow, build_probe(scenario, witness), echo=echo)
    except FlowAbort as error:
        write_frames(_path(scenario, 'frames.csv'), error.frames)
        raise
    write_frames(_path(scenario, 'frames.csv'), run.frames)
    return run


def evaluate_constants(scenario, checks, certification, profile, strict_proof=False, echo=True):
    """
    Description: assembles the constants report and evaluates every bound
    Inputs: 'scenario' -- a loaded Scenario
            'checks' -- DomainChecks
            'certification' -- a Certification
            'profile' -- the certified CutoffProfile
            'strict_proof' -- use the strict coefficient of the backward-flow bound
            'echo' -- print progress lines
    Returned Value: Returns a ConstantsReport, also written to constants.csv
    Preconditions: certification passed
    """

    _say(echo, 'Evaluating constants and bounds...')
    values = scenario.values
    witness = certification.witness
    condition = certification.condition
    energy = calculate_energy_density(_initial(scenario, witness))
    ball = _ball_mask(scenario.domain, values['cutoff.radius'], scenario.flow.initial_time)
    constants = profile.constants
    report = ConstantsReport(dimension=scenario.domain.dimension,
                             A=checks.A,
                             K=checks.K,
                             H_lemma=checks.H_lemma,
                             kappa=condition.kappa,
                             s0=witness.s0,
                             m1=witness.m1,
                             m2=witness.m2,
                             m3=witness.m3,
                             Q=witness.q,
                             norm_t=condition.norm_t,
                             norm_grad_t=condition.norm_grad_t,
                             norm_v=checks.norm_v,
                             eps1=witness.eps1,
                             eps2=witness.eps2,
                             R=values['cutoff.radius'],
                             Lambda=values['cutoff.horizon'],
                             C0=constants['C0'],
                             C_half=constants['C_half'],
                             C_three_quarter=constants['C_three_quarter'],
                             D=constants['D'],
                             v_at_R=checks.v_at_R,
                             ric_v_floor=checks.ric_v_floor,
                             sup_grad_initial=float(np.sqrt(energy[ball].max())),
                             sup_grad_initial_closed=float(np.sqrt(energy.max())))
    report = constants_theorem2(report)
    epsilon = values['estimate.epsilon']
    report = constants_theorem1(report, None if epsilon == 'auto' else epsilon)
    report = evaluate_bounds(report, values['estimate.lambdas'], strict_proof)
    report = report.flagged(*checks.notes)
    write_constants(_path(scenario, 'constants.csv'), report)
    return report


def verify(scenario, frames, report, checks, strict_proof=False, echo=True):
    """
    Description: verifies frames in every requested mode and writes verification.csv
    Inputs: 'scenario' -- a loaded Scenario
            'frames' -- recorded frames
            'report' -- the evaluated ConstantsReport
            'checks' -- DomainChecks, for the Muller exclusion of the backward-flow mode
            'strict_proof' -- recorded in the notes of the backward-flow mode
            'echo' -- print progress lines
    Returned Value: Returns the list of VerificationReports; raises VerificationFailure when one fails
    Preconditions: frames nonempty
    """

    values = scenario.values
    tolerance = values['estimate.tolerance']
    tolerance = None if tolerance == 'auto' else tolerance
    results = []
    for mode in values['estimate.modes']:
        _say(echo, f'Verifying mode {mode}...')
        if mode == 'thm1' and scenario.flow.direction != 'backward':
            result = VerificationReport(mode=mode, skipped=True,
                                        reason='the backward-flow estimate applies to backward flows only')
        elif mode == 'thm1' and checks.muller_passed is False:
            result = VerificationReport(mode=mode, skipped=True, reason='D(V) hypothesis fails')
        else:
            result = verify_run(frames, report, mode, values['estimate.lambdas'], tolerance, strict_proof)
        results.append(result)
    write_verification(_path(scenario, 'verification.csv'), results)
    failed = [result for result in results if not result.passed]
    if failed:
        raise VerificationFailure('verification failed: ' + '; '.join(f'{r.mode}: {r.reason}' for r in failed),
                                  results)
    return results


def write_summary(scenario, report=None, results=(), run=None, error=None):
    lines = [f'scenario: {scenario.name}', f'seed: {scenario.seed}',
             f'flow: {scenario.flow.direction} {scenario.flow.scheme} dt={scenario.flow.dt!r} '
             f'steps={scenario.flow.steps} stability_limit={scenario.stability_limit!r}']
    if run is not None:
        last = run.frames[-1]
        lines.append(f'final time: {last.time!r} sup|grad u|: {last.sup_grad!r}')
    if report is not None:
        for name in ('K1', 'K2', 'C4', 'C1_t1', 'C2_t1', 'epsilon', 'bound_963', 'bound_89', 'bound_thm1',
                     'bound_cor_dfg_ball', 'bound_cor_dfg_complete', 'bound_closed_initial'):
            lines.append(f'{name}: {getattr(report, name)!r}')
        lines += [f'flag: {flag}' for flag in report.flags]
    for result in results:
        verdict = 'skipped' if result.skipped else ('pass' if result.passed else 'fail')
        detail = f' ({result.reason})' if result.reason else ''
        margin = '' if math.isnan(result.worst_margin) else f' worst margin {result.worst_margin!r}'
        lines.append(f'verification {result.mode}: {verdict}{margin}{detail}')
    if error is not None:
        lines.append(f'stopped with exit code {error.exit_code}: {error.message}')
    else:
        lines.append('status: ok')
    path = _path(scenario, 'summary.txt')
    os.makedirs(scenario.out, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write('\n'.join(lines) + '\n')
    return path


def _strict(scenario, strict_proof):
    return scenario.values['estimate.strict_proof'] if strict_proof is None else strict_proof


def run_pipeline(scenario, strict_proof=None, echo=True):
    """
    Description: runs every stage of a scenario and writes certification.csv, cutoff.csv, reduced.csv, frames.csv, constants.csv, verification.csv and summary.txt
    Inputs: 'scenario' -- a loaded Scenario
            'strict_proof' -- override of the scenario's estimate.strict_proof
            'echo' -- print progress lines
    Returned Value: Returns 0; a failing stage raises its VtflowError after summary.txt is written
    Preconditions: none
    """

    strict_proof = _strict(scenario, strict_proof)
    report = None
    results = []
    run = None
    try:
        checks = check_domain(scenario, echo)
        certification = certify_target(scenario, echo)
        profile = certify_scenario_cutoff(scenario, echo)
        reduced_command(scenario, echo)
        run = simulate(scenario, certification.witness, echo)
        report = evaluate_constants(scenario, checks, certification, profile, strict_proof, echo)
        results = verify(scenario, run.frames, report, checks, strict_proof, echo)
    except VerificationFailure as error:
        write_summary(scenario, report, error.reports, run, error)
        raise
    except VtflowError as error:
        write_summary(scenario, report, results, run, error)
        raise
    write_summary(scenario, report, results, run)
    return 0


def certify_command(scenario, echo=True):
    check_domain(scenario, echo)
    certify_target(scenario, echo)
    return 0


def cutoff_command(scenario, echo=True):
    certify_scenario_cutoff(scenario, echo)
    return 0


def flow_command(scenario, echo=True):
    check_domain(scenario, echo)
    certification = certify_target(scenario, echo)
    simulate(scenario, certification.witness, echo)
    return 0


def reduced_rows(scenario, echo=True):
    """
    Description: tabulates L, l, d, the geodesic residual and |grad d|^2 at probe nodes along the first axis
    Inputs: 'scenario' -- a loaded Scenario
            'echo' -- print progress lines
    Returned Value: Returns a list of rows (x..., tau_bar, L, l, d, geodesic_residual, grad_d_squared, warning)
    Preconditions: none
    """

    chart = scenario.domain
    values = scenario.values
    taus = values['reduced.taus'] or [0.25 * values['cutoff.horizon'], values['cutoff.horizon']]
    segments = values['reduced.segments']
    rows = []
    for index in range(values['reduced.probes'] + 1):
        node = list(chart.base_node)
        node[0] += index * values['reduced.stride']
        x = chart.coordinates[chart.wrap(tuple(node))]
        for tau_bar in taus:
            _say(echo, f'Minimizing L-length at node {tuple(node)} and tau {tau_bar!r}...')
            ell, d, result = reduced_distance(chart, x, tau_bar, segments=segments)
            gradient = d_frak_gradient_squared(chart, x, tau_bar, segments=segments) if index else float('nan')
            rows.append(list(map(float, x)) + [tau_bar, result.value, ell, d, result.geodesic_residual, gradient,
                                               result.warning])
    return rows


def reduced_command(scenario, echo=True):
    header = tuple(f'x{axis}' for axis in range(scenario.domain.dimension))
    header += ('tau_bar', 'L', 'l', 'd', 'geodesic_residual', 'grad_d_squared', 'warning')
    write_csv(_path(scenario, 'reduced.csv'), header, reduced_rows(scenario, echo))
    return 0


def verify_command(scenario, frames_path, strict_proof=None, echo=True):
    """Re-derives the constants of a scenario and verifies a recorded frames.csv against them."""

    strict_proof = _strict(scenario, strict_proof)
    checks = check_domain(scenario, echo)
    certification = certify_target(scenario, echo)
    profile = certify_scenario_cutoff(scenario, echo)
    report = evaluate_constants(scenario, checks, certification, profile, strict_proof, echo)
    verify(scenario, read_frames(frames_path), report, checks, strict_proof, echo)
    return 0
