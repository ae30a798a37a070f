# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Scenario
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Scenario" is a function that loads a flat namespaced key-value scenario file, validates every key against a schema, builds the domain chart, target model and flow configuration, and checks the explicit stability gate.
# ---------------------------------------------------------------------------

import os
import re
from dataclasses import dataclass, field
from typing import Any

from vtflow.domain_chart import build_domain
from vtflow.errors import InvariantError
from vtflow.errors import ScenarioParseError
from vtflow.errors import UnknownKeyError
from vtflow.map_state import FlowConfig
from vtflow.target_model import build_target
from vtflow.verify_run import VERIFY_MODES

KEY_PATTERN = re.compile(r'[a-z][a-z0-9_]*(\.[a-z][a-z0-9_]*)+$')


def _float(text):
    return float(text)


def _int(text):
    return int(text)


def _text(text):
    if not text:
        raise ValueError('empty value')
    return text


def _bool(text):
    lowered = text.lower()
    if lowered in ('true', 'yes', '1', 'on'):
        return True
    if lowered in ('false', 'no', '0', 'off'):
        return False
    raise ValueError(f'not a boolean: {text!r}')


def _floats(text):
    return [float(item) for item in text.split(',')]


def _ints(text):
    return [int(item) for item in text.split(',')]


def _texts(text):
    return [_text(item.strip()) for item in text.split(',')]


def _or_keyword(parser, *keywords):
    def parse(text):
        return text if text in keywords else parser(text)
    return parse


def _modes(text):
    modes = _texts(text)
    unknown = [mode for mode in modes if mode not in VERIFY_MODES]
    if unknown:
        raise ValueError(f'unknown estimate modes {unknown}')
    return modes


_auto_float = _or_keyword(_float, 'auto')
_sweep_float = _or_keyword(_float, 'sweep')

# key -> (parser, default); None defaults are left to the building function
SCHEMA = {
    'scenario.name': (_text, None),
    'scenario.seed': (_int, 0),
    'scenario.out': (_text, None),
    'domain.family': (_text, 'flat_torus'),
    'domain.dimension': (_int, 2),
    'domain.counts': (_ints, [32]),
    'domain.length': (_float, None),
    'domain.scale': (_float, None),
    'domain.rate': (_float, None),
    'domain.amplitude': (_float, None),
    'domain.radius': (_float, None),
    'domain.extent': (_float, None),
    'domain.offset': (_float, None),
    'domain.base_node': (_ints, None),
    'domain.debug': (_bool, False),
    'vector.family': (_text, 'zero'),
    'vector.components': (_floats, None),
    'vector.amplitude': (_float, None),
    'vector.axis': (_int, None),
    'target.family': (_text, 'euclidean'),
    'target.dimension': (_int, 2),
    'target.chart_radius': (_float, None),
    'tensor.family': (_text, 'zero'),
    'tensor.component': (_ints, None),
    'tensor.value': (_float, None),
    'tensor.axis': (_int, None),
    'witness.f': (_text, 'quadratic_cap'),
    'witness.cap_height': (_float, None),
    'witness.constant': (_float, None),
    'witness.linear': (_floats, None),
    'witness.quadratic': (_floats, None),
    'witness.radius': (_float, 1.0),
    'witness.q': (_float, 0.5),
    'witness.m1': (_auto_float, 'auto'),
    'witness.m2': (_auto_float, 'auto'),
    'witness.m3': (_auto_float, 'auto'),
    'witness.eps1': (_sweep_float, 0.01),
    'witness.eps2': (_sweep_float, 0.01),
    'witness.f_star': (_text, 'none'),
    'witness.sublevel_radius': (_auto_float, 'auto'),
    'witness.samples': (_int, 24),
    'initial.family': (_text, 'constant'),
    'initial.center': (_floats, None),
    'initial.amplitude': (_float, None),
    'initial.component': (_int, None),
    'initial.axis': (_int, None),
    'initial.wavenumber': (_float, None),
    'initial.width': (_float, None),
    'flow.dt': (_float, 1e-3),
    'flow.t_end': (_float, 1.0),
    'flow.t_start': (_float, 0.0),
    'flow.direction': (_text, 'forward'),
    'flow.scheme': (_text, 'euler'),
    'flow.record_every': (_int, 1),
    'flow.cfl_safety': (_float, 0.9),
    'flow.bochner': (_bool, False),
    'cutoff.radius': (_float, 2.0),
    'cutoff.horizon': (_float, 1.0),
    'cutoff.alpha': (_float, 0.75),
    'cutoff.samples': (_int, 10000),
    'estimate.modes': (_modes, ['89']),
    'estimate.lambdas': (_floats, []),
    'estimate.epsilon': (_auto_float, 'auto'),
    'estimate.tolerance': (_auto_float, 'auto'),
    'estimate.strict_proof': (_bool, False),
    'estimate.muller_hypothesis': (_text, 'theorem'),
    'reduced.taus': (_floats, None),
    'reduced.probes': (_int, 3),
    'reduced.stride': (_int, 2),
    'reduced.segments': (_int, 32),
}


@dataclass
class Scenario:
    name: str
    path: str
    seed: int
    out: str
    values: dict
    domain: Any = None
    target: Any = None
    flow: Any = None
    stability_limit: float = 0.0
    given: set = field(default_factory=set)

    def section(self, prefix):
        """Keys of one section with the prefix removed; unset keys without defaults are left out."""

        start = prefix + '.'
        return {key[len(start):]: value for key, value in self.values.items()
                if key.startswith(start) and value is not None}

    @property
    def domain_spec(self):
        spec = self.section('domain')
        spec['vector'] = self.section('vector')
        return spec

    @property
    def witness_spec(self):
        return self.section('witness')

    @property
    def initial_spec(self):
        return self.section('initial')

    @property
    def cutoff_spec(self):
        return self.section('cutoff')

    @property
    def estimate_spec(self):
        return self.section('estimate')

    @property
    def reduced_spec(self):
        return self.section('reduced')


def _strip_comment(line):
    position = line.find('#')
    return line if position < 0 else line[:position]


def parse_scenario_text(text):
    """
    Description: parses scenario text into a validated key-value mapping with schema defaults filled in
    Inputs: 'text' -- scenario file contents
    Returned Value: Returns a tuple (values, given keys)
    Preconditions: none
    """

    given = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if '=' not in line:
            column = len(line) - len(line.lstrip()) + 1
            raise ScenarioParseError("expected 'key = value'", number, column)
        key_part, value_part = line.split('=', 1)
        key = key_part.strip()
        key_column = len(key_part) - len(key_part.lstrip()) + 1
        if not KEY_PATTERN.match(key):
            raise ScenarioParseError(f'malformed key {key!r}', number, key_column)
        if key not in SCHEMA:
            raise UnknownKeyError(f'unknown key {key!r} (line {number}, column {key_column})')
        if key in given:
            raise ScenarioParseError(f'duplicate key {key!r}', number, key_column)
        value = value_part.strip()
        value_column = len(key_part) + 2 + len(value_part) - len(value_part.lstrip())
        parser = SCHEMA[key][0]
        try:
            given[key] = parser(value)
        except ValueError as error:
            raise ScenarioParseError(f'invalid value for {key!r}: {error}', number, value_column)

    values = {key: default for key, (parser, default) in SCHEMA.items()}
    values.update(given)
    return values, set(given)


def load_scenario(path, seed=None, out=None):
    """
    Description: loads and validates a scenario file
    Inputs: 'path' -- path of a scenario file
            'seed' -- seed override
            'out' -- output directory override
    Returned Value: Returns a Scenario with its DomainChart, TargetModel and FlowConfig built
    Preconditions: file exists
    """

    with open(path, encoding='utf-8') as handle:
        text = handle.read()
    values, given = parse_scenario_text(text)
    name = values['scenario.name'] or os.path.splitext(os.path.basename(path))[0]
    if seed is not None:
        values['scenario.seed'] = int(seed)
    output = out or values['scenario.out'] or os.path.join('out', name)

    scenario = Scenario(name=name, path=path, seed=values['scenario.seed'], out=output, values=values, given=given)
    scenario.domain = build_domain(scenario.domain_spec)
    scenario.target = build_target(scenario.section('target'), scenario.section('tensor'))
    scenario.flow = FlowConfig(dt=values['flow.dt'],
                               t_end=values['flow.t_end'],
                               t_start=values['flow.t_start'],
                               direction=values['flow.direction'],
                               scheme=values['flow.scheme'],
                               record_every=values['flow.record_every'],
                               cfl_safety=values['flow.cfl_safety'],
                               bochner=values['flow.bochner'])
    if values['estimate.muller_hypothesis'] not in ('theorem', 'lemma'):
        raise InvariantError(f"unresolved Muller hypothesis {values['estimate.muller_hypothesis']!r}")
    if values['cutoff.radius'] <= 0.0 or values['cutoff.horizon'] <= 0.0:
        raise InvariantError('cutoff radius and horizon must be positive')
    scenario.stability_limit = scenario.flow.check_stability(scenario.domain)
    return scenario
