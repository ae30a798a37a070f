# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Map state
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Map state" holds a grid-sampled map from the domain chart into the target chart at one time instant, the flow configuration and the initial data families.
# ---------------------------------------------------------------------------

import functools
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from vtflow.domain_chart import DomainChart
from vtflow.domain_chart import periodic_displacement
from vtflow.errors import InvariantError
from vtflow.grid_derivatives import grid_gradient
from vtflow.grid_derivatives import grid_hessian
from vtflow.target_model import TargetModel

INITIAL_FAMILIES = ('constant', 'identity', 'sine_mode', 'gaussian_bump_into_ball')
DIRECTIONS = ('forward', 'backward')
SCHEMES = ('euler', 'rk4')


@dataclass(frozen=True, eq=False)
class MapState:
    """Map values u with shape grid + (n,), u = periodic part + winding x.

    The winding matrix (n, m) carries the linear part of maps such as the identity of a torus,
    so that only the periodic part is differenced across the wrap.
    """

    u: np.ndarray
    time: float
    chart: DomainChart
    target: TargetModel
    winding: Optional[np.ndarray] = None
    witness: Optional[Any] = None

    def __post_init__(self):
        expected = self.chart.counts + (self.target.dimension,)
        if self.u.shape != expected:
            raise InvariantError(f'map values have shape {self.u.shape}, expected {expected}')
        if self.winding is None:
            object.__setattr__(self, 'winding', np.zeros((self.target.dimension, self.chart.dimension)))

    def with_values(self, u, time):
        return MapState(u=u, time=time, chart=self.chart, target=self.target,
                        winding=self.winding, witness=self.witness)

    @property
    def linear_part(self):
        return np.einsum('ia,...a->...i', self.winding, self.chart.coordinates)

    @functools.cached_property
    def differential(self):
        """du with [..., i, a] holding d_a u^i."""

        periodic_part = self.u - self.linear_part
        return grid_gradient(periodic_part, self.chart.spacing, self.chart.periodic) + self.winding

    @functools.cached_property
    def hessian(self):
        periodic_part = self.u - self.linear_part
        return grid_hessian(periodic_part, self.chart.spacing, self.chart.periodic)

    def invariant_breach(self):
        """Returns (message, nodes) for the first broken invariant, or None."""

        finite = np.all(np.isfinite(self.u), axis=-1)
        if not finite.all():
            return 'blow-up: non-finite map values', _nodes(~finite)
        inside = self.target.contains(self.u)
        if not inside.all():
            return 'map left the target chart', _nodes(~inside)
        if self.witness is not None:
            in_omega = self.witness.in_omega(self.u)
            if not in_omega.all():
                return 'image left Omega', _nodes(~in_omega)
        return None


def _nodes(mask):
    return [tuple(int(i) for i in node) for node in np.argwhere(mask)]


@dataclass(frozen=True)
class FlowConfig:
    dt: float
    t_end: float
    t_start: float = 0.0
    direction: str = 'forward'
    scheme: str = 'euler'
    record_every: int = 1
    cfl_safety: float = 0.9
    bochner: bool = False

    def __post_init__(self):
        if not self.dt > 0.0:
            raise InvariantError(f'time step must be positive, got {self.dt!r}')
        if not self.t_end > self.t_start:
            raise InvariantError(f'horizon {self.t_end!r} must exceed the start time {self.t_start!r}')
        if self.direction not in DIRECTIONS:
            raise InvariantError(f'unresolved flow direction {self.direction!r}')
        if self.scheme not in SCHEMES:
            raise InvariantError(f'unresolved flow scheme {self.scheme!r}')
        if self.record_every < 1:
            raise InvariantError('record_every must be at least 1')
        if not 0.0 < self.cfl_safety <= 1.0:
            raise InvariantError(f'cfl_safety must lie in (0, 1], got {self.cfl_safety!r}')

    @property
    def steps(self):
        return max(1, int(round((self.t_end - self.t_start) / self.dt)))

    @property
    def sign(self):
        return 1.0 if self.direction == 'forward' else -1.0

    def time_at(self, step_index):
        """Time label after a number of steps; backward flows march from t_end toward t_start."""

        if self.direction == 'forward':
            return self.t_start + step_index * self.dt
        return self.t_end - step_index * self.dt

    @property
    def initial_time(self):
        return self.time_at(0)

    def stability_limit(self, chart):
        """cfl_safety h_min^2 / (2 m sup g^aa) over the start, middle and end of the horizon."""

        sup_inverse = 0.0
        for time in (self.t_start, 0.5 * (self.t_start + self.t_end), self.t_end):
            inverse = np.linalg.inv(chart.metric_field(time))
            sup_inverse = max(sup_inverse, float(np.einsum('...aa->...a', inverse).max()))
        return self.cfl_safety * min(chart.spacing)**2 / (2.0 * chart.dimension * sup_inverse)

    def check_stability(self, chart):
        limit = self.stability_limit(chart)
        if self.dt > limit:
            raise InvariantError(f'stability gate: dt={self.dt!r} exceeds the explicit limit {limit!r}')
        return limit


def initial_state(chart, target, spec, time=0.0, witness=None):
    """
    Description: builds the initial map of a flow
    Inputs: 'chart' -- a periodic DomainChart
            'target' -- a TargetModel
            'spec' -- mapping with 'family' and 'center', 'amplitude', 'component', 'axis', 'wavenumber', 'width'
            'time' -- time label of the initial state
            'witness' -- optional ConditionCWitness whose Omega the image must stay in
    Returned Value: Returns a MapState
    Preconditions: chart fully periodic; the map lies inside the target chart (and Omega)
    """

    family = spec.get('family', 'constant')
    if family not in INITIAL_FAMILIES:
        raise InvariantError(f'unresolved initial data family {family!r}')
    if not chart.fully_periodic:
        raise InvariantError('flows run on periodic charts only')
    n = target.dimension
    center = np.asarray(spec.get('center', [0.0] * n), dtype=float)
    if center.shape != (n,):
        raise InvariantError(f'initial center needs {n} components')
    component = int(spec.get('component', 0))
    axis = int(spec.get('axis', 0))
    if not 0 <= component < n or not 0 <= axis < chart.dimension:
        raise InvariantError('initial component or axis outside the dimensions')
    amplitude = float(spec.get('amplitude', 0.0))
    coordinates = chart.coordinates
    u = np.broadcast_to(center, chart.counts + (n,)).copy()
    winding = None

    if family == 'identity':
        if n != chart.dimension:
            raise InvariantError('identity initial data needs equal domain and target dimensions')
        winding = np.eye(n)
        u = u + np.einsum('ia,...a->...i', winding, coordinates)
    elif family == 'sine_mode':
        wavenumber = float(spec.get('wavenumber', 1.0))
        u[..., component] += amplitude * np.sin(wavenumber * coordinates[..., axis])
    elif family == 'gaussian_bump_into_ball':
        width = float(spec.get('width', 0.5))
        if width <= 0.0:
            raise InvariantError('gaussian width must be positive')
        lengths = tuple(hi - lo for lo, hi in zip(chart.lower, chart.upper))
        displacement = periodic_displacement(coordinates, chart.base_point, lengths, chart.periodic)
        squared = np.sum(displacement**2, axis=-1)
        u[..., component] += amplitude * np.exp(-squared / (2.0 * width**2))

    state = MapState(u=u, time=time, chart=chart, target=target, winding=winding, witness=witness)
    breach = state.invariant_breach()
    if breach is not None:
        raise InvariantError(f'initial data invalid: {breach[0]} at {len(breach[1])} nodes')
    return state
