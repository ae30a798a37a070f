# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Domain chart
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Domain chart" represents the source manifold on a structured grid. Every family supplies analytic callbacks for the metric, its time derivative and the vector field; Christoffel symbols, Ricci tensors and distances are analytic where the family has closed forms.
# ---------------------------------------------------------------------------

import functools
import os
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from vtflow.errors import InvariantError
from vtflow.grid_derivatives import grid_gradient
from vtflow.tensor_algebra import check_positive_definite
from vtflow.tensor_algebra import christoffel_from_metric
from vtflow.tensor_algebra import conformal_christoffel

DOMAIN_FAMILIES = ('flat_torus', 'conformal_torus', 'warped_torus', 'round_sphere', 'scaled_sphere')
VECTOR_FAMILIES = ('zero', 'constant', 'sine', 'unit_coordinate')
MINIMUM_NODES = 8
TIME_DERIVATIVE_STEP = 1e-5

GridGeometry = namedtuple('GridGeometry', ['metric', 'inverse', 'christoffel', 'vector'])


@dataclass(frozen=True, eq=False)
class DomainChart:
    """A source manifold chart on a structured grid.

    Callbacks take an array of chart points (..., m) and a time and return arrays with the
    same leading shape. Charts compare and hash by identity.
    """

    family: str
    dimension: int
    counts: tuple
    lower: tuple
    upper: tuple
    periodic: tuple
    metric: Callable
    vector_field: Callable
    base_node: tuple
    static: bool
    metric_time_derivative: Optional[Callable] = None
    vector_field_jacobian: Optional[Callable] = None
    christoffel: Optional[Callable] = None
    ricci: Optional[Callable] = None
    distance: Optional[Callable] = None
    parameters: dict = field(default_factory=dict)
    debug: bool = False

    @property
    def spacing(self):
        return tuple((hi - lo) / (count if wrap else count - 1)
                     for lo, hi, count, wrap in zip(self.lower, self.upper, self.counts, self.periodic))

    @property
    def fully_periodic(self):
        return all(self.periodic)

    @functools.cached_property
    def coordinates(self):
        axes = [lo + np.arange(count) * step
                for lo, count, step in zip(self.lower, self.counts, self.spacing)]
        grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)
        grid.setflags(write=False)
        return grid

    @property
    def base_point(self):
        return self.coordinates[self.base_node]

    def wrap(self, node):
        """Maps an integer node index onto the grid, wrapping periodic axes."""

        wrapped = []
        for index, count, wrap in zip(node, self.counts, self.periodic):
            if wrap:
                index = index % count
            elif not 0 <= index < count:
                raise IndexError(f'node {tuple(node)} lies outside a non-periodic axis')
            wrapped.append(int(index))
        return tuple(wrapped)

    def metric_at(self, points, time):
        metric = self.metric(np.asarray(points, dtype=float), time)
        if self.debug:
            check_positive_definite(metric, f'{self.family} at time {time!r}')
        return metric

    def metric_field(self, time):
        return self.metric_at(self.coordinates, time)

    def metric_time_derivative_at(self, points, time):
        points = np.asarray(points, dtype=float)
        if self.metric_time_derivative is not None:
            return self.metric_time_derivative(points, time)
        forward = self.metric(points, time + TIME_DERIVATIVE_STEP)
        backward = self.metric(points, time - TIME_DERIVATIVE_STEP)
        return (forward - backward) / (2.0 * TIME_DERIVATIVE_STEP)

    def time_derivative_field(self, time):
        return self.metric_time_derivative_at(self.coordinates, time)

    def metric_gradient_field(self, time):
        """Grid differences of the metric, [..., j, l, a] holding d_a g_jl."""

        return grid_gradient(self.metric_field(time), self.spacing, self.periodic)

    def christoffel_field(self, time):
        if self.christoffel is not None:
            return self.christoffel(self.coordinates, time)
        return christoffel_from_metric(self.metric_field(time), self.metric_gradient_field(time))

    def vector_field_values(self, time):
        return self.vector_field(self.coordinates, time)

    def vector_jacobian_field(self, time):
        """Jacobian of V with [..., a, b] holding d_b V^a."""

        if self.vector_field_jacobian is not None:
            return self.vector_field_jacobian(self.coordinates, time)
        return grid_gradient(self.vector_field_values(time), self.spacing, self.periodic)

    def distance_field(self, time):
        if self.distance is None:
            raise InvariantError(f'chart family {self.family} has no closed-form distance')
        return self.distance(self.coordinates, time)


def grid_geometry(chart, time):
    """Returns the read-only metric, inverse metric, Christoffel and V fields at one time."""

    return _grid_geometry(chart, 0.0 if chart.static else float(time))


@functools.lru_cache(maxsize=16)
def _grid_geometry(chart, time):
    metric = chart.metric_field(time)
    inverse = np.linalg.inv(metric)
    christoffel = chart.christoffel_field(time)
    vector = chart.vector_field_values(time)
    for array in (metric, inverse, christoffel, vector):
        array.setflags(write=False)
    return GridGeometry(metric, inverse, christoffel, vector)


def periodic_displacement(points, origin, lengths, periodic):
    delta = np.asarray(points, dtype=float) - np.asarray(origin, dtype=float)
    for axis, (length, wrap) in enumerate(zip(lengths, periodic)):
        if wrap:
            delta[..., axis] -= length * np.round(delta[..., axis] / length)
    return delta


def _identity_field(points, dimension, factor=1.0):
    factor = np.asarray(factor, dtype=float)
    eye = np.eye(dimension)
    return factor[..., None, None] * np.broadcast_to(eye, points.shape[:-1] + (dimension, dimension))


def _round_factor(points):
    """Conformal factor 4 / (1 + |x|^2)^2 of the unit sphere in stereographic coordinates."""

    return 4.0 / (1.0 + np.sum(points**2, axis=-1))**2


def _sphere_angle(points, origin):
    def embed(x):
        squared = np.sum(x**2, axis=-1, keepdims=True)
        return np.concatenate([2.0 * x, squared - 1.0], axis=-1) / (1.0 + squared)

    chord = np.linalg.norm(embed(np.asarray(points, dtype=float)) - embed(np.asarray(origin, dtype=float)), axis=-1)
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


def _sphere_christoffel(points, time):
    return conformal_christoffel(-2.0 * points / (1.0 + np.sum(points**2, axis=-1, keepdims=True)))


def _build_vector_field(spec, dimension, metric):
    family = spec.get('family', 'zero')
    axis = int(spec.get('axis', 0))
    if family not in VECTOR_FAMILIES:
        raise InvariantError(f'unresolved vector field family {family!r}')
    if not 0 <= axis < dimension:
        raise InvariantError(f'vector field axis {axis} outside dimension {dimension}')

    if family == 'zero':
        def values(points, time):
            return np.zeros(points.shape)

        def jacobian(points, time):
            return np.zeros(points.shape + (dimension,))
        return values, jacobian

    if family == 'constant':
        components = np.asarray(spec.get('components', [0.0] * dimension), dtype=float)
        if components.shape != (dimension,):
            raise InvariantError(f'constant vector field needs {dimension} components')

        def values(points, time):
            return np.broadcast_to(components, points.shape).copy()

        def jacobian(points, time):
            return np.zeros(points.shape + (dimension,))
        return values, jacobian

    if family == 'sine':
        amplitude = float(spec.get('amplitude', 1.0))

        def values(points, time):
            result = np.zeros(points.shape)
            result[..., axis] = amplitude * np.sin(points[..., axis])
            return result

        def jacobian(points, time):
            result = np.zeros(points.shape + (dimension,))
            result[..., axis, axis] = amplitude * np.cos(points[..., axis])
            return result
        return values, jacobian

    # Unit coordinate field d_k / |d_k|_g, Jacobian by grid differences
    def values(points, time):
        result = np.zeros(points.shape)
        result[..., axis] = 1.0 / np.sqrt(metric(points, time)[..., axis, axis])
        return result
    return values, None


def build_domain(spec):
    """
    Description: builds a source manifold chart from a domain description
    Inputs: 'spec' -- mapping with 'family', 'dimension', 'counts', family parameters ('length', 'scale', 'rate', 'amplitude', 'radius', 'extent', 'offset'), optional 'base_node', 'debug' and a 'vector' sub-mapping
    Returned Value: Returns a DomainChart
    Preconditions: family is one of DOMAIN_FAMILIES and every axis has at least 8 nodes
    """

    family = spec.get('family', 'flat_torus')
    if family not in DOMAIN_FAMILIES:
        raise InvariantError(f'unresolved domain family {family!r}')
    dimension = int(spec.get('dimension', 2))
    if dimension < 1:
        raise InvariantError('domain dimension must be at least 1')
    counts = spec.get('counts', 32)
    counts = tuple(int(c) for c in (counts if np.ndim(counts) else [counts] * dimension))
    if len(counts) == 1 and dimension > 1:
        counts = counts * dimension
    if len(counts) != dimension:
        raise InvariantError(f'{len(counts)} node counts given for dimension {dimension}')
    if min(counts) < MINIMUM_NODES:
        raise InvariantError(f'grid too coarse: {min(counts)} nodes on an axis, at least {MINIMUM_NODES} required')
    debug = bool(spec.get('debug', False)) or os.environ.get('VTFLOW_DEBUG', '') not in ('', '0')

    parameters = {}
    christoffel = None
    ricci = None
    distance = None

    if family in ('flat_torus', 'conformal_torus', 'warped_torus'):
        length = float(spec.get('length', 2.0 * np.pi))
        if length <= 0.0:
            raise InvariantError('torus length must be positive')
        lower = (0.0,) * dimension
        upper = (length,) * dimension
        periodic = (True,) * dimension
        lengths = upper

        if family == 'flat_torus':
            static = True

            def metric(points, time):
                return _identity_field(points, dimension)

            def time_derivative(points, time):
                return np.zeros(points.shape + (dimension,))

            def christoffel(points, time):
                return np.zeros(points.shape[:-1] + (dimension,) * 3)

            def ricci(points, time):
                return np.zeros(points.shape[:-1] + (dimension, dimension))

            def distance(points, time):
                return np.linalg.norm(periodic_displacement(points, base_point, lengths, periodic), axis=-1)

        elif family == 'conformal_torus':
            # g(tau) = (scale * exp(-rate * tau))^2 I
            scale = float(spec.get('scale', 1.0))
            rate = float(spec.get('rate', 1.0))
            if scale <= 0.0:
                raise InvariantError(f'non-positive conformal factor {scale!r}')
            parameters.update(scale=scale, rate=rate)
            static = rate == 0.0

            def factor(time):
                return scale * np.exp(-rate * time)

            def metric(points, time):
                return _identity_field(points, dimension, factor(time)**2)

            def time_derivative(points, time):
                return _identity_field(points, dimension, -2.0 * rate * factor(time)**2)

            def christoffel(points, time):
                return np.zeros(points.shape[:-1] + (dimension,) * 3)

            def ricci(points, time):
                return np.zeros(points.shape[:-1] + (dimension, dimension))

            def distance(points, time):
                displacement = periodic_displacement(points, base_point, lengths, periodic)
                return factor(time) * np.linalg.norm(displacement, axis=-1)

        else:
            # g = exp(2 a sin(x1)) I; Ricci left to the differencing path
            amplitude = float(spec.get('amplitude', 0.1))
            parameters.update(amplitude=amplitude)
            static = True

            def log_factor_gradient(points):
                gradient = np.zeros(points.shape)
                gradient[..., 0] = amplitude * np.cos(points[..., 0])
                return gradient

            def metric(points, time):
                return _identity_field(points, dimension, np.exp(2.0 * amplitude * np.sin(points[..., 0])))

            def time_derivative(points, time):
                return np.zeros(points.shape + (dimension,))

            def christoffel(points, time):
                return conformal_christoffel(log_factor_gradient(points))

    else:
        if dimension < 2:
            raise InvariantError('sphere charts need dimension at least 2')
        extent = float(spec.get('extent', 1.0))
        if extent <= 0.0:
            raise InvariantError('sphere chart extent must be positive')
        lower = (-extent,) * dimension
        upper = (extent,) * dimension
        periodic = (False,) * dimension
        christoffel = _sphere_christoffel

        def ricci(points, time):
            return _identity_field(points, dimension, (dimension - 1) * _round_factor(points))

        if family == 'round_sphere':
            radius = float(spec.get('radius', 1.0))
            if radius <= 0.0:
                raise InvariantError(f'non-positive sphere radius {radius!r}')
            parameters.update(radius=radius)
            static = True

            def metric(points, time):
                return _identity_field(points, dimension, radius**2 * _round_factor(points))

            def time_derivative(points, time):
                return np.zeros(points.shape + (dimension,))

            def distance(points, time):
                return radius * _sphere_angle(points, base_point)

        else:
            # g(tau) = (offset + rate * tau) g_round
            offset = float(spec.get('offset', 1.0))
            rate = float(spec.get('rate', 2.0 * (dimension - 1)))
            if offset <= 0.0:
                raise InvariantError(f'non-positive conformal factor {offset!r}')
            parameters.update(offset=offset, rate=rate)
            static = rate == 0.0

            def factor(time):
                value = offset + rate * time
                if np.any(value <= 0.0):
                    raise InvariantError(f'non-positive conformal factor {value!r} at time {time!r}')
                return value

            def metric(points, time):
                return _identity_field(points, dimension, factor(time) * _round_factor(points))

            def time_derivative(points, time):
                factor(time)
                return _identity_field(points, dimension, rate * _round_factor(points))

            def distance(points, time):
                return np.sqrt(factor(time)) * _sphere_angle(points, base_point)

    base_node = tuple(int(i) for i in spec.get('base_node', [count // 2 for count in counts]))
    if len(base_node) != dimension or any(not 0 <= i < c for i, c in zip(base_node, counts)):
        raise InvariantError(f'base node {base_node} outside the grid')
    spacing = [(hi - lo) / (count if wrap else count - 1)
               for lo, hi, count, wrap in zip(lower, upper, counts, periodic)]
    base_point = np.array([lo + i * step for lo, i, step in zip(lower, base_node, spacing)])

    vector_field, vector_jacobian = _build_vector_field(dict(spec.get('vector', {})), dimension, metric)

    return DomainChart(family=family,
                       dimension=dimension,
                       counts=counts,
                       lower=lower,
                       upper=upper,
                       periodic=periodic,
                       metric=metric,
                       vector_field=vector_field,
                       base_node=base_node,
                       static=static,
                       metric_time_derivative=time_derivative,
                       vector_field_jacobian=vector_jacobian,
                       christoffel=christoffel,
                       ricci=ricci,
                       distance=distance,
                       parameters=parameters,
                       debug=debug)
