# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Condition C witness
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Condition C witness" holds the candidate function f, the convex function f* whose sublevel set is the domain Omega, and the constants (m1, m2, m3, Q, s0, eps1, eps2) supplied with them. It also samples Omega as a geodesic ball around the target chart origin.
# ---------------------------------------------------------------------------

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from vtflow.errors import CertificationError
from vtflow.errors import InvariantError

WITNESS_FAMILIES = ('cos_distance', 'quadratic_cap', 'custom_polynomial')
CONVEX_FAMILIES = ('distance_squared', 'euclidean_squared', 'zero', 'negative_quadratic', 'none')
DIFFERENCE_STEP = 1e-4
OUTSIDE_FACTOR = 1.05


def numerical_gradient(value, points, step=DIFFERENCE_STEP):
    """Centered first differences of a scalar callback in chart coordinates."""

    points = np.asarray(points, dtype=float)
    dimension = points.shape[-1]
    result = np.empty(points.shape)
    for i in range(dimension):
        shift = np.zeros(dimension)
        shift[i] = step
        result[..., i] = (value(points + shift) - value(points - shift)) / (2.0 * step)
    return result


def numerical_hessian(value, points, step=DIFFERENCE_STEP):
    """Centered second differences of a scalar callback in chart coordinates."""

    points = np.asarray(points, dtype=float)
    dimension = points.shape[-1]
    center = value(points)
    result = np.empty(points.shape + (dimension,))
    for i in range(dimension):
        shift_i = np.zeros(dimension)
        shift_i[i] = step
        result[..., i, i] = (value(points + shift_i) - 2.0 * center + value(points - shift_i)) / step**2
        for j in range(i + 1, dimension):
            shift_j = np.zeros(dimension)
            shift_j[j] = step
            mixed = (value(points + shift_i + shift_j) - value(points + shift_i - shift_j)
                     - value(points - shift_i + shift_j) + value(points - shift_i - shift_j)) / (4.0 * step**2)
            result[..., i, j] = mixed
            result[..., j, i] = mixed
    return result


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function on the target chart; missing derivatives fall back to differencing."""

    name: str
    value: Callable
    gradient: Optional[Callable] = None
    hessian: Optional[Callable] = None

    def __call__(self, points):
        return self.value(np.asarray(points, dtype=float))

    def partials(self, points):
        points = np.asarray(points, dtype=float)
        if self.gradient is not None:
            return self.gradient(points)
        return numerical_gradient(self.value, points)

    def second_partials(self, points):
        points = np.asarray(points, dtype=float)
        if self.hessian is not None:
            return self.hessian(points)
        return numerical_hessian(self.value, points)


@dataclass(frozen=True)
class ConditionCWitness:
    f: ScalarFunction
    m1: float
    m2: float
    m3: float
    q: float
    s0: int
    eps1: float
    eps2: float
    domain_radius: float
    f_star: Optional[ScalarFunction] = None
    sublevel_radius: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.eps2 < 1.0:
            raise ValueError(f'eps2 must lie in (0, 1), got {self.eps2!r}')
        if self.eps1 <= 0.0:
            raise ValueError(f'eps1 must be positive, got {self.eps1!r}')
        if not 0.0 < self.m1 <= self.m2:
            raise InvariantError(f'witness constants need 0 < m1 <= m2, got m1={self.m1!r}, m2={self.m2!r}')
        if self.m3 < 0.0:
            raise InvariantError(f'witness constant m3 must be nonnegative, got {self.m3!r}')
        if self.q <= 0.0:
            raise InvariantError(f'witness constant Q must be positive, got {self.q!r}')
        if self.s0 < 1:
            raise InvariantError('s0 must be at least 1')

    @property
    def q_threshold(self):
        """Q must exceed m3^2 / (2 m1)."""

        return self.m3**2 / (2.0 * self.m1)

    def with_epsilons(self, eps1, eps2):
        return ConditionCWitness(self.f, self.m1, self.m2, self.m3, self.q, self.s0, eps1, eps2,
                                 self.domain_radius, self.f_star, self.sublevel_radius)

    def in_omega(self, points):
        """True where f* < r; everywhere when no convex function is attached."""

        points = np.asarray(points, dtype=float)
        if self.f_star is None:
            return np.ones(points.shape[:-1], dtype=bool)
        return self.f_star(points) < self.sublevel_radius


def _sample_directions(dimension, count, seed):
    if dimension == 1:
        return np.array([[1.0], [-1.0]])
    if dimension == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((count, dimension))
    coordinate = np.concatenate([np.eye(dimension), -np.eye(dimension)])
    directions = np.concatenate([coordinate, directions])
    return directions / np.linalg.norm(directions, axis=-1, keepdims=True)


def sample_region(target, radius, density=24, seed=0):
    """
    Description: samples the closed geodesic ball of a radius around the target chart origin
    Inputs: 'target' -- a TargetModel
            'radius' -- geodesic radius
            'density' -- number of radial levels; angular resolution scales with it
            'seed' -- seed for the random directions used when the target dimension exceeds 2
    Returned Value: Returns an array (K, n) of chart points including the origin and the boundary sphere
    Preconditions: radius positive and inside the chart
    """

    if radius <= 0.0:
        raise ValueError(f'sample radius must be positive, got {radius!r}')
    directions = _sample_directions(target.dimension, 4 * density, seed)
    levels = target.chart_norm_of_distance(np.linspace(0.0, radius, density + 1)[1:])
    points = (levels[:, None, None] * directions[None, :, :]).reshape(-1, target.dimension)
    return np.concatenate([np.zeros((1, target.dimension)), points])


def sample_outside_ring(target, radius, density=24, seed=0):
    """Chart points at geodesic distance OUTSIDE_FACTOR * radius from the origin."""

    directions = _sample_directions(target.dimension, 4 * density, seed)
    level = target.chart_norm_of_distance(OUTSIDE_FACTOR * radius)
    return level * directions


def gradient_norm(target, function, points):
    """|grad f|_h at chart points."""

    partials = function.partials(points)
    inverse = np.linalg.inv(target.metric(points))
    return np.sqrt(np.maximum(np.einsum('...i,...ij,...j->...', partials, inverse, partials), 0.0))


def _witness_function(spec, target):
    family = spec.get('f', 'quadratic_cap')
    dimension = target.dimension
    if family not in WITNESS_FAMILIES:
        raise InvariantError(f'unresolved witness family {family!r}')

    if family == 'cos_distance':
        if target.family != 'sphere':
            raise InvariantError('witness cos_distance requires a sphere target')

        def value(points):
            squared = np.sum(points**2, axis=-1)
            return (1.0 - squared) / (1.0 + squared)

        def gradient(points):
            squared = np.sum(points**2, axis=-1, keepdims=True)
            return -4.0 * points / (1.0 + squared)**2

        def hessian(points):
            squared = np.sum(points**2, axis=-1)[..., None, None]
            outer = np.einsum('...i,...j->...ij', points, points)
            return -4.0 * np.eye(dimension) / (1.0 + squared)**2 + 16.0 * outer / (1.0 + squared)**3
        return ScalarFunction(family, value, gradient, hessian)

    if family == 'quadratic_cap':
        height = float(spec.get('cap_height', 2.0))

        def value(points):
            return height - 0.5 * np.sum(points**2, axis=-1)

        def gradient(points):
            return -points

        def hessian(points):
            return np.broadcast_to(-np.eye(dimension), points.shape + (dimension,)).copy()
        return ScalarFunction(family, value, gradient, hessian)

    # f = c + b.y + y^T B y / 2
    constant = float(spec.get('constant', 1.0))
    linear = np.asarray(spec.get('linear', [0.0] * dimension), dtype=float)
    quadratic = np.asarray(spec.get('quadratic', [0.0] * dimension**2), dtype=float)
    if linear.shape != (dimension,) or quadratic.size != dimension**2:
        raise InvariantError(f'custom_polynomial needs {dimension} linear and {dimension**2} quadratic coefficients')
    quadratic = quadratic.reshape(dimension, dimension)
    quadratic = 0.5 * (quadratic + quadratic.T)

    def value(points):
        return constant + points @ linear + 0.5 * np.einsum('...i,ij,...j->...', points, quadratic, points)

    def gradient(points):
        return linear + points @ quadratic

    def hessian(points):
        return np.broadcast_to(quadratic, points.shape + (dimension,)).copy()
    return ScalarFunction(family, value, gradient, hessian)


def _convex_function(family, target, domain_radius):
    """Returns the f* function and its default sublevel radius."""

    dimension = target.dimension
    chart_radius = float(target.chart_norm_of_distance(domain_radius))
    if family not in CONVEX_FAMILIES:
        raise InvariantError(f'unresolved convex function family {family!r}')
    if family == 'none':
        return None, None
    if family == 'distance_squared':
        return ScalarFunction(family, lambda points: target.distance_from_origin(points)**2), domain_radius**2
    if family == 'zero':
        return ScalarFunction(family,
                              lambda points: np.zeros(points.shape[:-1]),
                              lambda points: np.zeros(points.shape),
                              lambda points: np.zeros(points.shape + (dimension,))), 1.0
    sign = 1.0 if family == 'euclidean_squared' else -1.0
    return ScalarFunction(family,
                          lambda points: sign * np.sum(points**2, axis=-1),
                          lambda points: sign * 2.0 * points,
                          lambda points: np.broadcast_to(sign * 2.0 * np.eye(dimension),
                                                         points.shape + (dimension,)).copy()), chart_radius**2


def _constant(spec, key, measured):
    raw = spec.get(key, 'auto')
    if raw in (None, 'auto'):
        return float(measured)
    return float(raw)


def build_witness(spec, target, source_dimension, seed=0):
    """
    Description: builds a Condition C witness, measuring m1, m2, m3 on Omega when they are 'auto'
    Inputs: 'spec' -- mapping with 'f', family parameters, 'radius', 'q', 'm1', 'm2', 'm3', 'eps1', 'eps2', 'f_star', 'sublevel_radius', 'samples'
            'target' -- a TargetModel
            'source_dimension' -- dimension m of the domain
            'seed' -- sampling seed
    Returned Value: Returns a ConditionCWitness
    Preconditions: families resolve and eps1, eps2 are numbers (sweeps are resolved by the caller)
    """

    function = _witness_function(spec, target)
    radius = float(spec.get('radius', 1.0))
    samples = sample_region(target, radius, int(spec.get('samples', 24)), seed)
    values = function(samples)
    if spec.get('m1', 'auto') in (None, 'auto') and values.min() <= 0.0:
        raise CertificationError(f'witness {function.name} is not positive on Omega (min {values.min()!r})')
    convex, default_sublevel = _convex_function(spec.get('f_star', 'none'), target, radius)
    sublevel = spec.get('sublevel_radius', 'auto')
    sublevel = default_sublevel if sublevel in (None, 'auto') else float(sublevel)

    return ConditionCWitness(f=function,
                             m1=_constant(spec, 'm1', values.min()),
                             m2=_constant(spec, 'm2', values.max()),
                             m3=_constant(spec, 'm3', gradient_norm(target, function, samples).max()),
                             q=float(spec.get('q', 0.5)),
                             s0=min(int(source_dimension), target.dimension),
                             eps1=float(spec.get('eps1', 0.01)),
                             eps2=float(spec.get('eps2', 0.01)),
                             domain_radius=radius,
                             f_star=convex,
                             sublevel_radius=sublevel)
