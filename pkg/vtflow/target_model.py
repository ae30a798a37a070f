# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Target model
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Target model" represents the target manifold in one conformally flat chart (Euclidean space, the unit sphere in stereographic coordinates, the Poincare ball) together with the (1,2)-tensor field T and its covariant derivative.
# ---------------------------------------------------------------------------

from dataclasses import dataclass
from typing import Optional

import numpy as np

from vtflow.errors import InvariantError
from vtflow.tensor_algebra import conformal_christoffel

TARGET_FAMILIES = ('euclidean', 'sphere', 'hyperbolic')
TENSOR_FAMILIES = ('zero', 'constant', 'sine')


@dataclass(frozen=True)
class TensorField:
    """A (1,2)-tensor T^i_jk on the target chart, nonzero in a single component."""

    family: str
    dimension: int
    component: tuple = (0, 0, 0)
    value: float = 0.0
    axis: int = 0

    def __post_init__(self):
        if self.family not in TENSOR_FAMILIES:
            raise InvariantError(f'unresolved tensor family {self.family!r}')
        if len(self.component) != 3 or any(not 0 <= i < self.dimension for i in self.component):
            raise InvariantError(f'tensor component {self.component} outside target dimension {self.dimension}')
        if not 0 <= self.axis < self.dimension:
            raise InvariantError(f'tensor axis {self.axis} outside target dimension {self.dimension}')

    @property
    def is_zero(self):
        return self.family == 'zero' or self.value == 0.0

    def values(self, points):
        points = np.asarray(points, dtype=float)
        result = np.zeros(points.shape[:-1] + (self.dimension,) * 3)
        if self.family == 'constant':
            result[(...,) + tuple(self.component)] = self.value
        elif self.family == 'sine':
            result[(...,) + tuple(self.component)] = self.value * np.sin(points[..., self.axis])
        return result

    def partials(self, points):
        """Coordinate partials with [..., i, j, k, l] holding d_l T^i_jk."""

        points = np.asarray(points, dtype=float)
        result = np.zeros(points.shape[:-1] + (self.dimension,) * 4)
        if self.family == 'sine':
            result[(...,) + tuple(self.component) + (self.axis,)] = self.value * np.cos(points[..., self.axis])
        return result

    def scaled(self, factor):
        return TensorField(self.family, self.dimension, self.component, factor * self.value, self.axis)


@dataclass(frozen=True)
class TargetModel:
    """Target chart with metric h = exp(2 psi) delta of constant curvature."""

    family: str
    dimension: int
    curvature: float
    chart_radius: float
    tensor: Optional[TensorField] = None

    def _log_factor(self, points):
        squared = np.sum(points**2, axis=-1)
        if self.family == 'sphere':
            return np.log(2.0) - np.log1p(squared)
        if self.family == 'hyperbolic':
            return np.log(2.0) - np.log1p(-squared)
        return np.zeros(points.shape[:-1])

    def _log_factor_gradient(self, points):
        squared = np.sum(points**2, axis=-1, keepdims=True)
        if self.family == 'sphere':
            return -2.0 * points / (1.0 + squared)
        if self.family == 'hyperbolic':
            return 2.0 * points / (1.0 - squared)
        return np.zeros(points.shape)

    def metric(self, points):
        points = np.asarray(points, dtype=float)
        factor = np.exp(2.0 * self._log_factor(points))
        return factor[..., None, None] * np.eye(self.dimension)

    def christoffel(self, points):
        """Gamma^i_jk indexed [..., i, j, k]."""

        return conformal_christoffel(self._log_factor_gradient(np.asarray(points, dtype=float)))

    def riemann(self, points):
        """Covariant curvature tensor Rm_ijkl = kappa (h_ik h_jl - h_il h_jk)."""

        metric = self.metric(points)
        return self.curvature * (np.einsum('...ik,...jl->...ijkl', metric, metric)
                                 - np.einsum('...il,...jk->...ijkl', metric, metric))

    def distance_from_origin(self, points):
        norm = np.linalg.norm(np.asarray(points, dtype=float), axis=-1)
        if self.family == 'sphere':
            return 2.0 * np.arctan(norm)
        if self.family == 'hyperbolic':
            return 2.0 * np.arctanh(np.minimum(norm, 1.0))
        return norm

    def chart_norm_of_distance(self, distance):
        """Inverse of distance_from_origin along a ray."""

        if self.family == 'sphere':
            return np.tan(0.5 * distance)
        if self.family == 'hyperbolic':
            return np.tanh(0.5 * distance)
        return distance

    def contains(self, points):
        norm = np.linalg.norm(np.asarray(points, dtype=float), axis=-1)
        return np.isfinite(norm) & (norm < self.chart_radius)

    def tensor_values(self, points):
        points = np.asarray(points, dtype=float)
        if self.tensor is None:
            return np.zeros(points.shape[:-1] + (self.dimension,) * 3)
        return self.tensor.values(points)

    def tensor_derivative(self, points):
        """Covariant derivative of T with [..., i, j, k, l] holding (nabla_l T)^i_jk."""

        points = np.asarray(points, dtype=float)
        if self.tensor is None or self.tensor.is_zero:
            return np.zeros(points.shape[:-1] + (self.dimension,) * 4)
        tensor = self.tensor.values(points)
        gamma = self.christoffel(points)
        return (self.tensor.partials(points)
                + np.einsum('...ilp,...pjk->...ijkl', gamma, tensor)
                - np.einsum('...plj,...ipk->...ijkl', gamma, tensor)
                - np.einsum('...plk,...ijp->...ijkl', gamma, tensor))


def build_target(spec, tensor_spec=None):
    """
    Description: builds a target chart from a target description and an optional tensor description
    Inputs: 'spec' -- mapping with 'family', 'dimension' and optional 'chart_radius'
            'tensor_spec' -- mapping with 'family', 'component', 'value', 'axis'; no tensor when omitted
    Returned Value: Returns a TargetModel
    Preconditions: families resolve
    """

    family = spec.get('family', 'euclidean')
    if family not in TARGET_FAMILIES:
        raise InvariantError(f'unresolved target family {family!r}')
    dimension = int(spec.get('dimension', 2))
    if dimension < 1:
        raise InvariantError('target dimension must be at least 1')
    curvature = {'euclidean': 0.0, 'sphere': 1.0, 'hyperbolic': -1.0}[family]
    default_radius = {'euclidean': np.inf, 'sphere': 10.0, 'hyperbolic': 1.0}[family]
    chart_radius = float(spec.get('chart_radius', default_radius))
    if family == 'hyperbolic':
        chart_radius = min(chart_radius, 1.0)
    if chart_radius <= 0.0:
        raise InvariantError('target chart radius must be positive')

    tensor = None
    if tensor_spec is not None:
        tensor = TensorField(family=tensor_spec.get('family', 'zero'),
                             dimension=dimension,
                             component=tuple(int(i) for i in tensor_spec.get('component', (0, 0, 0))),
                             value=float(tensor_spec.get('value', 0.0)),
                             axis=int(tensor_spec.get('axis', 0)))
    return TargetModel(family=family, dimension=dimension, curvature=curvature,
                       chart_radius=chart_radius, tensor=tensor)
