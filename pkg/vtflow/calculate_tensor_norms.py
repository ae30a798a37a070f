# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate tensor norms
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate tensor norms" is a function that estimates the sup norms of T and of its covariant derivative over a sampled region by maximizing over h-unit vectors.
# ---------------------------------------------------------------------------

import numpy as np

RANDOM_PAIRS = 256


def _unit_vectors(lower, directions):
    """Maps Euclidean unit vectors to h-unit vectors through the Cholesky factor of h."""

    # h = L L^T, so X = L^-T xi has |X|_h = |xi|
    return np.linalg.solve(np.swapaxes(lower, -1, -2)[:, None, :, :], directions[..., None])[..., 0]


def _h_norm(metric, vectors):
    return np.sqrt(np.maximum(np.einsum('kij,kpi,kpj->kp', metric, vectors, vectors), 0.0))


def calculate_tensor_norms(target, region, seed=0, pairs=RANDOM_PAIRS):
    """
    Description: computes the sup over the region of the h-operator norms of T and of nabla T
    Inputs: 'target' -- a TargetModel
            'region' -- array (K, n) of chart points
            'seed' -- seed for the random unit vectors
            'pairs' -- random unit-vector pairs (and triples for nabla T) per point
    Returned Value: Returns a tuple (norm of T, norm of nabla T)
    Preconditions: region holds at least one point
    """

    points = np.asarray(region, dtype=float).reshape(-1, target.dimension)
    if points.shape[0] == 0:
        raise ValueError('region is empty')
    if target.tensor is None or target.tensor.is_zero:
        return 0.0, 0.0
    dimension = target.dimension
    count = points.shape[0]

    # Candidate directions: every coordinate pair or triple plus random unit vectors
    eye = np.eye(dimension)
    index = np.indices((dimension,) * 3).reshape(3, -1)
    rng = np.random.default_rng(seed)

    def directions(position):
        coordinate = np.broadcast_to(eye[index[position]], (count, index.shape[1], dimension))
        random = rng.standard_normal((count, pairs, dimension))
        random /= np.linalg.norm(random, axis=-1, keepdims=True)
        return np.concatenate([coordinate, random], axis=1)

    metric = target.metric(points)
    lower = np.linalg.cholesky(metric)
    x = _unit_vectors(lower, directions(0))
    y = _unit_vectors(lower, directions(1))
    z = _unit_vectors(lower, directions(2))

    tensor = target.tensor_values(points)
    applied = np.einsum('kijl,kpj,kpl->kpi', tensor, x, y)
    norm_t = float(_h_norm(metric, applied).max())

    derivative = target.tensor_derivative(points)
    applied = np.einsum('kijlm,kpm,kpj,kpl->kpi', derivative, z, x, y)
    norm_derivative = float(_h_norm(metric, applied).max())
    return norm_t, norm_derivative
