# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Calculate sectional curvature
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Calculate sectional curvature" is a function that bounds the sectional curvature of the target from above over a sampled region, testing coordinate planes and seeded random planes at every sample.
# ---------------------------------------------------------------------------

import numpy as np

RANDOM_PLANES = 32


def calculate_sectional_curvature(target, region, seed=0, random_planes=RANDOM_PLANES):
    """
    Description: computes kappa = sup of K(y, pi) over sampled points y and 2-planes pi
    Inputs: 'target' -- a TargetModel
            'region' -- array (K, n) of chart points
            'seed' -- seed for the random planes
            'random_planes' -- random planes tested per point in addition to coordinate planes
    Returned Value: Returns kappa as a float; 0 for a one-dimensional target
    Preconditions: region holds at least one point
    """

    points = np.asarray(region, dtype=float).reshape(-1, target.dimension)
    if points.shape[0] == 0:
        raise ValueError('region is empty')
    dimension = target.dimension
    if dimension < 2:
        return 0.0

    # Build the plane spanning pairs: coordinate planes then random planes
    eye = np.eye(dimension)
    first = [eye[i] for i in range(dimension) for j in range(i + 1, dimension)]
    second = [eye[j] for i in range(dimension) for j in range(i + 1, dimension)]
    coordinate_x = np.broadcast_to(np.array(first), (points.shape[0], len(first), dimension))
    coordinate_y = np.broadcast_to(np.array(second), (points.shape[0], len(second), dimension))
    rng = np.random.default_rng(seed)
    random_x = rng.standard_normal((points.shape[0], random_planes, dimension))
    random_y = rng.standard_normal((points.shape[0], random_planes, dimension))
    plane_x = np.concatenate([coordinate_x, random_x], axis=1)
    plane_y = np.concatenate([coordinate_y, random_y], axis=1)

    # Sectional curvature Rm(X, Y, X, Y) / (|X|^2 |Y|^2 - <X, Y>^2)
    riemann = target.riemann(points)
    metric = target.metric(points)
    numerator = np.einsum('kijlm,kpi,kpj,kpl,kpm->kp', riemann, plane_x, plane_y, plane_x, plane_y)
    xx = np.einsum('kij,kpi,kpj->kp', metric, plane_x, plane_x)
    yy = np.einsum('kij,kpi,kpj->kp', metric, plane_y, plane_y)
    xy = np.einsum('kij,kpi,kpj->kp', metric, plane_x, plane_y)
    area = xx * yy - xy**2
    valid = area > 1e-12 * xx * yy
    return float((numerator[valid] / area[valid]).max())
