# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Tensor algebra
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Tensor algebra" collects batched metric operations shared by the domain and target charts: relative eigenvalues, Christoffel symbols of conformally flat metrics, Christoffel symbols and Ricci tensors from differenced metrics.
# ---------------------------------------------------------------------------

import numpy as np

from vtflow.errors import InvariantError


def symmetrize(matrix):
    return 0.5 * (matrix + np.swapaxes(matrix, -1, -2))


def relative_eigenvalues(matrix, metric):
    """
    Description: computes eigenvalues of a symmetric form relative to a metric, batched over leading axes
    Inputs: 'matrix' -- array (..., m, m) of symmetric forms
            'metric' -- array (..., m, m) of positive definite metrics
    Returned Value: Returns an array (..., m) of ascending eigenvalues of metric^-1 matrix
    Preconditions: metric positive definite
    """

    lower = np.linalg.cholesky(metric)
    inverse = np.linalg.inv(lower)
    reduced = inverse @ matrix @ np.swapaxes(inverse, -1, -2)
    return np.linalg.eigvalsh(symmetrize(reduced))


def check_positive_definite(metric, where):
    """Raises InvariantError if any metric in the batch has a non-positive eigenvalue."""

    smallest = np.linalg.eigvalsh(symmetrize(metric))[..., 0]
    if not np.all(np.isfinite(smallest)) or np.any(smallest <= 0.0):
        raise InvariantError(f'metric is not positive definite on {where} (smallest eigenvalue {np.nanmin(smallest)!r})')


def conformal_christoffel(log_factor_gradient):
    """
    Description: Christoffel symbols of a conformally flat metric exp(2 psi) delta
    Inputs: 'log_factor_gradient' -- array (..., m) of partial derivatives of psi
    Returned Value: Returns an array (..., m, m, m) indexed [k, i, j] for Gamma^k_ij
    Preconditions: none
    """

    dimension = log_factor_gradient.shape[-1]
    eye = np.eye(dimension)
    return (np.einsum('ki,...j->...kij', eye, log_factor_gradient)
            + np.einsum('kj,...i->...kij', eye, log_factor_gradient)
            - np.einsum('ij,...k->...kij', eye, log_factor_gradient))


def christoffel_from_metric(metric, metric_gradient):
    """
    Description: Christoffel symbols of the second kind from a metric and its partial derivatives
    Inputs: 'metric' -- array (..., m, m)
            'metric_gradient' -- array (..., m, m, m) with [j, l, a] holding d_a g_jl
    Returned Value: Returns an array (..., m, m, m) indexed [k, i, j]
    Preconditions: metric positive definite
    """

    inverse = np.linalg.inv(metric)
    lowered = (np.einsum('...jli->...lij', metric_gradient)
               + np.einsum('...ilj->...lij', metric_gradient)
               - np.einsum('...ijl->...lij', metric_gradient))
    return 0.5 * np.einsum('...kl,...lij->...kij', inverse, lowered)


def ricci_from_christoffel(christoffel, christoffel_gradient):
    """
    Description: Ricci tensor from Christoffel symbols and their partial derivatives
    Inputs: 'christoffel' -- array (..., m, m, m) indexed [k, i, j]
            'christoffel_gradient' -- array (..., m, m, m, m) with [k, i, j, a] holding d_a Gamma^k_ij
    Returned Value: Returns a symmetric array (..., m, m)
    Preconditions: none
    """

    # R_sn = d_r G^r_ns - d_n G^r_rs + G^r_rl G^l_ns - G^r_nl G^l_rs
    ricci = (np.einsum('...rnsr->...sn', christoffel_gradient)
             - np.einsum('...rrsn->...sn', christoffel_gradient)
             + np.einsum('...rrl,...lns->...sn', christoffel, christoffel)
             - np.einsum('...rnl,...lrs->...sn', christoffel, christoffel))
    return symmetrize(ricci)


def quadratic_form(matrix, vector):
    return np.einsum('...a,...ab,...b->...', vector, matrix, vector)


def vector_norm(metric, vector):
    return np.sqrt(np.maximum(quadratic_form(metric, vector), 0.0))
