# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Build cutoff
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Build cutoff" is a set of functions that construct the space-time cutoff psi(r, tau) = phi(r) chi(tau) from powers of the quintic smoothstep and certify its ratio constants by dense sampling.
# ---------------------------------------------------------------------------

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SAMPLES = 10000


def smoothstep(t):
    """Falling quintic smoothstep: 1 for t <= 0, 0 for t >= 1, C2 at both ends."""

    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return np.clip(1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t**2), 0.0, 1.0)


def smoothstep_derivative(t):
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    return np.where(inside, -30.0 * t**2 * (1.0 - t)**2, 0.0)


def smoothstep_second_derivative(t):
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    return np.where(inside, -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t), 0.0)


def required_power(alpha):
    """Smallest power p >= 2 of the smoothstep with bounded |phi''| / phi^alpha.

    The smoothstep vanishes to third order at t = 1, so phi'' / phi^alpha behaves like
    (1 - t)^(3p - 2 - 3 p alpha).
    """

    return max(2, math.ceil(2.0 / (3.0 * (1.0 - alpha)) - 1e-12))


@dataclass
class CutoffProfile:
    radius: float
    horizon: float
    alpha: float
    power: int
    constants: dict = field(default_factory=dict)

    def _spatial_t(self, r):
        return (np.asarray(r, dtype=float) - 0.5 * self.radius) / (0.5 * self.radius)

    def _temporal_t(self, tau):
        return (np.asarray(tau, dtype=float) - 0.25 * self.horizon) / (0.75 * self.horizon)

    def spatial(self, r):
        return smoothstep(self._spatial_t(r))**self.power

    def spatial_derivative(self, r):
        t = self._spatial_t(r)
        p = self.power
        return p * smoothstep(t)**(p - 1) * smoothstep_derivative(t) * (2.0 / self.radius)

    def spatial_second_derivative(self, r):
        t = self._spatial_t(r)
        p = self.power
        step = smoothstep(t)
        return ((p * (p - 1) * step**(p - 2) * smoothstep_derivative(t)**2
                 + p * step**(p - 1) * smoothstep_second_derivative(t)) * (2.0 / self.radius)**2)

    def temporal(self, tau):
        return smoothstep(self._temporal_t(tau))**2

    def temporal_derivative(self, tau):
        t = self._temporal_t(tau)
        return 2.0 * smoothstep(t) * smoothstep_derivative(t) / (0.75 * self.horizon)

    def value(self, r, tau):
        return self.spatial(r) * self.temporal(tau)


def build_cutoff(radius, horizon, alpha=0.75):
    """
    Description: constructs psi(r, tau) = phi(r) chi(tau) with phi = S^p on [R/2, R] and chi = S^2 on [Lambda/4, Lambda]
    Inputs: 'radius' -- spatial radius R
            'horizon' -- time horizon Lambda
            'alpha' -- ratio exponent of the spatial bounds, in (0, 1)
    Returned Value: Returns a CutoffProfile, p chosen so that both alpha = 1/2 and alpha = 3/4 ratios stay bounded when alpha <= 3/4
    Preconditions: 0 < alpha < 1, R > 0, Lambda > 0
    """

    if not 0.0 < alpha < 1.0:
        raise ValueError(f'alpha must lie in (0, 1), got {alpha!r}')
    if radius <= 0.0 or horizon <= 0.0:
        raise ValueError('cutoff radius and horizon must be positive')
    power = max(required_power(alpha), required_power(0.75))
    return CutoffProfile(radius=float(radius), horizon=float(horizon), alpha=float(alpha), power=power)


def _ratio_sup(numerator, denominator, exponent):
    positive = denominator > 0.0
    if not positive.any():
        return 0.0
    return float(np.max(np.abs(numerator[positive]) / denominator[positive]**exponent))


def spatial_ratio_constant(profile, alpha, samples=DEFAULT_SAMPLES):
    """max(sup |phi'| R / phi^alpha, sup |phi''| R^2 / phi^alpha); infinite when the power is too small."""

    if profile.power < required_power(alpha):
        return np.inf
    r = np.linspace(0.0, 1.5 * profile.radius, samples)
    phi = profile.spatial(r)
    first = _ratio_sup(profile.spatial_derivative(r) * profile.radius, phi, alpha)
    second = _ratio_sup(profile.spatial_second_derivative(r) * profile.radius**2, phi, alpha)
    return max(first, second)


def certify_cutoff(profile, samples=DEFAULT_SAMPLES):
    """
    Description: certifies the cutoff by dense sampling of its support and ratio properties
    Inputs: 'profile' -- a CutoffProfile
            'samples' -- sample points per axis
    Returned Value: Returns the profile with constants C_alpha, C_half, C_three_quarter, D, C0 and the property checks filled in
    Preconditions: samples >= 100
    """

    if samples < 100:
        raise ValueError('cutoff certification needs at least 100 samples per axis')
    r = np.linspace(0.0, 1.5 * profile.radius, samples)
    tau = np.linspace(0.0, 1.5 * profile.horizon, samples)
    phi = profile.spatial(r)
    phi_prime = profile.spatial_derivative(r)
    chi = profile.temporal(tau)

    # Support and sign properties on the sample grid
    inner = r <= 0.5 * profile.radius
    outer = r >= profile.radius
    early = tau <= 0.25 * profile.horizon
    late = tau >= profile.horizon
    properties = {
        'phi_one_inside': bool(np.all(phi[inner] == 1.0)),
        'phi_zero_outside': bool(np.all(phi[outer] == 0.0)),
        'phi_nonincreasing': bool(np.all(phi_prime <= 0.0)),
        'phi_flat_inside': bool(np.all(phi_prime[inner] == 0.0)),
        'chi_one_early': bool(np.all(chi[early] == 1.0)),
        'chi_zero_late': bool(np.all(chi[late] == 0.0)),
        'values_in_unit_interval': bool(np.all((phi >= 0.0) & (phi <= 1.0) & (chi >= 0.0) & (chi <= 1.0))),
        'psi_origin_one': bool(profile.value(0.0, 0.0) == 1.0),
    }

    # Ratio constants; C0 from the profile on the unit radius
    unit = CutoffProfile(radius=1.0, horizon=profile.horizon, alpha=profile.alpha, power=profile.power)
    unit_r = np.linspace(0.0, 1.5, samples)
    unit_phi = unit.spatial(unit_r)
    c0 = max(_ratio_sup(unit.spatial_derivative(unit_r)**2, unit_phi, 1.0),
             float(np.max(np.maximum(0.0, -unit.spatial_second_derivative(unit_r)))))
    constants = {
        'C_alpha': spatial_ratio_constant(profile, profile.alpha, samples),
        'C_half': spatial_ratio_constant(profile, 0.5, samples),
        'C_three_quarter': spatial_ratio_constant(profile, 0.75, samples),
        'D': _ratio_sup(profile.temporal_derivative(tau) * profile.horizon, chi, 0.5),
        'C0': c0,
    }
    profile.constants = dict(constants, **properties)
    profile.constants['certified'] = all(properties.values()) and all(np.isfinite(v) for v in constants.values())
    return profile
