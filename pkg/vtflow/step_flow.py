# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Step flow
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ in a Python 3.9+ distribution.
# Description: "Step flow" is a set of functions that advance a grid map along the VT-harmonic map heat flow with explicit Euler or RK4 steps, forward in t or backward in tau, and record per-frame diagnostics.
# ---------------------------------------------------------------------------

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from vtflow.calculate_bochner_residual import calculate_bochner_residual
from vtflow.calculate_energy_density import calculate_energy_density
from vtflow.calculate_energy_density import calculate_omega
from vtflow.calculate_energy_density import coordinate_variance
from vtflow.calculate_energy_density import heat_oracle_error
from vtflow.calculate_energy_density import total_energy
from vtflow.calculate_tension_field import vt_rhs
from vtflow.errors import FlowAbort

FRAME_COLUMNS = ('step', 'time', 'sup_e', 'sup_omega', 'total_energy', 'sup_grad', 'sup_grad_ball',
                 'sup_omega_q', 'coordinate_variance', 'oracle_error', 'max_bochner_residual', 'status')


@dataclass
class Frame:
    step: int
    time: float
    sup_e: float
    sup_omega: float
    total_energy: float
    sup_grad: float
    sup_grad_ball: float
    sup_omega_q: float
    coordinate_variance: float
    oracle_error: float
    max_bochner_residual: float
    status: str = 'ok'

    def as_row(self):
        return [getattr(self, column) for column in FRAME_COLUMNS]


@dataclass
class FrameProbe:
    """What to measure on each recorded frame.

    'ball_mask' selects B_{R/2}(x0); 'parabolic_mask' maps a time to the nodes of Q_{R/2, Lambda/4}
    (None outside the time window); 'oracle' holds heat_oracle_error keyword arguments.
    """

    witness: Optional[Any] = None
    ball_mask: Optional[np.ndarray] = None
    parabolic_mask: Optional[Callable] = None
    oracle: Optional[dict] = None
    bochner: bool = False
    direction: str = 'forward'
    dt_probe: float = 1e-4

    def measure(self, state, step_index, status='ok', neighbors=None):
        energy = calculate_energy_density(state)
        sup_e = float(energy.max())
        omega = calculate_omega(state, self.witness) if self.witness is not None else None
        sup_grad_ball = float(np.sqrt(energy[self.ball_mask].max())) if self.ball_mask is not None else np.nan
        sup_omega_q = np.nan
        if omega is not None and self.parabolic_mask is not None:
            mask = self.parabolic_mask(state.time)
            if mask is not None and mask.any():
                sup_omega_q = float(omega[mask].max())
        return Frame(step=step_index,
                     time=float(state.time),
                     sup_e=sup_e,
                     sup_omega=float(omega.max()) if omega is not None else np.nan,
                     total_energy=total_energy(state),
                     sup_grad=float(np.sqrt(sup_e)),
                     sup_grad_ball=sup_grad_ball,
                     sup_omega_q=sup_omega_q,
                     coordinate_variance=coordinate_variance(state),
                     oracle_error=heat_oracle_error(state, **self.oracle) if self.oracle is not None else np.nan,
                     max_bochner_residual=(calculate_bochner_residual(state, self.dt_probe, neighbors, self.direction)
                                           if self.bochner else np.nan),
                     status=status)


@dataclass
class FlowRun:
    final_state: Any
    frames: list = field(default_factory=list)

    def rows(self):
        return [frame.as_row() for frame in self.frames]

    def as_dicts(self):
        return [asdict(frame) for frame in self.frames]


def step(state, config, new_time=None):
    """
    Description: advances the map by one step of the configured scheme
    Inputs: 'state' -- a MapState
            'config' -- a FlowConfig
            'new_time' -- time label of the result; state time + dt (forward) or - dt (backward) when omitted
    Returned Value: Returns the next MapState
    Preconditions: stability gate of the configuration satisfied
    """

    # Both directions update u + dt F; only the time label moves differently
    dt = config.dt
    shift = config.sign * dt
    time = state.time
    if config.scheme == 'euler':
        u = state.u + dt * vt_rhs(state)
    else:
        k1 = vt_rhs(state)
        k2 = vt_rhs(state.with_values(state.u + 0.5 * dt * k1, time + 0.5 * shift))
        k3 = vt_rhs(state.with_values(state.u + 0.5 * dt * k2, time + 0.5 * shift))
        k4 = vt_rhs(state.with_values(state.u + dt * k3, time + shift))
        u = state.u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return state.with_values(u, time + shift if new_time is None else new_time)


def run_flow(state, config, probe=None, echo=True):
    """
    Description: runs the flow over the configured horizon and records frames
    Inputs: 'state' -- initial MapState, labelled with the configuration's initial time
            'config' -- a FlowConfig
            'probe' -- a FrameProbe; a bare probe is used when omitted
            'echo' -- print progress lines
    Returned Value: Returns a FlowRun with the final state and the recorded frames
    Preconditions: stability gate satisfied, initial state valid
    """

    config.check_stability(state.chart)
    probe = probe or FrameProbe(direction=config.direction)
    frames = [probe.measure(state, 0)]
    total = config.steps
    report_every = max(1, total // 10)
    following = step(state, config, new_time=config.time_at(1))
    for index in range(1, total + 1):
        breach = following.invariant_breach()
        if breach is not None:
            message, nodes = breach
            frames.append(probe.measure(state, index - 1, status='aborted: ' + message))
            raise FlowAbort(f'{message} at step {index} (time {following.time!r})',
                            last_state=state, nodes=nodes, frames=frames)
        previous, state = state, following
        # One step ahead so recorded frames see both trajectory neighbors
        following = step(state, config, new_time=config.time_at(index + 1)) if index < total else None
        if index % config.record_every == 0 or index == total:
            neighbors = (previous, following) if following is not None else None
            try:
                frames.append(probe.measure(state, index, neighbors=neighbors))
            except FlowAbort as error:
                raise FlowAbort(error.message, last_state=state, nodes=error.nodes, frames=frames)
        if echo and index % report_every == 0:
            print(f'\tStep {index} of {total} (time {state.time:.6g})')
    return FlowRun(final_state=state, frames=frames)
