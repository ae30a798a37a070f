# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Initialization for vtflow Module
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Requires numpy 1.22+ and scipy 1.8+ in a Python 3.9+ distribution.
# Description: This initialization file imports modules in the package so that the contents are accessible.
# ---------------------------------------------------------------------------

# Import functions from modules
from vtflow.build_cutoff import build_cutoff
from vtflow.build_cutoff import certify_cutoff
from vtflow.calculate_bochner_residual import calculate_bochner_residual
from vtflow.calculate_bounds import bound_89
from vtflow.calculate_bounds import bound_963
from vtflow.calculate_bounds import bound_thm1
from vtflow.calculate_bounds import bounds_closed
from vtflow.calculate_bounds import bounds_corollaries
from vtflow.calculate_bounds import evaluate_bounds
from vtflow.calculate_energy_density import calculate_energy_density
from vtflow.calculate_energy_density import calculate_omega
from vtflow.calculate_l_length import calculate_l_length
from vtflow.calculate_l_length import straight_curve
from vtflow.calculate_l_length import trace_h
from vtflow.calculate_muller_quantities import calculate_muller_quantities
from vtflow.calculate_ric_v_bound import ric_v_h0_lower_bound
from vtflow.calculate_ric_v_bound import ric_v_lower_bound
from vtflow.calculate_ricci_curvature import calculate_ric_v
from vtflow.calculate_ricci_curvature import calculate_ricci_curvature
from vtflow.calculate_sectional_curvature import calculate_sectional_curvature
from vtflow.calculate_tension_field import calculate_tension_field
from vtflow.calculate_tension_field import vt_rhs
from vtflow.calculate_tensor_norms import calculate_tensor_norms
from vtflow.calculate_v_laplacian import calculate_v_laplacian
from vtflow.check_backward_super_ricci import check_backward_super_ricci
from vtflow.check_condition_c import check_condition_c
from vtflow.check_condition_c import check_generalized_regular_ball
from vtflow.check_condition_c import t_smallness_gate
from vtflow.condition_c_witness import build_witness
from vtflow.constants_report import constants_theorem1
from vtflow.constants_report import constants_theorem2
from vtflow.domain_chart import build_domain
from vtflow.map_state import FlowConfig
from vtflow.map_state import initial_state
from vtflow.minimize_l import d_frak
from vtflow.minimize_l import minimize_l
from vtflow.minimize_l import reduced_distance
from vtflow.run_pipeline import run_pipeline
from vtflow.scenario import load_scenario
from vtflow.step_flow import run_flow
from vtflow.step_flow import step
from vtflow.target_model import build_target
from vtflow.verify_run import verify_run
