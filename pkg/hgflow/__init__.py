# -*- coding: utf-8 -*-

from hgflow._errors import (
    HGFlowError, ResonantGamma, DomainError, SingularPoint, PathTooClose, StepUnderflow, NotReducible,
    ZeroDenominator, ConstraintViolation, ZeroGauge, PoleHit, ZeroTheta, ResonantShift, VanishingDenominator)

from hgflow._params import (
    HGParams, SystemParams, hg_params, system_params, map_system_to_hg, hg_to_system_offsets,
    check_reducibility, random_params, params_from_json, params_to_json, load_params)

from hgflow._series import (
    TruncatedSeries, truncated_series, zero_series, pochhammer, series_coefficients, eval_series,
    apply_euler, apply_theta_sum, apply_theta_polynomial, apply_partial, multiply_by_x,
    hg_pde_residual, pde_residual_scale, write_series_csv)

from hgflow._quadrature import QuadratureSpec, normalization_constant, eval_integral

from hgflow._pfaffian import (
    SolutionVector, solution_vector, PfaffianConnection, build_connection, locus_distance, omega_at,
    scalar_derivative, integrability_residual, holomorphic_solution, evaluate_solution,
    holomorphic_solution_at, PathSpec, path_spec, segment_distance, validate_path, continue_solution,
    sample_path)

from hgflow._hamiltonian import (
    PhasePoint, phase_point, zero_phase_point, AuxiliaryBlock, auxiliary, hamiltonian_value,
    hamiltonian_gradient, canonical_vector_field, flow)

from hgflow._lax import (
    BCVariables, bc_variables, FuchsianData, trace_identity_residual, build_A_from_bc, qp_to_bc, bc_to_qp,
    build_B, riemann_scheme, riemann_scheme_residual, spectral_type, ReducedState, reduced_state,
    ReducedLax, build_reduced, reduced_B, reduced_rhs, reduced_to_pfaffian, pfaffian_to_reduced,
    pushforward_reduced_rhs, zero_curvature_matrix, zero_curvature_residual)

from hgflow._hgsolution import (
    HGSolutionState, HamiltonianResidual, build_hg_solution, momentum_derivatives, hamiltonian_residual,
    continue_hg_solution)

from hgflow._contiguity import (
    elementary_symmetric, SymmetricData, symmetric_data, ShiftSpec, shift_params, ContiguityOperator,
    contiguity_operator, check_contiguity, isomorphism_criterion)

from hgflow._serialization import (
    parse_complex, complex_to_json, array_to_json, array_from_json, phase_point_to_json,
    phase_point_from_json, path_from_json, load_path, write_samples_csv)


__all__ = ('HGFlowError', 'ResonantGamma', 'DomainError', 'SingularPoint', 'PathTooClose', 'StepUnderflow',
           'NotReducible', 'ZeroDenominator', 'ConstraintViolation', 'ZeroGauge', 'PoleHit', 'ZeroTheta',
           'ResonantShift', 'VanishingDenominator',
           'HGParams', 'SystemParams', 'hg_params', 'system_params', 'map_system_to_hg', 'hg_to_system_offsets',
           'check_reducibility', 'random_params', 'params_from_json', 'params_to_json', 'load_params',
           'TruncatedSeries', 'truncated_series', 'zero_series', 'pochhammer', 'series_coefficients',
           'eval_series', 'apply_euler', 'apply_theta_sum', 'apply_theta_polynomial', 'apply_partial',
           'multiply_by_x', 'hg_pde_residual', 'pde_residual_scale', 'write_series_csv',
           'QuadratureSpec', 'normalization_constant', 'eval_integral',
           'SolutionVector', 'solution_vector', 'PfaffianConnection', 'build_connection', 'locus_distance',
           'omega_at', 'scalar_derivative', 'integrability_residual', 'holomorphic_solution',
           'evaluate_solution', 'holomorphic_solution_at', 'PathSpec', 'path_spec', 'segment_distance',
           'validate_path', 'continue_solution', 'sample_path',
           'PhasePoint', 'phase_point', 'zero_phase_point', 'AuxiliaryBlock', 'auxiliary', 'hamiltonian_value',
           'hamiltonian_gradient', 'canonical_vector_field', 'flow',
           'BCVariables', 'bc_variables', 'FuchsianData', 'trace_identity_residual', 'build_A_from_bc',
           'qp_to_bc', 'bc_to_qp', 'build_B', 'riemann_scheme', 'riemann_scheme_residual', 'spectral_type',
           'ReducedState', 'reduced_state', 'ReducedLax', 'build_reduced', 'reduced_B', 'reduced_rhs',
           'reduced_to_pfaffian', 'pfaffian_to_reduced', 'pushforward_reduced_rhs', 'zero_curvature_matrix',
           'zero_curvature_residual',
           'HGSolutionState', 'HamiltonianResidual', 'build_hg_solution', 'momentum_derivatives',
           'hamiltonian_residual', 'continue_hg_solution',
           'elementary_symmetric', 'SymmetricData', 'symmetric_data', 'ShiftSpec', 'shift_params',
           'ContiguityOperator', 'contiguity_operator', 'check_contiguity', 'isomorphism_criterion',
           'parse_complex', 'complex_to_json', 'array_to_json', 'array_from_json', 'phase_point_to_json',
           'phase_point_from_json', 'path_from_json', 'load_path', 'write_samples_csv')
