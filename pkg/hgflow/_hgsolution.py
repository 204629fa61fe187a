import logging

import numpy as np
from pyrsistent import PClass, PVector, field, optional

from hgflow._errors import NotReducible, ZeroDenominator
from hgflow._hamiltonian import PhasePoint, canonical_vector_field, phase_point
from hgflow._params import (HGParams, SystemParams, check_reducibility, complex_vector, map_system_to_hg,
                            serialize_complex_vector)
from hgflow._pfaffian import (SolutionVector, build_connection, continue_solution, holomorphic_solution_at,
                              scalar_derivative)

logger = logging.getLogger(__name__)

DENOMINATOR_TOLERANCE = 1e-300


class HGSolutionState(PClass):
    """
    The particular solution q = 0, p_n^(i) = -theta_i y_n^(i) / y_0 of the Hamiltonian system
    at the point x, built from a solution y of the Pfaffian system with
    alpha_n = e_n - e_0, beta_i = -theta_i, gamma_n = e_n - e_0 - kappa_n.
    """
    sp = field(type=SystemParams, mandatory=True)
    hp = field(type=HGParams, mandatory=True)
    x = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    y = field(type=SolutionVector, mandatory=True)
    pt = field(type=PhasePoint, mandatory=True,
               invariant=lambda pt: (not np.any(pt.q), 'q must vanish on the particular solution'))

    def x_array(self):
        return np.array(self.x, dtype=complex)


class HamiltonianResidual(PClass):
    """
    Largest discrepancies in the canonical equations,
    max |dq/dx_j - dH_j/dp| and max |dp/dx_j + dH_j/dq|, with the tolerance they are judged against.
    """
    q_residual = field(type=float, mandatory=True, factory=float)
    p_residual = field(type=float, mandatory=True, factory=float)
    tolerance = field(type=optional(float), initial=None, factory=lambda t: t if t is None else float(t))

    def passed(self, tol=None):
        if tol is None:
            tol = self.tolerance
        if tol is None:
            raise ValueError('No tolerance given')

        return self.q_residual <= tol and self.p_residual <= tol


def _momenta(y, theta):
    y0 = y.y0
    if abs(y0) < DENOMINATOR_TOLERANCE:
        raise ZeroDenominator('y_0 vanishes at the evaluation point')

    return -y.y * theta[1:] / y0


def build_hg_solution(sp, x, M=80, y=None):
    """
    The particular solution at x. Uses y when given, otherwise the holomorphic solution at the
    origin evaluated from its series truncated at degree M.
    """
    reducible, residual = check_reducibility(sp)
    if not reducible:
        raise NotReducible(residual)

    hp = map_system_to_hg(sp)
    x = np.asarray(x, dtype=complex)
    if y is None:
        y = holomorphic_solution_at(hp, x, M)

    _, _, theta = sp.arrays()
    p = _momenta(y, theta)
    pt = phase_point(np.zeros(p.shape), p)
    return HGSolutionState(sp=sp, hp=hp, x=x, y=y, pt=pt)


def momentum_derivatives(state):
    """
    dp/dx_j for j = 1..N as an (N, L-1, N) array, by the quotient rule on -theta_i y_n^(i) / y_0
    with dy/dx_j taken from the Pfaffian system.
    """
    _, _, theta = state.sp.arrays()
    y = state.y
    y0 = y.y0
    result = []
    for dy in scalar_derivative(state.hp, state.x_array(), y):
        result.append(-theta[1:] * (dy.y * y0 - y.y * dy.y0) / y0 ** 2)

    return np.array(result)


def hamiltonian_residual(state, tol=None):
    """
    Residuals of the canonical equations at the particular solution; see :py:class:`HamiltonianResidual`.
    tol, when given, is kept on the result so that passed() needs no argument.
    """
    dq, dp = canonical_vector_field(state.x_array(), state.pt, state.sp)
    lhs = momentum_derivatives(state)
    residual = HamiltonianResidual(q_residual=np.max(np.abs(dq)), p_residual=np.max(np.abs(lhs - dp)), tolerance=tol)
    logger.debug('hamiltonian_residual: q=%.3g, p=%.3g', residual.q_residual, residual.p_residual)
    return residual


def continue_hg_solution(state, path, tol):
    """
    Continue the linear data of state along path, which must start at state.x, and rebuild the
    particular solution at the end point.
    """
    start = np.array(path.waypoints[0], dtype=complex)
    if np.max(np.abs(start - state.x_array())) > 1e-12:
        raise ValueError('Path does not start at the current point')

    y = continue_solution(build_connection(state.hp), path, state.y, tol)
    return build_hg_solution(state.sp, np.array(path.waypoints[-1], dtype=complex), y=y)
