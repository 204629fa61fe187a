import logging

import numpy as np
from pyrsistent import pvector
from scipy.optimize import linear_sum_assignment

from hgflow._errors import ConstraintViolation, PoleHit, SingularPoint, ZeroGauge, ZeroTheta
from hgflow._hamiltonian import auxiliary, phase_point
from hgflow._params import check_reducibility
from hgflow._pfaffian import SolutionVector, locus_distance

logger = logging.getLogger(__name__)

BC_TOLERANCE = 1e-10
POLE_TOLERANCE = 1e-12
SINGULAR_TOLERANCE = 1e-10


def _read_only(values):
    values = np.array(values, dtype=complex)
    values.flags.writeable = False
    return values


class BCVariables(object):
    """
    Accessory parameters b_n^(i), c_n^(i) (i = 0..N, n = 0..L-1) held as (N+1) x L arrays
    indexed [i, n], with c_0^(i) = 1, together with the poles u_1..u_N.

    Do not instantiate directly, use :py:func:`bc_variables` or :py:func:`qp_to_bc`.
    """
    __slots__ = ('b', 'c', 'u')

    def __init__(self, b, c, u):
        self.b = b
        self.c = c
        self.u = u

    @property
    def gauge(self):
        return self.c[0, 1:]


def bc_variables(b, c, u):
    b, c, u = _read_only(b), _read_only(c), _read_only(u)
    if b.ndim != 2 or b.shape != c.shape or u.shape != (b.shape[0] - 1,):
        raise ValueError('b and c must be (N+1) x L arrays and u must hold N poles')

    if np.any(c[:, 0] != 1):
        raise ValueError('c_0^(i) must equal 1')

    return BCVariables(b, c, u)


class FuchsianData(object):
    """
    Poles (u_0 = 1, u_1, ..., u_N, u_{N+1} = 0) and residue matrices A_0..A_{N+1} of the
    L x L Fuchsian system dPhi/dz = sum_i A_i / (z - u_i) Phi. The residue at infinity is
    A_inf = -sum_i A_i.
    """
    __slots__ = ('poles', 'residues')

    def __init__(self, poles, residues):
        self.poles = poles
        self.residues = residues

    @property
    def L(self):
        return self.residues.shape[1]

    @property
    def N(self):
        return len(self.poles) - 2

    @property
    def A_inf(self):
        return -self.residues.sum(axis=0)

    def A(self, z):
        """
        sum_i A_i / (z - u_i).
        """
        _check_off_poles(self.poles, z)
        return np.tensordot(1.0 / (z - self.poles), self.residues, axes=1)


def _check_off_poles(poles, z):
    for pole in poles:
        if abs(z - pole) < POLE_TOLERANCE:
            raise PoleHit(pole)


def _fuchsian_data(u, residues):
    poles = np.concatenate([[1.0], np.asarray(u, dtype=complex), [0.0]])
    return FuchsianData(_read_only(poles), _read_only(residues))


def trace_identity_residual(bc, sp):
    """
    Largest violation of sum_n b_n^(i) c_n^(i) = -theta_i and sum_i b_n^(i) c_n^(i) = -kappa_n.
    """
    _, kappa, theta = sp.arrays()
    products = bc.b * bc.c
    return float(max(np.max(np.abs(products.sum(axis=1) + theta)),
                     np.max(np.abs(products.sum(axis=0) + kappa))))


def build_A_from_bc(bc, sp):
    """
    A_i = b^(i) c^(i) (column times row) for i = 0..N, and A_{N+1} upper triangular with
    diagonal e and entries w_{m,n} = -sum_i b_m^(i) c_n^(i) above it.
    """
    residual = trace_identity_residual(bc, sp)
    if residual > BC_TOLERANCE:
        raise ConstraintViolation(residual)

    e, _, _ = sp.arrays()
    L = sp.L
    residues = [np.outer(bc.b[i], bc.c[i]) for i in range(sp.N + 1)]
    w = -np.einsum('im,in->mn', bc.b, bc.c)
    residues.append(np.triu(w, 1) + np.diag(e))
    logger.debug('build_A_from_bc: L=%d, N=%d', L, sp.N)
    return _fuchsian_data(bc.u, np.array(residues))


def qp_to_bc(pt, sp, gauge, x):
    """
    Accessory parameters of a phase point:

        c_n^(i) = q_n^(i) c_n^(0),  b_n^(i) = -p_n^(i) / c_n^(0),  b_0^(i) = -p_0^(i),  u_i = 1 / x_i

    where gauge holds c_1^(0)..c_{L-1}^(0) and the index-0 momenta come from the auxiliary block.
    """
    gauge = np.asarray(gauge, dtype=complex)
    if gauge.shape != (sp.L - 1,):
        raise ValueError('Expected {0} gauge values'.format(sp.L - 1))

    if np.any(gauge == 0):
        raise ZeroGauge('Gauge value c_n^(0) is zero')

    x = np.asarray(x, dtype=complex)
    if np.any(x == 0):
        raise SingularPoint(0.0)

    aux = auxiliary(pt, sp)
    N = sp.N
    c = np.ones((N + 1, sp.L), dtype=complex)
    b = np.zeros((N + 1, sp.L), dtype=complex)
    c[0, 1:] = gauge
    c[1:, 1:] = pt.q.T * gauge
    b[0, 0] = -aux.p00
    b[0, 1:] = -np.array(aux.p0row, dtype=complex) / gauge
    b[1:, 0] = -np.array(aux.p0col, dtype=complex)
    b[1:, 1:] = -pt.p.T / gauge
    return bc_variables(b, c, 1.0 / x)


def bc_to_qp(bc):
    """
    Inverse of :py:func:`qp_to_bc`, returning (phase point, gauge, x).
    """
    gauge = np.array(bc.gauge)
    if np.any(gauge == 0):
        raise ZeroGauge('Gauge value c_n^(0) is zero')

    q = bc.c[1:, 1:].T / gauge[:, None]
    p = -bc.b[1:, 1:].T * gauge[:, None]
    return phase_point(q, p), gauge, 1.0 / bc.u


def build_B(i, fd, sp, z):
    """
    B_i = A_i / (u_i - z) - (1 / u_i) (diag(-theta_i / L) + strictly lower part of A_i).
    """
    u = fd.poles[i]
    if abs(z - u) < POLE_TOLERANCE:
        raise PoleHit(u)

    _, _, theta = sp.arrays()
    A = fd.residues[i]
    L = fd.L
    return A / (u - z) - (np.diag(np.full(L, -theta[i] / L)) + np.tril(A, -1)) / u


def riemann_scheme(sp):
    """
    Expected exponents at u_0..u_N, 0 and infinity, as a list of (label, exponents).

    >>> from hgflow import system_params
    >>> sp = system_params(2, 1, e=[0, 0.5], kappa=[0.25, 0.25], theta=[0.25])
    >>> [label for label, _ in riemann_scheme(sp)]
    ['u_0', 'u_1', '0', 'inf']
    """
    e, kappa, theta = sp.arrays()
    rows = []
    for i in range(sp.N + 1):
        exponents = np.zeros(sp.L, dtype=complex)
        exponents[0] = -theta[i]
        rows.append(('u_{0}'.format(i), exponents))

    rows.append(('0', e))
    rows.append(('inf', kappa - e))
    return rows


def _all_residues(fd):
    return list(fd.residues) + [fd.A_inf]


def riemann_scheme_residual(fd, sp):
    """
    Largest distance between the eigenvalues of each residue matrix and the expected exponents,
    eigenvalues matched to exponents by a minimum cost assignment.
    """
    residual = 0.0
    for (label, expected), A in zip(riemann_scheme(sp), _all_residues(fd)):
        eigenvalues = np.linalg.eigvals(A)
        cost = np.abs(eigenvalues[:, None] - expected[None, :])
        rows, cols = linear_sum_assignment(cost)
        worst = float(cost[rows, cols].max())
        logger.debug('riemann_scheme_residual: %s %.3g', label, worst)
        residual = max(residual, worst)

    return residual


def _multiplicities(values, tol):
    groups = []
    for value in values:
        for group in groups:
            if abs(group[0] - value) <= tol:
                group.append(value)
                break
        else:
            groups.append([value])

    return tuple(sorted((len(g) for g in groups), reverse=True))


def spectral_type(fd, tol=1e-8):
    """
    Eigenvalue multiplicity partitions at u_0..u_N, 0 and infinity.
    """
    return pvector(_multiplicities(np.linalg.eigvals(A), tol) for A in _all_residues(fd))


class ReducedState(object):
    """
    Coordinates (f, b_n^(i)) of the reducible family at poles u, with b held as an
    (L-1) x N array indexed [n-1, i-1].

    Do not instantiate directly, use :py:func:`reduced_state`.
    """
    __slots__ = ('u', 'f', 'b')

    def __init__(self, u, f, b):
        self.u = u
        self.f = f
        self.b = b


def reduced_state(u, f, b):
    u, b = _read_only(u), _read_only(b)
    if b.ndim != 2 or u.shape != (b.shape[1],):
        raise ValueError('b must be an (L-1) x N array and u must hold N poles')

    return ReducedState(u, complex(f), b)


class ReducedLax(object):
    """
    The reducible Fuchsian system of a :py:class:`ReducedState` together with its deformation
    matrices.
    """
    __slots__ = ('fd', 'state', 'sp')

    def __init__(self, fd, state, sp):
        self.fd = fd
        self.state = state
        self.sp = sp

    def B(self, i, z):
        return reduced_B(i, self.state, self.sp, z)


def _require_reducible(sp):
    reducible, residual = check_reducibility(sp)
    if not reducible:
        raise ConstraintViolation(residual)


def _reduced_residues(rs, sp):
    e, kappa, theta = sp.arrays()
    L, N = sp.L, sp.N
    residues = np.zeros((N + 2, L, L), dtype=complex)
    residues[0, 1:, 0] = -kappa[1:] * rs.f
    residues[0, 1:, 1:] = -kappa[1:, None]
    for i in range(1, N + 1):
        residues[i, 0, 0] = -theta[i]
        residues[i, 1:, 0] = rs.b[:, i - 1]

    last = np.diag(e)
    for n in range(1, L):
        last[n, n + 1:] = kappa[n]
    residues[N + 1] = last
    return residues


def build_reduced(rs, sp):
    """
    The reducible system on the subvariety q = 0:

        A_0 has a zero first row and rows -kappa_n (f, 1, ..., 1)
        A_i has first column (-theta_i, b_1^(i), ..., b_{L-1}^(i)) and zeros elsewhere
        A_{N+1} has diagonal e and kappa_n to the right of the diagonal in rows n >= 1
    """
    _require_reducible(sp)
    if rs.b.shape != (sp.L - 1, sp.N):
        raise ValueError('Reduced state does not match L={0}, N={1}'.format(sp.L, sp.N))

    return ReducedLax(_fuchsian_data(rs.u, _reduced_residues(rs, sp)), rs, sp)


def reduced_B(i, rs, sp, z):
    """
    B_i = theta_i / (L u_i) diag(1 - L, 1, ..., 1) + z / (u_i (u_i - z)) A_i on the reducible family.
    """
    u = rs.u[i - 1]
    if abs(z - u) < POLE_TOLERANCE:
        raise PoleHit(u)

    _, _, theta = sp.arrays()
    L = sp.L
    A = np.zeros((L, L), dtype=complex)
    A[0, 0] = -theta[i]
    A[1:, 0] = rs.b[:, i - 1]
    diagonal = np.ones(L)
    diagonal[0] = 1 - L
    return theta[i] / (L * u) * np.diag(diagonal) + z / (u * (u - z)) * A


def reduced_rhs(rs, sp):
    """
    The linear system for f and b_n^(j) under deformation of the poles. Returns (df, db) where
    df[i-1] = df/du_i and db[i-1, n-1, j-1] = db_n^(j)/du_i.
    """
    u = rs.u
    distance = locus_distance(u)
    if distance < SINGULAR_TOLERANCE:
        raise SingularPoint(distance)

    e, kappa, theta = sp.arrays()
    L, N = sp.L, sp.N
    b, f = rs.b, rs.f
    df = np.zeros(N, dtype=complex)
    db = np.zeros((N, L - 1, N), dtype=complex)
    for i in range(1, N + 1):
        ui = u[i - 1]
        own = b[:, i - 1]
        total = own.sum()
        df[i - 1] = (-ui * theta[i] * f + total) / (ui * (1 - ui))
        tails = np.concatenate([np.cumsum(own[::-1])[::-1][1:], [0]])
        derivative = ((e[1:] - e[0] + theta[i]) * own + kappa[1:] * tails) / ui \
            + kappa[1:] / (ui - 1) * (theta[i] * f - total)
        for j in range(1, N + 1):
            if j == i:
                continue
            uj = u[j - 1]
            derivative -= (theta[i] * b[:, j - 1] - theta[j] * own) / (ui - uj)
            db[i - 1, :, j - 1] = (theta[i] * b[:, j - 1] - uj / ui * theta[j] * own) / (ui - uj)
        db[i - 1, :, i - 1] = derivative

    return df, db


def _branch_factor(u, theta):
    # principal branch of each u_j^theta_j
    return complex(np.prod(np.exp(theta[1:] * np.log(u))))


def _check_theta(theta):
    for i, t in enumerate(theta[1:], start=1):
        if t == 0:
            raise ZeroTheta(i)


def reduced_to_pfaffian(rs, sp):
    """
    x_i = 1 / u_i, y_0 = f / prod u_j^theta_j, y_n^(i) = b_n^(i) / (theta_i prod u_j^theta_j).
    """
    _, _, theta = sp.arrays()
    _check_theta(theta)
    factor = _branch_factor(rs.u, theta)
    y = SolutionVector.from_components(rs.f / factor, rs.b / (theta[1:] * factor))
    return 1.0 / rs.u, y


def pfaffian_to_reduced(x, y, sp):
    """
    Inverse of :py:func:`reduced_to_pfaffian`.
    """
    _, _, theta = sp.arrays()
    _check_theta(theta)
    u = 1.0 / np.asarray(x, dtype=complex)
    factor = _branch_factor(u, theta)
    return reduced_state(u, y.y0 * factor, y.y * theta[1:] * factor)


def pushforward_reduced_rhs(rs, sp, derivatives=None):
    """
    The derivatives dy/dx_i implied by (df, db) through the change of variables of
    :py:func:`reduced_to_pfaffian`.
    """
    _, _, theta = sp.arrays()
    _check_theta(theta)
    df, db = derivatives if derivatives is not None else reduced_rhs(rs, sp)
    factor = _branch_factor(rs.u, theta)
    result = []
    for i in range(1, sp.N + 1):
        ui = rs.u[i - 1]
        log_derivative = theta[i] / ui
        dy0 = (df[i - 1] - rs.f * log_derivative) / factor
        dy = (db[i - 1] - rs.b * log_derivative) / (theta[1:] * factor)
        result.append(SolutionVector.from_components(-ui ** 2 * dy0, -ui ** 2 * dy))

    return result


def zero_curvature_matrix(i, rs, sp, z, derivatives=None):
    """
    dA/du_i - dB_i/dz + [A, B_i] on the reducible family. dA/du_i carries the explicit pole
    term A_i / (z - u_i)^2 and the entries moved by (df, db), which default to
    :py:func:`reduced_rhs`.
    """
    lax = build_reduced(rs, sp)
    fd = lax.fd
    A = fd.A(z)
    B = lax.B(i, z)
    df, db = derivatives if derivatives is not None else reduced_rhs(rs, sp)
    _, kappa, _ = sp.arrays()
    u = rs.u[i - 1]
    Ai = fd.residues[i]

    dA = Ai / (z - u) ** 2
    moved = np.zeros((sp.L, sp.L), dtype=complex)
    moved[1:, 0] = -kappa[1:] * df[i - 1]
    dA = dA + moved / (z - 1)
    for j in range(1, sp.N + 1):
        moved = np.zeros((sp.L, sp.L), dtype=complex)
        moved[1:, 0] = db[i - 1, :, j - 1]
        dA = dA + moved / (z - rs.u[j - 1])

    dB = Ai / (u - z) ** 2
    return dA - dB + A.dot(B) - B.dot(A)


def zero_curvature_residual(i, rs, sp, z, derivatives=None):
    return float(np.max(np.abs(zero_curvature_matrix(i, rs, sp, z, derivatives))))
