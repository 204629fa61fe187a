import logging

import numpy as np
from pyrsistent import PClass, PVector, field

from hgflow._dual import Dual
from hgflow._errors import PathTooClose, SingularPoint
from hgflow._integrate import integrate_segment
from hgflow._params import complex_vector, serialize_complex_vector
from hgflow._pfaffian import locus_distance, segment_distance

logger = logging.getLogger(__name__)

HAMILTONIAN_CLEARANCE = 1e-8


def _read_only(values):
    values = np.array(values, dtype=complex)
    values.flags.writeable = False
    return values


class PhasePoint(object):
    """
    Canonical coordinates q_n^(i), p_n^(i) for n = 1..L-1, i = 1..N, held as (L-1) x N
    arrays with q_n^(i) at [n-1, i-1]. Auxiliary quantities are derived, never stored.

    Do not instantiate directly, use :py:func:`phase_point`.
    """
    __slots__ = ('q', 'p')

    def __init__(self, q, p):
        self.q = q
        self.p = p

    @property
    def L(self):
        return self.q.shape[0] + 1

    @property
    def N(self):
        return self.q.shape[1]

    def as_vector(self):
        """
        q flattened row by row followed by p.
        """
        return np.concatenate([self.q.ravel(), self.p.ravel()])

    @classmethod
    def from_vector(cls, vector, L, N):
        vector = np.asarray(vector, dtype=complex)
        size = (L - 1) * N
        return cls(_read_only(vector[:size].reshape(L - 1, N)), _read_only(vector[size:].reshape(L - 1, N)))

    def __eq__(self, other):
        if not isinstance(other, PhasePoint):
            return NotImplemented

        return np.array_equal(self.q, other.q) and np.array_equal(self.p, other.p)

    __hash__ = None

    def __repr__(self):
        return 'phase_point({0}, {1})'.format(self.q.tolist(), self.p.tolist())


def phase_point(q, p):
    """
    Create a :py:class:`PhasePoint` from two (L-1) x N arrays.

    >>> pt = phase_point([[1, 0]], [[2, 0]])
    >>> pt.L, pt.N
    (2, 2)
    """
    q = np.asarray(q, dtype=complex)
    p = np.asarray(p, dtype=complex)
    if q.ndim != 2 or q.shape != p.shape or q.shape[0] < 1 or q.shape[1] < 1:
        raise ValueError('q and p must be (L-1) x N arrays of equal shape')

    return PhasePoint(_read_only(q), _read_only(p))


def zero_phase_point(L, N):
    return phase_point(np.zeros((L - 1, N)), np.zeros((L - 1, N)))


class AuxiliaryBlock(PClass):
    """
    The index-0 momenta of the Hamiltonians:

        p_n^(0) = kappa_n - sum_i q_n^(i) p_n^(i)        (p0row, n = 1..L-1)
        p_0^(i) = theta_i - sum_n q_n^(i) p_n^(i)        (p0col, i = 1..N)
        p_0^(0) = kappa_0 - sum_i p_0^(i)                (p00)

    together with q_n^(0) = q_0^(i) = x_0 = 1.
    """
    p0row = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    p0col = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    p00 = field(type=complex, mandatory=True, factory=complex)


def _momenta(q, p, kappa, theta):
    # q, p nested as [n][i]; works for complex and Dual entries alike
    rows, cols = len(q), len(q[0])
    p0row = [kappa[n + 1] - sum(q[n][i] * p[n][i] for i in range(cols)) for n in range(rows)]
    p0col = [theta[i + 1] - sum(q[n][i] * p[n][i] for n in range(rows)) for i in range(cols)]
    p00 = kappa[0] - sum(p0col)
    return p0row, p0col, p00


def auxiliary(pt, sp):
    """
    The :py:class:`AuxiliaryBlock` of a phase point.

    >>> from hgflow import system_params
    >>> sp = system_params(2, 1, e=[0, 0.5], kappa=[3, 5], theta=[3])
    >>> aux = auxiliary(phase_point([[1]], [[2]]), sp)
    >>> aux.p0row, aux.p0col
    (pvector([(3+0j)]), pvector([(1+0j)]))
    """
    _check_dimensions(pt, sp)
    _, kappa, theta = sp.arrays()
    p0row, p0col, p00 = _momenta(pt.q.tolist(), pt.p.tolist(), kappa, theta)
    return AuxiliaryBlock(p0row=p0row, p0col=p0col, p00=p00)


def _check_dimensions(pt, sp):
    if (pt.L, pt.N) != (sp.L, sp.N):
        raise ValueError('Phase point of size ({0}, {1}) does not match L={2}, N={3}'.format(pt.L, pt.N, sp.L, sp.N))


def _full_arrays(q, p, kappa, theta):
    # Q[m][j], P[m][j] for m = 0..L-1, j = 0..N
    p0row, p0col, p00 = _momenta(q, p, kappa, theta)
    L, N = len(q) + 1, len(q[0])
    Q = [[1] * (N + 1)] + [[1] + list(q[n]) for n in range(L - 1)]
    P = [[p00] + list(p0col)] + [[p0row[n]] + list(p[n]) for n in range(L - 1)]
    return Q, P


def _hamiltonian(i, x, Q, P, e):
    L, N = len(Q), len(Q[0]) - 1
    X = [1] + list(x)
    total = sum(e[n] * Q[n][i] * P[n][i] for n in range(L))
    for j in range(N + 1):
        prefix = Q[0][i] * P[0][j]
        for n in range(1, L):
            total = total + prefix * Q[n][j] * P[n][i]
            prefix = prefix + Q[n][i] * P[n][j]

    for j in range(N + 1):
        if j == i:
            continue
        left = sum(Q[m][i] * P[m][j] for m in range(L))
        right = sum(Q[n][j] * P[n][i] for n in range(L))
        total = total + X[j] / (X[i] - X[j]) * left * right

    return total / X[i]


def _check_point(x):
    x = np.asarray(x, dtype=complex)
    distance = locus_distance(x)
    if distance < HAMILTONIAN_CLEARANCE:
        raise SingularPoint(distance)

    return [complex(v) for v in x]


def hamiltonian_value(i, x, pt, sp):
    """
    H_i at x, with x_i H_i given by

        sum_n e_n q_n^(i) p_n^(i)
        + sum_{j=0..N} sum_{0 <= m < n <= L-1} q_m^(i) p_m^(j) q_n^(j) p_n^(i)
        + sum_{j != i} x_j / (x_i - x_j) sum_{m,n} q_m^(i) p_m^(j) q_n^(j) p_n^(i)

    where every index-0 quantity comes from the :py:class:`AuxiliaryBlock` and x_0 = 1.
    """
    _check_dimensions(pt, sp)
    x = _check_point(x)
    e, kappa, theta = sp.arrays()
    Q, P = _full_arrays(pt.q.tolist(), pt.p.tolist(), kappa, theta)
    return complex(_hamiltonian(i, x, Q, P, e))


def _dual_variables(pt):
    L, N = pt.L, pt.N
    size = 2 * (L - 1) * N
    values = pt.as_vector()
    duals = [Dual.variable(v, k, size) for k, v in enumerate(values)]
    half = (L - 1) * N
    q = [duals[n * N:(n + 1) * N] for n in range(L - 1)]
    p = [duals[half + n * N:half + (n + 1) * N] for n in range(L - 1)]
    return q, p


def hamiltonian_gradient(i, x, pt, sp):
    """
    (dH_i/dq, dH_i/dp) as (L-1) x N arrays, by forward-mode differentiation through the same
    code as :py:func:`hamiltonian_value`.
    """
    _check_dimensions(pt, sp)
    x = _check_point(x)
    e, kappa, theta = sp.arrays()
    q, p = _dual_variables(pt)
    Q, P = _full_arrays(q, p, kappa, theta)
    H = _hamiltonian(i, x, Q, P, e)
    half = (pt.L - 1) * pt.N
    return H.tangent[:half].reshape(pt.L - 1, pt.N), H.tangent[half:].reshape(pt.L - 1, pt.N)


def canonical_vector_field(x, pt, sp):
    """
    dq/dx_j = dH_j/dp and dp/dx_j = -dH_j/dq for j = 1..N, as two arrays of shape (N, L-1, N).
    """
    dq, dp = [], []
    for j in range(1, sp.N + 1):
        grad_q, grad_p = hamiltonian_gradient(j, x, pt, sp)
        dq.append(grad_p)
        dp.append(-grad_q)

    return np.array(dq), np.array(dp)


def flow(x_start, x_end, pt, sp, tol):
    """
    Integrate the canonical equations in all x_j simultaneously along the straight segment
    from x_start to x_end.
    """
    start = np.asarray(x_start, dtype=complex)
    end = np.asarray(x_end, dtype=complex)
    distance = segment_distance(start, end)
    if distance < HAMILTONIAN_CLEARANCE:
        raise PathTooClose(0, distance)

    direction = end - start
    if not np.any(direction):
        return pt

    L, N = pt.L, pt.N

    def rhs(s, y):
        dq, dp = canonical_vector_field(start + s * direction, PhasePoint.from_vector(y, L, N), sp)
        return np.concatenate([np.tensordot(direction, dq, axes=1).ravel(),
                               np.tensordot(direction, dp, axes=1).ravel()])

    logger.debug('flow: L=%d, N=%d, |dx|=%.3g', L, N, float(np.linalg.norm(direction)))
    return PhasePoint.from_vector(integrate_segment(rhs, pt.as_vector(), tol), L, N)
