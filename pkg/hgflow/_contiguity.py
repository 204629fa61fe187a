import logging

import numpy as np
from pyrsistent import PClass, PVector, field, pmap_field

from hgflow._errors import ResonantGamma, ResonantShift, VanishingDenominator
from hgflow._params import HGParams, complex_vector, serialize_complex_vector
from hgflow._series import (apply_euler, apply_partial, apply_theta_polynomial, multiply_by_x,
                            series_coefficients, zero_series)

logger = logging.getLogger(__name__)

ISOMORPHISM_TOLERANCE = 1e-10
RELATIONS = (1, 2, 3, 4, 5, 6, 7)


def elementary_symmetric(values):
    """
    Elementary symmetric polynomials e_0..e_L of the given values.

    >>> [int(v.real) for v in elementary_symmetric([1, 1, 1])]
    [1, 3, 3, 1]
    """
    e = [1 + 0j]
    for v in values:
        e = [a + v * b for a, b in zip(e + [0j], [0j] + e)]

    return e


class SymmetricData(PClass):
    """
    eps_j: elementary symmetric polynomials of alpha_k - gamma_n (k = 1..L-1) and sum(beta) - gamma_n.
    eps_prime_j: those of gamma_k - alpha_n (k = 1..L-1) and 1 - alpha_n.
    """
    eps = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    eps_prime = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)


def symmetric_data(hp, n):
    alpha, beta, gamma = hp.arrays()
    eps = elementary_symmetric(list(alpha - gamma[n - 1]) + [beta.sum() - gamma[n - 1]])
    eps_prime = elementary_symmetric(list(gamma - alpha[n - 1]) + [1 - alpha[n - 1]])
    return SymmetricData(eps=eps, eps_prime=eps_prime)


class ShiftSpec(PClass):
    """
    Integer shifts of the parameters, keyed by 1-based position.

    >>> ShiftSpec(alpha={1: 1}).alpha[1]
    1
    """
    alpha = pmap_field(int, int)
    beta = pmap_field(int, int)
    gamma = pmap_field(int, int)


def _shifted(values, shifts):
    values = list(values)
    for index, shift in shifts.items():
        if not 1 <= index <= len(values):
            raise ValueError('No parameter at position {0}'.format(index))
        values[index - 1] += shift

    return values


def shift_params(hp, shift):
    """
    Apply a :py:class:`ShiftSpec`, raising :py:class:`ResonantShift` when a shifted gamma is resonant.
    """
    try:
        return hp.set(alpha=_shifted(hp.alpha, shift.alpha),
                      beta=_shifted(hp.beta, shift.beta),
                      gamma=_shifted(hp.gamma, shift.gamma))
    except ResonantGamma as e:
        raise ResonantShift(str(e))


class ContiguityOperator(PClass):
    """
    A contiguity relation F(target) = prefactor * operator(F): operator acts on truncated series
    and loses exactness in the top order degrees.
    """
    relation = field(type=int, mandatory=True)
    target = field(type=HGParams, mandatory=True)
    prefactor = field(type=complex, mandatory=True, factory=complex)
    operator = field(mandatory=True)
    order = field(type=int, mandatory=True)

    def apply(self, ts):
        return self.operator(ts) * self.prefactor


def _nonzero(value, message):
    if value == 0:
        raise VanishingDenominator(message)

    return value


def _horner(ts, coefficients, shift):
    # sum_j c_j (D + shift)^(len - 1 - j) applied to ts
    result = ts * coefficients[0]
    for c in coefficients[1:]:
        result = apply_theta_polynomial(result, [shift]) + ts * c

    return result


def _raising_gamma(hp, n):
    alpha, beta, gamma = hp.arrays()
    eps = symmetric_data(hp, n).eps
    L = hp.L
    others = [g - 1 for k, g in enumerate(gamma) if k != n - 1]

    def operator(ts):
        raised = apply_theta_polynomial(ts, others)
        total = zero_series(ts.N, ts.degree - 1)
        for i in range(1, hp.N + 1):
            total = total + apply_partial(raised, i)
        return total - _horner(ts, list(eps[:L]), gamma[n - 1])

    prefactor = gamma[n - 1] / _nonzero(eps[L], 'eps_L vanishes')
    return prefactor, operator


def _lowering_alpha(hp, n):
    alpha, beta, gamma = hp.arrays()
    eps_prime = symmetric_data(hp, n).eps_prime
    L = hp.L
    others = [a for k, a in enumerate(alpha) if k != n - 1]

    def operator(ts):
        raised = apply_theta_polynomial(ts, others)
        total = zero_series(ts.N, ts.degree)
        for i in range(1, hp.N + 1):
            total = total + multiply_by_x(apply_euler(raised, i) + raised * beta[i - 1], i)
        return total - _horner(ts, list(eps_prime[:L]), alpha[n - 1] - 1)

    _nonzero(alpha[n - 1] - 1, 'alpha_{0} = 1'.format(n))
    prefactor = (alpha[n - 1] - 1) / _nonzero(eps_prime[L], 'eps_prime_L vanishes')
    return prefactor, operator


def _check_slot(index, size, name):
    if not 1 <= index <= size:
        raise ValueError('{0} index {1} outside 1..{2}'.format(name, index, size))


def contiguity_operator(relation, hp, index):
    """
    The :py:class:`ContiguityOperator` of one of the seven relations:

        1  F(alpha_n + 1) = (D + alpha_n) / alpha_n F
        2  F(beta_i + 1) = (delta_i + beta_i) / beta_i F
        3  F(gamma_n + 1) = gamma_n / eps_L {sum_i d_i prod_{k != n} (D + gamma_k - 1)
                                             - sum_j eps_j (D + gamma_n)^(L-1-j)} F
        4  F(alpha_n - 1) = (alpha_n - 1) / eps'_L {sum_i x_i (delta_i + beta_i) prod_{k != n} (D + alpha_k)
                                                    - sum_j eps'_j (D + alpha_n - 1)^(L-1-j)} F
        5  F(gamma_n - 1) = (D + gamma_n - 1) / (gamma_n - 1) F
        6  F(beta_i + 1, beta_j - 1) = ((x_i - x_j) d_i + beta_i) / beta_i F
        7  F(all alpha + 1, beta_i + 1, all gamma + 1) = gamma_1...gamma_{L-1} / (alpha_1...alpha_{L-1} beta_i) d_i F

    index is n for relations 1, 3, 4 and 5, i for 2 and 7 and the pair (i, j) for 6.
    """
    if relation not in RELATIONS:
        raise ValueError('Unknown contiguity relation {0}'.format(relation))

    alpha, beta, gamma = hp.arrays()
    L, N = hp.L, hp.N
    order = L - 1 if relation in (3, 4) else 1

    if relation in (1, 3, 4, 5):
        n = index
        _check_slot(n, L - 1, 'n')
    elif relation == 6:
        i, j = index
        _check_slot(i, N, 'i')
        _check_slot(j, N, 'j')
        if i == j:
            raise ValueError('Relation 6 needs two different indices')
    else:
        i = index
        _check_slot(i, N, 'i')

    if relation == 1:
        shift = ShiftSpec(alpha={n: 1})
        prefactor = 1 / _nonzero(alpha[n - 1], 'alpha_{0} vanishes'.format(n))
        shifts = [alpha[n - 1]]
        operator = lambda ts: apply_theta_polynomial(ts, shifts)
    elif relation == 2:
        shift = ShiftSpec(beta={i: 1})
        prefactor = 1 / _nonzero(beta[i - 1], 'beta_{0} vanishes'.format(i))
        operator = lambda ts: apply_euler(ts, i) + ts * beta[i - 1]
    elif relation == 3:
        shift = ShiftSpec(gamma={n: 1})
        prefactor, operator = _raising_gamma(hp, n)
    elif relation == 4:
        shift = ShiftSpec(alpha={n: -1})
        prefactor, operator = _lowering_alpha(hp, n)
    elif relation == 5:
        shift = ShiftSpec(gamma={n: -1})
        prefactor = 1 / _nonzero(gamma[n - 1] - 1, 'gamma_{0} = 1'.format(n))
        shifts = [gamma[n - 1] - 1]
        operator = lambda ts: apply_theta_polynomial(ts, shifts)
    elif relation == 6:
        shift = ShiftSpec(beta={i: 1, j: -1})
        prefactor = 1 / _nonzero(beta[i - 1], 'beta_{0} vanishes'.format(i))
        operator = lambda ts: apply_euler(ts, i) - multiply_by_x(apply_partial(ts, i), j) + ts * beta[i - 1]
    else:
        shift = ShiftSpec(alpha=dict((k, 1) for k in range(1, L)), beta={i: 1},
                          gamma=dict((k, 1) for k in range(1, L)))
        denominator = _nonzero(np.prod(alpha) * beta[i - 1], 'alpha_1...alpha_{L-1} beta_i vanishes')
        prefactor = np.prod(gamma) / denominator
        operator = lambda ts: apply_partial(ts, i)

    return ContiguityOperator(relation=relation, target=shift_params(hp, shift), prefactor=prefactor,
                              operator=operator, order=order)


def check_contiguity(relation, hp, index, M, relative=False):
    """
    Largest coefficient discrepancy between F at the shifted parameters and the operator side of
    the relation, over total degrees up to M minus the order of the operator. With relative set
    the discrepancy is divided by max(1, largest left-hand coefficient).
    """
    op = contiguity_operator(relation, hp, index)
    if M <= op.order:
        raise ValueError('Degree {0} too small for relation {1}'.format(M, relation))

    lhs = series_coefficients(op.target, M)
    rhs = op.apply(series_coefficients(hp, M))
    top = M - op.order
    discrepancy = (lhs - rhs).max_abs(top)
    if relative:
        discrepancy /= max(1.0, lhs.max_abs(top))

    logger.debug('check_contiguity: relation %d, index %s, discrepancy %.3g', relation, index, discrepancy)
    return discrepancy


def isomorphism_criterion(hp, n):
    """
    True when gamma_n eps_L is nonzero, i.e. the raising operator of relation 3 and D + gamma_n
    are mutually inverse isomorphisms of solution spaces.
    """
    _, _, gamma = hp.arrays()
    eps = symmetric_data(hp, n).eps
    return bool(abs(gamma[n - 1]) > ISOMORPHISM_TOLERANCE and abs(eps[hp.L]) > ISOMORPHISM_TOLERANCE)
