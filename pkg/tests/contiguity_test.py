import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hgflow import (ResonantShift, ShiftSpec, VanishingDenominator, check_contiguity, contiguity_operator,
                    elementary_symmetric, hg_params, isomorphism_criterion, series_coefficients, shift_params,
                    symmetric_data)


def random_hp(seed, L, N):
    rng = np.random.default_rng(seed)
    return hg_params(L, N, rng.uniform(0.2, 0.8, L - 1), rng.uniform(-0.8, -0.2, N), rng.uniform(1.5, 2.5, L - 1))


def indices(relation, L, N):
    if relation in (1, 3, 4, 5):
        return list(range(1, L))
    if relation == 6:
        return [(i, j) for i, j in itertools.permutations(range(1, N + 1), 2)]
    return list(range(1, N + 1))


def test_elementary_symmetric_examples():
    assert elementary_symmetric([]) == [1]
    assert [v.real for v in elementary_symmetric([2, 3])] == [1, 5, 6]
    assert elementary_symmetric([1j, -1j]) == [1, 0, 1]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_newton_identities(values):
    e = elementary_symmetric(values)
    power_sums = [sum(v ** k for v in values) for k in range(len(values) + 1)]
    for k in range(1, len(values) + 1):
        total = sum((-1) ** (j - 1) * e[k - j] * power_sums[j] for j in range(1, k + 1))
        assert abs(total - k * e[k]) <= 1e-10 * max(1, max(abs(v) for v in values)) ** k


def test_symmetric_data():
    hp = hg_params(3, 2, [0.3, 0.4], [-0.5, -0.25], [1.7, 2.2])
    data = symmetric_data(hp, 1)
    assert len(data.eps) == len(data.eps_prime) == 4
    assert data.eps[3] == pytest.approx((0.3 - 1.7) * (0.4 - 1.7) * (-0.75 - 1.7))
    assert data.eps_prime[3] == pytest.approx((1.7 - 0.3) * (2.2 - 0.3) * (1 - 0.3))


@pytest.mark.parametrize('L,N', [(L, N) for L in (2, 3, 4) for N in (1, 2, 3)])
def test_all_relations(L, N):
    hp = random_hp(10 * L + N, L, N)
    for relation in range(1, 8):
        for index in indices(relation, L, N):
            assert check_contiguity(relation, hp, index, 20, relative=True) <= 1e-12, (relation, index)


def test_relation_one_at_origin():
    hp = random_hp(1, 3, 2)
    op = contiguity_operator(1, hp, 2)
    assert op.apply(series_coefficients(hp, 5))[(0, 0)] == pytest.approx(1, rel=1e-15)
    assert list(op.target.alpha) == [hp.alpha[0], hp.alpha[1] + 1]


def test_relation_seven_first_coefficient():
    hp = random_hp(2, 3, 2)
    op = contiguity_operator(7, hp, 1)
    assert op.apply(series_coefficients(hp, 5))[(0, 0)] == pytest.approx(1, rel=1e-14)
    assert list(op.target.gamma) == [g + 1 for g in hp.gamma]
    assert list(op.target.beta) == [hp.beta[0] + 1, hp.beta[1]]


def test_operator_orders():
    hp = random_hp(3, 4, 2)
    assert contiguity_operator(3, hp, 1).order == 3
    assert contiguity_operator(4, hp, 2).order == 3
    assert contiguity_operator(2, hp, 1).order == 1


def test_relation_six_shifts_both_betas():
    hp = random_hp(4, 2, 3)
    target = contiguity_operator(6, hp, (3, 1)).target
    assert list(target.beta) == [hp.beta[0] - 1, hp.beta[1], hp.beta[2] + 1]


def test_isomorphism_criterion():
    assert isomorphism_criterion(random_hp(5, 3, 2), 1)
    assert not isomorphism_criterion(hg_params(2, 1, [0.4], [-0.3], [5e-11]), 1)
    assert not isomorphism_criterion(hg_params(3, 2, [0.4, 0.3], [0.5, 1.2], [1.7, 2.2]), 1)


def test_vanishing_denominators():
    with pytest.raises(VanishingDenominator):
        contiguity_operator(1, hg_params(2, 1, [0], [-0.3], [1.5]), 1)
    with pytest.raises(VanishingDenominator):
        contiguity_operator(2, hg_params(2, 1, [0.4], [0], [1.5]), 1)
    with pytest.raises(VanishingDenominator):
        contiguity_operator(4, hg_params(2, 1, [1], [-0.3], [1.5]), 1)
    with pytest.raises(VanishingDenominator):
        contiguity_operator(5, hg_params(2, 1, [0.4], [-0.3], [1]), 1)


def test_resonant_shift():
    with pytest.raises(ResonantShift):
        shift_params(hg_params(2, 1, [0.4], [-0.3], [1]), ShiftSpec(gamma={1: -1}))


def test_bad_indices():
    hp = random_hp(6, 3, 2)
    with pytest.raises(ValueError):
        contiguity_operator(8, hp, 1)
    with pytest.raises(ValueError):
        contiguity_operator(1, hp, 3)
    with pytest.raises(ValueError):
        contiguity_operator(6, hp, (1, 1))
    with pytest.raises(ValueError):
        shift_params(hp, ShiftSpec(beta={3: 1}))
    with pytest.raises(ValueError):
        check_contiguity(3, hp, 1, 2)


def test_raising_and_lowering_gamma_compose_to_identity():
    hp = random_hp(7, 3, 2)
    M = 16
    up = contiguity_operator(3, hp, 2)
    down = contiguity_operator(5, up.target, 2)
    ts = series_coefficients(hp, M)
    composite = down.apply(up.apply(ts))
    assert (composite - ts).max_abs(M - up.order - down.order) <= 1e-12 * ts.max_abs()
