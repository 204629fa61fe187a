import numpy as np
import pytest
from pyrsistent import InvariantException

from hgflow import (PathTooClose, SingularPoint, apply_partial, build_connection, continue_solution,
                    evaluate_solution, hg_params, holomorphic_solution, holomorphic_solution_at,
                    integrability_residual, locus_distance, map_system_to_hg, omega_at, path_spec, random_params,
                    sample_path, scalar_derivative, segment_distance, solution_vector, validate_path)
from hgflow._pfaffian import SolutionVector, rank


def random_hp(seed, L, N):
    return map_system_to_hg(random_params(seed, L, N, False))


def random_point(rng, N):
    while True:
        x = rng.uniform(0.1, 0.9, N) + 1j * rng.uniform(-0.4, 0.4, N)
        if locus_distance(x) >= 0.05:
            return x


def random_vector(rng, L, N):
    K = rank(L, N)
    return solution_vector(L, N, rng.standard_normal(K) + 1j * rng.standard_normal(K))


def test_solution_vector_layout():
    v = SolutionVector.from_components(1, [[2, 4], [3, 5]])
    assert v.as_array().real.tolist() == [1, 2, 3, 4, 5]
    assert v.component(0) == 1
    assert v.component(2, 2) == 5
    assert np.array_equal(v.y, [[2, 4], [3, 5]])
    assert len(v) == rank(3, 2)


def test_solution_vector_arithmetic():
    v = solution_vector(2, 1, [1, 2])
    w = solution_vector(2, 1, [3, 5])
    assert (v + w).as_array().real.tolist() == [4, 7]
    assert (w - v).as_array().real.tolist() == [2, 3]
    assert (-v).y0 == -1
    assert (np.float64(3) * v).y0 == 3


def test_solution_vector_wrong_length():
    with pytest.raises(ValueError):
        solution_vector(3, 2, [1, 2, 3])

    with pytest.raises(IndexError):
        solution_vector(2, 1, [1, 2]).component(2, 1)


def test_minimal_connection():
    alpha, beta, gamma = 0.3 + 0.2j, 0.7, 1.4 - 0.1j
    pc = build_connection(hg_params(2, 1, [alpha], [beta], [gamma]))
    a = alpha - gamma
    assert np.allclose(pc.E[0], [[0, 0], [-a, -gamma]], rtol=0, atol=1e-15)
    assert np.allclose(pc.F[0], [[-beta, beta], [a, -a]], rtol=0, atol=1e-15)
    assert len(pc.G) == 0
    assert pc.size == 2


def test_connection_block_structure():
    hp = random_hp(3, 3, 3)
    pc = build_connection(hp)
    _, beta, _ = hp.arrays()
    for Ei in pc.E:
        assert not np.any(Ei[0])
    assert sorted(pc.G.keys()) == [(1, 2), (1, 3), (2, 3)]
    assert pc.pair(3, 1) is pc.G[(1, 3)]
    assert np.allclose(pc.G[(1, 2)][1:3, 3:5], beta[1] * np.eye(2))


def test_omega_single_variable():
    pc = build_connection(random_hp(1, 3, 1))
    x = 0.37 - 0.2j
    omega, = omega_at(pc, [x])
    assert np.allclose(omega, pc.E[0] / x + pc.F[0] / (x - 1), rtol=0, atol=1e-14)


def test_omega_on_locus():
    pc = build_connection(random_hp(1, 2, 2))
    with pytest.raises(SingularPoint):
        omega_at(pc, [0.3, 0.3 + 1e-12])
    with pytest.raises(SingularPoint):
        omega_at(pc, [1.0, 0.3])


@pytest.mark.parametrize('L,N', [(2, 1), (2, 2), (3, 1), (3, 2), (4, 3)])
def test_scalar_and_matrix_forms_agree(L, N):
    hp = random_hp(L * 10 + N, L, N)
    pc = build_connection(hp)
    rng = np.random.default_rng(L + N)
    for _ in range(10):
        x = random_point(rng, N)
        y = random_vector(rng, L, N)
        for omega, derivative in zip(omega_at(pc, x), scalar_derivative(hp, x, y)):
            scale = np.max(np.sum(np.abs(omega), axis=1)) * np.max(np.abs(y.as_array()))
            assert np.max(np.abs(omega.dot(y.as_array()) - derivative.as_array())) <= 1e-13 * scale


def test_scalar_derivative_of_zero():
    hp = random_hp(4, 3, 2)
    for d in scalar_derivative(hp, [0.3, 0.6], solution_vector(3, 2, np.zeros(5))):
        assert not np.any(d.as_array())


def test_zero_beta_freezes_y0():
    hp = hg_params(3, 2, [0.3, 0.4], [0, 0], [1.2, 1.7])
    y = random_vector(np.random.default_rng(0), 3, 2)
    for d in scalar_derivative(hp, [0.3, 0.6], y):
        assert d.y0 == 0


def test_integrability_trivial_for_one_variable():
    assert integrability_residual(build_connection(random_hp(0, 3, 1)), [0.4]) == 0


@pytest.mark.parametrize('L,N', [(2, 2), (3, 2), (4, 3)])
def test_frobenius_integrability(L, N):
    pc = build_connection(random_hp(L + 7 * N, L, N))
    rng = np.random.default_rng(11)
    for _ in range(100):
        assert integrability_residual(pc, random_point(rng, N), relative=True) <= 1e-12


def test_holomorphic_solution_at_origin():
    hp = hg_params(3, 2, [0.3, 0.6], [0.2, 0.5], [1.4, 1.9])
    alpha, _, gamma = hp.arrays()
    y = holomorphic_solution_at(hp, [0, 0], 10)
    assert y.y0 == 1
    for i in (1, 2):
        assert y.component(1, i) == pytest.approx((gamma[0] - alpha[0]) / gamma[0], rel=1e-15)
        assert y.component(2, i) == pytest.approx(alpha[0] * (gamma[1] - alpha[1]) / (gamma[0] * gamma[1]),
                                                  rel=1e-15)


def test_holomorphic_solution_minimal():
    y = holomorphic_solution_at(hg_params(2, 1, [0.25], [0.5], [1.5]), [0], 5)
    assert y.component(1, 1) == pytest.approx(1.25 / 1.5, rel=1e-15)


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2), (4, 2)])
def test_holomorphic_solution_solves_system(L, N):
    hp = random_hp(L * N, L, N)
    components = holomorphic_solution(hp, 60)
    x = 0.05 * np.arange(1, N + 1) / N
    y = evaluate_solution(components, x)
    assert len(y) == rank(L, N)
    for i, derivative in enumerate(scalar_derivative(hp, x, y), start=1):
        termwise = evaluate_solution([apply_partial(ts, i) for ts in components], x)
        assert np.max(np.abs(termwise.as_array() - derivative.as_array())) <= 1e-9


def test_segment_distance():
    start, end = np.array([0.5 + 0.5j]), np.array([0.5 - 0.5j])
    assert segment_distance(start, end) == pytest.approx(0.5)
    assert segment_distance(np.array([0.2, 0.6]), np.array([0.6, 0.2])) == pytest.approx(0, abs=1e-15)
    assert segment_distance(np.array([0.2, 0.6]), np.array([0.3, 0.5])) == pytest.approx(0.2 / np.sqrt(2))


def test_path_through_singular_point():
    path = path_spec([[0.5], [1.5]])
    with pytest.raises(PathTooClose) as error:
        validate_path(path)
    assert error.value.segment == 0


def test_path_dimension_invariant():
    with pytest.raises(InvariantException):
        path_spec([[0.1], [0.2, 0.3]])


def test_zero_length_path():
    hp = random_hp(5, 2, 1)
    y0 = holomorphic_solution_at(hp, [0.2], 20)
    assert continue_solution(build_connection(hp), path_spec([[0.2]]), y0, 1e-10).as_array().tolist() == \
        y0.as_array().tolist()


def test_continuation_matches_series():
    hp = random_hp(6, 3, 2)
    pc = build_connection(hp)
    start, end = [0.025, 0.05], [0.3, 0.45]
    y0 = holomorphic_solution_at(hp, start, 80)
    y = continue_solution(pc, path_spec([start, end]), y0, 1e-10)
    expected = holomorphic_solution_at(hp, end, 80)
    assert np.max(np.abs(y.as_array() - expected.as_array())) <= 1e-8

    back = continue_solution(pc, path_spec([end, start]), y, 1e-10)
    assert np.max(np.abs(back.as_array() - y0.as_array())) <= 1e-8


def test_continuation_around_singular_point_is_linear():
    hp = random_hp(7, 2, 1)
    pc = build_connection(hp)
    path = path_spec([[0.5], [1 + 0.5j], [1.5], [1 - 0.5j], [0.5]])
    rng = np.random.default_rng(2)
    y, z = random_vector(rng, 2, 1), random_vector(rng, 2, 1)
    a, b = 0.3 - 1j, 2.0
    combined = continue_solution(pc, path, a * y + b * z, 1e-11)
    separate = a * continue_solution(pc, path, y, 1e-11) + b * continue_solution(pc, path, z, 1e-11)
    assert np.max(np.abs(combined.as_array() - separate.as_array())) <= 1e-8


def test_sample_path_rows():
    hp = random_hp(8, 2, 2)
    pc = build_connection(hp)
    path = path_spec([[0.1, 0.2], [0.3, 0.5], [0.3 + 0.2j, 0.5]])
    y0 = holomorphic_solution_at(hp, [0.1, 0.2], 40)
    rows = sample_path(pc, path, y0, 1e-10, 4)
    assert len(rows) == 9
    assert [s for s, _, _ in rows] == [0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
    assert np.allclose(rows[-1][1], [0.3 + 0.2j, 0.5])
    end = continue_solution(pc, path, y0, 1e-10)
    assert np.max(np.abs(rows[-1][2].as_array() - end.as_array())) <= 1e-9
