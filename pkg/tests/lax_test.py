import numpy as np
import pytest

from hgflow import (ConstraintViolation, PoleHit, ZeroGauge, ZeroTheta, bc_to_qp, bc_variables, build_A_from_bc,
                    build_B, build_reduced, holomorphic_solution_at, map_system_to_hg, pfaffian_to_reduced,
                    phase_point, pushforward_reduced_rhs, qp_to_bc, random_params, reduced_B, reduced_rhs,
                    reduced_state, reduced_to_pfaffian, riemann_scheme, riemann_scheme_residual, scalar_derivative,
                    solution_vector, spectral_type, system_params, trace_identity_residual,
                    zero_curvature_matrix, zero_curvature_residual, zero_phase_point)
from hgflow._pfaffian import locus_distance, rank


def complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_bc(seed, L, N):
    rng = np.random.default_rng(seed)
    sp = random_params(seed, L, N, False)
    pt = phase_point(0.5 * complex_normal(rng, (L - 1, N)), 0.5 * complex_normal(rng, (L - 1, N)))
    gauge = 1 + 0.5 * complex_normal(rng, L - 1)
    x = 0.2 + 0.6 * rng.uniform(size=N) + 0.3j * rng.uniform(-1, 1, N)
    return sp, pt, gauge, x, qp_to_bc(pt, sp, gauge, x)


def reduced_setup(seed, L, N):
    sp = random_params(seed, L, N, True)
    x = 0.3 / np.arange(1, N + 1)
    y = holomorphic_solution_at(map_system_to_hg(sp), x, 80)
    return sp, x, y, pfaffian_to_reduced(x, y, sp)


def separated_points(rng, N):
    while True:
        x = rng.uniform(0.1, 0.9, N)
        if locus_distance(x) >= 0.05:
            return x


def random_z(rng):
    return rng.uniform(-3, 3) + 1j * rng.uniform(0.5, 3)


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2), (4, 3)])
def test_trace_identities_hold_after_substitution(L, N):
    sp, _, _, _, bc = random_bc(L * N, L, N)
    assert trace_identity_residual(bc, sp) <= 1e-12


def test_qp_to_bc_at_origin():
    sp = random_params(0, 3, 2, False)
    bc = qp_to_bc(zero_phase_point(3, 2), sp, np.ones(2), [0.3, 0.6])
    assert not np.any(bc.c[1:, 1:])
    assert np.allclose(bc.u, [1 / 0.3, 1 / 0.6])


def test_bc_round_trip():
    _, pt, gauge, x, bc = random_bc(5, 3, 2)
    back, back_gauge, back_x = bc_to_qp(bc)
    assert np.max(np.abs(back.q - pt.q)) <= 1e-14
    assert np.max(np.abs(back.p - pt.p)) <= 1e-14
    assert np.allclose(back_gauge, gauge, rtol=1e-15)
    assert np.allclose(back_x, x, rtol=1e-15)


def test_zero_gauge():
    sp = random_params(0, 3, 1, False)
    with pytest.raises(ZeroGauge):
        qp_to_bc(zero_phase_point(3, 1), sp, [1, 0], [0.5])


def test_bc_variables_shape():
    with pytest.raises(ValueError):
        bc_variables(np.zeros((2, 2)), np.zeros((2, 2)), [2.0])
    with pytest.raises(ValueError):
        bc_variables(np.zeros((2, 2)), np.ones((2, 2)), [2.0, 3.0])


def test_build_A_rejects_broken_trace_identities():
    sp, _, _, _, bc = random_bc(1, 3, 2)
    broken = bc_variables(bc.b + 0.1, bc.c, bc.u)
    with pytest.raises(ConstraintViolation):
        build_A_from_bc(broken, sp)


def test_residue_structure():
    sp, _, _, _, bc = random_bc(2, 3, 2)
    e, kappa, theta = sp.arrays()
    fd = build_A_from_bc(bc, sp)
    for i in range(sp.N + 1):
        assert np.linalg.matrix_rank(fd.residues[i], tol=1e-10) <= 1
        assert np.trace(fd.residues[i]) == pytest.approx(-theta[i], abs=1e-12)

    last = fd.residues[sp.N + 1]
    assert np.array_equal(np.tril(last, -1), np.zeros((3, 3)))
    assert np.allclose(np.diag(last), e)

    A_inf = fd.A_inf
    assert np.max(np.abs(np.triu(A_inf, 1))) <= 1e-12
    assert np.max(np.abs(np.diag(A_inf) - (kappa - e))) <= 1e-12


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2), (4, 2)])
def test_riemann_scheme(L, N):
    sp, _, _, _, bc = random_bc(10 + L + N, L, N)
    assert riemann_scheme_residual(build_A_from_bc(bc, sp), sp) <= 1e-10


def test_riemann_scheme_rows():
    sp = system_params(2, 1, e=[0, 0.5], kappa=[0.25, 0.25], theta=[0.25])
    rows = dict(riemann_scheme(sp))
    assert rows['u_1'].tolist() == [-0.25, 0]
    assert rows['0'].tolist() == [0, 0.5]
    assert rows['inf'].tolist() == [0.25, -0.25]


def test_spectral_type_of_generic_data():
    L, N = 3, 2
    sp, _, _, _, bc = random_bc(3, L, N)
    types = list(spectral_type(build_A_from_bc(bc, sp)))
    assert len(types) == N + 3
    assert types[1:N + 1] == [(L - 1, 1)] * N
    assert types[N + 1] == (1, 1, 1)


def test_fuchsian_data_on_pole():
    sp, _, _, _, bc = random_bc(4, 2, 1)
    fd = build_A_from_bc(bc, sp)
    with pytest.raises(PoleHit):
        fd.A(1.0)


def test_build_B_residue_and_trace():
    sp, _, _, _, bc = random_bc(6, 3, 2)
    _, _, theta = sp.arrays()
    fd = build_A_from_bc(bc, sp)
    for i in range(sp.N + 1):
        u = fd.poles[i]
        epsilon = 1e-7
        residue = epsilon * build_B(i, fd, sp, u + epsilon)
        assert np.max(np.abs(residue + fd.residues[i])) <= 1e-5 * max(1, np.max(np.abs(fd.residues[i])))

        z = 0.4 + 1.7j
        expected = -theta[i] / (u - z) + theta[i] / u
        assert np.trace(build_B(i, fd, sp, z)) == pytest.approx(expected, rel=1e-12)


def test_build_B_on_pole():
    sp, _, _, _, bc = random_bc(6, 2, 1)
    fd = build_A_from_bc(bc, sp)
    with pytest.raises(PoleHit):
        build_B(1, fd, sp, fd.poles[1])


def test_reduced_requires_reducibility():
    sp = random_params(1, 3, 2, False)
    with pytest.raises(ConstraintViolation):
        build_reduced(reduced_state([3, 5], 1, np.ones((2, 2))), sp)


def test_reduced_residues():
    sp, _, _, rs = reduced_setup(1, 3, 2)
    _, kappa, theta = sp.arrays()
    fd = build_reduced(rs, sp).fd
    assert np.trace(fd.residues[0]) == pytest.approx(-kappa[1:].sum(), abs=1e-14)
    assert np.trace(fd.residues[0]) == pytest.approx(-theta[0], abs=1e-12)
    for A in fd.residues:
        # coordinates 2..L span a common invariant subspace
        assert not np.any(A[0, 1:])
    for i in range(1, sp.N + 1):
        assert np.linalg.matrix_rank(fd.residues[i]) <= 1


def test_reduced_residues_at_zero_state():
    sp = random_params(2, 3, 2, True)
    fd = build_reduced(reduced_state([3, 5], 0, np.zeros((2, 2))), sp).fd
    assert not np.any(fd.residues[0][:, 0])


def test_reduced_riemann_scheme():
    sp, _, _, rs = reduced_setup(3, 3, 2)
    assert riemann_scheme_residual(build_reduced(rs, sp).fd, sp) <= 1e-10


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2)])
def test_reduced_B_matches_general_form(L, N):
    sp, _, _, rs = reduced_setup(L + N, L, N)
    lax = build_reduced(rs, sp)
    rng = np.random.default_rng(0)
    for _ in range(5):
        z = random_z(rng)
        for i in range(1, N + 1):
            assert np.max(np.abs(reduced_B(i, rs, sp, z) - build_B(i, lax.fd, sp, z))) <= 1e-12
            assert np.array_equal(lax.B(i, z), reduced_B(i, rs, sp, z))


def test_reduced_rhs_is_zero_at_zero_state():
    sp = random_params(4, 3, 2, True)
    df, db = reduced_rhs(reduced_state([2, 5], 0, np.zeros((2, 2))), sp)
    assert not np.any(df)
    assert not np.any(db)


def test_reduced_to_pfaffian_round_trip():
    sp, x, y, rs = reduced_setup(5, 3, 2)
    back_x, back_y = reduced_to_pfaffian(rs, sp)
    assert np.allclose(back_x, x, rtol=1e-15)
    assert np.max(np.abs(back_y.as_array() - y.as_array())) <= 1e-14 * np.max(np.abs(y.as_array()))


def test_branch_factor_is_positive_on_positive_axis():
    sp = random_params(6, 2, 1, True)
    _, y = reduced_to_pfaffian(reduced_state([2.5], 1, [[0]]), sp)
    assert y.y0.imag == 0
    assert y.y0.real > 0


def test_reduced_to_pfaffian_is_linear():
    sp, _, _, rs = reduced_setup(7, 3, 1)
    _, y = reduced_to_pfaffian(rs, sp)
    _, scaled = reduced_to_pfaffian(reduced_state(rs.u, 3 * rs.f, 3 * rs.b), sp)
    assert np.allclose(scaled.as_array(), 3 * y.as_array(), rtol=1e-14, atol=0)


def test_zero_theta():
    sp = system_params(2, 1, e=[0, 0.5], kappa=[0, 0.3], theta=[0])
    with pytest.raises(ZeroTheta):
        reduced_to_pfaffian(reduced_state([2], 1, [[1]]), sp)


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2), (4, 2)])
def test_pushforward_matches_scalar_system(L, N):
    sp = random_params(L * N + 20, L, N, True)
    hp = map_system_to_hg(sp)
    rng = np.random.default_rng(L)
    for _ in range(5):
        x = separated_points(rng, N)
        K = rank(L, N)
        y = solution_vector(L, N, complex_normal(rng, K))
        rs = pfaffian_to_reduced(x, y, sp)
        for pushed, direct in zip(pushforward_reduced_rhs(rs, sp), scalar_derivative(hp, x, y)):
            scale = max(1, np.max(np.abs(direct.as_array())))
            assert np.max(np.abs(pushed.as_array() - direct.as_array())) <= 1e-10 * scale


@pytest.mark.parametrize('L,N', [(2, 1), (3, 2), (4, 3)])
def test_zero_curvature(L, N):
    sp, _, _, rs = reduced_setup(L * 7 + N, L, N)
    rng = np.random.default_rng(20)
    derivatives = reduced_rhs(rs, sp)
    df, db = derivatives
    for _ in range(20):
        z = random_z(rng)
        for i in range(1, N + 1):
            assert zero_curvature_residual(i, rs, sp, z, derivatives) <= 1e-10
            assert zero_curvature_residual(i, rs, sp, z, (df, db + 1.0)) > 1e-3


def test_zero_curvature_trivial_state():
    sp = system_params(3, 2, e=[0.2, 0.3, 0.5], kappa=[0, 0, 0], theta=[0, 0])
    rs = reduced_state([2, 5], 0, np.zeros((2, 2)))
    assert zero_curvature_residual(1, rs, sp, 0.5 + 1j) == 0


def test_zero_curvature_only_first_column_moves():
    sp = random_params(9, 3, 2, True)
    rng = np.random.default_rng(9)
    rs = reduced_state([2.0, 4.0], complex_normal(rng, ()), complex_normal(rng, (2, 2)))
    arbitrary = (complex_normal(rng, 2), complex_normal(rng, (2, 2, 2)))
    for i in (1, 2):
        matrix = zero_curvature_matrix(i, rs, sp, 0.7 + 1.3j, arbitrary)
        rest = np.array(matrix)
        rest[1:, 0] = 0
        assert np.max(np.abs(rest)) <= 1e-13 * max(1, np.max(np.abs(matrix)))
        assert np.max(np.abs(matrix[1:, 0])) > 1e-3


def test_zero_curvature_on_pole():
    sp, _, _, rs = reduced_setup(1, 2, 1)
    with pytest.raises(PoleHit):
        zero_curvature_residual(1, rs, sp, rs.u[0])
