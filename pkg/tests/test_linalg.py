import numpy as np
import pytest

from qop.errors import PreconditionError, ShapeError, StructureError
from qop.generators import ginibre, random_unitary, unit_vector
from qop.linalg import (QMatrix, QVector, embed_chi, inner, left_scalar_mul,
                        operator_norm, outer, unembed_chi, verify_hilbert_basis)
from qop.quaternion import I, J, K, Quaternion
from qop.rng import SplitMix64


def _rand_vec(n, seed):
    return QVector(SplitMix64(seed).normals(4 * n).reshape(n, 4))


def test_inner_is_conjugate_symmetric_and_right_linear():
    u = _rand_vec(5, 1)
    v = _rand_vec(5, 2)
    q = Quaternion(0.3, -1.2, 0.5, 2.0)
    assert inner(u, v).conjugate().isclose(inner(v, u), tol=1e-12)
    # right slot: <u, v q> = <u, v> q
    lhs = inner(u, v * q)
    rhs = inner(u, v) * q
    assert lhs.isclose(rhs, tol=1e-12)
    # left slot picks up the conjugate: <u q, v> = conj(q) <u, v>
    lhs2 = inner(u * q, v)
    rhs2 = q.conjugate() * inner(u, v)
    assert lhs2.isclose(rhs2, tol=1e-12)


def test_inner_norm_consistency():
    u = _rand_vec(6, 3)
    assert abs(inner(u, u).w - u.norm() ** 2) <= 1e-12 * max(1.0, u.norm() ** 2)


def test_left_scalar_mul_is_basis_dependent_left_action():
    u = _rand_vec(4, 4)
    q = Quaternion(1.0, 2.0, -0.5, 0.25)
    w = left_scalar_mul(q, u)
    for i in range(4):
        assert w[i].isclose(q * u[i], tol=1e-13)


def test_outer_matches_rank_one_action():
    u = _rand_vec(3, 5)
    v = _rand_vec(3, 6)
    x = _rand_vec(3, 7)
    m = outer(u, v)
    # (u v*) x = u <v, x>
    lhs = m @ x
    rhs = u * inner(v, x)
    assert lhs.allclose(rhs, tol=1e-12)


def test_adjoint_moves_across_inner_product():
    a = ginibre(4, seed=8)
    u = _rand_vec(4, 9)
    v = _rand_vec(4, 10)
    lhs = inner(a @ u, v)
    rhs = inner(u, a.H @ v)
    assert lhs.isclose(rhs, tol=1e-11)


def test_matmul_matches_complex_embedding():
    for seed in range(6):
        a = ginibre(3, seed=2 * seed)
        b = ginibre(3, seed=2 * seed + 1)
        lhs = embed_chi(a @ b)
        rhs = embed_chi(a) @ embed_chi(b)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(rhs))


def test_embedding_is_star_homomorphism():
    a = ginibre(4, seed=21)
    assert np.allclose(embed_chi(a.H), embed_chi(a).conj().T, atol=1e-13)
    assert np.allclose(embed_chi(a + a), 2.0 * embed_chi(a), atol=1e-13)


def test_embedding_symplectic_symmetry():
    a = ginibre(3, seed=22)
    m = embed_chi(a)
    n = a.rows
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    assert np.allclose(j @ m.conj() @ np.linalg.inv(j), m, atol=1e-12)


def test_unembed_roundtrip_is_exact():
    a = ginibre(5, seed=23)
    assert unembed_chi(embed_chi(a)).equals_exact(a)


def test_unembed_rejects_structure_violations():
    m = embed_chi(ginibre(2, seed=24))
    m[0, 0] += 1e-3
    with pytest.raises(StructureError):
        unembed_chi(m)
    with pytest.raises(ShapeError):
        unembed_chi(np.zeros((3, 3), dtype=complex))


def test_operator_norm_matches_svd_of_embedding():
    for seed in (31, 32, 33):
        a = ginibre(4, seed=seed)
        ours = operator_norm(a)
        ref = np.linalg.svd(embed_chi(a), compute_uv=False)[0]
        assert abs(ours - ref) <= 1e-9 * max(1.0, ref)


def test_right_scalar_action_on_vectors():
    v = QVector.from_quaternions([I, J])
    w = v * J
    assert w[0] == I * J
    assert w[1] == J * J


def test_matrix_vector_entrywise_hamilton():
    a = QMatrix.from_quaternions([[I, J], [K, Quaternion(1.0, 0.0, 0.0, 0.0)]])
    x = QVector.from_quaternions([J, K])
    y = a @ x
    assert y[0] == I * J + J * K
    assert y[1] == K * J + K


def test_shape_errors():
    a = ginibre(2, seed=40)
    b = ginibre(3, seed=41)
    with pytest.raises(ShapeError):
        a @ b
    with pytest.raises(ShapeError):
        a + b
    with pytest.raises(ShapeError):
        a @ _rand_vec(3, 42)


def test_verify_hilbert_basis_accepts_unitary_columns():
    u = random_unitary(4, seed=50)
    cols = [u.column(j) for j in range(4)]
    report = verify_hilbert_basis(cols, n_samples=32, seed=1)
    assert report.is_basis
    assert report.complete
    assert report.max_decomposition_residual <= 1e-10
    assert report.max_parseval_deviation <= 1e-10


def test_verify_hilbert_basis_flags_incomplete_family():
    u = random_unitary(4, seed=51)
    cols = [u.column(j) for j in range(3)]
    report = verify_hilbert_basis(cols, n_samples=16, seed=2)
    assert not report.complete
    assert not report.is_basis
    assert report.max_decomposition_residual > 1e-3


def test_verify_hilbert_basis_rejects_skewed_family():
    v1 = QVector.from_quaternions([Quaternion(1.0, 0, 0, 0), Quaternion(0.2, 0, 0, 0)])
    v2 = QVector.basis(2, 1)
    with pytest.raises(PreconditionError):
        verify_hilbert_basis([v1, v2])


def test_nonsquare_embedding():
    a = ginibre(2, 4, seed=60)
    m = embed_chi(a)
    assert m.shape == (4, 8)
    assert unembed_chi(m).equals_exact(a)


def test_unit_vector_generator_normalized():
    v = unit_vector(5, seed=61)
    assert abs(v.norm() - 1.0) <= 1e-12
