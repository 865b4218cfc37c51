import numpy as np
import pytest

from qop.errors import DomainError, ShapeError
from qop.generators import ginibre, normal_with_spectrum, positive, random_unitary
from qop.linalg import QMatrix, operator_norm
from qop.quaternion import I, Quaternion
from qop.spectral import is_psd
from qop.transforms import (abs_power, abs_star_power, aluthge, duggal,
                            furuta_sr, lambda_aluthge, polar,
                            unitary_completion)

ZERO_Q = Quaternion(0.0, 0.0, 0.0, 0.0)


def _jordan():
    return QMatrix.from_quaternions([[0.0, 1.0], [0.0, 0.0]])


def test_polar_reconstruction_random():
    for seed in range(10):
        n = 2 + seed % 4
        t = ginibre(n, seed=500 + seed)
        parts = polar(t)
        scale = max(1.0, t.frobenius())
        assert (parts.u @ parts.abs_t - t).frobenius() <= 1e-9 * scale
        ok, _ = is_psd(parts.abs_t, 1e-8)
        assert ok


def test_polar_partial_isometry_and_kernel():
    t = _jordan()
    parts = polar(t)
    assert parts.rank == 1
    assert len(parts.kernel) == 1
    assert len(parts.cokernel) == 1
    # U vanishes on the kernel and U*U acts as identity on the range support
    for k in parts.kernel:
        assert (parts.u @ k).norm() <= 1e-9
    uu = parts.u.H @ parts.u
    assert (uu @ uu - uu).frobenius() <= 1e-9


def test_polar_on_invertible_gives_unitary_factor():
    t = ginibre(3, seed=510)
    shifted = t.H @ t + QMatrix.identity(3)  # positive definite
    parts = polar(shifted)
    assert parts.rank == 3
    ident = QMatrix.identity(3)
    assert (parts.u.H @ parts.u - ident).frobenius() <= 1e-8
    assert (unitary_completion(parts) - parts.u).frobenius() <= 1e-12


def test_polar_adjoint_gauge_relation():
    for seed in (511, 512):
        t = ginibre(3, seed=seed)
        parts = polar(t)
        scale = max(1.0, t.frobenius())
        abs_star = abs_star_power(t, 1.0, parts=parts)
        co = polar(t.H)
        assert (co.u @ co.abs_t - t.H).frobenius() <= 1e-9 * scale
        assert (co.abs_t - parts.u @ parts.abs_t @ parts.u.H).frobenius() <= 1e-8 * scale
        assert (abs_star - co.abs_t).frobenius() <= 1e-8 * scale


def test_unitary_completion_of_jordan_block():
    parts = polar(_jordan())
    w = unitary_completion(parts)
    expect = QMatrix.from_quaternions([[0.0, 1.0], [1.0, 0.0]])
    assert (w - expect).frobenius() <= 1e-12
    ident = QMatrix.identity(2)
    assert (w.H @ w - ident).frobenius() <= 1e-12


def test_abs_power_examples():
    t = QMatrix.from_quaternions([[ZERO_Q, Quaternion(0.0, 2.0, 0.0, 0.0)],
                                  [ZERO_Q, ZERO_Q]])
    parts = polar(t)
    sq = abs_power(parts, 2.0)
    assert (sq - t.H @ t).frobenius() <= 1e-9
    one = abs_power(parts, 1.0)
    assert (one - parts.abs_t).frobenius() <= 1e-12
    star = abs_star_power(t, 1.0, parts=parts)
    expect = QMatrix.diag([2.0, 0.0])
    assert (star - expect).frobenius() <= 1e-9
    with pytest.raises(DomainError):
        abs_power(parts, 0.0)
    with pytest.raises(DomainError):
        abs_star_power(t, -1.0, parts=parts)


def test_abs_star_power_identity_random():
    t = ginibre(4, seed=520)
    parts = polar(t)
    co_abs = polar(t.H).abs_t
    co_sys_half = abs_star_power(t, 0.5, parts=parts)
    ref = polar(t.H)
    half = abs_power(ref, 0.5)
    assert (co_sys_half - half).frobenius() <= 1e-7 * max(1.0, t.frobenius())
    assert (abs_star_power(t, 1.0, parts=parts) - co_abs).frobenius() <= 1e-8 * max(
        1.0, t.frobenius())


def test_aluthge_on_jordan_block_is_zero():
    assert aluthge(_jordan()).frobenius() <= 1e-12


def test_aluthge_fixes_normal_operators():
    vals = [Quaternion(1.0, 2.0, 0.0, 0.0), Quaternion(-0.5, 0.0, 1.0, 0.0),
            Quaternion(3.0, 0.0, 0.0, 0.0)]
    t = normal_with_spectrum(vals, seed=530)
    assert (aluthge(t) - t).frobenius() <= 1e-9 * max(1.0, t.frobenius())
    u = random_unitary(3, seed=531)
    assert (aluthge(u) - u).frobenius() <= 1e-9


def test_aluthge_norm_nonincreasing():
    for seed in (532, 533, 534):
        t = ginibre(3, seed=seed)
        assert operator_norm(aluthge(t)) <= operator_norm(t) * (1.0 + 1e-9)


def test_lambda_aluthge_family():
    t = ginibre(3, seed=540)
    assert lambda_aluthge(t, 0.0).equals_exact(t)
    half = lambda_aluthge(t, 0.5)
    assert (half - aluthge(t)).frobenius() <= 1e-10 * max(1.0, t.frobenius())
    assert (lambda_aluthge(t, 1.0) - duggal(t)).frobenius() <= 1e-10 * max(
        1.0, t.frobenius())
    with pytest.raises(DomainError):
        lambda_aluthge(t, -0.1)
    with pytest.raises(DomainError):
        lambda_aluthge(t, 1.5)


def test_lambda_aluthge_on_jordan_block():
    n = _jordan()
    assert lambda_aluthge(n, 0.5).frobenius() <= 1e-12
    assert lambda_aluthge(n, 1.0).frobenius() <= 1e-12


def test_duggal_is_abs_times_isometry():
    t = ginibre(3, seed=541)
    parts = polar(t)
    assert (duggal(t) - parts.abs_t @ parts.u).frobenius() <= 1e-12


def test_furuta_sr_examples():
    u = random_unitary(3, seed=550)
    for r in (0.5, 1.0, 2.0):
        assert (furuta_sr(u, r) - u @ u).frobenius() <= 1e-9
    p = positive(3, seed=551) + QMatrix.identity(3)
    assert (furuta_sr(p, 1.0) - p).frobenius() <= 1e-8 * max(1.0, p.frobenius())
    assert furuta_sr(_jordan(), 0.5).frobenius() <= 1e-12
    with pytest.raises(DomainError):
        furuta_sr(u, 0.0)


def test_polar_rejects_nonsquare():
    with pytest.raises(ShapeError):
        polar(ginibre(2, 3, seed=560))


def test_polar_parts_reused_by_transforms():
    t = ginibre(3, seed=561)
    parts = polar(t)
    a1 = aluthge(t)
    a2 = aluthge(t, parts=parts)
    assert (a1 - a2).frobenius() <= 1e-14
