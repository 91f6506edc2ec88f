"""Jacobi eigensolver and reduction identities, refereed by numpy.linalg.eigh."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import quadconc as qc
from quadconc.errors import NumericalError, ValidationError
from quadconc.spectral import eigen_sym, symmetrize


def random_symmetric(rng, p):
    m = rng.normal(size=(p, p))
    return 0.5 * (m + m.T)


def test_symmetrize_identity():
    out = symmetrize(np.eye(2))
    assert np.array_equal(out, np.eye(2))


def test_symmetrize_strict_upper():
    out = symmetrize(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.array_equal(out, np.array([[0.0, 0.5], [0.5, 0.0]]))


def test_symmetrize_skew_is_zero():
    skew = np.array([[0.0, 2.0], [-2.0, 0.0]])
    assert np.array_equal(symmetrize(skew), np.zeros((2, 2)))


def test_symmetrize_accepts_form():
    form = qc.QuadraticForm(np.array([[1.0, 2.0], [0.0, 1.0]]), np.zeros(2))
    out = symmetrize(form)
    assert np.array_equal(out, out.T)


def test_eigen_diagonal_input():
    s, u = eigen_sym(np.diag([3.0, 1.0]))
    assert np.array_equal(s, np.array([3.0, 1.0]))
    assert np.array_equal(np.abs(u), np.eye(2))


def test_eigen_two_by_two_exact():
    s, u = eigen_sym(np.array([[0.0, 0.5], [0.5, 0.0]]))
    assert s == pytest.approx([0.5, -0.5], abs=1e-15)
    recon = u @ np.diag(s) @ u.T
    assert np.max(np.abs(recon - np.array([[0.0, 0.5], [0.5, 0.0]]))) < 1e-15


def test_eigen_matches_lapack():
    rng = np.random.default_rng(3)
    for _ in range(10):
        mat = random_symmetric(rng, 8)
        s, u = eigen_sym(mat)
        ref = np.sort(np.linalg.eigvalsh(mat))[::-1]
        assert np.max(np.abs(s - ref)) < 1e-10 * max(1.0, np.abs(ref).max())
        assert np.max(np.abs(u @ np.diag(s) @ u.T - mat)) < 1e-10
        assert np.max(np.abs(u.T @ u - np.eye(8))) < 1e-12
        assert np.all(np.diff(s) <= 0)


def test_eigen_recovers_planted_spectrum():
    rng = np.random.default_rng(5)
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    want = np.array([9.0, 4.0, 1.0, 0.5, -2.0, -7.0])
    mat = q @ np.diag(want) @ q.T
    mat = 0.5 * (mat + mat.T)
    s, _ = eigen_sym(mat)
    assert np.max(np.abs(s - want)) < 1e-10


def test_eigen_rejects_bad_input():
    with pytest.raises(ValidationError):
        eigen_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))  # not symmetric
    with pytest.raises(ValidationError):
        eigen_sym(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        eigen_sym(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_eigen_sweep_cap():
    mat = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(NumericalError) as err:
        eigen_sym(mat, max_sweeps=0)
    assert err.value.residual is not None and err.value.residual > 0
    # already-diagonal input needs no sweeps at all
    s, _ = eigen_sym(np.diag([2.0, 1.0]), max_sweeps=0)
    assert np.array_equal(s, np.array([2.0, 1.0]))


@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
@settings(max_examples=60)
def test_reduction_identities(p, seed):
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(p, p))
    b = rng.normal(size=p)
    red = qc.reduce(qc.QuadraticForm(mat, b))
    scale = max(1.0, np.abs(mat).max())
    assert abs(red.eigenvalues.sum() - np.trace(mat)) < 1e-10 * scale * p
    frob = 0.25 * np.linalg.norm(mat + mat.T, "fro") ** 2
    assert abs((red.eigenvalues**2).sum() - frob) < 1e-10 * max(1.0, frob)
    bnorm = np.linalg.norm(b)
    assert abs(np.linalg.norm(red.rotated_b) - bnorm) < 1e-10 * max(1.0, bnorm)
    assert np.max(np.abs(red.basis.T @ red.basis - np.eye(p))) < 1e-10


def test_reduce_diagonal_matrix_sorts_exactly():
    a = np.array([2.0, -1.0, 5.0, 0.0])
    b = np.array([1.0, 2.0, 3.0, 4.0])
    red = qc.reduce(qc.QuadraticForm(np.diag(a), b))
    order = np.argsort(-a, kind="stable")
    assert np.array_equal(red.eigenvalues, a[order])
    assert np.max(np.abs(np.abs(red.rotated_b) - np.abs(b[order]))) < 1e-14


def test_reduce_p1():
    red = qc.reduce(qc.QuadraticForm(np.array([[4.0]]), np.array([3.0])))
    assert red.eigenvalues[0] == 4.0
    assert abs(red.rotated_b[0]) == 3.0
    diag = red.diagonal_form()
    assert diag.p == 1


def test_reduction_preserves_distribution_stats():
    # same mean and variance under either representation
    rng = np.random.default_rng(8)
    mat = rng.normal(size=(5, 5))
    b = rng.normal(size=5)
    diag = qc.reduce(qc.QuadraticForm(mat, b)).diagonal_form()
    stats = qc.form_stats(diag)
    # variance of T is 2*sum(a_k^2) + sum(b_k^2) = 2*u_sq
    sym = 0.5 * (mat + mat.T)
    want_var = 2.0 * np.sum(np.linalg.eigvalsh(sym) ** 2) + b @ b
    assert 2.0 * stats.u_sq == pytest.approx(want_var, rel=1e-10)


def test_reduce_rejects_non_form():
    with pytest.raises(ValidationError):
        qc.reduce(np.eye(2))
    with pytest.raises(ValidationError):
        qc.QuadraticForm(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValidationError):
        qc.QuadraticForm(np.eye(2), np.ones(3))
