"""Reduction of matrix quadratic forms to diagonal ones.

T = z'Az + b'z depends on A only through its symmetric part S = (A+A')/2.
Diagonalizing S = U diag(s) U' and rotating b into b' = U'b turns T into
sum_k s_k w_k^2 + b'_k w_k with w = U'z again standard Gaussian, so every
tail statement about diagonal forms transfers to matrix forms.  The
reduction preserves sum(s) = tr(A), sum(s^2) = ||A+A'||_F^2 / 4 and
||b'|| = ||b||, which is what the bounds module consumes.

The eigensolver is a cyclic Jacobi iteration (Golub & Van Loan, ch. 8):
slower than LAPACK but dependency-light, deterministic, and accurate to a
small multiple of machine epsilon at the p <= few-hundred scale targeted
here.  numpy's eigh is deliberately not used in library code so tests can
treat it as an independent referee.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bounds import DiagonalForm
from .errors import NumericalError, ValidationError


@dataclass(frozen=True)
class QuadraticForm:
    """Matrix form T = z'Az + b'z; z is an implicit standard Gaussian vector."""

    matrix: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValidationError("matrix must be square with p >= 1, got shape %r" % (m.shape,))
        if b.ndim != 1 or b.size != m.shape[0]:
            raise ValidationError("b must be a vector of length p = %d" % m.shape[0])
        if not (np.isfinite(m).all() and np.isfinite(b).all()):
            raise ValidationError("matrix and b entries must be finite")
        m = m.copy()
        b = b.copy()
        m.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "b", b)

    @property
    def p(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralReduction:
    """Eigendecomposition of the symmetric part plus the rotated linear term."""

    eigenvalues: np.ndarray
    basis: np.ndarray
    rotated_b: np.ndarray

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.eigenvalues, dtype=float))
        u = np.asarray(self.basis, dtype=float)
        bp = np.atleast_1d(np.asarray(self.rotated_b, dtype=float))
        p = s.size
        if u.shape != (p, p) or bp.size != p:
            raise ValidationError("inconsistent reduction shapes")
        if np.any(np.diff(s) > 0):
            raise ValidationError("eigenvalues must be sorted descending")
        ortho = np.max(np.abs(u.T @ u - np.eye(p)))
        if ortho > 1e-10:
            raise ValidationError("basis is not orthonormal (deviation %.3e)" % ortho)
        for arr, name in ((s, "eigenvalues"), (u, "basis"), (bp, "rotated_b")):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def diagonal_form(self) -> DiagonalForm:
        return DiagonalForm(self.eigenvalues, self.rotated_b)


def symmetrize(form):
    """Symmetric part (A + A')/2; accepts a QuadraticForm or a square matrix.

    Exactly symmetric by construction: entry (i,j) and entry (j,i) are the
    same float expression.
    """
    if isinstance(form, QuadraticForm):
        a = form.matrix
    else:
        a = np.asarray(form, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError("matrix must be square, got shape %r" % (a.shape,))
        if not np.isfinite(a).all():
            raise ValidationError("matrix entries must be finite")
    return 0.5 * (a + a.T)


def _offdiag_norm(a):
    # summed directly, never as ||A||_F^2 minus the diagonal mass: that
    # difference bottoms out at rounding garbage ~eps*||A||_F^2, far above
    # the convergence tolerance
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def eigen_sym(s_mat, max_sweeps=100):
    """Eigenvalues (descending) and orthonormal basis of a symmetric matrix.

    Cyclic Jacobi: sweep all (i, j) pairs, each rotation annihilating one
    off-diagonal entry; stop when the off-diagonal Frobenius mass falls
    below 1e-14 * ||S||_F.  Raises NumericalError with the remaining
    residual if max_sweeps sweeps do not get there.
    """
    s_mat = np.asarray(s_mat, dtype=float)
    if s_mat.ndim != 2 or s_mat.shape[0] != s_mat.shape[1] or s_mat.shape[0] < 1:
        raise ValidationError("matrix must be square with p >= 1")
    if not np.isfinite(s_mat).all():
        raise ValidationError("matrix entries must be finite")
    if not np.array_equal(s_mat, s_mat.T):
        raise ValidationError("matrix must be exactly symmetric; apply symmetrize() first")

    p = s_mat.shape[0]
    a = s_mat.copy()
    u = np.eye(p)
    tol = 1e-14 * float(np.linalg.norm(s_mat))  # rotations preserve the Frobenius norm

    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= tol:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                apq = float(a[i, j])
                if apq == 0.0:
                    continue
                # plain C-double arithmetic: theta may overflow to inf for a
                # tiny pivot, which cleanly gives t = 0 below
                theta = 0.5 * (float(a[j, j]) - float(a[i, i])) / apq
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # two-sided rotation J'AJ applied as columns then rows; the
                # identical update expressions keep A exactly symmetric
                col_i = a[:, i].copy()
                col_j = a[:, j].copy()
                a[:, i] = c * col_i - s * col_j
                a[:, j] = s * col_i + c * col_j
                row_i = a[i, :].copy()
                row_j = a[j, :].copy()
                a[i, :] = c * row_i - s * row_j
                a[j, :] = s * row_i + c * row_j
                a[i, j] = 0.0
                a[j, i] = 0.0
                u_i = u[:, i].copy()
                u_j = u[:, j].copy()
                u[:, i] = c * u_i - s * u_j
                u[:, j] = s * u_i + c * u_j
    else:
        off = _offdiag_norm(a)
        if off > tol:
            raise NumericalError(
                "Jacobi iteration did not converge in %d sweeps" % max_sweeps, residual=off
            )

    d = np.diag(a).copy()
    order = np.argsort(-d, kind="stable")
    return d[order], u[:, order]


def reduce(form: QuadraticForm) -> SpectralReduction:
    """Full reduction: symmetrize, diagonalize, rotate the linear term."""
    if not isinstance(form, QuadraticForm):
        raise ValidationError("reduce expects a QuadraticForm")
    s, u = eigen_sym(symmetrize(form))
    return SpectralReduction(eigenvalues=s, basis=u, rotated_b=u.T @ form.b)
