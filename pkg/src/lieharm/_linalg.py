"""Small dense linear-algebra kernel with a float and an exact-rational mode.

Every numerical decision the toolkit makes (ranks, nullspaces, definiteness,
solvability) funnels through this module so that tolerance policy lives in
exactly one place.

Float mode works on ``float64`` arrays and is backed by numpy/scipy
factorizations.  Exact mode works on numpy object arrays whose entries are
:class:`fractions.Fraction`; ranks and memberships are then decided exactly,
which is what the catalog verification uses to pin down integer invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg


class LinAlgDomainError(ValueError):
    """Input violates a documented precondition (shape, symmetry, ...)."""


class InfeasibleSystem(LinAlgDomainError):
    """A linear system has no solution within tolerance."""


class ExactModeUnsupported(LinAlgDomainError):
    """The requested operation has no exact-rational implementation."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by all rank/zero decisions.

    A quantity x is treated as zero relative to a scale s when
    ``|x| <= abs + rel * s``.
    """

    abs: float = 1e-9
    rel: float = 1e-9

    def threshold(self, scale: float = 0.0) -> float:
        return self.abs + self.rel * float(scale)

    def scaled(self, factor: float) -> "Tolerance":
        return Tolerance(self.abs * factor, self.rel * factor)


DEFAULT_TOL = Tolerance()


def is_exact(a: np.ndarray) -> bool:
    """True when the array carries exact (Fraction) scalars."""
    return a.dtype == object


def as_matrix(data, exact: bool = False) -> np.ndarray:
    """Coerce nested sequences to a kernel array in the requested mode."""
    if exact:
        arr = np.empty(np.shape(data), dtype=object)
        flat = arr.reshape(-1)
        for k, v in enumerate(np.asarray(data, dtype=object).reshape(-1)):
            flat[k] = Fraction(v)
        return arr
    return np.asarray(data, dtype=float)


def zeros(shape, exact: bool = False) -> np.ndarray:
    if exact:
        arr = np.empty(shape, dtype=object)
        arr.reshape(-1)[:] = [Fraction(0)] * arr.size
        return arr
    return np.zeros(shape)


def eye(n: int, exact: bool = False) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float)


# ---------------------------------------------------------------------------
# exact-mode elimination helpers
# ---------------------------------------------------------------------------


def _rref(m: np.ndarray):
    """Reduced row echelon form over Fractions; returns (rref, pivot cols)."""
    a = m.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i, c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def exact_nullspace(m: np.ndarray) -> np.ndarray:
    """Exact basis (columns) of the kernel of a Fraction matrix."""
    rows, cols = m.shape
    red, pivots = _rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((cols, len(free)), exact=True)
    for k, fc in enumerate(free):
        basis[fc, k] = Fraction(1)
        for r, pc in enumerate(pivots):
            basis[pc, k] = -red[r, fc]
    return basis


def exact_solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact particular solution of m x = b; raises if inconsistent."""
    rows, cols = m.shape
    aug = zeros((rows, cols + 1), exact=True)
    aug[:, :cols] = m
    aug[:, cols] = b
    red, pivots = _rref(aug)
    if cols in pivots:
        raise InfeasibleSystem("exact linear system is inconsistent")
    x = zeros(cols, exact=True)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, cols]
    return x


def exact_inv(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    aug = zeros((n, 2 * n), exact=True)
    aug[:, :n] = m
    aug[:, n:] = eye(n, exact=True)
    red, pivots = _rref(aug)
    if pivots[: n] != list(range(n)):
        raise LinAlgDomainError("exact matrix is singular")
    return red[:, n:]


def _exact_is_pd(m: np.ndarray) -> bool:
    """Sylvester criterion: all leading principal minors positive."""
    n = m.shape[0]
    a = m.copy()
    # fraction-free-ish LU; det of leading block is the pivot product
    det = Fraction(1)
    for k in range(n):
        if a[k, k] == 0:
            return False
        det *= a[k, k]
        if det <= 0:
            return False
        for i in range(k + 1, n):
            a[i, k + 1 :] = a[i, k + 1 :] - (a[i, k] / a[k, k]) * a[k, k + 1 :]
    return True


# ---------------------------------------------------------------------------
# public kernel operations
# ---------------------------------------------------------------------------


def nullspace(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Basis (columns) of the numerical kernel of ``m``.

    Float mode: SVD; a singular value sigma_i counts as zero when
    ``sigma_i < tol.rel * sigma_max + tol.abs`` and the returned basis is
    orthonormal.  Exact mode: reduced row echelon elimination; the basis is
    exact but not orthonormal.
    """
    if is_exact(m):
        return exact_nullspace(m)
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return np.eye(m.shape[1])[:, : m.shape[1]]
    _, s, vh = np.linalg.svd(m)
    smax = s[0] if s.size else 0.0
    thr = tol.rel * smax + tol.abs
    rank = int(np.sum(s >= thr))
    return vh[rank:].T.copy()


def rank(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    return m.shape[1] - nullspace(m, tol).shape[1]


def solve_linear(m: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Least-squares solution of ``m x = b``; raises InfeasibleSystem if the
    residual exceeds ``tol.abs + tol.rel * |b|``."""
    if is_exact(m):
        return exact_solve(m, b)
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    x, *_ = np.linalg.lstsq(m, b, rcond=None)
    resid = np.linalg.norm(m @ x - b)
    if resid > tol.threshold(np.linalg.norm(b)):
        raise InfeasibleSystem(
            f"linear system unsolvable: residual {resid:.3e} above tolerance"
        )
    return x


def is_positive_definite(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Symmetric positive-definiteness test.

    Rejects (raises) matrices that are not square or not symmetric within
    tolerance; returns False for symmetric-but-indefinite input.
    """
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinAlgDomainError("definiteness test needs a square matrix")
    if m.shape[0] == 0:
        return True  # vacuously definite; arises for trivial subspaces
    if is_exact(m):
        if not np.array_equal(m, m.T):
            raise LinAlgDomainError("matrix is not symmetric")
        return _exact_is_pd(m)
    m = np.asarray(m, dtype=float)
    scale = np.linalg.norm(m) or 1.0
    if np.linalg.norm(m - m.T) > tol.threshold(scale):
        raise LinAlgDomainError("matrix is not symmetric within tolerance")
    eigs = np.linalg.eigvalsh(0.5 * (m + m.T))
    return bool(eigs.min() > tol.abs)


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    Float mode delegates to scipy's scaling-and-squaring implementation.
    Exact mode supports nilpotent matrices only (the power series
    terminates and is evaluated exactly); anything else raises.
    """
    if is_exact(m):
        n = m.shape[0]
        term = eye(n, exact=True)
        out = eye(n, exact=True)
        for k in range(1, n + 1):
            term = term @ m / Fraction(k)
            if not term.any():
                return out
            out = out + term
        raise ExactModeUnsupported(
            "exact matrix_exp is only available for nilpotent matrices"
        )
    return scipy.linalg.expm(np.asarray(m, dtype=float))


def orthonormal_basis(gram: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Columns b_i with <b_i, b_j>_gram = delta_ij, via Gram factorization.

    Eigendecomposition of the Gram matrix (never Gram-Schmidt): with
    G = V diag(lam) V^T the basis is B = V diag(lam^-1/2), so B^T G B = I.
    Raises for Grams that are not positive definite.
    """
    if is_exact(gram):
        raise ExactModeUnsupported(
            "orthonormal bases have irrational entries in general; "
            "use metric contractions in exact mode"
        )
    if not is_positive_definite(gram, tol):
        raise LinAlgDomainError("Gram matrix is not positive definite")
    lam, vec = np.linalg.eigh(np.asarray(gram, dtype=float))
    return vec @ np.diag(lam**-0.5)


def orthonormalize_in_metric(
    vectors: np.ndarray, gram: np.ndarray, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Orthonormalize the (independent) columns of ``vectors`` w.r.t. ``gram``.

    Same Gram-factorization route applied to the restricted Gram
    V^T G V; returns V' with V'^T G V' = I and the same column span.
    """
    if vectors.shape[1] == 0:
        return vectors
    restricted = vectors.T @ gram @ vectors
    return vectors @ orthonormal_basis(restricted, tol)


def inv(m: np.ndarray) -> np.ndarray:
    if is_exact(m):
        return exact_inv(m)
    return np.linalg.inv(np.asarray(m, dtype=float))


def span_residual(basis: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Component of ``vec`` outside the column span of ``basis``.

    Uses plain least squares (float) or exact normal equations; never raises
    for vectors outside the span — callers inspect the returned residual.
    """
    if basis.shape[1] == 0:
        return vec
    if is_exact(basis):
        coeff = exact_solve(basis.T @ basis, basis.T @ vec)
    else:
        coeff, *_ = np.linalg.lstsq(
            np.asarray(basis, dtype=float), np.asarray(vec, dtype=float), rcond=None
        )
    return vec - basis @ coeff


def norm(v) -> float:
    """Euclidean norm usable in both modes (exact values go through float)."""
    return float(np.linalg.norm(np.asarray(v, dtype=float)))


def metric_norm(v: np.ndarray, gram: np.ndarray) -> float:
    return float(np.sqrt(max(float(v @ gram @ v), 0.0)))
