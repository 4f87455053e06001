"""Inner-automorphism harmonicity and the cone of harmonically reachable metrics.

For an automorphism ``Phi`` of a Euclidean Lie algebra, the trace form
``u -> tr(Phi^* ad_u Phi)`` is the obstruction to the corresponding inner
isometry being harmonic: on a unimodular algebra its metric dual is exactly
the tension of ``Phi`` as a self-map.

For a fixed metric ``g``, the *harmonic cone* collects the metrics ``h``
with ``h(u,v) = g(Ju,v)`` whose identity map from ``g`` is harmonic.  The
membership condition on the operator ``J`` is linear:

    tr(J ad_u) = tr(ad_{Ju})   for all u,

intersected with metric-symmetry ``gram J = J^T gram``; the cone is the
positive-definite part of that solution space and its *dimension* is the
dimension of the linear span.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import _linalg as la
from ._linalg import DEFAULT_TOL, Tolerance
from .core import CrossCheckError, EuclideanLieAlgebra
from .maps import LieAlgebraMap, tension


class ConeError(ValueError):
    """Input unusable for automorphism/cone analysis."""


def _float(v) -> np.ndarray:
    return np.asarray(v, dtype=float)


@dataclass(frozen=True)
class Automorphism:
    """An invertible, bracket-preserving operator on a Euclidean Lie algebra.

    The bracket-preservation check runs at 100x the base tolerance: typical
    inputs come out of matrix exponentials, whose round-off is larger than
    that of exact structure data.
    """

    base: EuclideanLieAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        n = self.base.dim
        if m.ndim != 2 or m.shape != (n, n):
            raise ConeError(f"automorphism matrix must be {n} x {n}")
        if la.is_exact(m) != self.base.exact:
            raise ConeError("automorphism and algebra must use the same scalar mode")

    def defect(self) -> float:
        return self.as_map().hom_defect()

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        if la.rank(_float(self.matrix), tol) != self.base.dim:
            raise ConeError("automorphism matrix is singular")
        nphi = la.norm(self.matrix)
        scale = 1.0 + la.norm(self.base.alg.c) * (nphi + nphi ** 2)
        d = self.defect()
        if d > 100.0 * tol.threshold(scale):
            raise ConeError(
                f"matrix does not preserve the bracket (defect {d:.3e})"
            )

    def as_map(self) -> LieAlgebraMap:
        """The operator as a self-map with equal source and target metric."""
        return LieAlgebraMap(self.base, self.base, self.matrix, name="automorphism")


def exp_adjoint(ela: EuclideanLieAlgebra, u, tol: Tolerance = DEFAULT_TOL) -> Automorphism:
    """The automorphism exp(ad_u), the differential of conjugation by exp(u)."""
    phi = la.matrix_exp(ela.ad(u))
    return Automorphism(ela, phi)


def automorphism_trace_form(adj: Automorphism, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Covector with components tr(Phi^* ad_{b_k} Phi) in the basis.

    Its vanishing characterizes harmonicity of the inner isometry attached
    to ``Phi`` on a unimodular algebra.
    """
    adj.validate(tol)
    base = adj.base
    phi = adj.matrix
    phi_star = base.gram_inv @ phi.T @ base.gram
    out = la.zeros(base.dim, base.exact)
    for k in range(base.dim):
        out[k] = np.trace(phi_star @ base.ad(base.basis(k)) @ phi)
    return out


def inner_tension(adj: Automorphism, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Tension of the automorphism as a self-map (same metric on both sides).

    Cross-checked against the trace form: the tension always equals
    ``gram^{-1} alpha - Phi(U)`` with ``alpha`` the trace-form covector and
    ``U`` the unimodularity vector (so for unimodular algebras it is the
    metric dual of the trace form).
    """
    adj.validate(tol)
    tau = tension(adj.as_map(), tol)
    alpha = automorphism_trace_form(adj, tol)
    base = adj.base
    expected = base.gram_inv @ alpha - adj.matrix @ base.unimodular_vector(tol)
    diff = la.norm(_float(tau) - _float(expected))
    if diff > 10.0 * tol.threshold(1.0 + la.norm(tau) + la.norm(alpha)):
        raise CrossCheckError(
            f"inner tension and trace-form dual disagree by {diff:.3e}"
        )
    return tau


# ---------------------------------------------------------------------------
# the special-linear rank-one family
# ---------------------------------------------------------------------------

#: structure constants of the trace-free 2x2 matrices on the basis
#: (h, e, f) = (diag(1,-1), upper shift, lower shift):
#: [h,e] = 2e, [h,f] = -2f, [e,f] = h.
SL2_BRACKETS = {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}


def sl2_adjoint_matrix(entries: Sequence[float], exact: bool = False) -> np.ndarray:
    """Conjugation by [[a,b],[c,d]] on the (h, e, f) basis (determinant 1)."""
    a, b, c, d = entries
    rows = [
        [a * d + b * c, -a * c, b * d],
        [-2 * a * b, a * a, -b * b],
        [2 * c * d, -c * c, d * d],
    ]
    return la.as_matrix(rows, exact)


def sl2_residuals(entries: Sequence[float], alphas: Sequence[float],
                  tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """The three harmonicity residuals for conjugation by [[a,b],[c,d]] on
    the trace-free 2x2 matrices with metric diag(alpha1, alpha2, alpha3)
    in the (h, e, f) basis.  All three vanish exactly when the inner
    isometry is harmonic.
    """
    a, b, c, d = entries
    a1, a2, a3 = alphas
    if not (float(a1) > 0 and float(a2) > 0 and float(a3) > 0):
        raise ConeError("metric parameters must be positive")
    det = a * d - b * c
    if abs(float(det) - 1.0) > tol.threshold(1.0 + abs(float(a * d)) + abs(float(b * c))):
        raise ConeError(f"matrix determinant must be 1, got {float(det)!r}")
    a21, a31 = a2 / a1, a3 / a1
    a23, a32 = a2 / a3, a3 / a2
    a12, a13 = a1 / a2, a1 / a3
    r1 = 8 * (a ** 2 * b ** 2 * a21 - c ** 2 * d ** 2 * a31) + 2 * (
        a ** 4 - d ** 4 + b ** 4 * a23 - c ** 4 * a32
    )
    r2 = (
        2 * (a * d + b * c) * (2 * a * b * a21 + c * d)
        + a * c * (c ** 2 * a12 + 2 * a ** 2)
        + b * d * (d ** 2 * a13 + 2 * b ** 2 * a23)
    )
    r3 = (
        2 * (a * d + b * c) * (a * b + 2 * c * d * a31)
        + a * c * (a ** 2 * a12 + 2 * c ** 2 * a32)
        + b * d * (b ** 2 * a13 + 2 * d ** 2)
    )
    from fractions import Fraction

    if any(isinstance(x, Fraction) for x in (r1, r2, r3)):
        arr = np.empty(3, dtype=object)
        arr[0], arr[1], arr[2] = r1, r2, r3
        return arr
    return np.array([r1, r2, r3], dtype=float)


# ---------------------------------------------------------------------------
# the harmonic cone
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeResult:
    """Linear hull of the harmonic cone of a metric.

    ``sym_basis`` spans the metric-symmetric operators J satisfying the
    trace condition; the cone itself is the positive-definite subset, whose
    interior contains ``sample_interior`` (always the identity operator).
    """

    sym_basis: List[np.ndarray]
    dimension: int
    sample_interior: np.ndarray


def _cone_constraints(ela: EuclideanLieAlgebra) -> np.ndarray:
    """Rows of the joint linear system on vec(J) (C-order flattening)."""
    n = ela.dim
    g = ela.gram
    exact = ela.exact
    rows = []
    # metric symmetry: (gram J - J^T gram)_{ab} = 0
    for aa in range(n):
        for bb in range(aa + 1, n):
            row = la.zeros(n * n, exact)
            for cc in range(n):
                row[cc * n + bb] = row[cc * n + bb] + g[aa, cc]
                row[cc * n + aa] = row[cc * n + aa] - g[cc, bb]
            rows.append(row)
    # trace identity: tr(J ad_k) - tr(ad_{J b_k}) = 0
    ad_traces = [np.trace(ela.ad(ela.basis(m))) for m in range(n)]
    for k in range(n):
        adk = ela.ad(ela.basis(k))
        row = la.zeros(n * n, exact)
        for aa in range(n):
            for bb in range(n):
                row[aa * n + bb] = row[aa * n + bb] + adk[bb, aa]
        for m in range(n):
            row[m * n + k] = row[m * n + k] - ad_traces[m]
        rows.append(row)
    return np.stack(rows, axis=0)


def harmonic_cone(ela: EuclideanLieAlgebra, tol: Tolerance = DEFAULT_TOL) -> ConeResult:
    """Solve the joint linear system for the harmonic cone's linear hull.

    The identity operator always solves it (a metric reaches itself); its
    absence from the computed span would mean a solver failure and raises
    :class:`~lieharm.core.CrossCheckError`.
    """
    n = ela.dim
    system = _cone_constraints(ela)
    basis_vecs = la.nullspace(system, tol)
    dim = basis_vecs.shape[1]
    eye_vec = la.eye(n, ela.exact).reshape(-1)
    resid = la.norm(la.span_residual(basis_vecs, eye_vec))
    if resid > 10.0 * tol.threshold(1.0 + np.sqrt(n)):
        raise CrossCheckError(
            f"identity operator missing from the harmonic-cone span "
            f"(residual {resid:.3e})"
        )
    mats = [basis_vecs[:, k].reshape(n, n) for k in range(dim)]
    return ConeResult(sym_basis=mats, dimension=dim,
                      sample_interior=la.eye(n, ela.exact))


def harmonic_dimension_check(ela: EuclideanLieAlgebra,
                             tol: Tolerance = DEFAULT_TOL) -> Tuple[int, int]:
    """(measured, predicted) harmonic dimension of a unimodular algebra.

    ``predicted = n(n-1)/2 + dim Kill`` (the count of metric-symmetric
    operators vs. independent trace constraints).  Disagreement raises
    :class:`~lieharm.core.CrossCheckError`; non-unimodular input raises
    :class:`ConeError`.
    """
    if not ela.is_unimodular(tol):
        raise ConeError("the dimension formula applies to unimodular algebras")
    measured = harmonic_cone(ela, tol).dimension
    n = ela.dim
    predicted = n * (n - 1) // 2 + ela.killing_subalgebra(tol).shape[1]
    if measured != predicted:
        raise CrossCheckError(
            f"harmonic dimension mismatch: measured {measured}, "
            f"formula gives {predicted}"
        )
    return measured, predicted


def cone_membership(ela: EuclideanLieAlgebra, j, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the metric ``h(u,v) = g(Ju,v)`` is harmonically reachable
    from ``g``: J must satisfy the trace identity and be positive definite.

    ``J`` must be symmetric w.r.t. the metric (``gram J = J^T gram``);
    otherwise ``h`` is not even a bilinear metric candidate and a
    :class:`ConeError` is raised.
    """
    jm = la.as_matrix(j, ela.exact) if not isinstance(j, np.ndarray) else j
    n = ela.dim
    if jm.shape != (n, n):
        raise ConeError(f"operator must be {n} x {n}")
    g = ela.gram
    gj = g @ jm
    sym_defect = la.norm(_float(gj) - _float(gj).T)
    if sym_defect > tol.threshold(1.0 + la.norm(g) * la.norm(jm)):
        raise ConeError(
            f"operator is not symmetric w.r.t. the metric (defect {sym_defect:.3e})"
        )
    worst = 0.0
    for k in range(n):
        lhs = np.trace(jm @ ela.ad(ela.basis(k)))
        rhs = np.trace(ela.ad(jm @ ela.basis(k)))
        worst = max(worst, abs(float(lhs - rhs)))
    scale = 1.0 + la.norm(jm) * la.norm(ela.alg.c)
    if worst > tol.threshold(scale):
        return False
    sym = (_float(gj) + _float(gj).T) / 2.0
    if ela.exact:
        return la.is_positive_definite(gj, tol)
    return la.is_positive_definite(sym, tol)
