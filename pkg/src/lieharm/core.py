"""Euclidean Lie algebras: structure constants, metrics and their geometry.

A Lie algebra is stored through its structure tensor ``c`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``; a Euclidean Lie algebra pairs it with
a positive-definite Gram matrix.  From those two tensors everything else is
derived: the Levi-Civita product, curvature, the Ricci operator, the
unimodularity vector, Killing directions, second fundamental forms of
subalgebras and quotient metrics.

Two conventions are fixed once and used everywhere:

* the Levi-Civita product ``A`` satisfies the polarization identity
  ``2 <A_u v, w> = <[u,v],w> + <[w,u],v> + <[w,v],u>``;
* curvature is ``K(u,v) = [A_u, A_v] - A_[u,v]`` and the Ricci operator is
  ``ric(u) = sum_i K(u, e_i) e_i`` over any orthonormal basis.

Quantities defined as a sum of a bilinear expression over an orthonormal
basis are computed by the equivalent metric contraction
``sum_ij (G^-1)_ij expr(e_i, e_j)`` — identical for every orthonormal basis
and exact in rational mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _linalg as la
from ._linalg import DEFAULT_TOL, Tolerance


class StructureError(ValueError):
    """The provided structure data does not define a Lie algebra."""


class MetricError(ValueError):
    """The provided inner product is unusable (not symmetric PD, wrong size)."""


class CrossCheckError(RuntimeError):
    """Two independent formulas for the same quantity disagreed.

    This never indicates bad user input: it means an internal identity was
    violated, so computations abort rather than return a silently wrong
    value.
    """


def _check_cross(name: str, a, b, gram, tol: Tolerance) -> None:
    diff = la.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    scale = 1.0 + la.norm(a) + la.norm(b)
    if diff > 10.0 * tol.threshold(scale):
        raise CrossCheckError(
            f"{name}: independent formulas disagree by {diff:.3e} (scale {scale:.3e})"
        )


@dataclass(frozen=True)
class LieAlgebra:
    """A finite-dimensional real Lie algebra given by structure constants.

    ``c[i, j, k]`` is the ``e_k`` coefficient of ``[e_i, e_j]``.  Only the
    ``i < j`` part of the tensor is trusted; the rest is rebuilt by
    antisymmetry, which removes a whole class of inconsistent-input errors.
    """

    c: np.ndarray
    name: str = ""

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return la.is_exact(self.c)

    @staticmethod
    def from_brackets(dim: int, brackets, name: str = "", exact: bool = False,
                      validate: bool = True, tol: Tolerance = DEFAULT_TOL) -> "LieAlgebra":
        """Build from a ``{(i, j): coefficient-vector}`` mapping with i < j."""
        c = la.zeros((dim, dim, dim), exact)
        for (i, j), vec in brackets.items():
            if not 0 <= i < j < dim:
                raise StructureError(f"bracket key ({i},{j}) needs 0 <= i < j < dim")
            row = la.as_matrix(vec, exact)
            c[i, j, :] = row
            c[j, i, :] = -row
        alg = LieAlgebra(c, name)
        if validate and not check_jacobi(alg, tol):
            raise StructureError(f"structure constants of {name or 'algebra'} violate Jacobi")
        return alg

    @staticmethod
    def from_tensor(c, name: str = "", exact: bool = False, validate: bool = True,
                    tol: Tolerance = DEFAULT_TOL) -> "LieAlgebra":
        """Build from a full tensor; antisymmetry is checked then enforced."""
        arr = la.as_matrix(c, exact)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise StructureError("structure tensor must be n x n x n")
        skew_defect = la.norm(np.asarray(arr, dtype=float) + np.asarray(arr, dtype=float).transpose(1, 0, 2))
        if skew_defect > tol.threshold(1.0 + la.norm(arr)):
            raise StructureError(f"structure tensor not antisymmetric (defect {skew_defect:.3e})")
        dim = arr.shape[0]
        fixed = la.zeros((dim, dim, dim), exact)
        for i in range(dim):
            for j in range(i + 1, dim):
                fixed[i, j, :] = arr[i, j, :]
                fixed[j, i, :] = -arr[i, j, :]
        alg = LieAlgebra(fixed, name)
        if validate and not check_jacobi(alg, tol):
            raise StructureError(f"structure constants of {name or 'algebra'} violate Jacobi")
        return alg

    def bracket(self, u, v) -> np.ndarray:
        """[u, v] in basis coordinates."""
        u = np.asarray(u)
        v = np.asarray(v)
        return np.einsum("i,j,ijk->k", u, v, self.c)

    def ad(self, u) -> np.ndarray:
        """Matrix of ad_u = [u, .]."""
        return np.einsum("i,ijk->kj", np.asarray(u), self.c)

    def basis(self, i: int) -> np.ndarray:
        e = la.zeros(self.dim, self.exact)
        e[i] = Fraction(1) if self.exact else 1.0
        return e

    def derived_subspace(self) -> np.ndarray:
        """Columns spanning [g, g] (not necessarily independent)."""
        cols = [self.c[i, j, :] for i in range(self.dim) for j in range(i + 1, self.dim)]
        if not cols:
            return la.zeros((self.dim, 0), self.exact)
        return np.stack(cols, axis=1)


def jacobi_defect(alg: LieAlgebra) -> float:
    """Largest norm of a cyclic Jacobi sum over basis triples."""
    worst = 0.0
    for i in range(alg.dim):
        ei = alg.basis(i)
        for j in range(i + 1, alg.dim):
            ej = alg.basis(j)
            for k in range(j + 1, alg.dim):
                ek = alg.basis(k)
                s = (
                    alg.bracket(alg.bracket(ei, ej), ek)
                    + alg.bracket(alg.bracket(ej, ek), ei)
                    + alg.bracket(alg.bracket(ek, ei), ej)
                )
                worst = max(worst, la.norm(s))
    return worst


def check_jacobi(alg: LieAlgebra, tol: Tolerance = DEFAULT_TOL) -> bool:
    scale = 1.0 + la.norm(alg.c) ** 2
    return jacobi_defect(alg) <= tol.threshold(scale)


@dataclass(frozen=True)
class InnerProduct:
    """Positive-definite Gram matrix in the algebra basis."""

    gram: np.ndarray

    def __post_init__(self):
        g = self.gram
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise MetricError("Gram matrix must be square")
        try:
            ok = la.is_positive_definite(g, DEFAULT_TOL)
        except la.LinAlgDomainError as exc:
            raise MetricError(str(exc)) from exc
        if not ok:
            raise MetricError("inner product is not positive definite")

    @staticmethod
    def identity(dim: int, exact: bool = False) -> "InnerProduct":
        return InnerProduct(la.eye(dim, exact))

    @staticmethod
    def of(data, exact: bool = False) -> "InnerProduct":
        return InnerProduct(la.as_matrix(data, exact))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def pair(self, u, v):
        return (np.asarray(u) @ self.gram @ np.asarray(v))

    def norm(self, u) -> float:
        return la.metric_norm(np.asarray(u, dtype=float), np.asarray(self.gram, dtype=float))


class EuclideanLieAlgebra:
    """A Lie algebra together with an inner product.

    Derived data (inverse Gram, Levi-Civita product) is memoized on the
    instance; the underlying tensors are never mutated after construction,
    so concurrent readers are safe.
    """

    def __init__(self, alg: LieAlgebra, inner: InnerProduct, name: str = ""):
        if alg.dim != inner.dim:
            raise MetricError("metric dimension does not match the algebra")
        if alg.exact != la.is_exact(inner.gram):
            raise MetricError("algebra and metric must use the same scalar mode")
        self.alg = alg
        self.inner = inner
        self.name = name or alg.name
        self._gram_inv = None
        self._levi_civita = None
        self._unimodular = None

    # -- structural passthroughs ------------------------------------------

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def exact(self) -> bool:
        return self.alg.exact

    @property
    def gram(self) -> np.ndarray:
        return self.inner.gram

    @property
    def gram_inv(self) -> np.ndarray:
        if self._gram_inv is None:
            self._gram_inv = la.inv(self.inner.gram)
        return self._gram_inv

    def bracket(self, u, v) -> np.ndarray:
        return self.alg.bracket(u, v)

    def ad(self, u) -> np.ndarray:
        return self.alg.ad(u)

    def ad_star(self, u) -> np.ndarray:
        """Metric adjoint of ad_u: the matrix M with <ad_u v, w> = <v, M w>."""
        return self.gram_inv @ self.ad(u).T @ self.gram

    def pair(self, u, v):
        return self.inner.pair(u, v)

    def norm(self, u) -> float:
        return self.inner.norm(u)

    def basis(self, i: int) -> np.ndarray:
        return self.alg.basis(i)

    def metric_trace(self, expr) -> np.ndarray:
        """sum_i expr(b_i, b_i) over an orthonormal basis, as the contraction
        sum_ij (G^-1)_ij expr(e_i, e_j) (basis independent, exact-safe)."""
        ginv = self.gram_inv
        n = self.dim
        out = None
        for i in range(n):
            for j in range(n):
                w = ginv[i, j]
                if w == 0:
                    continue
                term = w * expr(self.basis(i), self.basis(j))
                out = term if out is None else out + term
        return out if out is not None else la.zeros(n, self.exact)

    # -- first-order geometry ---------------------------------------------

    def unimodular_vector(self, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        """The vector U with <U, v> = tr(ad_v) for every v.

        Cross-checked against the independent expression
        sum_i A_{e_i} e_i over an orthonormal basis; disagreement raises
        :class:`CrossCheckError`.
        """
        if self._unimodular is None:
            traces = la.zeros(self.dim, self.exact)
            for i in range(self.dim):
                traces[i] = np.trace(self.ad(self.basis(i)))
            by_trace = self.gram_inv @ traces
            lc = self.levi_civita()
            by_product = self.metric_trace(lambda u, v: lc.product(u, v))
            _check_cross("unimodular vector", by_trace, by_product, self.gram, tol)
            self._unimodular = by_trace
        return self._unimodular

    def is_unimodular(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        u = self.unimodular_vector(tol)
        return la.norm(u) <= tol.threshold(1.0 + la.norm(self.alg.c))

    def levi_civita(self) -> "LeviCivitaProduct":
        if self._levi_civita is None:
            self._levi_civita = LeviCivitaProduct._build(self)
        return self._levi_civita

    # -- curvature ----------------------------------------------------------

    def curvature(self, u, v) -> np.ndarray:
        """Matrix of w -> K(u,v)w with K(u,v) = [A_u, A_v] - A_[u,v]."""
        lc = self.levi_civita()
        au = lc.operator(u)
        av = lc.operator(v)
        return au @ av - av @ au - lc.operator(self.bracket(u, v))

    def ricci_operator(self) -> np.ndarray:
        """Matrix of ric(u) = sum_i K(u, b_i) b_i over an orthonormal basis."""
        cols = []
        for k in range(self.dim):
            ek = self.basis(k)
            cols.append(self.metric_trace(lambda u, v, ek=ek: self.curvature(ek, u) @ v))
        return np.stack(cols, axis=1)

    # -- distinguished subspaces -------------------------------------------

    def killing_subalgebra(self, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        """Columns spanning {u : ad_u + ad_u* = 0}.

        These are the directions whose left-invariant fields are Killing.
        The result is checked to be closed under the bracket.
        """
        n = self.dim
        stacked = la.zeros((n * n, n), self.exact)
        for i in range(n):
            sym = self.ad(self.basis(i)) + self.ad_star(self.basis(i))
            stacked[:, i] = sym.reshape(-1)
        basis = la.nullspace(stacked, tol)
        scale = 1.0 + la.norm(self.alg.c)
        for a in range(basis.shape[1]):
            for b in range(a + 1, basis.shape[1]):
                br = self.bracket(basis[:, a], basis[:, b])
                if la.norm(la.span_residual(basis, br)) > 10.0 * tol.threshold(scale):
                    raise CrossCheckError("Killing directions are not bracket-closed")
        return basis

    def is_biinvariant(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        """True when every ad_u is skew, i.e. the Killing space is everything."""
        return self.killing_subalgebra(tol).shape[1] == self.dim

    def orthonormal_frame(self, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        return la.orthonormal_basis(np.asarray(self.gram, dtype=float), tol)


class LeviCivitaProduct:
    """The bilinear product A with A_u v - A_v u = [u,v] and skew A_u.

    ``table[i][j]`` holds A_{e_i} e_j in coordinates; ``operator(u)`` gives
    the matrix of v -> A_u v.
    """

    def __init__(self, ela: EuclideanLieAlgebra, table: np.ndarray):
        self.ela = ela
        self.table = table

    @staticmethod
    def _build(ela: EuclideanLieAlgebra) -> "LeviCivitaProduct":
        n = ela.dim
        g = ela.gram
        c = ela.alg.c
        # 2 <A_i j, k> = <[i,j],k> + <[k,i],j> + <[k,j],i>
        cov = np.einsum("ijl,lk->ijk", c, g)
        rhs = cov + np.transpose(cov, (1, 2, 0)) + np.transpose(cov, (2, 1, 0))
        ginv = ela.gram_inv
        half = Fraction(1, 2) if ela.exact else 0.5
        table = half * np.einsum("ijl,lk->ijk", rhs, ginv.T)
        return LeviCivitaProduct(ela, table)

    def product(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u), np.asarray(v), self.table)

    def operator(self, u) -> np.ndarray:
        """Matrix of v -> A_u v."""
        return np.einsum("i,ijk->kj", np.asarray(u), self.table)

    def torsion_defect(self) -> float:
        t = self.table - np.transpose(self.table, (1, 0, 2)) - self.ela.alg.c
        return la.norm(t)

    def compatibility_defect(self) -> float:
        """max |<A_u v, w> + <v, A_u w>| over basis triples."""
        g = np.asarray(self.ela.gram, dtype=float)
        tab = np.asarray(self.table, dtype=float)
        cov = np.einsum("ijl,lk->ijk", tab, g)
        return float(np.abs(cov + np.transpose(cov, (0, 2, 1))).max())


# ---------------------------------------------------------------------------
# subalgebras
# ---------------------------------------------------------------------------


@dataclass
class Subalgebra:
    """A bracket-closed subspace of a Euclidean Lie algebra.

    ``basis`` columns live in parent coordinates.  Closure is validated at
    construction; the induced metric is the restriction of the parent one.
    """

    parent: EuclideanLieAlgebra
    basis: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self):
        b = self.basis
        if b.ndim != 2 or b.shape[0] != self.parent.dim:
            raise StructureError("subalgebra basis must be parent-dim x k columns")
        if la.rank(np.asarray(b, dtype=float), self.tol) != b.shape[1]:
            raise StructureError("subalgebra basis columns are dependent")
        scale = 1.0 + la.norm(self.parent.alg.c) * la.norm(b) ** 2
        for i in range(b.shape[1]):
            for j in range(i + 1, b.shape[1]):
                br = self.parent.bracket(b[:, i], b[:, j])
                if la.norm(la.span_residual(b, br)) > 10 * self.tol.threshold(scale):
                    raise StructureError("subspace is not closed under the bracket")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def induced(self) -> EuclideanLieAlgebra:
        """The subalgebra as a Euclidean Lie algebra in its own basis."""
        b = self.basis
        k = self.dim
        brackets = {}
        for i in range(k):
            for j in range(i + 1, k):
                br = self.parent.bracket(b[:, i], b[:, j])
                brackets[(i, j)] = la.solve_linear(b, br, self.tol.scaled(100.0))
        alg = LieAlgebra.from_brackets(k, brackets, exact=self.parent.exact, tol=self.tol.scaled(100.0))
        inner = InnerProduct(b.T @ self.parent.gram @ b)
        return EuclideanLieAlgebra(alg, inner)

    def inclusion_matrix(self) -> np.ndarray:
        return self.basis

    def tangential_projector(self) -> np.ndarray:
        """G-orthogonal projector of the parent onto the subspace."""
        b = self.basis
        g = self.parent.gram
        return b @ la.inv(b.T @ g @ b) @ b.T @ g


def second_fundamental(sub: Subalgebra, tol: Tolerance = DEFAULT_TOL):
    """Second fundamental form and mean curvature of a subalgebra.

    Returns ``(h, H)`` where ``h[i][j]`` is the normal component of
    A_{b_i} b_j (parent coordinates, b = the subalgebra basis columns) and
    ``H = sum_a h(u_a, u_a)`` over a basis orthonormal for the induced
    metric.  The tangential part of A is the induced Levi-Civita product,
    which is cross-checked.
    """
    parent = sub.parent
    lc = parent.levi_civita()
    b = sub.basis
    k = sub.dim
    proj = sub.tangential_projector()
    normal = la.eye(parent.dim, parent.exact) - proj
    h = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            h[i, j] = normal @ lc.product(b[:, i], b[:, j])

    induced = sub.induced()
    ind_lc = induced.levi_civita()
    for i in range(k):
        for j in range(k):
            tangential = proj @ lc.product(b[:, i], b[:, j])
            ind = b @ ind_lc.product(induced.basis(i), induced.basis(j))
            _check_cross("tangential Levi-Civita part", tangential, ind, parent.gram, tol)

    ginv_sub = la.inv(b.T @ parent.gram @ b)
    mean = la.zeros(parent.dim, parent.exact)
    for i in range(k):
        for j in range(k):
            w = ginv_sub[i, j]
            if w != 0:
                mean = mean + w * h[i, j]
    return h, mean


def quotient_metric(ela: EuclideanLieAlgebra, ideal: Subalgebra,
                    tol: Tolerance = DEFAULT_TOL):
    """Quotient algebra g/ideal with the metric making the projection a
    Riemannian submersion.

    The quotient is realized on the orthogonal complement of the ideal:
    the inverse of the projection restricted to that complement transports
    the parent metric.  Returns ``(quotient, section)`` where ``section``
    has the complement's orthonormal basis as columns (parent coordinates),
    so the projection map in coordinates is ``section^T G``.

    Raises StructureError if the subalgebra is not an ideal.
    """
    b = ideal.basis
    scale = 1.0 + la.norm(ela.alg.c) * (1.0 + la.norm(b)) ** 2
    for i in range(ela.dim):
        for j in range(b.shape[1]):
            br = ela.bracket(ela.basis(i), b[:, j])
            if la.norm(la.span_residual(b, br)) > 10.0 * tol.threshold(scale):
                raise StructureError("subalgebra is not an ideal")

    comp = la.nullspace(b.T @ ela.gram, tol)  # complement: <b_i, .>_G = 0
    if not ela.exact:
        comp = la.orthonormalize_in_metric(comp, np.asarray(ela.gram, dtype=float), tol)
    q = comp.shape[1]
    # coordinates of the projection: [w_i, w_j] = sum_a x_a w_a  mod ideal
    full = np.concatenate([comp, b], axis=1)
    brackets = {}
    for i in range(q):
        for j in range(i + 1, q):
            br = ela.bracket(comp[:, i], comp[:, j])
            brackets[(i, j)] = la.solve_linear(full, br, tol.scaled(100.0))[:q]
    alg = LieAlgebra.from_brackets(q, brackets, name=f"{ela.name}/ideal",
                                   exact=ela.exact, tol=tol.scaled(100.0))
    quotient = EuclideanLieAlgebra(
        alg, InnerProduct(comp.T @ ela.gram @ comp), name=f"{ela.name}/ideal"
    )
    return quotient, comp
