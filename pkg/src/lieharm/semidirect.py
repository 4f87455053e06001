"""Building Euclidean Lie algebras fibered over a base, and submersion recipes.

The construction data is a quadruple: a kernel algebra ``n`` with its metric,
a base algebra ``h`` with two metrics (domain side and target side), a linear
action ``rho: h -> End(n)`` by derivations, and an antisymmetric twist
``omega: h x h -> n``.  When the compatibility equations

* ``rho([h1,h2]) = [rho(h1), rho(h2)] - ad_{omega(h1,h2)}``
* the cyclic sum of ``rho(h1)(omega(h2,h3)) - omega([h1,h2],h3)`` vanishes

hold, the direct sum ``n (+) h`` carries a Lie bracket

* ``[u,v]``                               for u, v in n,
* ``rho(u)(v)``                           for u in h, v in n,
* ``[u,v]_h + omega(u,v)``                for u, v in h,

with the block metric, and the coordinate projection onto ``(h, <,>_2)`` is
a surjective homomorphism (a Riemannian submersion when the two base metrics
agree).  Its tension obeys

    tau(proj) = tau(Id_h) - H_rho,       <H_rho, u>_1 = tr(rho(u)),

which is verified on every build as a mutual oracle against the direct
tension computation.

The ``build_*`` recipe functions search for actions meeting the linear trace
constraints that make the projection harmonic or biharmonic; every recipe
output is re-certified by the independent tension/bitension machinery and
never trusts its own construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import _linalg as la
from ._linalg import DEFAULT_TOL, Tolerance
from .core import (
    CrossCheckError,
    EuclideanLieAlgebra,
    InnerProduct,
    LieAlgebra,
)
from .maps import LieAlgebraMap, MapClassification, classify, tension, validate_hom


class ConstructionError(ValueError):
    """The construction data is inconsistent or violates a precondition."""


class InfeasibleSearch(ConstructionError):
    """No admissible action was found within the sampling budget."""


def _float(v) -> np.ndarray:
    return np.asarray(v, dtype=float)


# ---------------------------------------------------------------------------
# construction data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemidirectData:
    """Kernel, base-with-two-metrics, action and twist.

    ``rho[k]`` is the operator of the k-th base basis vector on the kernel;
    ``omega[i, j]`` is the kernel-valued twist of the (i, j) base pair.
    Each ``rho[k]`` must be a derivation of the kernel bracket; ``omega``
    must be antisymmetric.  Both are validated here.
    """

    kernel: EuclideanLieAlgebra
    base: LieAlgebra
    inner_domain: InnerProduct
    inner_target: InnerProduct
    rho: np.ndarray
    omega: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self):
        if isinstance(self.base, EuclideanLieAlgebra):
            raise ConstructionError(
                "base must be a bare LieAlgebra: its domain/target metrics "
                "are carried separately by inner_domain and inner_target"
            )
        dn, dh = self.kernel.dim, self.base.dim
        if self.inner_domain.dim != dh or self.inner_target.dim != dh:
            raise ConstructionError("base metrics must match the base dimension")
        if self.rho.shape != (dh, dn, dn):
            raise ConstructionError(f"action tensor must be {dh} x {dn} x {dn}")
        if self.omega.shape != (dh, dh, dn):
            raise ConstructionError(f"twist tensor must be {dh} x {dh} x {dn}")
        skew = la.norm(_float(self.omega) + _float(self.omega).transpose(1, 0, 2))
        if skew > self.tol.threshold(1.0 + la.norm(self.omega)):
            raise ConstructionError(f"twist is not antisymmetric (defect {skew:.3e})")
        for k in range(dh):
            d = derivation_defect(self.kernel, self.rho[k])
            scale = 1.0 + la.norm(self.rho[k]) * la.norm(self.kernel.alg.c)
            if d > 10.0 * self.tol.threshold(scale):
                raise ConstructionError(
                    f"action of base vector {k} is not a derivation "
                    f"(defect {d:.3e})"
                )

    @property
    def dim_kernel(self) -> int:
        return self.kernel.dim

    @property
    def dim_base(self) -> int:
        return self.base.dim

    @property
    def exact(self) -> bool:
        return self.kernel.exact

    def base_domain(self) -> EuclideanLieAlgebra:
        """The base with the domain-side metric."""
        return EuclideanLieAlgebra(self.base, self.inner_domain)

    def base_target(self) -> EuclideanLieAlgebra:
        """The base with the target-side metric."""
        return EuclideanLieAlgebra(self.base, self.inner_target)

    def rho_of(self, u) -> np.ndarray:
        return np.einsum("k,kij->ij", np.asarray(u), self.rho)

    def omega_of(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u), np.asarray(v), self.omega)


def derivation_defect(ela: EuclideanLieAlgebra, op) -> float:
    """max || D[u,v] - [Du,v] - [u,Dv] || over basis pairs."""
    worst = 0.0
    for i in range(ela.dim):
        ei = ela.basis(i)
        for j in range(i + 1, ela.dim):
            ej = ela.basis(j)
            d = (
                op @ ela.bracket(ei, ej)
                - ela.bracket(op @ ei, ej)
                - ela.bracket(ei, op @ ej)
            )
            worst = max(worst, la.norm(d))
    return worst


@dataclass(frozen=True)
class ConditionReport:
    """Defects of the two compatibility equations; truthy when both pass."""

    ok: bool
    action_defect: float
    cocycle_defect: float

    def __bool__(self) -> bool:
        return self.ok


def check_condition(sd: SemidirectData, tol: Tolerance = DEFAULT_TOL) -> ConditionReport:
    """Evaluate both compatibility equations on all basis tuples.

    Never raises on a violation: returns a report with the measured
    defects, truthy exactly when both equations hold within tolerance.
    """
    dn, dh = sd.dim_kernel, sd.dim_base
    ker = sd.kernel

    action_defect = 0.0
    for i in range(dh):
        hi = sd.base.basis(i)
        for j in range(i + 1, dh):
            hj = sd.base.basis(j)
            lhs = sd.rho_of(sd.base.bracket(hi, hj))
            comm = sd.rho[i] @ sd.rho[j] - sd.rho[j] @ sd.rho[i]
            rhs = comm - ker.ad(sd.omega[i, j])
            action_defect = max(action_defect, la.norm(_float(lhs) - _float(rhs)))

    cocycle_defect = 0.0
    for i in range(dh):
        for j in range(i + 1, dh):
            for k in range(j + 1, dh):
                total = la.zeros(dn, sd.exact)
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    ha, hb, hc = sd.base.basis(a), sd.base.basis(b), sd.base.basis(c)
                    total = total + sd.rho[a] @ sd.omega[b, c]
                    total = total - sd.omega_of(sd.base.bracket(ha, hb), hc)
                cocycle_defect = max(cocycle_defect, la.norm(total))

    nrho, nom = la.norm(sd.rho), la.norm(sd.omega)
    scale1 = 1.0 + la.norm(sd.base.c) * nrho + nrho ** 2 + la.norm(ker.alg.c) * nom
    scale2 = 1.0 + nrho * nom + la.norm(sd.base.c) * nom
    ok = action_defect <= 10.0 * tol.threshold(scale1) and cocycle_defect <= 10.0 * tol.threshold(scale2)
    return ConditionReport(ok=bool(ok), action_defect=float(action_defect),
                           cocycle_defect=float(cocycle_defect))


def action_trace_vector(sd: SemidirectData) -> np.ndarray:
    """The base vector H with <H, u>_1 = tr(rho(u)) (domain metric dual)."""
    traces = la.zeros(sd.dim_base, sd.exact)
    for k in range(sd.dim_base):
        traces[k] = np.trace(sd.rho[k])
    return la.inv(sd.inner_domain.gram) @ traces


def build_semidirect(sd: SemidirectData, tol: Tolerance = DEFAULT_TOL
                     ) -> Tuple[EuclideanLieAlgebra, LieAlgebraMap]:
    """Assemble the total algebra and the projection onto the base.

    The total bracket is validated (Jacobi), the projection is validated as
    a homomorphism, and the tension identity
    ``tau(proj) = tau(Id_base) - H_rho`` is verified; any failure raises.
    """
    report = check_condition(sd, tol)
    if not report:
        raise ConstructionError(
            f"compatibility equations violated (action defect "
            f"{report.action_defect:.3e}, cyclic defect {report.cocycle_defect:.3e})"
        )
    dn, dh = sd.dim_kernel, sd.dim_base
    dim = dn + dh
    exact = sd.exact
    brackets = {}
    cn, ch = sd.kernel.alg.c, sd.base.c
    for i in range(dn):
        for j in range(i + 1, dn):
            vec = la.zeros(dim, exact)
            vec[:dn] = cn[i, j, :]
            brackets[(i, j)] = vec
    for i in range(dh):
        for j in range(dn):
            # [kernel_j, base_i] = -rho(h_i) kernel_j
            vec = la.zeros(dim, exact)
            vec[:dn] = -sd.rho[i][:, j]
            brackets[(j, dn + i)] = vec
    for i in range(dh):
        for j in range(i + 1, dh):
            vec = la.zeros(dim, exact)
            vec[:dn] = sd.omega[i, j]
            vec[dn:] = ch[i, j, :]
            brackets[(dn + i, dn + j)] = vec
    total_alg = LieAlgebra.from_brackets(dim, brackets, name="total",
                                         exact=exact, tol=tol.scaled(10.0))
    gram = la.zeros((dim, dim), exact)
    gram[:dn, :dn] = sd.kernel.gram
    gram[dn:, dn:] = sd.inner_domain.gram
    total = EuclideanLieAlgebra(total_alg, InnerProduct(gram), name="total")

    proj_matrix = la.zeros((dh, dim), exact)
    proj_matrix[:, dn:] = la.eye(dh, exact)
    proj = LieAlgebraMap(total, sd.base_target(), proj_matrix, name="projection")
    if not validate_hom(proj, tol.scaled(10.0)):
        raise CrossCheckError("assembled projection fails the homomorphism check")

    tau_proj = tension(proj, tol)
    idm = LieAlgebraMap.identity(sd.base_domain(), sd.base_target())
    expected = tension(idm, tol) - action_trace_vector(sd)
    defect = la.norm(_float(tau_proj) - _float(expected))
    scale = 1.0 + la.norm(tau_proj) + la.norm(expected)
    if defect > 10.0 * tol.threshold(scale):
        raise CrossCheckError(
            f"projection tension disagrees with the splitting identity "
            f"(defect {defect:.3e})"
        )
    return total, proj


# ---------------------------------------------------------------------------
# inner-action parametrization
# ---------------------------------------------------------------------------


def inner_action_data(kernel: EuclideanLieAlgebra, base: LieAlgebra,
                      inner_domain: InnerProduct, inner_target: InnerProduct,
                      f_matrix, omega0=None,
                      tol: Tolerance = DEFAULT_TOL) -> SemidirectData:
    """Action by inner derivations: ``rho(u) = ad_{F(u)}`` with the twist
    ``omega(u,v) = [F(u), F(v)] - F([u,v]) + omega0(u,v)`` (the orientation
    matching this module's base-acts-on-kernel bracket).

    ``omega0`` must be valued in the kernel's center and closed under the
    cyclic sum ``omega0([u,v], w)``; both are checked.  The resulting data
    always satisfies the compatibility equations (asserted).
    """
    dn, dh = kernel.dim, base.dim
    f = la.as_matrix(f_matrix, kernel.exact) if not isinstance(f_matrix, np.ndarray) else f_matrix
    if f.shape != (dn, dh):
        raise ConstructionError(f"embedding matrix must be {dn} x {dh}")
    if omega0 is None:
        om0 = la.zeros((dh, dh, dn), kernel.exact)
    else:
        om0 = omega0
        if om0.shape != (dh, dh, dn):
            raise ConstructionError(f"central twist must be {dh} x {dh} x {dn}")
        skew = la.norm(_float(om0) + _float(om0).transpose(1, 0, 2))
        if skew > tol.threshold(1.0 + la.norm(om0)):
            raise ConstructionError("central twist is not antisymmetric")
        scale_c = 1.0 + la.norm(kernel.alg.c) * la.norm(om0)
        for i in range(dh):
            for j in range(i + 1, dh):
                if la.norm(kernel.ad(om0[i, j])) > tol.threshold(scale_c):
                    raise ConstructionError(
                        f"central twist value at base pair ({i},{j}) is not "
                        f"in the kernel's center"
                    )
        scale_d = 1.0 + la.norm(base.c) * la.norm(om0)
        for i in range(dh):
            for j in range(i + 1, dh):
                for k in range(j + 1, dh):
                    total = la.zeros(dn, kernel.exact)
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        br = base.bracket(base.basis(a), base.basis(b))
                        total = total + np.einsum("i,j,ijk->k", br, base.basis(c), om0)
                    if la.norm(total) > tol.threshold(scale_d):
                        raise ConstructionError(
                            "central twist is not closed under the cyclic sum"
                        )

    rho = la.zeros((dh, dn, dn), kernel.exact)
    for k in range(dh):
        rho[k] = kernel.ad(f[:, k])
    omega = la.zeros((dh, dh, dn), kernel.exact)
    for i in range(dh):
        for j in range(i + 1, dh):
            br = base.bracket(base.basis(i), base.basis(j))
            val = kernel.bracket(f[:, i], f[:, j]) - f @ br + om0[i, j]
            omega[i, j] = val
            omega[j, i] = -val
    sd = SemidirectData(kernel=kernel, base=base, inner_domain=inner_domain,
                        inner_target=inner_target, rho=rho, omega=omega, tol=tol)
    if not check_condition(sd, tol):
        raise CrossCheckError(
            "inner-action data unexpectedly fails the compatibility equations"
        )
    return sd


def tangent_semidirect(base_ela: EuclideanLieAlgebra) -> SemidirectData:
    """Data whose total algebra models the tangent group of the base:
    kernel = abelian copy of the base with the same Gram, action = adjoint,
    twist = 0, equal domain/target metrics."""
    dh = base_ela.dim
    exact = base_ela.exact
    kernel = EuclideanLieAlgebra(
        LieAlgebra(la.zeros((dh, dh, dh), exact), name="abelian-copy"),
        InnerProduct(base_ela.gram.copy()),
    )
    rho = la.zeros((dh, dh, dh), exact)
    for k in range(dh):
        rho[k] = base_ela.ad(base_ela.basis(k))
    omega = la.zeros((dh, dh, dh), exact)
    return SemidirectData(
        kernel=kernel,
        base=base_ela.alg,
        inner_domain=base_ela.inner,
        inner_target=base_ela.inner,
        rho=rho,
        omega=omega,
    )


# ---------------------------------------------------------------------------
# recipe searches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionResult:
    """A certified construction: the data, the assembled total algebra, the
    projection, and its independently computed classification."""

    data: SemidirectData
    total: EuclideanLieAlgebra
    projection: LieAlgebraMap
    classification: MapClassification


def _require_float(*elas):
    for e in elas:
        if getattr(e, "exact", False):
            raise ConstructionError("recipe searches run in float mode only")


def _kernel_trace_covector(kernel: EuclideanLieAlgebra) -> np.ndarray:
    """t with t_i = tr(ad_{b_i}) on the kernel (the trace of inner actions)."""
    return np.array(
        [float(np.trace(_float(kernel.ad(kernel.basis(i))))) for i in range(kernel.dim)]
    )


def tension_coordinate_system(base_domain: EuclideanLieAlgebra,
                              base_target: EuclideanLieAlgebra,
                              tol: Tolerance = DEFAULT_TOL
                              ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Linear system ``A x = b`` determining the coordinates of
    tension(Id: domain -> target) in the base's own basis.

    ``A`` is the target Gram matrix and ``b_k`` pairs the tension with the
    k-th basis vector in the target metric, assembled from Koszul pairings
    only (never from the tension vector itself).  Returns ``(A, b, x)``
    with ``x`` the solution, cross-checked against the direct tension
    computation.
    """
    if base_domain.alg is not base_target.alg:
        diff = la.norm(_float(base_domain.alg.c) - _float(base_target.alg.c))
        if diff > tol.threshold(1.0 + la.norm(base_domain.alg.c)):
            raise ConstructionError("both sides must share the structure constants")
    n = base_domain.dim
    g2 = base_target.gram
    # <B_u v, w>_2 via the Koszul polarization of the target metric
    lc2 = base_target.levi_civita()
    u1 = base_domain.unimodular_vector(tol)
    conn = base_domain.metric_trace(lambda u, v: lc2.product(u, v))
    b = la.zeros(n, base_domain.exact)
    for k in range(n):
        ek = base_domain.basis(k)
        b[k] = base_target.pair(conn, ek) - base_target.pair(u1, ek)
    x = la.solve_linear(g2, b, tol)
    direct = tension(LieAlgebraMap.identity(base_domain, base_target), tol)
    diff = la.norm(_float(x) - _float(direct))
    if diff > 10.0 * tol.threshold(1.0 + la.norm(direct)):
        raise CrossCheckError(
            f"tension coordinate system disagrees with the direct tension "
            f"(defect {diff:.3e})"
        )
    return g2, b, x


def _certify(sd: SemidirectData, tol: Tolerance) -> ConstructionResult:
    total, proj = build_semidirect(sd, tol)
    cls = classify(proj, tol.scaled(10.0))
    return ConstructionResult(data=sd, total=total, projection=proj,
                              classification=cls)


def build_harmonic_submersion(base: LieAlgebra, inner_domain: InnerProduct,
                              inner_target: InnerProduct,
                              kernel: EuclideanLieAlgebra,
                              budget: int = 50, seed: int = 0,
                              tol: Tolerance = DEFAULT_TOL) -> ConstructionResult:
    """Find an inner action making the projection harmonic.

    The action must satisfy ``tr(rho(h)) = <h, tau(Id)>_domain`` for every
    base vector; with inner actions this is a linear constraint on the
    embedding matrix, solved exactly, then randomized over its null space
    for up to ``budget`` samples.  Infeasible when the kernel carries no
    trace (every inner derivation traceless) but the identity tension is
    nonzero.  The result is certified harmonic by the independent tension
    computation.
    """
    dom = EuclideanLieAlgebra(base, inner_domain)
    tgt = EuclideanLieAlgebra(base, inner_target)
    _require_float(dom, tgt, kernel)
    _, _, tau_id = tension_coordinate_system(dom, tgt, tol)
    rhs = _float(inner_domain.gram) @ _float(tau_id)   # <h_k, tau(Id)>_1
    tvec = _kernel_trace_covector(kernel)
    tnorm2 = float(tvec @ tvec)
    if tnorm2 <= tol.threshold(1.0) ** 2:
        if la.norm(rhs) > tol.threshold(1.0 + la.norm(tau_id)):
            raise InfeasibleSearch(
                "every inner derivation of the kernel is traceless but the "
                "identity tension is nonzero; no inner action can match it"
            )
        f0 = np.zeros((kernel.dim, base.dim))
        hom_basis = np.eye(kernel.dim)
    else:
        f0 = np.outer(tvec / tnorm2, rhs)
        hom_basis = la.nullspace(tvec.reshape(1, -1), tol)
    rng = np.random.default_rng(seed)
    last_error: Optional[Exception] = None
    for trial in range(max(1, budget)):
        extra = 0.0
        if trial > 0 and hom_basis.shape[1] > 0:
            coeffs = rng.normal(size=(hom_basis.shape[1], base.dim))
            extra = hom_basis @ coeffs
        f = f0 + extra
        try:
            sd = inner_action_data(kernel, base, inner_domain, inner_target, f, tol=tol)
            result = _certify(sd, tol)
        except (ConstructionError, CrossCheckError) as exc:
            last_error = exc
            continue
        if result.classification.flags["harmonic"]:
            return result
    raise InfeasibleSearch(
        f"no harmonic action found within {budget} samples"
        + (f" (last failure: {last_error})" if last_error else "")
    )


def build_biharmonic_submersion(base: LieAlgebra, inner_domain: InnerProduct,
                                inner_target: InnerProduct,
                                kernel: EuclideanLieAlgebra,
                                budget: int = 50, seed: int = 0,
                                tol: Tolerance = DEFAULT_TOL) -> ConstructionResult:
    """Find a traceless inner action; the projection is then biharmonic
    exactly when the identity map between the two base metrics is, which
    is a precondition (checked, error otherwise).  Certified by the
    independent bitension computation.
    """
    dom = EuclideanLieAlgebra(base, inner_domain)
    tgt = EuclideanLieAlgebra(base, inner_target)
    _require_float(dom, tgt, kernel)
    id_cls = classify(LieAlgebraMap.identity(dom, tgt), tol.scaled(10.0))
    if not id_cls.flags["biharmonic"]:
        raise ConstructionError(
            "identity map between the base metrics is not biharmonic; the "
            "traceless-action method does not apply"
        )
    tvec = _kernel_trace_covector(kernel)
    if float(tvec @ tvec) <= tol.threshold(1.0) ** 2:
        hom_basis = np.eye(kernel.dim)
    else:
        hom_basis = la.nullspace(tvec.reshape(1, -1), tol)
    rng = np.random.default_rng(seed)
    last_error: Optional[Exception] = None
    for trial in range(max(1, budget)):
        if hom_basis.shape[1] == 0:
            f = np.zeros((kernel.dim, base.dim))
        else:
            coeffs = rng.normal(size=(hom_basis.shape[1], base.dim)) * (trial > 0)
            f = hom_basis @ coeffs
        try:
            sd = inner_action_data(kernel, base, inner_domain, inner_target, f, tol=tol)
            result = _certify(sd, tol)
        except (ConstructionError, CrossCheckError) as exc:
            last_error = exc
            continue
        if result.classification.flags["biharmonic"]:
            return result
    raise InfeasibleSearch(
        f"no biharmonic action found within {budget} samples"
        + (f" (last failure: {last_error})" if last_error else "")
    )


_RIEMANNIAN_VARIANTS = ("parallel_trace", "unimodular_kernel", "killing_trace")


def build_riemannian_biharmonic(base: LieAlgebra, inner: InnerProduct,
                                kernel: EuclideanLieAlgebra, variant: str,
                                budget: int = 50, seed: int = 0,
                                tol: Tolerance = DEFAULT_TOL) -> ConstructionResult:
    """Riemannian case (equal base metrics): three sufficient conditions.

    * ``parallel_trace``: the trace form of the action kills every
      Levi-Civita product value (and the twist vanishes: the embedding is
      constrained to have commuting image and to kill derived base
      vectors).
    * ``unimodular_kernel``: the kernel is unimodular (checked), so every
      inner action is traceless.
    * ``killing_trace``: the base is unimodular (checked) and the trace
      form is a Killing one-form, read symmetrically as
      ``tr(rho(ad_u^* v + ad_v^* u)) = 0`` for all u, v (the variable in
      the second slot is taken equal to the first pairing's, making the
      condition equivalent to the metric dual being a Killing direction).

    The projection is certified biharmonic independently.
    """
    if variant not in _RIEMANNIAN_VARIANTS:
        raise ConstructionError(
            f"unknown variant {variant!r}; expected one of {_RIEMANNIAN_VARIANTS}"
        )
    dom = EuclideanLieAlgebra(base, inner)
    _require_float(dom, kernel)
    dh, dn = base.dim, kernel.dim
    tvec = _kernel_trace_covector(kernel)
    rng = np.random.default_rng(seed)

    rows = []
    if variant == "unimodular_kernel":
        if not kernel.is_unimodular(tol):
            raise ConstructionError("variant needs a unimodular kernel")
    elif variant == "parallel_trace":
        lc = dom.levi_civita()
        for i in range(dh):
            for j in range(dh):
                a = _float(lc.product(dom.basis(i), dom.basis(j)))
                row = np.zeros((dn, dh))
                for k in range(dh):
                    row[:, k] = tvec * a[k]
                rows.append(row.reshape(-1))
        for i in range(dh):
            for j in range(i + 1, dh):
                br = _float(base.bracket(base.basis(i), base.basis(j)))
                for r in range(dn):
                    row = np.zeros((dn, dh))
                    row[r, :] = br
                    rows.append(row.reshape(-1))
    else:  # killing_trace
        if not dom.is_unimodular(tol):
            raise ConstructionError("variant needs a unimodular base")
        for i in range(dh):
            for j in range(i, dh):
                vec = _float(dom.ad_star(dom.basis(i))) @ _float(dom.basis(j)) + _float(
                    dom.ad_star(dom.basis(j))
                ) @ _float(dom.basis(i))
                row = np.zeros((dn, dh))
                for k in range(dh):
                    row[:, k] = tvec * vec[k]
                rows.append(row.reshape(-1))

    if rows:
        constraint = np.stack(rows, axis=0)
        f_space = la.nullspace(constraint, tol)
    else:
        f_space = np.eye(dn * dh)

    last_error: Optional[Exception] = None
    for trial in range(max(1, budget)):
        if f_space.shape[1] == 0:
            f = np.zeros((dn, dh))
        else:
            coeffs = rng.normal(size=f_space.shape[1]) * (1.0 if trial > 0 else 0.5)
            f = (f_space @ coeffs).reshape(dn, dh)
        if variant == "parallel_trace":
            commuting = all(
                la.norm(kernel.bracket(f[:, i], f[:, j])) <= tol.threshold(1.0 + la.norm(f) ** 2)
                for i in range(dh)
                for j in range(i + 1, dh)
            )
            if not commuting:
                last_error = ConstructionError("sampled embedding has non-commuting image")
                continue
        try:
            sd = inner_action_data(kernel, base, inner, inner, f, tol=tol)
            if variant == "parallel_trace" and la.norm(sd.omega) > tol.threshold(
                1.0 + la.norm(f) ** 2
            ):
                last_error = ConstructionError("sampled embedding produced a twist")
                continue
            result = _certify(sd, tol)
        except (ConstructionError, CrossCheckError) as exc:
            last_error = exc
            continue
        if result.classification.flags["biharmonic"]:
            return result
    raise InfeasibleSearch(
        f"no biharmonic action found within {budget} samples"
        + (f" (last failure: {last_error})" if last_error else "")
    )


def build_flat_target_submersion(base_flat: EuclideanLieAlgebra,
                                 kernel: EuclideanLieAlgebra,
                                 budget: int = 50, seed: int = 0,
                                 tol: Tolerance = DEFAULT_TOL) -> ConstructionResult:
    """Riemannian submersion onto a flat base, biharmonic by construction.

    The base metric must be flat (checked; error otherwise).  When the
    kernel is unimodular any inner action works; otherwise the embedding
    is constrained to produce a vanishing twist.  The output reports both
    the harmonic and biharmonic flags from independent certification.
    """
    _require_float(base_flat, kernel)
    worst = 0.0
    for i in range(base_flat.dim):
        for j in range(i + 1, base_flat.dim):
            worst = max(
                worst,
                la.norm(base_flat.curvature(base_flat.basis(i), base_flat.basis(j))),
            )
    scale = 1.0 + la.norm(base_flat.alg.c) ** 2 * la.norm(base_flat.gram)
    if worst > tol.threshold(scale):
        raise ConstructionError(
            f"base metric is not flat (max curvature norm {worst:.3e})"
        )
    dh, dn = base_flat.dim, kernel.dim
    rng = np.random.default_rng(seed)
    unimodular = kernel.is_unimodular(tol)
    rows = []
    if not unimodular:
        for i in range(dh):
            for j in range(i + 1, dh):
                br = _float(base_flat.bracket(base_flat.basis(i), base_flat.basis(j)))
                for r in range(dn):
                    row = np.zeros((dn, dh))
                    row[r, :] = br
                    rows.append(row.reshape(-1))
    f_space = la.nullspace(np.stack(rows, axis=0), tol) if rows else np.eye(dn * dh)

    last_error: Optional[Exception] = None
    for trial in range(max(1, budget)):
        if f_space.shape[1] == 0:
            f = np.zeros((dn, dh))
        else:
            coeffs = rng.normal(size=f_space.shape[1]) * (1.0 if trial > 0 else 0.5)
            f = (f_space @ coeffs).reshape(dn, dh)
        if not unimodular:
            commuting = all(
                la.norm(kernel.bracket(f[:, i], f[:, j])) <= tol.threshold(1.0 + la.norm(f) ** 2)
                for i in range(dh)
                for j in range(i + 1, dh)
            )
            if not commuting:
                last_error = ConstructionError("sampled embedding has non-commuting image")
                continue
        try:
            sd = inner_action_data(kernel, base_flat.alg, base_flat.inner,
                                   base_flat.inner, f, tol=tol)
            if not unimodular and la.norm(sd.omega) > tol.threshold(1.0 + la.norm(f) ** 2):
                last_error = ConstructionError("sampled embedding produced a twist")
                continue
            result = _certify(sd, tol)
        except (ConstructionError, CrossCheckError) as exc:
            last_error = exc
            continue
        if result.classification.flags["biharmonic"]:
            return result
    raise InfeasibleSearch(
        f"no biharmonic action found within {budget} samples"
        + (f" (last failure: {last_error})" if last_error else "")
    )
