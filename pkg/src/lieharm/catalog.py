"""Built-in named Euclidean Lie algebras with known quantities, plus the
verification suite that recomputes every stored quantity with the toolkit.

Entries expose their metric parameters so sweeps can vary them; the stored
expected values refer to the documented default parameters unless a value is
parameter-independent (bracket traces, for instance, do not depend on the
metric).  ``run_verification_suite`` recomputes everything and returns a
machine-readable report; it is the executable form of the package's worked
examples and the gate the command-line ``catalog`` command reports on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import _linalg as la
from ._linalg import DEFAULT_TOL, Tolerance
from .core import (
    EuclideanLieAlgebra,
    InnerProduct,
    LieAlgebra,
    Subalgebra,
    check_jacobi,
    second_fundamental,
)
from .cone import (
    Automorphism,
    automorphism_trace_form,
    exp_adjoint,
    harmonic_cone,
    harmonic_dimension_check,
    sl2_adjoint_matrix,
    sl2_residuals,
)
from .maps import (
    KahlerStructure,
    LieAlgebraMap,
    bitension,
    check_composition,
    check_kahler,
    classify,
    tension,
)
from . import semidirect as sm


class CatalogError(ValueError):
    """Unknown entry name or parameters outside the documented range."""


@dataclass(frozen=True)
class CatalogEntry:
    """A named algebra with its metric and the quantities known for it."""

    name: str
    ela: EuclideanLieAlgebra
    expected: Dict[str, object]
    extras: Dict[str, object] = field(default_factory=dict)


def _gram(dim: int, gram, exact: bool) -> InnerProduct:
    if gram is None:
        return InnerProduct.identity(dim, exact)
    if isinstance(gram, InnerProduct):
        return gram
    return InnerProduct.of(gram, exact)


def _positive(name: str, *values) -> None:
    for v in values:
        if not float(v) > 0:
            raise CatalogError(f"{name}: parameters must be positive, got {v}")


def _entry_e1(a=1.0, gram=None, exact: bool = False) -> CatalogEntry:
    """Two-dimensional non-abelian algebra [e, f] = a e."""
    if float(a) == 0.0:
        raise CatalogError("e1: the bracket coefficient must be nonzero")
    alg = LieAlgebra.from_brackets(2, {(0, 1): [a, 0 if exact else 0.0]},
                                   name="e1", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(2, gram, exact), name="e1")
    expected: Dict[str, object] = {
        "unimodular": False,
        "kill_dim": 0,                       # holds for every metric
        "u_covector": [0 * a, -a],           # tr(ad_v), metric-independent
    }
    if gram is None:
        expected["ch_dim"] = 1
    return CatalogEntry("e1", ela, expected)


def _entry_heis3(alpha=1.0, gram=None, exact: bool = False) -> CatalogEntry:
    """Heisenberg algebra in the ordering (z, f, g) with [f, g] = alpha z."""
    _positive("heis3", alpha)
    zero = 0 if exact else 0.0
    alg = LieAlgebra.from_brackets(3, {(1, 2): [alpha, zero, zero]},
                                   name="heis3", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(3, gram, exact), name="heis3")
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": [zero, zero, zero],
    }
    if gram is None:
        expected["kill_dim"] = 1
        expected["ch_dim"] = 4
    return CatalogEntry("heis3", ela, expected)


def _entry_sl2(alphas=(1.0, 1.0, 1.0), exact: bool = False) -> CatalogEntry:
    """Split simple algebra in the basis (h, e, f): [h,e]=2e, [h,f]=-2f,
    [e,f]=h; metric diag(alphas)."""
    _positive("sl2", *alphas)
    zero = 0 if exact else 0.0
    two = Fraction(2) if exact else 2.0
    one = Fraction(1) if exact else 1.0
    alg = LieAlgebra.from_brackets(3, {
        (0, 1): [zero, two, zero],
        (0, 2): [zero, zero, -two],
        (1, 2): [one, zero, zero],
    }, name="sl2", exact=exact)
    ela = EuclideanLieAlgebra(alg, InnerProduct.of(np.diag(alphas), exact) if not exact
                              else InnerProduct.of([[alphas[0], 0, 0], [0, alphas[1], 0],
                                                    [0, 0, alphas[2]]], exact), name="sl2")
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": [zero, zero, zero],
        "kill_dim": 0,
        "ch_dim": 3,
    }
    return CatalogEntry("sl2", ela, expected, extras={"alphas": tuple(alphas)})


def _entry_so3(alphas=(1.0, 1.0, 1.0), exact: bool = False) -> CatalogEntry:
    """Compact simple algebra [X1,X2]=X3 (cyclically); metric diag(alphas).

    The repeated-eigenvalue cone dimension stored here is the one computed
    by this toolkit and by the unimodular dimension formula
    n(n-1)/2 + dim Kill: with exactly two equal parameters the Killing
    subalgebra is 1-dimensional, giving 3 + 1 = 4.
    """
    _positive("so3", *alphas)
    zero = 0 if exact else 0.0
    one = Fraction(1) if exact else 1.0
    alg = LieAlgebra.from_brackets(3, {
        (0, 1): [zero, zero, one],
        (1, 2): [one, zero, zero],
        (0, 2): [zero, -one, zero],
    }, name="so3", exact=exact)
    gram = [[alphas[0], 0, 0], [0, alphas[1], 0], [0, 0, alphas[2]]]
    ela = EuclideanLieAlgebra(alg, InnerProduct.of(gram, exact), name="so3")
    a1, a2, a3 = (float(x) for x in alphas)
    eq12, eq13, eq23 = (abs(a1 - a2) < 1e-12, abs(a1 - a3) < 1e-12,
                        abs(a2 - a3) < 1e-12)
    n_eq = sum([eq12, eq13, eq23])
    if n_eq == 3:
        kill, ch = 3, 6
    elif n_eq == 1:
        kill, ch = 1, 4
    else:
        kill, ch = 0, 3
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": [zero, zero, zero],
        "kill_dim": kill,
        "ch_dim": ch,
        "biinvariant": n_eq == 3,
    }
    return CatalogEntry("so3", ela, expected, extras={"alphas": tuple(alphas)})


def _entry_nilp5(gram=None, exact: bool = False) -> CatalogEntry:
    """Five-dimensional two-step-solvable nilpotent algebra
    [e1,e2]=e3, [e1,e3]=e5, [e2,e4]=e5, with the minimal codimension-one
    subalgebra span{e1,e2,e3,e5}."""
    zero = 0 if exact else 0.0
    one = Fraction(1) if exact else 1.0
    z5 = [zero] * 5
    e3v, e5v = list(z5), list(z5)
    e3v[2] = one
    e5v[4] = one
    alg = LieAlgebra.from_brackets(5, {(0, 1): e3v, (0, 2): e5v, (1, 3): e5v},
                                   name="nilp5", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(5, gram, exact), name="nilp5")
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": z5,
        "minimal_subalgebra": [0, 1, 2, 4],
    }
    if gram is None:
        expected["kill_dim"] = 1
        expected["ch_dim"] = 11
    return CatalogEntry("nilp5", ela, expected)


def _entry_abelian(n=3, gram=None, exact: bool = False) -> CatalogEntry:
    n = int(n)
    if n < 1:
        raise CatalogError("abelian: dimension must be at least 1")
    alg = LieAlgebra.from_brackets(n, {}, name=f"abelian{n}", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(n, gram, exact), name=f"abelian{n}")
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": [0 if exact else 0.0] * n,
        "kill_dim": n,
        "ch_dim": n * (n - 1) // 2 + n,
        "biinvariant": True,
    }
    return CatalogEntry("abelian", ela, expected)


def _entry_e2flat(lam=1.0, gram=None, exact: bool = False) -> CatalogEntry:
    """Flat non-abelian model: [e3,e1] = lam e2, [e3,e2] = -lam e1."""
    _positive("e2flat", lam)
    zero = 0 if exact else 0.0
    alg = LieAlgebra.from_brackets(3, {
        (0, 2): [zero, -lam, zero],
        (1, 2): [lam, zero, zero],
    }, name="e2flat", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(3, gram, exact), name="e2flat")
    expected: Dict[str, object] = {
        "unimodular": True,
        "u_covector": [zero, zero, zero],
    }
    if gram is None:
        expected.update({"kill_dim": 1, "ch_dim": 4, "flat": True})
    return CatalogEntry("e2flat", ela, expected)


def _entry_aff2solv(beta=0.5, gram=None, exact: bool = False) -> CatalogEntry:
    """Non-unimodular solvable family [e3,e1] = e1, [e3,e2] = beta e2."""
    if abs(float(beta) + 1.0) < 1e-12:
        raise CatalogError("aff2solv: beta = -1 is the unimodular degeneration")
    zero = 0 if exact else 0.0
    one = Fraction(1) if exact else 1.0
    alg = LieAlgebra.from_brackets(3, {
        (0, 2): [-one, zero, zero],
        (1, 2): [zero, -beta, zero],
    }, name="aff2solv", exact=exact)
    ela = EuclideanLieAlgebra(alg, _gram(3, gram, exact), name="aff2solv")
    expected: Dict[str, object] = {
        "unimodular": False,
        "u_covector": [zero, zero, one + beta],
    }
    if gram is None:
        expected["kill_dim"] = 0
    return CatalogEntry("aff2solv", ela, expected)


def _entry_tangent(base: str = "e1", tol: Tolerance = DEFAULT_TOL,
                   **base_params) -> CatalogEntry:
    """Total algebra of the tangent-group data over a named base entry."""
    base_entry = get(base, **base_params)
    sd = sm.tangent_semidirect(base_entry.ela)
    total, proj = sm.build_semidirect(sd, tol)
    u = base_entry.ela.unimodular_vector(tol)
    unimod = base_entry.ela.is_unimodular(tol)
    expected: Dict[str, object] = {
        "unimodular": unimod,
        "projection_tension": list(-np.asarray(u)),
        "projection_harmonic": unimod,
        "projection_biharmonic": unimod,
        "riemannian_submersion": True,
    }
    return CatalogEntry(f"tangent({base_entry.name})", total, expected,
                        extras={"data": sd, "projection": proj,
                                "base": base_entry.ela})


_BUILDERS: Dict[str, Callable[..., CatalogEntry]] = {
    "e1": _entry_e1,
    "heis3": _entry_heis3,
    "sl2": _entry_sl2,
    "so3": _entry_so3,
    "nilp5": _entry_nilp5,
    "abelian": _entry_abelian,
    "e2flat": _entry_e2flat,
    "aff2solv": _entry_aff2solv,
    "tangent": _entry_tangent,
}


def names() -> List[str]:
    return sorted(_BUILDERS)


def get(name: str, **params) -> CatalogEntry:
    """Build a catalog entry by name.  Unknown names and out-of-range
    parameters raise ``CatalogError``."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise CatalogError(
            f"unknown catalog entry {name!r}; known: {', '.join(names())}"
        ) from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    expected: str
    measured: str
    passed: bool

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "expected": self.expected,
                "measured": self.measured, "passed": self.passed}


@dataclass(frozen=True)
class SuiteReport:
    checks: Tuple[SuiteCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[SuiteCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, object]:
        return {"passed": self.passed,
                "total": len(self.checks),
                "failed": len(self.failures),
                "checks": [c.to_dict() for c in self.checks]}


class _Recorder:
    def __init__(self):
        self.checks: List[SuiteCheck] = []

    def add(self, name: str, expected, measured, passed: bool):
        self.checks.append(SuiteCheck(name=name, expected=str(expected),
                                      measured=str(measured), passed=bool(passed)))

    def equal(self, name: str, expected, measured):
        self.add(name, expected, measured, expected == measured)

    def close(self, name: str, expected, measured, atol: float):
        e = np.asarray(expected, dtype=float)
        m = np.asarray(measured, dtype=float)
        self.add(name, np.array2string(e, precision=6),
                 np.array2string(m, precision=6),
                 e.shape == m.shape and bool(np.allclose(e, m, atol=atol)))

    def small(self, name: str, measured: float, atol: float):
        self.add(name, f"|.| <= {atol:g}", f"{measured:.3e}", measured <= atol)


def _random_gram(rng, n: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    lam = rng.uniform(0.3, 3.0, size=n)
    return q @ np.diag(lam) @ q.T


def _entry_checks(rec: _Recorder, entry: CatalogEntry, tol: Tolerance):
    name = entry.name
    ela = entry.ela
    rec.add(f"{name}: bracket satisfies the Jacobi identity", "defect <= tol",
            "ok" if check_jacobi(ela.alg, tol) else "violated",
            check_jacobi(ela.alg, tol))
    exp = entry.expected
    if "unimodular" in exp:
        rec.equal(f"{name}: unimodular", exp["unimodular"], ela.is_unimodular(tol))
    if "u_covector" in exp:
        measured = np.asarray(ela.gram, dtype=float) @ np.asarray(
            ela.unimodular_vector(tol), dtype=float)
        rec.close(f"{name}: bracket-trace covector", exp["u_covector"], measured, 1e-9)
    if "kill_dim" in exp:
        rec.equal(f"{name}: Killing subalgebra dimension", exp["kill_dim"],
                  ela.killing_subalgebra(tol).shape[1])
    if "ch_dim" in exp:
        rec.equal(f"{name}: harmonic-cone dimension", exp["ch_dim"],
                  harmonic_cone(ela, tol).dimension)
    if "biinvariant" in exp:
        rec.equal(f"{name}: bi-invariant", exp["biinvariant"], ela.is_biinvariant(tol))
    if exp.get("unimodular") and "ch_dim" in exp:
        measured, predicted = harmonic_dimension_check(ela, tol)
        rec.equal(f"{name}: cone dimension matches n(n-1)/2 + dim Kill",
                  predicted, measured)
    if "flat" in exp:
        worst = max(
            la.norm(ela.curvature(ela.basis(i), ela.basis(j)))
            for i in range(ela.dim) for j in range(i + 1, ela.dim)
        )
        rec.small(f"{name}: curvature vanishes", worst, 1e-9)


def _unit_normal_to_first(gram: np.ndarray) -> np.ndarray:
    """The second vector of the Gram-orthonormalization of (e, f): the unit
    vector orthogonal to the first basis vector in the given metric."""
    v = np.array([-gram[0, 1] / gram[0, 0], 1.0])
    return v / np.sqrt(v @ gram @ v)


def run_verification_suite(tol: Tolerance = DEFAULT_TOL, seed: int = 0
                           ) -> SuiteReport:
    """Recompute every stored catalog quantity plus the cross-module
    identities, returning a machine-readable pass/fail report.  Failures are
    report entries, never exceptions."""
    rec = _Recorder()
    rng = np.random.default_rng(seed)

    entries = [
        get("e1"),
        get("heis3"),
        get("sl2"),
        get("so3"),
        get("so3", alphas=(1.0, 1.0, 2.0)),
        get("so3", alphas=(1.0, 2.0, 3.0)),
        get("nilp5"),
        get("abelian", n=3),
        get("e2flat"),
        get("aff2solv"),
    ]
    for entry in entries:
        try:
            _entry_checks(rec, entry, tol)
        except Exception as exc:  # a crash is itself a failed check
            rec.add(f"{entry.name}: checks crashed", "no exception", repr(exc), False)

    # exact-arithmetic bracket-trace vector of the 2-dim non-abelian algebra
    try:
        a = Fraction(3, 2)
        exact_e1 = get("e1", a=a, exact=True)
        u = exact_e1.ela.unimodular_vector(tol)
        rec.add("e1 exact mode: metric dual of the bracket trace is -a f",
                f"(0, {-a})", f"({u[0]}, {u[1]})",
                la.is_exact(u) and u[0] == 0 and u[1] == -a)
    except Exception as exc:
        rec.add("e1 exact mode: metric dual of the bracket trace is -a f",
                "(0, -3/2)", repr(exc), False)

    # characters of the 2-dim non-abelian algebra: biharmonic, never harmonic
    try:
        e1 = get("e1", a=1.3).ela
        line = EuclideanLieAlgebra(
            LieAlgebra.from_brackets(1, {}, name="line"), InnerProduct.identity(1))
        ok_b, ok_h = True, False
        for _ in range(5):
            xi = np.array([[0.0, rng.normal()]])
            cls = classify(LieAlgebraMap(e1, line, xi), tol)
            ok_b &= cls.flags["biharmonic"]
            ok_h |= cls.flags["harmonic"]
        rec.add("e1 characters: biharmonic yet not harmonic",
                "biharmonic=True harmonic=False",
                f"biharmonic={ok_b} harmonic={ok_h}", ok_b and not ok_h)
    except Exception as exc:
        rec.add("e1 characters: biharmonic yet not harmonic", "flags", repr(exc), False)

    # factor maps e -> 0, f -> q f' between 2-dim non-abelian algebras:
    # biharmonic, not harmonic
    try:
        ok = True
        for _ in range(5):
            a = rng.uniform(0.5, 2.0)
            src = get("e1", a=a).ela
            g2 = _random_gram(rng, 2)
            tgt = get("e1", a=rng.uniform(0.5, 2.0), gram=g2).ela
            q = rng.uniform(0.5, 2.0)
            fprime = _unit_normal_to_first(g2)
            xi = np.zeros((2, 2))
            xi[:, 1] = q * fprime
            cls = classify(LieAlgebraMap(src, tgt, xi), tol)
            ok &= cls.flags["biharmonic"] and not cls.flags["harmonic"]
        rec.add("factor maps between 2-dim non-abelian algebras: biharmonic, "
                "not harmonic", "True", str(ok), ok)
    except Exception as exc:
        rec.add("factor maps between 2-dim non-abelian algebras: biharmonic, "
                "not harmonic", "True", repr(exc), False)

    # 2-dim non-abelian: no nonzero parallel vector for any metric
    try:
        ok = True
        for _ in range(5):
            ela = get("e1", a=rng.uniform(0.5, 2.0), gram=_random_gram(rng, 2)).ela
            lc = ela.levi_civita()
            stacked = np.vstack([np.asarray(lc.operator(ela.basis(i)), dtype=float)
                                 for i in range(2)])
            ok &= la.nullspace(stacked, tol).shape[1] == 0
        rec.add("2-dim non-abelian: no nonzero parallel vector", "True", str(ok), ok)
    except Exception as exc:
        rec.add("2-dim non-abelian: no nonzero parallel vector", "True", repr(exc), False)

    # Ricci quadratic form against the squared symmetrized adjoint, for
    # vectors orthogonal to the derived subspace
    try:
        worst = 0.0
        for ent in ("e1", "e2flat", "so3"):
            ela = get(ent).ela if ent != "so3" else get("so3", alphas=(1.0, 2.0, 3.0)).ela
            der = np.asarray(ela.alg.derived_subspace(), dtype=float)
            comp = la.nullspace(der.T @ np.asarray(ela.gram, dtype=float), tol) \
                if der.shape[1] else np.eye(ela.dim)
            for _ in range(4):
                if comp.shape[1] == 0:
                    continue
                u = comp @ rng.normal(size=comp.shape[1])
                lhs = float(np.asarray(u) @ np.asarray(ela.gram, dtype=float)
                            @ np.asarray(ela.ricci_operator() @ u, dtype=float))
                s = np.asarray(ela.ad(u), dtype=float) + np.asarray(
                    ela.ad_star(u), dtype=float)
                rhs = -0.25 * float(np.trace(s @ s))
                worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
        rec.small("Ricci form equals -tr((ad_u + ad_u*)^2)/4 off the derived "
                  "subspace", worst, 1e-8)
    except Exception as exc:
        rec.add("Ricci form equals -tr((ad_u + ad_u*)^2)/4 off the derived "
                "subspace", "small", repr(exc), False)

    # harmonicity and biharmonicity coincide: non-positive-curvature target
    # with unimodular source, and 2-step-nilpotent target
    try:
        ok = True
        heis = get("heis3").ela
        e1 = get("e1", a=1.0, gram=_random_gram(rng, 2)).ela
        for _ in range(10):
            w = rng.normal(size=2)
            xi = np.zeros((2, 3))
            xi[:, 1] = rng.normal() * w
            xi[:, 2] = rng.normal() * w
            cls = classify(LieAlgebraMap(heis, e1, xi), tol)
            ok &= cls.flags["harmonic"] == cls.flags["biharmonic"]
        rec.add("unimodular source, non-positively-curved 2-dim target: "
                "harmonic iff biharmonic", "True", str(ok), ok)
    except Exception as exc:
        rec.add("unimodular source, non-positively-curved 2-dim target: "
                "harmonic iff biharmonic", "True", repr(exc), False)
    try:
        ok = True
        for _ in range(10):
            src = get("heis3", gram=_random_gram(rng, 3)).ela
            tgt = get("heis3", gram=_random_gram(rng, 3)).ela
            auto = exp_adjoint(src, rng.normal(size=3), tol)
            m = LieAlgebraMap(src, tgt, auto.matrix)
            cls = classify(m, tol)
            ok &= cls.flags["harmonic"] == cls.flags["biharmonic"]
        rec.add("unimodular source, 2-step-nilpotent target: harmonic iff "
                "biharmonic", "True", str(ok), ok)
    except Exception as exc:
        rec.add("unimodular source, 2-step-nilpotent target: harmonic iff "
                "biharmonic", "True", repr(exc), False)

    # bi-invariant target: always biharmonic; harmonic from unimodular sources
    try:
        round_so3 = get("so3").ela
        worst_t2, worst_t = 0.0, 0.0
        for _ in range(5):
            u = rng.normal(size=3)
            xi = np.zeros((3, 1))
            xi[:, 0] = u
            line = EuclideanLieAlgebra(
                LieAlgebra.from_brackets(1, {}, name="line"), InnerProduct.identity(1))
            m = LieAlgebraMap(line, round_so3, xi)
            worst_t2 = max(worst_t2, la.norm(bitension(m, tol)))
            worst_t = max(worst_t, la.norm(tension(m, tol)))
            src = get("so3", alphas=tuple(rng.uniform(0.5, 2.0, size=3))).ela
            auto = exp_adjoint(src, rng.normal(size=3), tol)
            m2 = LieAlgebraMap(src, round_so3, auto.matrix)
            worst_t2 = max(worst_t2, la.norm(bitension(m2, tol)))
            worst_t = max(worst_t, la.norm(tension(m2, tol)))
        rec.small("bi-invariant target: bitension vanishes", worst_t2, 1e-8)
        rec.small("bi-invariant target, unimodular source: tension vanishes",
                  worst_t, 1e-8)
    except Exception as exc:
        rec.add("bi-invariant target checks", "small", repr(exc), False)

    # abelian target: always biharmonic; harmonic from unimodular sources
    try:
        ab2 = get("abelian", n=2, gram=_random_gram(rng, 2)).ela
        heis = get("heis3", gram=_random_gram(rng, 3)).ela
        worst_t2, worst_t = 0.0, 0.0
        for _ in range(5):
            xi = rng.normal(size=(2, 3))
            xi[:, 0] = 0.0          # kill the derived direction (z first)
            m = LieAlgebraMap(heis, ab2, xi)
            worst_t2 = max(worst_t2, la.norm(bitension(m, tol)))
            worst_t = max(worst_t, la.norm(tension(m, tol)))
        rec.small("abelian target: bitension vanishes", worst_t2, 1e-8)
        rec.small("abelian target, unimodular source: tension vanishes",
                  worst_t, 1e-8)
    except Exception as exc:
        rec.add("abelian target checks", "small", repr(exc), False)

    # codimension-one nilpotent subalgebra is minimal for any ambient metric
    try:
        worst = 0.0
        idx = get("nilp5").expected["minimal_subalgebra"]
        for _ in range(5):
            ela = get("nilp5", gram=_random_gram(rng, 5)).ela
            basis = np.zeros((5, len(idx)))
            for k, i in enumerate(idx):
                basis[i, k] = 1.0
            sub = Subalgebra(ela, basis, tol)
            _, mean = second_fundamental(sub, tol)
            worst = max(worst, la.norm(mean))
        rec.small("nilp5 codimension-one subalgebra: mean curvature vanishes",
                  worst, 1e-8)
    except Exception as exc:
        rec.add("nilp5 codimension-one subalgebra: mean curvature vanishes",
                "small", repr(exc), False)

    # inner-automorphism covector on the Heisenberg algebra: zero iff central
    try:
        heis = get("heis3").ela
        ok = True
        for _ in range(50):
            u = rng.normal(size=3) * np.array([1.0, rng.integers(0, 2),
                                               rng.integers(0, 2)])
            adj = exp_adjoint(heis, u, tol)
            form = np.asarray(automorphism_trace_form(adj, tol), dtype=float)
            central = la.norm(heis.ad(u)) <= tol.threshold(1.0 + la.norm(u))
            ok &= (la.norm(form) <= 1e-9) == central
        rec.add("2-step nilpotent: conjugation covector vanishes iff the "
                "exponent is central", "True", str(ok), ok)
    except Exception as exc:
        rec.add("2-step nilpotent: conjugation covector vanishes iff the "
                "exponent is central", "True", repr(exc), False)

    # split-simple residual polynomials match the conjugation covector
    try:
        ok = True
        for _ in range(10):
            m = rng.normal(size=(2, 2))
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if abs(det) < 0.1:
                continue
            m = m / np.sqrt(abs(det))
            if det < 0:
                m[:, 0] = -m[:, 0]
            entries = (m[0, 0], m[0, 1], m[1, 0], m[1, 1])
            alphas = tuple(rng.uniform(0.2, 5.0, size=3))
            ent = get("sl2", alphas=alphas)
            res = np.asarray(sl2_residuals(entries, alphas, tol), dtype=float)
            adj = sl2_adjoint_matrix(entries)
            form = np.asarray(
                automorphism_trace_form(Automorphism(ent.ela, adj), tol),
                dtype=float)
            ok &= np.allclose(res, form, atol=1e-8 * (1 + la.norm(form)))
        rec.add("split-simple residuals equal the conjugation covector "
                "components", "True", str(ok), ok)
    except Exception as exc:
        rec.add("split-simple residuals equal the conjugation covector "
                "components", "True", repr(exc), False)

    # tangent-group data: tension, flags
    try:
        for base, unimod in (("heis3", True), ("e1", False)):
            entry = get("tangent", base=base)
            proj = entry.extras["projection"]
            tau = np.asarray(tension(proj, tol), dtype=float)
            rec.close(f"tangent({base}): projection tension equals minus the "
                      f"base unimodularity vector",
                      entry.expected["projection_tension"], tau, 1e-9)
            cls = classify(proj, tol)
            rec.equal(f"tangent({base}): biharmonic exactly when the base is "
                      f"unimodular", unimod, cls.flags["biharmonic"])
    except Exception as exc:
        rec.add("tangent-group data checks", "flags", repr(exc), False)

    # splitting identity on random constructed submersions
    try:
        ok = True
        for _ in range(3):
            ker = get("heis3", gram=_random_gram(rng, 3)).ela
            base = LieAlgebra.from_brackets(
                2, {(0, 1): [rng.uniform(0.5, 2.0), 0.0]}, name="e1")
            sd = sm.inner_action_data(
                ker, base, InnerProduct.of(_random_gram(rng, 2)),
                InnerProduct.of(_random_gram(rng, 2)), rng.normal(size=(3, 2)),
                tol=tol)
            sm.build_semidirect(sd, tol)   # raises if the identity fails
        rec.add("constructed submersions satisfy tau(proj) = tau(Id) - H_rho",
                "True", str(ok), ok)
    except Exception as exc:
        rec.add("constructed submersions satisfy tau(proj) = tau(Id) - H_rho",
                "True", repr(exc), False)

    # composition identity through two stacked tangent projections
    try:
        base = get("e1", a=1.1).ela
        sd1 = sm.tangent_semidirect(base)
        total1, proj1 = sm.build_semidirect(sd1, tol)
        sd2 = sm.tangent_semidirect(total1)
        total2, proj2 = sm.build_semidirect(sd2, tol)
        defect = check_composition(proj1, proj2, tol)
        rec.small("tension of a composed submersion splits along the factors",
                  defect, 1e-8)
    except Exception as exc:
        rec.add("tension of a composed submersion splits along the factors",
                "small", repr(exc), False)

    # harmonic-submersion recipe over the 2-dim non-abelian base
    try:
        ok = True
        for k in range(3):
            res = sm.build_harmonic_submersion(
                LieAlgebra.from_brackets(2, {(0, 1): [1.0, 0.0]}, name="e1"),
                InnerProduct.identity(2), InnerProduct.of(_random_gram(rng, 2)),
                get("aff2solv", gram=_random_gram(rng, 3)).ela,
                budget=10, seed=seed + k, tol=tol)
            ok &= res.classification.flags["harmonic"]
        rec.add("harmonic-submersion recipe: certified harmonic", "True",
                str(ok), ok)
    except Exception as exc:
        rec.add("harmonic-submersion recipe: certified harmonic", "True",
                repr(exc), False)

    # flat-target recipe produces a biharmonic, generically non-harmonic map
    try:
        flat = get("e2flat").ela
        res = sm.build_flat_target_submersion(
            flat, get("aff2solv").ela, budget=20, seed=seed, tol=tol)
        flags = res.classification.flags
        rec.add("flat-target recipe: certified biharmonic",
                "biharmonic=True", f"biharmonic={flags['biharmonic']} "
                f"harmonic={flags['harmonic']}", flags["biharmonic"])
    except Exception as exc:
        rec.add("flat-target recipe: certified biharmonic", "True", repr(exc),
                False)

    # Kahler structure on the 2-dim non-abelian algebra; holomorphic maps
    # are harmonic
    try:
        e1 = get("e1", a=1.0).ela
        j = np.array([[0.0, -1.0], [1.0, 0.0]])
        ks = KahlerStructure(e1, j)
        ok = check_kahler(ks, tol)
        idm = LieAlgebraMap.identity(e1, e1)
        cls = classify(idm, tol)
        rec.add("Kahler structure validates; holomorphic self-map is harmonic",
                "True", str(ok and cls.flags["harmonic"]),
                ok and cls.flags["harmonic"])
    except Exception as exc:
        rec.add("Kahler structure validates; holomorphic self-map is harmonic",
                "True", repr(exc), False)

    return SuiteReport(checks=tuple(rec.checks))
