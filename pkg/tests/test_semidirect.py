"""Semidirect reconstructions and the (bi)harmonic submersion recipes."""
from fractions import Fraction

import numpy as np
import pytest

from lieharm import (
    ConstructionError,
    EuclideanLieAlgebra,
    InfeasibleSearch,
    InnerProduct,
    LieAlgebra,
    action_trace_vector,
    build_biharmonic_submersion,
    build_flat_target_submersion,
    build_harmonic_submersion,
    build_riemannian_biharmonic,
    build_semidirect,
    check_condition,
    classify,
    get,
    inner_action_data,
    is_riemannian_submersion,
    tangent_semidirect,
    tension,
    tension_coordinate_system,
)

from conftest import rand_pd, with_metric


def two_dim_solvable(a=1.0):
    return LieAlgebra.from_brackets(2, {(0, 1): [a, 0.0]}, name="aff")


def test_tangent_data_projection_tension_is_minus_drift(rng):
    for name in ("e1", "heis3", "so3"):
        base = with_metric(get(name).ela, rand_pd(rng, get(name).ela.dim))
        data = tangent_semidirect(base)
        total, proj = build_semidirect(data)
        assert total.dim == 2 * base.dim
        assert is_riemannian_submersion(proj)
        tau = np.asarray(tension(proj), float)
        drift = np.asarray(base.unimodular_vector(), float)
        assert np.allclose(tau, -drift, atol=1e-10)


def test_tangent_flags_track_unimodularity(rng):
    heis = with_metric(get("heis3").ela, rand_pd(rng, 3))
    _, proj = build_semidirect(tangent_semidirect(heis))
    flags = classify(proj).flags
    assert flags["harmonic"] and flags["biharmonic"]

    aff = with_metric(get("e1").ela, rand_pd(rng, 2))
    _, proj = build_semidirect(tangent_semidirect(aff))
    flags = classify(proj).flags
    assert not flags["harmonic"] and not flags["biharmonic"]


def test_tangent_exact_mode():
    base = get("e1", a=Fraction(2), exact=True).ela
    total, proj = build_semidirect(tangent_semidirect(base))
    assert total.exact
    tau = tension(proj)
    assert list(tau) == [Fraction(0), Fraction(2)]  # -U for [e,f]=2e


def test_inner_action_condition_holds_by_construction(rng):
    kernel = with_metric(get("heis3").ela, rand_pd(rng, 3))
    base = two_dim_solvable(1.3)
    g = rand_pd(rng, 2)
    data = inner_action_data(
        kernel, base, InnerProduct.of(g), InnerProduct.of(g),
        rng.normal(size=(3, 2)),
    )
    report = check_condition(data)
    assert report.ok
    assert report.action_defect < 1e-10 and report.cocycle_defect < 1e-10
    total, proj = build_semidirect(data)
    assert total.dim == 5
    # with matching base metrics the projection is a Riemannian submersion
    assert is_riemannian_submersion(proj)


def test_projection_with_distinct_base_metrics_is_not_a_submersion(rng):
    kernel = get("heis3").ela
    data = inner_action_data(
        kernel, two_dim_solvable(1.0), InnerProduct.identity(2),
        InnerProduct.of(np.array([[2.0, 0.0], [0.0, 1.0]])),
        rng.normal(size=(3, 2)),
    )
    _, proj = build_semidirect(data)
    assert not is_riemannian_submersion(proj)


def test_semidirect_data_rejects_metric_equipped_base():
    from lieharm import ConstructionError, SemidirectData
    ela = get("e1").ela
    with pytest.raises(ConstructionError):
        SemidirectData(
            kernel=get("heis3").ela, base=ela,
            inner_domain=InnerProduct.identity(2),
            inner_target=InnerProduct.identity(2),
            rho=np.zeros((2, 3, 3)), omega=np.zeros((2, 2, 3)),
        )


def test_inner_action_with_central_twist(rng):
    kernel = with_metric(get("heis3").ela, rand_pd(rng, 3))
    base = two_dim_solvable(0.8)
    omega0 = np.zeros((2, 2, 3))
    omega0[0, 1, 0] = 0.9  # center-valued two-form
    omega0[1, 0, 0] = -0.9
    data = inner_action_data(
        kernel, base, InnerProduct.of(rand_pd(rng, 2)),
        InnerProduct.of(rand_pd(rng, 2)), rng.normal(size=(3, 2)),
        omega0=omega0,
    )
    total, proj = build_semidirect(data)
    assert total.dim == 5


def test_inner_action_rejects_noncentral_twist(rng):
    kernel = get("heis3").ela
    base = two_dim_solvable()
    omega0 = np.zeros((2, 2, 3))
    omega0[0, 1, 1] = 1.0  # not center-valued
    omega0[1, 0, 1] = -1.0
    with pytest.raises(ConstructionError):
        inner_action_data(kernel, base, InnerProduct.identity(2),
                          InnerProduct.identity(2), np.zeros((3, 2)),
                          omega0=omega0)


def test_condition_failure_is_reported_not_raised(rng):
    """Zeroing the curvature twist of a non-commuting embedding breaks the
    compatibility equations; the checker reports instead of raising."""
    from lieharm import SemidirectData
    kernel = get("heis3").ela
    base = two_dim_solvable(1.0)
    f = rng.normal(size=(3, 2))
    good = inner_action_data(kernel, base, InnerProduct.identity(2),
                             InnerProduct.identity(2), f)
    if np.linalg.norm(good.omega) < 1e-8:
        f[:, 0] = [0.0, 1.0, 0.0]
        f[:, 1] = [0.0, 0.0, 1.0]
        good = inner_action_data(kernel, base, InnerProduct.identity(2),
                                 InnerProduct.identity(2), f)
    stripped = SemidirectData(
        kernel=good.kernel, base=good.base,
        inner_domain=good.inner_domain, inner_target=good.inner_target,
        rho=good.rho, omega=np.zeros_like(good.omega),
    )
    report = check_condition(stripped)
    assert not report.ok
    with pytest.raises(ConstructionError):
        build_semidirect(stripped)


def test_action_trace_vector_matches_tension_identity(rng):
    """tau(projection) = tau(identity between the base metrics) - H_rho."""
    kernel = with_metric(get("aff2solv").ela, rand_pd(rng, 3))
    base = two_dim_solvable(1.1)
    g1, g2 = rand_pd(rng, 2), rand_pd(rng, 2)
    data = inner_action_data(kernel, base, InnerProduct.of(g1),
                             InnerProduct.of(g2), rng.normal(size=(3, 2)))
    total, proj = build_semidirect(data)
    from lieharm import LieAlgebraMap
    ident = LieAlgebraMap(data.base_domain(), data.base_target(), np.eye(2))
    expected = (np.asarray(tension(ident), float)
                - np.asarray(action_trace_vector(data), float))
    assert np.allclose(np.asarray(tension(proj), float), expected, atol=1e-10)


def test_tension_coordinate_system_solves_for_target_metric(rng):
    from lieharm import LieAlgebraMap
    for alpha in (1.0, 0.37, 2.6, rng.uniform(0.2, 4.0)):
        base = two_dim_solvable(alpha)
        dom = EuclideanLieAlgebra(base, InnerProduct.identity(2))
        tgt = EuclideanLieAlgebra(base, InnerProduct.of(rand_pd(rng, 2)))
        a, b, x = tension_coordinate_system(dom, tgt)
        assert np.allclose(a @ x, b, atol=1e-11)
        tau = tension(LieAlgebraMap(dom, tgt, np.eye(2)))
        assert np.allclose(x, np.asarray(tau, float), atol=1e-10)


def test_harmonic_recipe_certifies(rng):
    for k in range(4):
        res = build_harmonic_submersion(
            two_dim_solvable(rng.uniform(0.5, 2.0)),
            InnerProduct.identity(2), InnerProduct.of(rand_pd(rng, 2)),
            with_metric(get("aff2solv").ela, rand_pd(rng, 3)),
            budget=20, seed=int(rng.integers(1000)),
        )
        assert res.classification.flags["harmonic"]
        assert np.linalg.norm(np.asarray(tension(res.projection), float)) < 1e-9


def test_harmonic_recipe_reports_infeasible_kernels(rng):
    """A unimodular kernel cannot absorb a nonzero base tension."""
    with pytest.raises(InfeasibleSearch):
        build_harmonic_submersion(
            two_dim_solvable(1.0),
            InnerProduct.identity(2),
            InnerProduct.of(np.array([[2.0, 0.3], [0.3, 1.0]])),
            get("heis3").ela, budget=5, seed=0,
        )


def test_harmonic_recipe_feasible_when_base_tension_vanishes():
    res = build_harmonic_submersion(
        two_dim_solvable(1.0), InnerProduct.identity(2),
        InnerProduct.identity(2), get("heis3").ela, budget=5, seed=0,
    )
    assert res.classification.flags["harmonic"]


def test_biharmonic_recipe_requires_biharmonic_base_pair(rng):
    kernel = get("heis3").ela
    # identity metric pair: identity map is harmonic, precondition holds
    res = build_biharmonic_submersion(
        two_dim_solvable(1.0), InnerProduct.identity(2),
        InnerProduct.identity(2), kernel, budget=10, seed=1,
    )
    assert res.classification.flags["biharmonic"]


def test_riemannian_recipe_variants(rng):
    base = get("so3").ela.alg
    for variant in ("unimodular_kernel", "killing_trace"):
        res = build_riemannian_biharmonic(
            base, InnerProduct.identity(3), get("heis3").ela,
            variant=variant, budget=20, seed=3,
        )
        assert res.classification.flags["biharmonic"]
        assert res.classification.flags["riemannian_submersion"]
    with pytest.raises(ConstructionError):
        build_riemannian_biharmonic(
            base, InnerProduct.identity(3), get("heis3").ela,
            variant="nonsense", budget=5, seed=0,
        )


def test_riemannian_recipe_parallel_trace_finds_nontrivial_action():
    res = build_riemannian_biharmonic(
        two_dim_solvable(1.0), InnerProduct.identity(2),
        get("e1").ela, variant="parallel_trace", budget=30, seed=2,
    )
    assert res.classification.flags["biharmonic"]
    assert np.linalg.norm(res.data.rho) > 1e-6


def test_riemannian_recipe_preconditions():
    # unimodular_kernel needs a unimodular kernel
    with pytest.raises(ConstructionError):
        build_riemannian_biharmonic(
            two_dim_solvable(1.0), InnerProduct.identity(2),
            get("e1").ela, variant="unimodular_kernel", budget=5, seed=0,
        )
    # killing_trace needs a unimodular base
    with pytest.raises(ConstructionError):
        build_riemannian_biharmonic(
            two_dim_solvable(1.0), InnerProduct.identity(2),
            get("heis3").ela, variant="killing_trace", budget=5, seed=0,
        )


def test_flat_target_recipe(rng):
    flat = get("e2flat").ela
    res = build_flat_target_submersion(flat, get("aff2solv").ela,
                                       budget=20, seed=0)
    assert res.classification.flags["biharmonic"]
    curved = get("so3").ela
    with pytest.raises(ConstructionError):
        build_flat_target_submersion(curved, get("heis3").ela,
                                     budget=5, seed=0)


def test_recipes_refuse_exact_mode():
    base = LieAlgebra.from_brackets(
        2, {(0, 1): [Fraction(1), Fraction(0)]}, exact=True)
    with pytest.raises(ConstructionError):
        build_harmonic_submersion(
            base, InnerProduct.identity(2, exact=True),
            InnerProduct.identity(2, exact=True),
            get("heis3", exact=True).ela, budget=5, seed=0,
        )
