"""Property-based checks of the structural identities on generated data."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from lieharm import (
    EuclideanLieAlgebra,
    InnerProduct,
    LieAlgebra,
    LieAlgebraMap,
    cone_membership,
    get,
    harmonic_cone,
    tension,
    validate_hom,
)
from lieharm._linalg import matrix_exp

from conftest import with_metric


def pd_from_ints(entries, n):
    """Integer-seeded positive-definite matrix: A^T A + I."""
    a = np.array(entries, dtype=float).reshape(n, n)
    return a.T @ a + np.eye(n)


int_entries = st.lists(st.integers(-2, 2), min_size=9, max_size=9)
vec3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3)
alg_names = st.sampled_from(["heis3", "so3", "sl2", "e2flat", "aff2solv"])


@settings(max_examples=60, deadline=None)
@given(name=alg_names, entries=int_entries, u=vec3, v=vec3, w=vec3)
def test_koszul_pairing_identity(name, entries, u, v, w):
    """2<A_u v, w> = <[u,v],w> + <[w,u],v> + <[w,v],u> for every metric."""
    ela = with_metric(get(name).ela, pd_from_ints(entries, 3))
    lc = ela.levi_civita()
    u, v, w = (np.array(x, dtype=float) for x in (u, v, w))
    lhs = 2.0 * ela.pair(lc.product(u, v), w)
    rhs = (ela.pair(ela.bracket(u, v), w) + ela.pair(ela.bracket(w, u), v)
           + ela.pair(ela.bracket(w, v), u))
    assert abs(lhs - rhs) < 1e-9 * (1.0 + abs(lhs) + abs(rhs))


@settings(max_examples=60, deadline=None)
@given(name=alg_names, entries=int_entries, u=vec3, v=vec3)
def test_product_antisymmetrizes_to_bracket(name, entries, u, v):
    """A_u v - A_v u = [u, v]: the product has no torsion."""
    ela = with_metric(get(name).ela, pd_from_ints(entries, 3))
    lc = ela.levi_civita()
    u, v = np.array(u, dtype=float), np.array(v, dtype=float)
    diff = np.asarray(lc.product(u, v), float) - np.asarray(
        lc.product(v, u), float)
    br = np.asarray(ela.bracket(u, v), float)
    assert np.linalg.norm(diff - br) < 1e-9 * (1.0 + np.linalg.norm(br))


@settings(max_examples=40, deadline=None)
@given(num=st.integers(-6, 6), den=st.integers(1, 6), entries=int_entries)
def test_exact_and_float_unimodular_vectors_agree(num, den, entries):
    assume(num != 0)
    a = Fraction(num, den)
    exact = get("e1", a=a, exact=True).ela.unimodular_vector()
    approx = get("e1", a=float(a)).ela.unimodular_vector()
    assert np.allclose([float(x) for x in exact],
                       np.asarray(approx, float), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(name=st.sampled_from(["heis3", "so3", "e2flat"]), entries=int_entries,
       scale_num=st.integers(1, 8))
def test_cone_membership_is_scale_invariant(name, entries, scale_num):
    """Positive rescalings of a cone member stay in the cone."""
    ela = with_metric(get(name).ela, pd_from_ints(entries, 3))
    res = harmonic_cone(ela)
    j = res.sample_interior
    assert cone_membership(ela, j)
    assert cone_membership(ela, (scale_num / 4.0) * np.asarray(j, float))


@settings(max_examples=40, deadline=None)
@given(name=alg_names, entries=int_entries,
       u=st.lists(st.floats(-1.0, 1.0, allow_nan=False, width=32),
                  min_size=3, max_size=3))
def test_exponentials_of_inner_derivations_are_homomorphisms(name, entries, u):
    ela = with_metric(get(name).ela, pd_from_ints(entries, 3))
    phi = matrix_exp(np.asarray(ela.ad(np.array(u)), dtype=float))
    m = LieAlgebraMap(ela, ela, phi)
    assert validate_hom(m)


@settings(max_examples=30, deadline=None)
@given(entries=int_entries, s_num=st.integers(1, 9))
def test_tension_scales_inversely_with_source_metric(entries, s_num):
    """Replacing the source metric by s*G divides the tension by s."""
    s = s_num / 3.0
    g1 = pd_from_ints(entries, 3)
    base = get("heis3").ela
    src1 = with_metric(base, g1)
    src2 = with_metric(base, s * g1)
    tgt = get("so3", alphas=(1.0, 2.0, 3.0)).ela
    mat = np.zeros((3, 3))
    w = np.array([1.0, 0.5, -0.25])
    mat[:, 1] = w          # the generators land on one line, so their
    mat[:, 2] = 2.0 * w    # images commute and the center can map to zero
    m1 = LieAlgebraMap(src1, tgt, mat)
    m2 = LieAlgebraMap(src2, tgt, mat)
    assert validate_hom(m1)
    t1 = np.asarray(tension(m1), float)
    t2 = np.asarray(tension(m2), float)
    assert np.linalg.norm(t1) > 1e-6  # the identity being tested is not vacuous
    assert np.allclose(t2, t1 / s, atol=1e-9 * (1.0 + np.linalg.norm(t1)))


@settings(max_examples=30, deadline=None)
@given(a=st.integers(1, 5), p=st.integers(-4, 4))
def test_aff_self_maps_hom_condition(a, p):
    """[[alpha, p], [0, 1]] is always a self-homomorphism of [e,f]=a e;
    perturbing the (1,1) entry away from 1 breaks it unless alpha = 0."""
    ela = get("e1", a=float(a)).ela
    good = LieAlgebraMap(ela, ela, np.array([[2.0, float(p)], [0.0, 1.0]]))
    assert validate_hom(good)
    bad = LieAlgebraMap(ela, ela, np.array([[2.0, float(p)], [0.0, 1.5]]))
    assert not validate_hom(bad)
