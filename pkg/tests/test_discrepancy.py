"""Cap discrepancy: closed forms, sweep certificates, sampling oracles,
and the two independent L2 routes."""

import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import make_random_spec, random_unit_points
from diamondsphere import (
    MEAN_CHORD,
    PointSet,
    cap_area,
    count_in_cap,
    equatorial_discrepancy,
    generate,
    l2_discrepancy_quadrature,
    l2_discrepancy_stolarsky,
    mean_chord_monte_carlo,
    polar_cap_profile,
    simple_model,
    stolarsky_constant_estimate,
    sup_discrepancy_estimate,
    sup_discrepancy_exact,
    validate,
)


def brute_max_over_random_caps(coords: np.ndarray, n_caps: int,
                               seed: int) -> float:
    rng = np.random.default_rng(seed)
    centers = random_unit_points(rng, n_caps)
    t = rng.uniform(-1.0, 1.0, n_caps)
    n = len(coords)
    best = 0.0
    for lo in range(0, n_caps, 50_000):
        dots = centers[lo:lo + 50_000] @ coords.T
        counts = (dots >= t[lo:lo + 50_000, None]).sum(axis=1)
        dev = np.abs(counts / n - (1.0 - t[lo:lo + 50_000]) / 2.0)
        best = max(best, float(dev.max()))
    return best


def test_polar_profile_closed_form_simple():
    for M in (1, 2, 3, 5, 9):
        model = validate(simple_model(M))
        pts = generate(model)
        prof = polar_cap_profile(model, pts)
        assert prof.closed_form is not None
        N = model.N
        for j, ex in zip(prof.j, prof.exact):
            want = Fraction(N - 2 - 4 * j * j + 4 * (N - 1) * j,
                            2 * N * (N - 1))
            assert ex == want
        assert prof.max_exact == Fraction(2 * M, N)
        assert prof.argmax_j == M
        assert np.max(np.abs(prof.counting -
                             [float(v) for v in prof.exact])) < 1e-12


def test_polar_profile_literal_values():
    m1 = validate(simple_model(1))
    assert polar_cap_profile(m1).max_exact == Fraction(1, 3)
    m3 = validate(simple_model(3))
    assert polar_cap_profile(m3).max_exact == Fraction(3, 19)


def test_polar_profile_counting_matches_general_models():
    rng = np.random.default_rng(23)
    for k in range(6):
        model = validate(make_random_spec(rng, m_hi=10,
                                          theta_policy=f"seed:{k}"))
        pts = generate(model)
        prof = polar_cap_profile(model, pts)
        assert prof.closed_form is None or model.is_simple
        assert np.max(np.abs(prof.counting -
                             [float(v) for v in prof.exact])) < 1e-12


def test_equatorial_matches_polar_max_for_simple():
    for M in (1, 2, 4, 7):
        model = validate(simple_model(M))
        pts = generate(model)
        eq = equatorial_discrepancy(model, pts)
        assert eq.exact == Fraction(model.r[model.M - 1], 2 * model.N)
        assert eq.exact == polar_cap_profile(model).max_exact
        assert math.isclose(eq.counting, float(eq.exact), abs_tol=1e-12)


def test_sup_exact_octahedron(exact_sup_cache):
    sup = exact_sup_cache(1)
    assert math.isclose(sup.value, 1.0 / 3.0, abs_tol=1e-12)


def test_sup_exact_equals_polar_max_small_simple(exact_sup_cache, simple_suite):
    for M in (1, 2, 3, 4):
        model = simple_suite[M][0]
        sup = exact_sup_cache(M)
        assert math.isclose(sup.value, 2.0 * M / model.N, abs_tol=1e-12)


def test_sup_exact_witness_is_achieved(exact_sup_cache, simple_suite):
    for M in (1, 2, 3):
        _, pts, _ = simple_suite[M]
        sup = exact_sup_cache(M)
        k = count_in_cap(pts, sup.witness, mode=sup.side)
        dev = abs(k / len(pts) - sup.witness.area_fraction)
        assert math.isclose(dev, sup.value, abs_tol=1e-12)


def test_sup_exact_dominates_random_caps():
    rng = np.random.default_rng(99)
    for trial in range(4):
        coords = random_unit_points(rng, 8 + trial)
        sup = sup_discrepancy_exact(PointSet(coords))
        brute = brute_max_over_random_caps(coords, 150_000, seed=trial)
        assert brute <= sup.value + 1e-12
        k = count_in_cap(PointSet(coords), sup.witness, mode=sup.side)
        dev = abs(k / len(coords) - sup.witness.area_fraction)
        assert math.isclose(dev, sup.value, abs_tol=1e-12)


def test_sup_exact_size_guard(simple_suite):
    pts = simple_suite[4][1]
    with pytest.raises(ValueError):
        sup_discrepancy_exact(pts, max_points=50)


def test_sup_estimate_never_exceeds_exact(exact_sup_cache, simple_suite):
    for M in (1, 2, 3):
        _, pts, _ = simple_suite[M]
        est = sup_discrepancy_estimate(pts, n_samples=2000, seed=0)
        assert est.value <= exact_sup_cache(M).value + 1e-12


def test_sup_estimate_pole_seeds_reach_polar_max(simple_suite):
    # Even with zero random samples the pole sweeps cover the
    # parallel-height caps, so the estimate attains the polar maximum.
    for M in (1, 3, 5):
        model, pts, _ = simple_suite[M]
        est = sup_discrepancy_estimate(pts, n_samples=0)
        assert est.value >= 2.0 * M / model.N - 1e-12


def test_sup_estimate_deterministic_and_stable(simple_suite):
    model, pts, _ = simple_suite[4]
    a = sup_discrepancy_estimate(pts, n_samples=1000, seed=7)
    b = sup_discrepancy_estimate(pts, n_samples=1000, seed=7)
    assert a.value == b.value and a.side == b.side
    vals = [sup_discrepancy_estimate(pts, n_samples=1000, seed=s).value
            for s in range(4)]
    lo = 2.0 * 4 / model.N - 1e-12
    assert all(v >= lo for v in vals)
    assert max(vals) - min(vals) < 5e-3


def test_sup_estimate_witness_is_achieved(simple_suite):
    _, pts, _ = simple_suite[3]
    est = sup_discrepancy_estimate(pts, n_samples=500, seed=1)
    k = count_in_cap(pts, est.witness, mode=est.side)
    dev = abs(k / len(pts) - est.witness.area_fraction)
    assert math.isclose(dev, est.value, abs_tol=1e-12)


def test_l2_single_point_closed_form():
    lone = PointSet(np.array([[0.0, 0.0, 1.0]]))
    want = math.sqrt(1.0 / 6.0)
    assert math.isclose(l2_discrepancy_stolarsky(lone), want, rel_tol=1e-15)
    assert math.isclose(l2_discrepancy_quadrature(lone), want, rel_tol=2e-3)


def test_l2_antipodal_pair_closed_form():
    pair = PointSet(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
    # Mean pairwise distance 1 leaves a deficit of 1/3.
    want = math.sqrt((MEAN_CHORD - 1.0) / 8.0)
    assert math.isclose(l2_discrepancy_stolarsky(pair), want, rel_tol=1e-14)
    assert math.isclose(l2_discrepancy_quadrature(pair), want, rel_tol=2e-3)


def test_l2_routes_agree(octahedron_points):
    a = l2_discrepancy_stolarsky(octahedron_points)
    b = l2_discrepancy_quadrature(octahedron_points)
    assert math.isclose(a, b, rel_tol=2e-2)
    rng = np.random.default_rng(5)
    pts = PointSet(random_unit_points(rng, 20))
    assert math.isclose(l2_discrepancy_stolarsky(pts),
                        l2_discrepancy_quadrature(pts), rel_tol=2e-2)


def test_l2_decreases_along_family(simple_suite):
    vals = [l2_discrepancy_stolarsky(simple_suite[M][1]) for M in (1, 2, 4, 6)]
    assert all(vals[i] > vals[i + 1] for i in range(len(vals) - 1))
    # The L2 discrepancy of a good family decays like N**(-3/4); the
    # normalized values hover near 0.32 here.
    for M, v in zip((1, 2, 4, 6), vals):
        n = simple_suite[M][0].N
        assert 0.25 < v * n ** 0.75 < 0.4


def test_stolarsky_constant_recovered(octahedron_points):
    c = stolarsky_constant_estimate(octahedron_points, n_centers=4000, n_t=256)
    assert math.isclose(c, 8.0, rel_tol=2e-2)


def test_mean_chord_monte_carlo_converges():
    est = mean_chord_monte_carlo(n_pairs=500_000, seed=0)
    assert math.isclose(est, MEAN_CHORD, abs_tol=3e-3)
    est2 = mean_chord_monte_carlo(n_pairs=500_000, seed=1)
    assert abs(est - est2) < 5e-3


def test_cap_area_consistency_with_discrepancy_terms():
    # The area term used by every discrepancy path: fraction (1 - t)/2.
    from diamondsphere import SphericalCap, UnitVec
    cap = SphericalCap(UnitVec(0.0, 0.0, 1.0), 0.25)
    assert math.isclose(cap.area_fraction, (1.0 - 0.25) / 2.0, rel_tol=1e-15)
    assert math.isclose(cap_area(cap) / (4.0 * math.pi), cap.area_fraction,
                        rel_tol=1e-15)


def test_l2_never_exceeds_sup(octahedron_points):
    # An averaged cap deviation cannot beat the worst single cap.
    for pts in (octahedron_points,
                PointSet(random_unit_points(np.random.default_rng(9), 12))):
        quad = l2_discrepancy_quadrature(pts, n_centers=2048, n_t=128)
        sup = sup_discrepancy_exact(pts).value
        assert quad <= sup + 1e-9


def test_l2_quadrature_grid_refinement(octahedron_points):
    coarse = l2_discrepancy_quadrature(octahedron_points,
                                       n_centers=1024, n_t=64)
    fine = l2_discrepancy_quadrature(octahedron_points,
                                     n_centers=4096, n_t=256)
    assert abs(coarse - fine) / fine < 5e-3
