import numpy as np
import pytest

from diracweyl.clifford import make_gamma_set
from diracweyl.closedform import (WrapBoundError, disc_rule, evolve_dirac_1d,
                                  evolve_dirac_2d, evolve_dirac_3d, evolve_kg_1d,
                                  propagate_with_D1, sphere_rule, support_radius)
from diracweyl.fields import (KGData, ScalarField, SpinorField, bump_profile, l2_norm,
                              make_grid, smooth_bump)
from diracweyl.interp import PointInterpolator
from diracweyl.spectral import evolve_dirac, evolve_kg


def grid1():
    return make_grid(1, 40.0, 1024)


def spinor_1d(grid):
    b1 = smooth_bump(grid, 0.4, 0.5).values
    b2 = smooth_bump(grid, -0.3, 0.7).values
    return SpinorField(grid, np.stack([b1, 0.6j * b2]))


def test_dirac_1d_splits_bump_into_two_halves():
    grid = grid1()
    psi0 = smooth_bump(grid, 0.0, 0.5, component=0)
    x = grid.axis
    t = 77 * grid.h  # whole cells, so the shifted samples are exact
    out = evolve_dirac_1d(psi0, t)
    left = 0.5 * bump_profile(np.abs(x + t), 0.5)
    right = 0.5 * bump_profile(np.abs(x - t), 0.5)
    assert np.allclose(out.values[0], left + right, atol=1e-15)
    assert np.allclose(out.values[1], left - right, atol=1e-15)


def test_dirac_1d_identity_and_errors():
    grid = grid1()
    psi0 = spinor_1d(grid)
    assert np.array_equal(evolve_dirac_1d(psi0, 0.0).values, psi0.values)
    with pytest.raises(ValueError):
        evolve_dirac_1d(smooth_bump(make_grid(2, 4.0, 16), 0, 1.0, component=0), 1.0)
    with pytest.raises(ValueError):
        propagate_with_D1(smooth_bump(make_grid(2, 4.0, 16), 0, 1.0, component=0), 1.0)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.77, 7.1])
def test_dirac_1d_matches_spectral(t):
    grid = grid1()
    psi0 = spinor_1d(grid)
    a = evolve_dirac(make_gamma_set(1), psi0, t)
    b = evolve_dirac_1d(psi0, t)
    assert l2_norm(SpinorField(grid, a.values - b.values)) < 1e-10 * l2_norm(a)


@pytest.mark.parametrize("t", [0.3, 2.5, 6.05])
def test_kg_1d_matches_spectral(t):
    grid = grid1()
    f = smooth_bump(grid, 1.0, 0.8)
    g = smooth_bump(grid, -0.5, 0.5, 2.0)
    a = evolve_kg(KGData(f, g), t).values
    b = evolve_kg_1d(f, g, t).values
    assert np.linalg.norm(a - b) < 1e-9 * np.linalg.norm(a)


def test_kg_1d_plateau_and_identity():
    grid = grid1()
    zero = ScalarField(grid, np.zeros(grid.N))
    g = smooth_bump(grid, 0.0, 0.5)
    total = g.values.sum().real * grid.h
    mid = grid.N // 2
    assert np.isclose(evolve_kg_1d(zero, g, 8.0).values[mid], total / 2, rtol=1e-6)
    f = spinor_1d(grid).values[0]
    assert np.allclose(evolve_kg_1d(ScalarField(grid, f), zero, 0.0).values, f, atol=1e-15)


def test_kg_1d_constant_velocity():
    grid = make_grid(1, 4.0, 32)
    zero = ScalarField(grid, np.zeros(32))
    one = ScalarField(grid, np.ones(32))
    assert np.allclose(evolve_kg_1d(zero, one, 1.3).values, 1.3)


def test_d1_equals_shift_solution_bitwise():
    grid = grid1()
    psi0 = spinor_1d(grid)
    for cells in (1, 17, 200):
        t = cells * grid.h
        assert np.array_equal(propagate_with_D1(psi0, t).values, evolve_dirac_1d(psi0, t).values)


def test_d1_fractional_shift_and_small_time():
    grid = grid1()
    psi0 = spinor_1d(grid)
    assert np.allclose(propagate_with_D1(psi0, 1.234).values,
                       evolve_dirac_1d(psi0, 1.234).values, atol=1e-12)
    assert np.abs(propagate_with_D1(psi0, 1e-15).values - psi0.values).max() < 1e-12


def test_support_radius():
    grid = make_grid(2, 8.0, 64)
    psi0 = smooth_bump(grid, [3.8, -3.9], 1.0, component=1)  # wraps around corners
    assert 1.0 <= support_radius(psi0) <= 1.0 + 2 * grid.h


def test_quadrature_rules_normalised():
    dirs, w = sphere_rule(8, 16)
    assert np.isclose(w.sum(), 1.0)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)
    # mean of z^2 over the sphere is 1/3
    assert np.isclose(w @ dirs[:, 2] ** 2, 1 / 3)
    frac, _, wd = disc_rule(32, 64)
    # B_t[1] = t for the disc average with the inverse square-root weight
    assert np.isclose(wd.sum(), 1.0)
    assert np.all((frac >= 0) & (frac <= 1))


def _ball_points(rng, count, n, radius):
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * (radius * rng.random(count) ** (1 / n))[:, None]


def test_3d_matches_spectral_on_probes():
    g = make_gamma_set(3)
    grid = make_grid(3, 8.0, 64)
    psi0 = smooth_bump(grid, 0.0, 1.8, component=2)
    t = 1.0
    pts = _ball_points(np.random.default_rng(3), 30, 3, t + 1.8)
    ref_field = evolve_dirac(g, psi0, t)
    ref = np.stack([PointInterpolator(ref_field.values[c], grid, "exact")(pts) for c in range(4)], 1)
    out = evolve_dirac_3d(g, psi0, t, pts)
    assert np.linalg.norm(out.values - ref) < 1e-3 * np.linalg.norm(ref)


def test_3d_vanishes_inside_and_outside_the_shell():
    g = make_gamma_set(3)
    grid = make_grid(3, 8.0, 64)
    a, t = 1.0, 2.5
    psi0 = smooth_bump(grid, 0.0, 1.0, component=0)
    pts = np.array([[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.0, -1.2], [0.0, 3.8, 0.0]])
    out = evolve_dirac_3d(g, psi0, t, pts, radius=a)
    assert np.abs(out.values).max() < 1e-3
    on = evolve_dirac_3d(g, psi0, t, [[t, 0.0, 0.0]], radius=a)
    assert np.abs(on.values).max() > 1e-2


def test_3d_small_time_limit():
    g = make_gamma_set(3)
    grid = make_grid(3, 8.0, 64)
    psi0 = smooth_bump(grid, 0.0, 1.5, component=1)
    pts = np.array([[0.2, -0.1, 0.3], [0.0, 0.0, 0.0]])
    out = evolve_dirac_3d(g, psi0, 1e-4, pts)
    ref = bump_profile(np.linalg.norm(pts, axis=1), 1.5)
    assert np.allclose(out.values[:, 1], ref, atol=1e-3)


def test_3d_wrap_bound_and_dimension():
    g = make_gamma_set(3)
    grid = make_grid(3, 8.0, 32)
    psi0 = smooth_bump(grid, 0.0, 1.0, component=0)
    with pytest.raises(WrapBoundError):
        evolve_dirac_3d(g, psi0, 3.5, [[0, 0, 0]])
    with pytest.raises(ValueError):
        evolve_dirac_3d(make_gamma_set(2), psi0, 1.0, [[0, 0, 0]])
    with pytest.raises(ValueError):
        evolve_dirac_3d(g, psi0, 0.0, [[0, 0, 0]])


def test_2d_outside_zero_inside_tail():
    g = make_gamma_set(2)
    grid = make_grid(2, 10.0, 512)
    a, t = 1.0, 2.5
    psi0 = smooth_bump(grid, [0.0, 0.0], a, component=0)
    outside = evolve_dirac_2d(g, psi0, t, [[3.6, 0.0], [0.0, -4.0]], radius=a)
    assert np.abs(outside.values).max() < 1e-6
    inside = evolve_dirac_2d(g, psi0, t, [[0.0, 0.0], [0.4, 0.3]], radius=a)
    assert np.abs(inside.values).max() > 1e-3


def test_2d_matches_spectral_on_probes():
    g = make_gamma_set(2)
    grid = make_grid(2, 10.0, 256)
    psi0 = smooth_bump(grid, [0.2, -0.1], 1.0, component=1)
    t = 1.5
    pts = _ball_points(np.random.default_rng(4), 40, 2, t + 1.0)
    ref_field = evolve_dirac(g, psi0, t)
    ref = np.stack([PointInterpolator(ref_field.values[c], grid, "exact")(pts) for c in range(2)], 1)
    out = evolve_dirac_2d(g, psi0, t, pts)
    assert np.abs(out.values - ref).max() < 1e-2 * np.abs(ref_field.values).max()


def test_2d_errors():
    g = make_gamma_set(2)
    grid = make_grid(2, 4.0, 32)
    psi0 = smooth_bump(grid, 0.0, 1.0, component=0)
    with pytest.raises(WrapBoundError):
        evolve_dirac_2d(g, psi0, 1.5, [[0, 0]])
    with pytest.raises(ValueError):
        evolve_dirac_2d(g, psi0, 0.01, [[0, 0]])
    with pytest.raises(ValueError):
        evolve_dirac_2d(g, psi0, 0.5, [[0, 0, 0]])
