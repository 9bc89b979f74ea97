import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracweyl.fields import bump_profile
from diracweyl.propagator import (ConvergenceError, classify_singularities, dirac_green_1d,
                                  eval_zeta_integral, green_kg, retarded_propagator,
                                  richardson, usable_eps_factors, zeta_antiderivative,
                                  zeta_integral_with_error, zeta_limit, zeta_smear_test)


def test_green_closed_forms():
    assert green_kg(1, 2.0, 1.0).bulk == -0.5j
    assert green_kg(1, 2.0, 3.0).bulk == 0
    assert np.isclose(green_kg(2, 2.0, 1.0).bulk, -1j / (2 * np.pi * np.sqrt(3)))
    assert green_kg(2, 2.0, 2.5).bulk == 0
    g3 = green_kg(3, 2.0, 1.0)
    assert g3.bulk == 0 and np.isclose(g3.shell, -1j / (8 * np.pi))
    with pytest.raises(ValueError):
        retarded_propagator(4)
    with pytest.raises(ValueError):
        green_kg(2, -1.0, 0.5)


def test_dirac_green_1d_weights():
    (xm, wm), (xp, wp) = dirac_green_1d(1.5)
    assert xm == -1.5 and xp == 1.5
    assert np.array_equal(wm + wp, np.eye(2))
    assert np.allclose(wm @ wm, wm) and np.allclose(wp @ wp, wp)
    with pytest.raises(ValueError):
        dirac_green_1d(-1.0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [0.5, 1.5, 2.5])
def test_segment_quadrature_matches_primitive(n, r):
    t, eps = 2.0, 0.05
    val, err = zeta_integral_with_error(n, t, r, eps)
    ref = zeta_antiderivative(n, t, r, eps)
    assert abs(val - ref) <= 1e-9 * max(abs(ref), t ** (1 - n))
    assert err < 1e-8


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5])
def test_limit_reproduces_2d_green_function(r):
    ext = zeta_limit(2, 2.0, r)
    exact = -1j / (2 * np.pi * np.sqrt(4 - r * r))
    assert abs(ext.limit - exact) < 1e-8 * abs(exact)


@pytest.mark.parametrize("n,r", [(3, 0.5), (3, 1.5), (3, 3.0), (2, 3.0), (5, 1.0)])
def test_limit_vanishes_off_the_cone(n, r):
    factors = (1e-1, 5e-2, 2e-2, 1e-2, 5e-3) if n == 5 else (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
    assert abs(zeta_limit(n, 2.0, r, factors).limit) < 1e-8


def test_limit_n4_matches_primitive_limit():
    # the default decade schedule keeps only three eps for n = 4; a denser one is needed
    ref = zeta_antiderivative(4, 2.0, 1.0, 1e-13)
    ext = zeta_limit(4, 2.0, 1.0, (1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3))
    assert np.isclose(ext.limit, ref, rtol=1e-7)


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5])
def test_default_schedule_converges_monotonically(r):
    ext = zeta_limit(2, 2.0, r)
    dev = [abs(v - ext.limit) for v in ext.values[-3:]]
    assert dev[0] > dev[1] > dev[2]


def test_too_few_usable_eps_raises():
    assert usable_eps_factors(5, (1e-1, 1e-2, 1e-3, 1e-4)) == [1e-1, 1e-2, 1e-3]
    with pytest.raises(ConvergenceError):
        zeta_limit(5, 2.0, 1.0, (1e-1, 1e-4, 1e-5))


def test_segment_input_validation():
    with pytest.raises(ValueError):
        eval_zeta_integral(1, 2.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        eval_zeta_integral(2, 2.0, 1.0, 0.0)


def test_smeared_shell_value():
    t = 2.0

    def testfn(r):
        return float(bump_profile(np.array([r - t]), 0.5)[0])

    ext = zeta_smear_test(t, testfn, (1.5, 2.5))
    expected = -1j * testfn(t) / (4 * np.pi * t)
    assert abs(ext.limit - expected) < 1e-4 * abs(expected)


def test_smear_rejects_support_at_origin():
    with pytest.raises(ValueError):
        zeta_smear_test(2.0, lambda r: 1.0, (0.0, 1.0))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_richardson_exact_on_polynomials(coef):
    eps = [0.4, 0.2, 0.1, 0.05]
    vals = [coef[0] + coef[1] * e + coef[2] * e * e for e in eps]
    ext = richardson(eps, vals)
    assert abs(ext.limit - coef[0]) < 1e-9


def test_singularity_classification():
    assert classify_singularities(3).kind == "poles"
    assert classify_singularities(5).exponent == 3
    rep = classify_singularities(2)
    assert rep.kind == "branch_cuts" and rep.exponent == 1.5
    assert rep.locations(1.0) == [(-np.inf, -1.0), (1.0, np.inf)]
    assert classify_singularities(3).locations(0.5) == [-0.5, 0.5]
    with pytest.raises(ValueError):
        classify_singularities(1)


def _radial_bump(center, width, scale=1.0):
    def fn(r):
        return scale * float(bump_profile(np.array([r - center]), width)[0])
    return fn


def test_smear_off_shell_is_zero_and_linear():
    t = 2.0
    off = zeta_smear_test(t, _radial_bump(1.0, 0.4), (0.6, 1.4))
    assert abs(off.limit) < 1e-4
    one = zeta_smear_test(t, _radial_bump(2.0, 0.5), (1.5, 2.5)).limit
    two = zeta_smear_test(t, _radial_bump(2.0, 0.5, 2.0), (1.5, 2.5)).limit
    assert abs(two - 2 * one) < 1e-12


def test_dirac_green_1d_examples():
    (_, wm), (_, wp) = dirac_green_1d(0.8)
    assert wm[0, 1] == 0.5
    c = np.array([1.3 - 0.2j, 1.3 - 0.2j])
    assert np.allclose(wm @ c + wp @ c, c)
    assert np.allclose(wp @ c, 0)
