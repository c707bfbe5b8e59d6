import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paircorr import kernels as K


def test_fejer_examples():
    assert K.fejer_eval(1, 0) == pytest.approx(1.0)
    assert K.fejer_ft(1, 0.5) == pytest.approx(0.5)
    assert K.fejer_eval(1, 0.5) == pytest.approx(4 / math.pi ** 2, abs=1e-15)
    assert K.fejer_eval(0.3, 0.0) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        K.fejer_eval(1.5, 0)
    with pytest.raises(ValueError):
        K.fejer_ft(0.0, 0)


def test_rho_fejer():
    assert K.rho_fejer(1) == pytest.approx(4 / 3)
    assert K.rho_fejer(0.5) == pytest.approx(13 / 12)
    assert K.rho_fejer(1e-9) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        K.rho_fejer(-0.1)


def test_fejer_kernel_object():
    k = K.FejerKernel(0.75)
    assert k.g0() == 0.75 and k.support == 0.75
    assert k.knots == (-0.75, 0.0, 0.75)
    assert k.ft(0.75) == 0.0 and k(0.0) == pytest.approx(0.75)


def test_triangle_partition_of_unity():
    a = np.linspace(-3, 3, 10_001)
    total = sum(K.fejer_ft(1.0, a + k) for k in range(-5, 6))
    assert np.max(np.abs(total - 1)) < 1e-12


def test_dirichlet_examples():
    assert K.dirichlet_eval(2, 0.0) == pytest.approx(5.0)
    assert K.dirichlet_eval(1, math.pi) == pytest.approx(-1.0, abs=1e-14)
    assert np.allclose(K.dirichlet_eval(0, np.linspace(-7, 7, 101)), 1.0)
    assert K.dirichlet_eval(3, 4 * math.pi) == pytest.approx(7.0)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 50])
def test_dirichlet_matches_cosine_sum(n):
    x = np.linspace(-10, 10, 4001)
    assert np.max(np.abs(K.dirichlet_eval(n, x) - K.dirichlet_cosine_sum(n, x))) < 1e-10


@given(st.integers(0, 40), st.floats(-20, 20))
@settings(max_examples=80, deadline=None)
def test_dirichlet_even_periodic(n, x):
    d = K.dirichlet_eval(n, x)
    assert d == pytest.approx(K.dirichlet_eval(n, -x), abs=1e-9)
    assert d == pytest.approx(K.dirichlet_eval(n, x + 2 * math.pi), abs=1e-9)


def test_dirichlet_near_removable_point():
    n, x = 7, 1e-7
    assert K.dirichlet_eval(n, x) == pytest.approx(K.dirichlet_cosine_sum(n, x), rel=1e-14)


def test_dirichlet_minima():
    assert K.dirichlet_min(0) == 1.0
    assert K.dirichlet_min(1) == pytest.approx(-1.0, abs=1e-12)
    assert K.dirichlet_min(2) == pytest.approx(-1.25, abs=1e-12)
    assert K.dirichlet_min(3) == pytest.approx(-(14 * math.sqrt(7) + 7) / 27, abs=1e-12)
    assert K.dirichlet_min(4) == pytest.approx(-2.03911, abs=1e-5)
    with pytest.raises(ValueError):
        K.dirichlet_min(-1)


def test_c0_x1():
    assert K.c0() == pytest.approx(-0.21723, abs=1e-5)
    assert K.x1() == pytest.approx(4.49340, abs=1e-5)
    assert math.sin(K.x1()) / K.x1() - K.c0() == pytest.approx(0.0, abs=1e-10)
    # x1 is a fixed point of tan
    assert math.tan(K.x1()) == pytest.approx(K.x1(), abs=1e-6)


def test_envelope_small_and_width():
    e = K.dirichlet_envelope(1)
    assert e.ratio == pytest.approx(-1.0) and e.sandwich_ok
    e = K.dirichlet_envelope(100)
    assert e.upper - e.lower == pytest.approx((2 * math.pi - 1 + 5.4935) / 100)
    assert e.sandwich_ok
    with pytest.raises(ValueError):
        K.dirichlet_envelope(0)


@pytest.mark.parametrize("n", [1, 2, 3, 10, 64, 250])
def test_envelope_upper_at_x1(n):
    x = K.x1() / n
    if x <= math.pi:
        assert K.dirichlet_eval(n, x) <= n * (2 * K.c0() + 5.4935 / n)


def test_min_ratio_converges():
    for n in (10, 50, 200, 500):
        assert abs(K.dirichlet_min(n) / n - 2 * K.c0()) <= 5.4935 / n


def test_poisson_basics():
    assert K.poisson_eval(1.0, 0.0) == 1.0
    assert K.poisson_ft(0.5, 0.0) == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        K.poisson_eval(0.0, 1.0)
    with pytest.raises(ValueError):
        K.poisson_majorant_ft(-1.0, 0.0)


@pytest.mark.parametrize("b", [0.1, 1.0, 5.0])
def test_poisson_majorant_dominates(b):
    x = np.linspace(-50, 50, 10_000)
    assert np.all(K.poisson_majorant_eval(b, x) >= K.poisson_eval(b, x))
    assert K.poisson_majorant_ft(b, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert K.poisson_majorant_ft(b, -1.0) == pytest.approx(0.0, abs=1e-15)
    assert K.poisson_majorant_ft(b, 1.5) == 0.0


@pytest.mark.parametrize("b", [0.1, 1.0, 5.0])
def test_poisson_majorant_ft_shape(b):
    a = np.linspace(0, 1, 2001)
    v = K.poisson_majorant_ft(b, a)
    assert np.all(v >= 0) and np.all(np.diff(v) <= 1e-15)
    direct = 0.5 * math.pi * math.sinh(2 * math.pi * b * 0.3) / math.sinh(math.pi * b) ** 2
    assert K.poisson_majorant_ft(b, 0.7) == pytest.approx(direct, rel=1e-12)


def test_majorant_excess_integral():
    excess = [K.poisson_majorant_ft(b, 0.0) - math.pi for b in (0.5, 1.0, 2.0, 4.0, 8.0)]
    assert all(e >= 0 for e in excess)
    assert all(e2 < e1 for e1, e2 in zip(excess, excess[1:]))
    assert excess[-1] < 1e-9
    # Fourier inversion at 0: integral of m_b equals its transform at 0
    from paircorr.numerics import Tolerance, integrate
    b = 1.0
    q = 2 * integrate(lambda x: float(K.poisson_majorant_eval(b, x)), 0.0, math.inf,
                      Tolerance(1e-13, 1e-11), tail_exponent=2.0, period=1.0)
    assert q == pytest.approx(K.poisson_majorant_ft(b, 0.0), rel=1e-8)


def test_sinc_removable():
    assert K.sinc(0.0) == 1.0
    assert K.sin_over(1e-6) == pytest.approx(1 - 1e-12 / 6, rel=1e-15)
    assert K.sinc(np.array([1.0, 2.0])) == pytest.approx([0.0, 0.0], abs=1e-15)


def test_memo_concurrent_fill():
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(4) as ex:
        vals = list(ex.map(K.dirichlet_min, [30, 31, 30, 31, 32, 30]))
    assert vals[0] == vals[2] == vals[5]
