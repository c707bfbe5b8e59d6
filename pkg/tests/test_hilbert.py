import math

import numpy as np
import pytest

from paircorr import hilbert as H


def test_first_level():
    s = H.solve_level(1)
    assert s.lam == pytest.approx(3.0, abs=1e-12)
    assert s.Q == pytest.approx(1.5, abs=1e-12)
    assert s.coeffs[0] == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        H.solve_level(0)


@pytest.mark.parametrize("N", [1, 2, 5, 50, 500])
def test_level_invariants(N):
    s = H.solve_level(N)
    assert H.level_sum(s.lam, N) == pytest.approx(0.5, abs=1e-12)
    assert math.fsum(s.coeffs ** 2) == pytest.approx(0.5, abs=1e-14)
    assert np.all(s.coeffs > 0) and np.all(np.diff(s.coeffs) < 0)
    assert H.level_functional(s.coeffs) == pytest.approx(s.Q, abs=1e-10)


def test_levels_increase_to_limit(constants):
    lams = [H.solve_level(n).lam for n in (1, 2, 3, 10, 100, 1000)]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert lams[-1] < constants.lambda_inf
    assert constants.lambda_inf - lams[-1] < 1e-3


def test_infinite_level(constants):
    s = H.solve_level(None, terms=200)
    assert s.N is None and s.lam == pytest.approx(3.33354, abs=1e-5)
    assert s.coeffs.size == 200
    lam = s.lam
    norm = H._normalizer_sum(lam, None)
    assert norm == pytest.approx(math.pi ** 2 / (16 * lam ** 2) + 1 / (2 * lam), rel=1e-13)


@pytest.mark.parametrize("lam", [1.5, 2.0, 10.0])
def test_series_identity(lam):
    lhs, rhs = H.series_identity_check(lam)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_series_identity_at_limit_and_large(constants):
    lam = constants.lambda_inf
    lhs, rhs = H.series_identity_check(lam)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert rhs == pytest.approx(math.pi ** 2 / (16 * lam ** 2) + 1 / (2 * lam), rel=1e-12)
    big = 1e4
    lhs, rhs = H.series_identity_check(big)
    assert lhs == pytest.approx(rhs, rel=1e-8)
    assert rhs == pytest.approx(math.pi ** 2 / (8 * big ** 2), rel=1e-3)
    with pytest.raises(ValueError):
        H.series_identity_check(1.0)


def test_embedding_constants(constants):
    c = constants
    assert c.theta == pytest.approx(0.27385, abs=1e-5)
    assert c.eta == pytest.approx(0.67551, abs=1e-5)
    assert c.D_squared == pytest.approx(0.3244, abs=5e-4)
    assert c.theta == pytest.approx(1 / (2 * math.sqrt(c.lambda_inf)), rel=1e-15)
    assert (1 - 2 * c.lambda_inf / math.pi ** 2) == pytest.approx(1 - c.eta, abs=1e-10)
    assert all(abs(v) <= 1e-12 for v in c.residuals().values())
    assert c.D_squared < 1 / 3


def test_extremal_values(constants):
    th = constants.theta
    assert H.extremal_f(th) == pytest.approx(1 + math.sin(2 * math.pi * th) / (2 * math.pi * th), rel=1e-14)
    z = np.linspace(-7, 7, 301)
    assert np.allclose(H.extremal_f(z), H.extremal_f(-z), atol=1e-15)
    assert H.extremal_norm_sq() == pytest.approx(2 + 2 * math.sin(2 * math.pi * th) / (2 * math.pi * th))


def test_samples_follow_coefficients():
    ratio = H.half_integer_samples(50) / H.predicted_samples(50)
    assert np.max(np.abs(ratio / ratio[0] - 1)) < 1e-8
    # normalised f has unit norm, so the ratio is ||f||_2
    assert ratio[0] == pytest.approx(math.sqrt(H.extremal_norm_sq()), rel=1e-10)


def test_verify_extremality(constants):
    chk = H.verify_extremality()
    assert chk.norm_pw == pytest.approx(1.0, abs=1e-8)
    assert chk.norm_quadrature == pytest.approx(1.0, abs=1e-7)
    assert chk.ratio_sampling == pytest.approx(0.3244, abs=5e-4)
    assert chk.ratio_sampling == pytest.approx(chk.ratio_quadrature, abs=1e-7)
    assert chk.norm_mu_ratio == pytest.approx(constants.D_squared, abs=1e-10)
    with pytest.raises(ValueError):
        H.verify_extremality(grid=100)


def test_baseline_sinc():
    assert H.baseline_ratio() == pytest.approx(1 / 3, abs=1e-10)


def test_perturbation_local_max():
    s = H.solve_level(50)
    a = np.array(s.coeffs)
    f0 = H.level_functional(a)
    rng = np.random.default_rng(2024)
    worst = -math.inf
    for _ in range(1000):
        v = rng.standard_normal(a.size)
        v -= (v @ a) / (a @ a) * a
        v *= rng.uniform(1e-4, 1e-1) / np.linalg.norm(v)
        b = a + v
        b *= math.sqrt(0.5 / (b @ b))
        worst = max(worst, H.level_functional(b) - f0)
    assert worst <= 1e-9
