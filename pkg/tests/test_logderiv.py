import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paircorr import logderiv as L


def test_domain():
    for f in (L.u_minus, L.u_plus, L.v_minus, L.v_plus, L.conjectured, L.g_curves):
        with pytest.raises(ValueError):
            f(0.0)
        with pytest.raises(ValueError):
            f(np.array([1.0, -1.0]))


def test_small_a_asymptotics():
    a = 1e-3
    assert L.u_plus(a) == pytest.approx(2 / (3 * a) - 0.5, abs=1e-3)
    assert L.u_minus(a) == pytest.approx(1 / (2 * a) - 0.5, abs=1e-4)
    gm, gp = L.g_curves(1e-4)
    assert gm == pytest.approx(1.0, abs=1e-3)
    assert gp == pytest.approx(4 / 3, abs=1e-3)


def test_series_crossover_continuity():
    a = np.array([L.SERIES_CUTOFF])
    assert L._u_plus_series(a)[0] == pytest.approx(L._u_plus_direct(a)[0], rel=1e-9)
    lo, hi = L.u_plus(L.SERIES_CUTOFF * (1 - 1e-12)), L.u_plus(L.SERIES_CUTOFF * (1 + 1e-12))
    assert lo == pytest.approx(hi, rel=1e-9)
    e1 = L._lead(np.array([L.SERIES_CUTOFF * (1 - 1e-12)]))[0]
    e2 = L._lead(np.array([L.SERIES_CUTOFF * (1 + 1e-12)]))[0]
    assert e1 == pytest.approx(e2, rel=1e-9)


def test_large_a():
    a = 50.0
    for f in (L.u_minus, L.u_plus, L.v_minus, L.v_plus):
        assert f(a) * 4 * a * a == pytest.approx(1.0, abs=0.05)


def test_values_at_one():
    env = L.envelope(1.0)
    assert all(math.isfinite(v) and v > 0 for v in (env.u_minus, env.u_plus, env.v_minus, env.v_plus))
    assert env.u_minus <= env.u_plus


def test_sharper_than_older_bounds():
    a = np.linspace(0.05, 6.0, 600)
    assert np.all(L.u_minus(a) / L.v_minus(a) > 1)
    assert np.all(L.u_plus(a) / L.v_plus(a) < 1)
    assert np.all(L.u_plus(a) > L.u_minus(a))


def test_extrema():
    x, v = L.g_minus_min()
    assert x == pytest.approx(0.998, abs=1e-2) and v == pytest.approx(0.899, abs=1e-3)
    x, v = L.g_plus_max()
    assert x == pytest.approx(0.620, abs=1e-2) and v == pytest.approx(1.434, abs=1e-3)


def test_crossings():
    cm = L.g_minus_crossing()
    cp = L.g_plus_crossing()
    assert cm == pytest.approx(4.55, abs=1e-2)
    assert cp == pytest.approx(5.83, abs=1e-2)
    a = np.linspace(cm, 30, 500)
    gm, gp = L.g_curves(a)
    assert np.all(gm >= 0.999 - 1e-12)
    a = np.linspace(cp, 30, 500)
    assert np.all(L.g_curves(a)[1] <= 1.001 + 1e-12)


def test_frak_lower():
    assert L.frak_i_lower(1.0) == pytest.approx(-1 / 6)
    r = 1 + 1 / math.sqrt(3)
    assert L.frak_i_lower(r) == pytest.approx(0.0, abs=1e-15)
    xi = np.linspace(r, 20, 200)
    assert np.all(L.frak_i_lower(xi) >= -1e-15)
    with pytest.raises(ValueError):
        L.frak_i_lower(0.5)


@pytest.mark.parametrize("a", [0.1, 1.0, 10.0])
def test_frak_identity(a):
    closed, quad = L.frak_i_exp_identity(a)
    assert closed == pytest.approx(quad, rel=1e-10, abs=1e-300)


def test_frak_identity_domain():
    with pytest.raises(ValueError):
        L.frak_i_exp_identity(0.0)


@given(st.floats(1e-3, 40.0))
@settings(max_examples=80, deadline=None)
def test_envelope_order(a):
    e = L.envelope(a)
    assert e.v_minus <= e.u_minus <= e.u_plus <= e.v_plus
    assert e.g_minus == pytest.approx(e.u_minus / L.conjectured(a), rel=1e-12)
