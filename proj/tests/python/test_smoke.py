import cmath
import math

import numpy as np
import pytest

import iwaves


def test_version():
    assert isinstance(iwaves.__version__, str) and iwaves.__version__


def test_ell_closed_form():
    lam = 0.6
    x1, x2 = 0.3, -0.7
    expected = x1 / lam + x2 / math.sqrt(1 - lam * lam)
    assert iwaves.ell(x1, x2, lam) == pytest.approx(expected, rel=1e-15)
    assert iwaves.ell(x1, x2, lam, -1) == pytest.approx(-x1 / lam + x2 / math.sqrt(1 - lam * lam), rel=1e-15)


def test_disk_rotation_number():
    lam = 0.37
    r = iwaves.rotation_number(lam, orbit=200_000)
    assert r["value"] == pytest.approx(1 - 2 / math.pi * math.acos(lam), abs=1e-6)
    assert iwaves.is_simple(lam)


def test_invalid_lambda_raises():
    with pytest.raises(iwaves.InputError):
        iwaves.rotation_number(1.5)


def test_square_eigenvalues():
    for i, j, e in iwaves.square_eigenvalues(6):
        assert e == pytest.approx(j * j / (i * i + j * j), rel=1e-15)


def test_cohomological_single_mode():
    K, k, alpha = 4, 3, (math.sqrt(5) - 1) / 2
    g = np.zeros(2 * K + 1, dtype=complex)
    g[K + k] = 1.0
    g[K - k] = 1.0
    v, residual = iwaves.solve_cohomological(g, alpha)
    assert residual < 1e-12
    c = len(v) // 2
    for m in (k, -k):
        assert v[c + m] == pytest.approx(1 / (1 - cmath.exp(2j * math.pi * m * alpha)), rel=1e-12)


def test_continued_fraction_golden():
    cf = iwaves.continued_fraction((math.sqrt(5) - 1) / 2, 20)
    assert all(a == 1 for a in cf["quotients"][:20])


def test_resonant_mode_grows():
    times = [10.0 ** (k / 8) for k in range(-8, 33)]
    _, growth = iwaves.evolve_square_mode(1, 1, math.sqrt(0.5), times)
    assert growth
    _, growth = iwaves.evolve_square_mode(1, 1, 0.3, times)
    assert not growth


def test_right_inverse_constant_forcing():
    r = iwaves.right_inverse_disk(lambda x1, x2: 1.0, 0.6, 41)
    assert r["verified"]
    assert r["residual"] < 1e-6
    assert abs(r["solution"](0.0, 0.0)) > 0
