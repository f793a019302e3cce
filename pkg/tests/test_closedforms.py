import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_laguerre, j0

from stellarkernel import closedforms as cf
from stellarkernel.exceptions import DomainError, RangeError
from stellarkernel.oracle import radial_fourier_quadrature


def hankel_reference(n, omega):
    """``int_0^inf k(r^2) J0(omega r) r dr``, equal to the 2-D transform with the 1/(2 pi) convention."""
    f = lambda r: math.exp(-r * r) * eval_laguerre(n, r * r) ** 2 * j0(omega * r) * r  # noqa: E731
    return quad(f, 0, 30, epsabs=1e-13, epsrel=1e-12, limit=800)[0]


@pytest.mark.parametrize("n", [0, 2, 5, 8])
def test_inner_self_overlap(n):
    assert cf.displaced_fock_inner((0.4, -0.9), (0.4, -0.9), n, 1.3) == pytest.approx(1, abs=1e-10)


def test_inner_examples():
    assert abs(cf.displaced_fock_inner((0, 0), (1, 0), 0)) == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert abs(cf.displaced_fock_inner((0, 0), (2, 0), 1)) == pytest.approx(3 * math.exp(-2), rel=1e-12)


def test_inner_range():
    with pytest.raises(RangeError):
        cf.displaced_fock_inner((0, 0), (1, 0), 9)


def test_laguerre_kernel_examples():
    assert cf.displaced_fock_kernel_laguerre(0.0, 7) == 1
    assert cf.displaced_fock_kernel_laguerre(1.0, 1) == pytest.approx(0, abs=1e-16)
    assert cf.displaced_fock_kernel_laguerre(2.0, 2) == pytest.approx(math.exp(-2), rel=1e-14)


def test_table_examples():
    assert cf.table_reference_kernel(0.0, 3) == pytest.approx(1, rel=1e-15)
    assert cf.table_reference_kernel(4.0, 2) == pytest.approx(math.exp(-4), rel=1e-14)
    assert cf.table_reference_kernel(1.0, 0) == pytest.approx(math.exp(-1), rel=1e-15)
    with pytest.raises(RangeError):
        cf.table_reference_kernel(1.0, 9)


@pytest.mark.parametrize("n", range(9))
def test_three_forms_agree(n, rng):
    for s2 in rng.uniform(0, 64, 30):
        th = rng.uniform(0, 2 * math.pi)
        x1 = rng.uniform(-1, 1, 2)
        x2 = x1 + math.sqrt(s2) * np.array([math.cos(th), math.sin(th)])
        s2 = float(np.sum((x1 - x2) ** 2))
        vals = [
            abs(cf.displaced_fock_inner(x1, x2, n)) ** 2,
            cf.displaced_fock_kernel_laguerre(s2, n),
            cf.table_reference_kernel(s2, n),
        ]
        scale = max(vals)
        tol = 1e-8 * scale if scale >= 1e-8 else 1e-12
        assert max(vals) - min(vals) <= tol


def test_kernel_range_dense_grid():
    u = np.linspace(0, 200, 4001)
    for n in range(21):
        k = cf.displaced_fock_kernel_laguerre(u, n)
        assert k.min() >= 0 and k.max() <= 1 + 1e-12


def test_radial_coeffs_examples():
    assert cf.radial_poly_coeffs(0).coeffs == (1.0,)
    assert cf.radial_poly_coeffs(1).coeffs == (1.0, -2.0, 1.0)
    assert cf.radial_poly_coeffs(2).coeffs == (1.0, -4.0, 5.0, -2.0, 0.25)
    poly = cf.radial_poly_coeffs(6)
    u = np.linspace(0, 10, 50)
    np.testing.assert_allclose(poly(u), cf.displaced_fock_kernel_laguerre(u, 6), atol=1e-12)


def test_fourier_examples():
    assert cf.fourier_radial(0, 0.0) == pytest.approx(0.5, abs=1e-15)
    for w in (0.5, 2.0, 5.0):
        assert cf.fourier_radial(0, w) == pytest.approx(0.5 * math.exp(-w * w / 4), rel=1e-13)
    assert cf.fourier_radial(1, 0.0) == pytest.approx(hankel_reference(1, 0.0), abs=1e-8)
    assert abs(cf.fourier_radial(4, 30.0)) < 1e-60
    with pytest.raises(DomainError):
        cf.fourier_radial(1, -1.0)
    with pytest.raises(RangeError):
        cf.fourier_radial(13, 1.0)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_fourier_against_hankel_quadrature(n, rng):
    for w in rng.uniform(0, 8, 6):
        assert cf.fourier_radial(n, w) == pytest.approx(hankel_reference(n, w), abs=1e-8)
        assert cf.fourier_radial(n, w) == pytest.approx(
            radial_fourier_quadrature(lambda u: cf.displaced_fock_kernel_laguerre(u, n), w), abs=1e-8
        )


@pytest.mark.parametrize("n", [0, 3, 5, 20])
def test_kernel_integral(n):
    assert cf.kernel_integral(n) == math.pi
    with pytest.raises(RangeError):
        cf.kernel_integral(21)


def test_kernel_integral_quadrature():
    val = quad(lambda r: cf.displaced_fock_kernel_laguerre(r * r, 5) * r, 0, np.inf, limit=400)[0]
    assert 2 * math.pi * val == pytest.approx(math.pi, abs=1e-6)


@pytest.mark.parametrize("n", range(9))
def test_zero_count(n):
    zeros = cf.kernel_zeros(n)
    assert len(zeros) == n
    for z in zeros:
        assert abs(eval_laguerre(n, z)) < 1e-9


def test_translation_rotation(rng):
    assert cf.translation_rotation_check((0.1, 0.2), (0.5, -0.3), (0, 0), 0.0, 2) == 0
    for n in (1, 4):
        x1, x2, h = rng.uniform(-1.5, 1.5, (3, 2))
        assert cf.translation_rotation_check(x1, x2, h, rng.uniform(0, 6.28), n) <= 1e-9


def test_bandwidth_identity():
    x1, x2 = np.array([0.3, -0.4]), np.array([-1.0, 0.2])
    c = 1.7
    assert cf.displaced_fock_kernel(x1, x2, 3, c) == cf.displaced_fock_kernel(c * x1, c * x2, 3, 1.0)
