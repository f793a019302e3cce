import cmath
import math

import numpy as np
import pytest

from stellarkernel.closedforms import displaced_fock_inner
from stellarkernel.engine import (
    compositions,
    evaluate,
    inner_product,
    kernel,
    qudit_inner,
    recursion_tables,
    seed,
)
from stellarkernel.exceptions import (
    BudgetError,
    DivergentIntegralError,
    NormalizationError,
    RangeError,
    ShapeError,
)
from stellarkernel.oracle import sb_inner_quadrature
from stellarkernel.stellar import (
    StellarFunction,
    coherent,
    encode_displaced_fock,
    encode_qudit,
    random_stellar,
    vacuum,
)


def seed_exponent(params, x):
    quad = -np.sum(params.a * x * x) + params.b @ x + x @ params.d @ x
    return quad + params.const


def direct_exponent(f1, f2, x):
    m = f1.modes
    z = x[0::2] + 1j * x[1::2]
    g1 = f1.gaussian_exponent(z.reshape(1, m))[0]
    g2 = f2.gaussian_exponent(z.reshape(1, m))[0]
    return np.conj(g1) + g2 - np.sum(np.abs(z) ** 2)


def test_seed_vacuum():
    p = seed(vacuum(2), vacuum(2))
    np.testing.assert_array_equal(p.a, np.ones(4))
    assert not p.b.any() and not p.d.any()


def test_seed_coherent():
    a, b = 0.4 - 0.2j, -0.1 + 0.7j
    p = seed(coherent(a), coherent(b))
    np.testing.assert_allclose(p.a, [1, 1])
    np.testing.assert_allclose(p.b, [a.conjugate() + b, -1j * (a.conjugate() - b)])
    assert p.d[0, 1] == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_seed_matches_exponent_expansion(m, rng):
    for _ in range(5):
        f1 = random_stellar(rng, m, 1, a_scale=0.5)
        f2 = random_stellar(rng, m, 1, a_scale=0.5)
        p = seed(f1, f2)
        assert np.allclose(np.tril(p.d), 0)
        for x in rng.normal(size=(10, 2 * m)):
            assert seed_exponent(p, x) == pytest.approx(direct_exponent(f1, f2, x), abs=1e-12)


def test_seed_divergent():
    f = StellarFunction([[1.5]], [0.0], 0, {(0,): 1})
    with pytest.raises(DivergentIntegralError):
        seed(f, f)
    with pytest.raises(DivergentIntegralError):
        inner_product(f, f)


def test_recursion_tables_first_level_is_seed(rng):
    p = seed(random_stellar(rng, 2, 1), random_stellar(rng, 2, 1))
    t = recursion_tables(p)
    assert t.a[0] == p.a[0] and t.b[0] == p.b[0]
    np.testing.assert_array_equal(t.d[0], p.d[0])


def test_compositions_colex():
    assert compositions(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert len(compositions(3, 3)) == math.comb(5, 2)
    assert all(sum(c) == 3 for c in compositions(3, 3))


def test_vacuum_inner():
    assert inner_product(vacuum(), vacuum()) == pytest.approx(1, abs=1e-15)
    assert inner_product(vacuum(3), vacuum(3)) == pytest.approx(1, abs=1e-15)


def test_coherent_overlap():
    assert inner_product(coherent(1), coherent(1j)) == pytest.approx(cmath.exp(-1 + 1j), abs=1e-14)


def test_coherent_kernel(rng):
    for a, b in rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2)):
        assert kernel(coherent(a), coherent(b)) == pytest.approx(math.exp(-abs(a - b) ** 2), abs=1e-13)


def test_displaced_fock_agrees_with_closed_form():
    x1, x2 = (0.3, 0.1), (-0.2, 0.5)
    got = inner_product(encode_displaced_fock(x1, 1), encode_displaced_fock(x2, 1))
    assert abs(got - displaced_fock_inner(x1, x2, 1)) <= 1e-9


@pytest.mark.parametrize("n", range(9))
def test_self_kernel_is_one(n):
    f = encode_displaced_fock((0.8, -0.6), n, 1.3)
    assert kernel(f, f) == pytest.approx(1, abs=1e-9)


def test_qudit_examples():
    s = 1 / math.sqrt(2)
    assert qudit_inner([1, 0], [1, 0]) == 1
    assert qudit_inner([1, 0], [0, 1]) == 0
    assert qudit_inner([s, s], [1, 0]) == pytest.approx(s)
    assert kernel(encode_qudit([1, 0]), encode_qudit([0, 1])) == 0
    with pytest.raises(ShapeError):
        qudit_inner([1, 0], [1, 0, 0])
    with pytest.raises(NormalizationError):
        qudit_inner([1, 1], [1, 0])


def test_qudit_reduction(rng):
    for _ in range(50):
        d = int(rng.integers(1, 7))
        a1, a2 = rng.normal(size=(2, d)) + 1j * rng.normal(size=(2, d))
        a1, a2 = a1 / np.linalg.norm(a1), a2 / np.linalg.norm(a2)
        assert kernel(encode_qudit(a1), encode_qudit(a2)) == pytest.approx(abs(qudit_inner(a1, a2)) ** 2, abs=1e-9)


def test_single_mode_against_quadrature(rng):
    for _ in range(20):
        f = random_stellar(rng, 1, int(rng.integers(0, 4)))
        g = random_stellar(rng, 1, int(rng.integers(0, 4)))
        ref = sb_inner_quadrature(f, g)
        assert abs(inner_product(f, g) - ref) <= 1e-7 * max(1, abs(ref))


def test_hermitian_symmetry(rng):
    for m in (1, 2):
        for _ in range(5):
            f, g = random_stellar(rng, m, 2), random_stellar(rng, m, 2)
            assert inner_product(f, g) == pytest.approx(inner_product(g, f).conjugate(), rel=1e-10, abs=1e-12)


def test_guards():
    f = encode_displaced_fock((0.1, 0.2), 3)
    with pytest.raises(BudgetError):
        inner_product(f, f, budget=5)
    with pytest.raises(BudgetError):
        inner_product(f, f, max_rank=2)
    with pytest.raises(ShapeError):
        inner_product(vacuum(1), vacuum(2))
    with pytest.raises(RangeError):
        inner_product(vacuum(4), vacuum(4))
    with pytest.raises(BudgetError):
        inner_product(random_stellar(np.random.default_rng(0), 2, 5), vacuum(2))


def test_term_count_superlinear_in_modes(rng):
    counts = []
    for m in (1, 2, 3):
        f, g = random_stellar(rng, m, 2), random_stellar(rng, m, 2)
        counts.append(evaluate(f, g).terms)
    assert counts[0] < counts[1] < counts[2]
    assert counts[2] - counts[1] > counts[1] - counts[0]
