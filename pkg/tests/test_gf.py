import itertools
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kakeya.errors import DivisionByZero, NotAPrimePower, WrongCharacteristic, ZeroLeadingCoefficient
from kakeya.gf import GF, factor_prime_power, is_irreducible, smallest_irreducible

from oracles import naive_add, naive_mul

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32]


@pytest.mark.parametrize("q,expected", [(2, (2, 1)), (9, (3, 2)), (64, (2, 6)), (125, (5, 3))])
def test_factor_prime_power(q, expected):
    assert factor_prime_power(q) == expected


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100])
def test_rejects_non_prime_powers(q):
    with pytest.raises(NotAPrimePower):
        GF(q)


def test_modulus_is_smallest_irreducible():
    # brute force over monic polynomials, comparing coefficient lists from the constant term up
    for p, m in [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3)]:
        monics = [list(c) + [1] for c in itertools.product(range(p), repeat=m)]
        irr = [c for c in monics if is_irreducible(c, p)]
        assert tuple(min(irr)) == smallest_irreducible(p, m)
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(2, 3) == (1, 0, 1, 1)  # 1 + x^2 + x^3 precedes 1 + x + x^3


def test_irreducibility_against_root_count():
    # degree 2 and 3: irreducible iff no roots
    for p in (2, 3, 5):
        for m in (2, 3):
            for c in itertools.product(range(p), repeat=m):
                poly = list(c) + [1]
                has_root = any(sum(a * x**i for i, a in enumerate(poly)) % p == 0 for x in range(p))
                assert is_irreducible(poly, p) == (not has_root)


@pytest.mark.parametrize("q", ORDERS)
def test_multiplication_matches_naive_polynomial_product(q):
    F = GF(q)
    pairs = itertools.product(range(q), repeat=2) if q <= 16 else ((a, b) for a in range(q) for b in (0, 1, 2, q - 1, q // 2))
    for a, b in pairs:
        assert F.mul(a, b) == naive_mul(F, a, b)
        assert F.add(a, b) == naive_add(F, a, b)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    F = GF(q)
    for a in range(q):
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, a) == 0
        assert F.mul(a, 1) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
        assert F.pow(a, q) == a
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_ring_laws(q, data):
    F = GF(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    e = data.draw(st.integers(0, 3 * q))
    expected = 1
    for _ in range(e):
        expected = F.mul(expected, a)
    assert F.pow(a, e) == expected


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_vectorized_matches_scalar(q):
    F = GF(q)
    a, b = np.meshgrid(np.arange(q), np.arange(q))
    a, b = a.ravel(), b.ravel()
    assert F.add_arr(a, b).tolist() == [F.add(x, y) for x, y in zip(a, b)]
    assert F.mul_arr(a, b).tolist() == [F.mul(x, y) for x, y in zip(a, b)]
    assert F.neg_arr(a).tolist() == [F.neg(x) for x in a]
    assert F.pow_arr(a, 5).tolist() == [F.pow(x, 5) for x in a]
    assert F.trace_arr(np.arange(q)).tolist() == [F.trace(x) for x in range(q)]


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 16, 25, 32])
def test_trace_is_sum_of_frobenius_conjugates(q):
    F = GF(q)
    for a in range(q):
        s, x = 0, a
        for _ in range(F.m):
            s = F.add(s, x)
            x = F.pow(x, F.p)
        assert s < F.p  # lies in the prime field
        assert F.trace(a) == s


def test_trace_of_one():
    # tr(1) = m mod 2 in characteristic 2
    assert GF(4).trace(1) == 0
    assert GF(8).trace(1) == 1
    assert GF(32).trace(1) == 1
    assert GF(16).trace(1) == 0


@pytest.mark.parametrize("q", [4, 8, 16, 32])
def test_sqrt_and_character(q):
    F = GF(q)
    for a in range(q):
        assert F.mul(F.sqrt(a), F.sqrt(a)) == a
        assert F.additive_character(a) == (-1) ** F.trace(a)
    assert sum(F.additive_character(a) for a in range(q)) == 0


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_char2_quadratic_solver_matches_brute_force(q):
    F = GF(q)
    for alpha in range(1, q):
        for beta in range(q):
            for gamma in range(q):
                brute = frozenset(
                    x for x in range(q)
                    if F.add(F.add(F.mul(alpha, F.mul(x, x)), F.mul(beta, x)), gamma) == 0
                )
                assert F.char2_quad_solve(alpha, beta, gamma) == brute


def test_char2_quadratic_errors():
    with pytest.raises(WrongCharacteristic):
        GF(9).char2_quad_solve(1, 1, 1)
    with pytest.raises(ZeroLeadingCoefficient):
        GF(8).char2_quad_solve(0, 1, 1)


@pytest.mark.parametrize("q", [8, 9, 16])
def test_element_order_and_generator(q):
    F = GF(q)
    for a in range(1, q):
        k = F.element_order(a)
        assert F.pow(a, k) == 1 and (q - 1) % k == 0
        assert all(F.pow(a, j) != 1 for j in range(1, k))
    assert F.element_order(F.generator) == q - 1


def test_scalar_embedding_and_header():
    F = GF(9)
    assert F.scalar(7) == 1
    assert F.header() == "q=9 p=3 m=2 mod=" + ",".join(map(str, F.modulus))


def test_field_identity_and_pickle():
    assert GF(8) is GF(8)
    assert GF(8) != GF(9)
    assert pickle.loads(pickle.dumps(GF(16))) == GF(16)
