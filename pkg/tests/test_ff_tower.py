import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semifield_lab.errors import DegreeOverflow, DivisionByZero, InvalidParams, NotPrime, ZeroInput
from semifield_lab.ff_tower import (
    FieldSpec, canonical_constants, first_irreducible, is_irreducible, is_prime, make_field,
    prime_factors, solve_b0, solve_b1, solve_congruence,
)


def schoolbook_mul(f, a, b):
    """Independent oracle: multiply coefficient lists and reduce by the modulus."""
    p, n, mod = f.p, f.n, f.modulus
    ca, cb = f.coeffs(a), f.coeffs(b)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            for t in range(n + 1):
                prod[k - n + t] = (prod[k - n + t] - c * mod[t]) % p
    return f.element(prod[:n])


elem = st.integers(min_value=0, max_value=3 ** 6 - 1)


def test_small_helpers():
    assert [m for m in range(20) if is_prime(m)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(3 ** 6 - 1) == [2, 7, 13]
    assert solve_congruence(4, 2, 6) == 2
    assert solve_congruence(2, 1, 4) is None


def test_first_irreducible_is_irreducible():
    for p, n in [(3, 4), (3, 6), (5, 4), (7, 4)]:
        mod = first_irreducible(p, n)
        assert is_irreducible(mod, p) and len(mod) == n + 1
    assert not is_irreducible([1, 0, 1], 5)  # x^2 + 1 = (x - 2)(x + 2) mod 5


def test_deterministic_construction(f36):
    again = make_field(3, 1, 3)
    assert again.to_json() == f36.to_json()
    assert FieldSpec.from_json(f36.to_json()) == f36


@settings(max_examples=200, deadline=None)
@given(elem, elem)
def test_mul_matches_schoolbook(f36, a, b):
    assert f36.mul(a, b) == schoolbook_mul(f36, a, b)
    assert f36._mul_p(a, b) == f36.mul(a, b)


@settings(max_examples=200, deadline=None)
@given(elem, elem, elem)
def test_field_axioms(f36, a, b, c):
    f = f36
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.add(a, b) == f._add_p(a, b)
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f._inv_p(a) == f.inv(a)


@settings(max_examples=100, deadline=None)
@given(elem, elem, st.integers(min_value=0, max_value=11))
def test_frobenius_is_additive_and_multiplicative(f36, a, b, e):
    f = f36
    fr = lambda x: f.frobenius(x, e % f.n)
    assert fr(f.add(a, b)) == f.add(fr(a), fr(b))
    assert fr(f.mul(a, b)) == f.mul(fr(a), fr(b))
    assert fr(a) == f.pow(a, f.p ** (e % f.n))
    assert fr(a) == f._frob_p(a, e % f.n)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=3 ** 8 - 2))
def test_discrete_log_round_trip(f38, k):
    x = f38.gamma_pow(k)
    assert f38.discrete_log(x) == k
    assert f38.log(x) == k


def test_vectorized_ops_match_scalar(f36):
    f = f36
    rng = np.random.default_rng(1)
    a = rng.integers(0, f.size, 500)
    b = rng.integers(0, f.size, 500)
    assert f.mul_v(a, b).tolist() == [f.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert f.add_v(a, b).tolist() == [f.add(int(x), int(y)) for x, y in zip(a, b)]
    assert f.neg_v(a).tolist() == [f.neg(int(x)) for x in a]
    assert f.frob_v(a, 2).tolist() == [f.frobenius(int(x), 2) for x in a]


def test_subfields_and_squares(f36):
    f = f36
    fq = [0] + [f.pow(f.subfield_generator(1), k) for k in range(2)]
    assert sorted(x for x in range(f.size) if f.in_subfield(x, 1)) == sorted(fq)
    squares = {f.mul(x, x) for x in range(1, f.size)}
    assert len(squares) == f.order // 2
    assert all(f.is_square(x) == (x in squares) for x in range(1, f.size))
    assert not f.is_square(f.gamma)
    assert f.multiplicative_order(f.gamma) == f.order


def test_canonical_constants(f36):
    c = canonical_constants(f36)
    assert c.beta == f36.gamma
    assert f36.trace_to_half(c.omega) == 0 and c.omega != 0


def test_b0_b1_postconditions(f36):
    b0 = solve_b0(f36, 1, 3, 2)
    assert b0 != 0
    b1 = solve_b1(f36, 1, 2)
    assert b1 != 0
    with pytest.raises(InvalidParams):
        solve_b0(f36, 2, 3, 2)


def test_errors():
    with pytest.raises(NotPrime):
        make_field(9, 1, 2)
    with pytest.raises(NotPrime):
        make_field(2, 1, 2)
    with pytest.raises(InvalidParams):
        make_field(3, 1, 1)
    with pytest.raises(DegreeOverflow):
        make_field(3, 1, 20)
    f = make_field(3, 1, 2)
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(ZeroInput):
        f.discrete_log(0)
    with pytest.raises(InvalidParams):
        f.check(f.size)


def test_encode_decode(f58):
    rng = random.Random(3)
    for _ in range(50):
        x = f58.random_element(rng)
        assert f58.decode(f58.encode(x)) == x


@pytest.mark.slow
def test_polynomial_path_large_field():
    f = make_field(3, 1, 7)
    assert not f.tabulated
    rng = random.Random(0)
    a, b, c = (f.random_element(rng, nonzero=True) for _ in range(3))
    assert f.mul(a, b) == schoolbook_mul(f, a, b)
    assert f.mul(a, f.inv(a)) == 1
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    k = 123457
    assert f.discrete_log(f.gamma_pow(k)) == k
