import random

import numpy as np
import pytest

from semifield_lab.bh_core import (
    BHParams, MulTable, bh_mul, bh_mul_many, build_table, check_planarity, check_presemifield,
    is_planar_values, semifield_identity_holds, semifield_mul, table_zero_divisors,
)
from semifield_lab.errors import InvalidParams, SizeGuard
from semifield_lab.ff_tower import make_field


def test_invalid_parameters(f36):
    with pytest.raises(InvalidParams):
        BHParams.canonical(f36, 1)  # l + d even
    with pytest.raises(InvalidParams):
        BHParams.canonical(f36, 3)  # gcd(l, d) = 3
    with pytest.raises(InvalidParams):
        BHParams.canonical(f36, 2, beta=f36.gamma_pow(2))  # square
    with pytest.raises(InvalidParams):
        BHParams.canonical(f36, 2, omega=1)  # 1 + 1 != 0


def test_vectorized_product_matches_scalar(bh332):
    f = bh332.field
    rng = np.random.default_rng(0)
    xs, ys = rng.integers(0, f.size, 300), rng.integers(0, f.size, 300)
    assert bh_mul_many(bh332, xs, ys).tolist() == [bh_mul(bh332, int(x), int(y)) for x, y in zip(xs, ys)]


def test_presemifield_and_table(bh332, tmp_path):
    table = build_table(bh332)
    rep = check_presemifield(bh332, table=table)
    assert rep.passed and rep.zero_divisors == 0 and rep.pairs_scanned == 729 ** 2
    path = tmp_path / "t.bin"
    table.save(path)
    back = MulTable.load(path)
    assert np.array_equal(back.entries, table.entries)
    assert back.entry(5, 7) == bh_mul(bh332, 5, 7)
    assert path.stat().st_size == 8 + 2 * 729 ** 2


def test_threaded_table_matches(bh332):
    assert np.array_equal(build_table(bh332, workers=4, chunk=100).entries, build_table(bh332).entries)


def test_corrupted_table_is_caught(bh332):
    table = build_table(bh332)
    entries = table.entries.copy()
    entries[1 * 729 + 2] = 0
    bad = MulTable(3, 6, entries)
    assert table_zero_divisors(bad) == 1
    assert not check_presemifield(bh332, table=bad).passed


def test_planarity_and_negative_control(bh332):
    f = bh332.field
    assert check_planarity(bh332)
    xs = np.arange(f.size)
    vals = bh_mul_many(bh332, xs, xs)
    vals[[3, 4]] = vals[[4, 3]]
    assert not is_planar_values(f, vals)
    # an additive map is never planar
    assert not is_planar_values(f, f.frob_v(xs, 1))


def test_semifield_isotope(bh332):
    assert semifield_identity_holds(bh332)
    e = bh332.identity
    rng = random.Random(0)
    for _ in range(50):
        u = bh332.field.random_element(rng)
        assert semifield_mul(bh332, u, e) == u
        assert bh332.star_form(u, e) == u
    # u star v = K^{-1}u * K^{-1}v, and K(x) = x * 1
    assert bh332.k_map(7) == bh_mul(bh332, 7, 1)


def test_d_may_exceed_l(f36):
    a = BHParams.canonical(f36, 4)
    assert a.d_reduced == 4
    assert check_presemifield(a).passed


def test_guard(f38, monkeypatch):
    params = BHParams.canonical(f38, 1)
    with pytest.raises(SizeGuard):
        build_table(params, guard=1000)
    monkeypatch.setenv("SEMIFIELD_LAB_GUARD", "100")
    with pytest.raises(SizeGuard):
        check_planarity(params)


def test_bad_table_bytes():
    with pytest.raises(ValueError):
        MulTable.from_bytes(b"XXXX\x01\x03\x02\x00" + b"\x00" * 10)
    with pytest.raises(ValueError):
        MulTable.from_bytes(b"BHTB\x01\x03\x02\x00" + b"\x00" * 10)


def test_json_round_trip(bh332):
    assert BHParams.from_json(bh332.to_json()) == bh332


@pytest.mark.slow
def test_other_primes():
    for p, l, d in [(5, 2, 1), (7, 2, 1), (3, 2, 1)]:
        params = BHParams.canonical(make_field(p, 1, l), d)
        assert check_presemifield(params).passed
        assert check_planarity(params)
