"""Acceptance criteria, one test each, with wall-clock budgets.

Each test prints a single ACCEPT line; the lines are repeated in the terminal
summary so they survive output capture.  Runnable directly as a script too.
"""

import math
import time
from contextlib import contextmanager

import pytest

from semifield_lab import bh_core
from semifield_lab.bh_core import BHParams, check_planarity, check_presemifield
from semifield_lab.catalog import census, euler_phi, full_autotopism_order, gcd_grid
from semifield_lab.cli import main as cli_main
from semifield_lab.ff_tower import make_field
from semifield_lab.isotopy import (
    build_beta_change, build_d_reflection, build_l_minus_d, enumerate_strong_autotopisms,
    search_strong_isotopism_monomial, strong_autotopism_count, verify, verify_basis_pairs,
)
from semifield_lab.nuclei import (
    center, kappa_index, is_nonsquare_nm, middle_nucleus, solve_xi, star_squares,
)

RESULTS: list[str] = []


@contextmanager
def criterion(num, title, budget):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        status = "PASS" if elapsed < budget else "FAIL (over budget)"
        assert elapsed < budget, f"{elapsed:.1f} s exceeds {budget} s"
    finally:
        elapsed = time.perf_counter() - t0
        line = f"ACCEPT {num:>2} {status:<4} {title} [{elapsed:.2f} s / {budget} s]"
        RESULTS.append(line)
        print(line)


def p(q, l, d):
    return BHParams.canonical(make_field(q, 1, l), d)


def test_criterion_01_presemifield_axioms(capsys):
    with criterion(1, "BH(3,3,2), BH(3,4,1): exhaustive no-zero-divisor scan", 30):
        for params, size in [(p(3, 3, 2), 729), (p(3, 4, 1), 6561)]:
            rep = check_presemifield(params)
            assert rep.pairs_scanned == size ** 2
            assert rep.zero_divisors == 0 and rep.passed


def test_criterion_02_planarity():
    with criterion(2, "BH(3,3,2) is planar", 10):
        assert check_planarity(p(3, 3, 2))


def test_criterion_03_nuclei():
    with criterion(3, "BH(3,3,2): |center| = 3, |N_m| = 9, kappa image = exhaustive", 10):
        params = p(3, 3, 2)
        mid = middle_nucleus(params)
        assert len(center(params)) == 3 and len(mid) == 9
        assert set(kappa_index(params).values()) == mid
        assert middle_nucleus(params, "parametrized") == mid


def test_criterion_04_nonsquare_criterion():
    with criterion(4, "BH(3,3,2): nonsquare criterion agrees with star-squares on 8 pairs", 1):
        params = p(3, 3, 2)
        xi = solve_xi(params)
        idx = kappa_index(params, xi)
        squares = star_squares(params, set(idx.values()))
        checked = 0
        for (a, b), alpha in idx.items():
            if (a, b) != (0, 0):
                assert is_nonsquare_nm(params, xi, a, b) == (alpha not in squares)
                checked += 1
        assert checked == 8


def test_criterion_05_strong_autotopisms():
    with criterion(5, "strong autotopisms: 312 for BH(3,3,2), 1280 for BH(3,4,1), all re-verified", 60):
        for params, expected in [(p(3, 3, 2), 312), (p(3, 4, 1), 1280)]:
            certs = enumerate_strong_autotopisms(params)
            assert len(certs) == expected == strong_autotopism_count(params)
            assert len({c.N for c in certs}) == expected
            assert all(verify(c) for c in certs)


def test_criterion_06_constructed_certificates(monkeypatch):
    with criterion(6, "beta change, d -> 2l-d, d -> l-d (q=5) certificates verify on basis pairs", 60):
        f36 = make_field(3, 1, 3)
        beta = build_beta_change(f36, 2, f36.gamma, f36.gamma_pow(5))
        refl = build_d_reflection(p(3, 3, 2))
        assert refl.dst.d == 4
        assert verify_basis_pairs(beta) and verify_basis_pairs(refl)

        def no_table(*a, **k):
            raise AssertionError("multiplication table requested")

        monkeypatch.setattr(bh_core, "build_table", no_table)
        cert = build_l_minus_d(make_field(5, 1, 4), 1)
        assert (cert.src.d, cert.dst.d) == (1, 3)
        assert verify(cert) and verify_basis_pairs(cert)


def test_criterion_07_negative_oracle():
    with criterion(7, "monomial search BH(3,4,1) -> BH(3,4,3) empty; self-search = closed form", 600):
        a, b = p(3, 4, 1), p(3, 4, 3)
        assert search_strong_isotopism_monomial(a, b) == []
        assert len(search_strong_isotopism_monomial(a, a)) == strong_autotopism_count(a) == 1280


def test_criterion_08_census():
    with criterion(8, "census counts: totient formula over q in {3,5,7,9}, 2 < l <= 12", 1):
        assert census(3, 4).count == 2
        assert census(5, 4).count == 1
        assert census(3, 5).count == 2
        for q in (3, 5, 7, 9):
            for l in range(3, 13):
                phi = euler_phi(l)
                assert census(q, l).count == (phi if l % 2 == 0 and q % 4 == 3 else phi // 2)
        assert cli_main(["census", "--q", "5", "--l", "4"]) == 0


def test_criterion_09_gcd_property():
    with criterion(9, "gcd(q^d+1, q^l+1) = 2 over q in {3,..,11}, 2 <= l <= 8", 1):
        grid = gcd_grid((3, 5, 7, 9, 11), range(2, 9))
        assert len(grid) > 0
        assert all(g == 2 for g in grid.values())
        assert all(math.gcd(q ** d + 1, q ** l + 1) == 2 for (q, l, d) in grid)


def test_criterion_10_declared_out_of_scope():
    # General-linear non-isotopy and the full autotopism order are not
    # reproducible here; check that the substitutes are wired up and that the
    # order is reported as unverified rather than claimed.
    with criterion(10, "DECLARED: general non-isotopy / full autotopism order (substitutes: 3, 7)", 1):
        rep = full_autotopism_order(3, 3, 1)
        assert rep == {"order": 2 * 3 * 1 * 26 * 8, "verified": False}


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
