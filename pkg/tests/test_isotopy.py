import json

import pytest

from semifield_lab.bh_core import BHParams
from semifield_lab.errors import OddL, SpecMismatch, WrongResidue
from semifield_lab.ff_tower import make_field
from semifield_lab.isotopy import (
    IsotopismCert, build_beta_change, build_d_reflection, build_l_minus_d, compose,
    enumerate_strong_autotopisms, identity_cert, l_minus_d_witness, search_strong_isotopism_monomial,
    strong_autotopism_count, to_presemifield, verify, verify_basis_pairs, with_canonical_beta,
)
from semifield_lab.linmap import PLinearMap
from semifield_lab.nuclei import center, middle_nucleus


def both_routes(cert):
    return verify(cert) and verify_basis_pairs(cert)


def test_identity_and_beta_change(f36, bh332):
    assert both_routes(identity_cert(bh332))
    cert = build_beta_change(f36, 2, f36.gamma, f36.gamma_pow(5))
    assert cert.strong and cert.M == cert.N and both_routes(cert)
    assert cert.dst.beta == f36.gamma_pow(5)


def test_reflection(bh332, bh334):
    cert = build_d_reflection(bh332)
    assert cert.dst == bh334 and both_routes(cert)
    back = build_d_reflection(bh334)
    assert back.dst == bh332 and both_routes(back)


def test_perturbed_L_fails(bh332):
    cert = build_d_reflection(bh332)
    f = bh332.field
    bad_L = cert.L + PLinearMap.monomial(f, 1, 1)
    bad = IsotopismCert(cert.src, cert.dst, cert.M, cert.N, bad_L, True)
    assert not verify(bad)
    assert not verify_basis_pairs(bad)
    # a strong cert with M != N is rejected outright
    mixed = IsotopismCert(cert.src, cert.dst, cert.M, cert.N.scale(2), cert.L, True)
    assert not verify(mixed)


def test_inverse_and_composition(f36, bh332, bh334):
    refl = build_d_reflection(bh332)
    inv = refl.inverse()
    assert both_routes(inv)
    loop = compose(refl, inv)
    assert both_routes(loop)
    beta = build_beta_change(f36, 4, f36.gamma, f36.gamma_pow(7))
    chain = refl.then(beta)
    assert chain.dst.beta == f36.gamma_pow(7) and both_routes(chain)
    with pytest.raises(SpecMismatch):
        compose(beta, refl)


def test_cert_json_round_trip(bh332):
    cert = build_d_reflection(bh332)
    back = IsotopismCert.from_json(json.loads(json.dumps(cert.to_json())))
    assert back == cert and verify(back)


def test_strong_autotopisms_bh332(bh332):
    certs = enumerate_strong_autotopisms(bh332)
    assert len(certs) == strong_autotopism_count(bh332) == 312
    assert len({c.N for c in certs}) == 312
    assert all(verify_basis_pairs(c) for c in certs[::25])


def test_enumeration_agrees_with_search(bh332):
    enumerated = {c.N for c in enumerate_strong_autotopisms(bh332)}
    searched = {c.N for c in search_strong_isotopism_monomial(bh332, bh332)}
    assert enumerated == searched


def test_search_finds_reflection_maps(bh332, bh334):
    hits = search_strong_isotopism_monomial(bh332, bh334)
    assert len(hits) == 312
    assert build_d_reflection(bh332).N in {c.N for c in hits}


def test_l_minus_d_q5(f58):
    w = l_minus_d_witness(f58, 1)
    assert w.pair_identity_holds and w.discriminant_nonsquare
    assert both_routes(w.semifield_cert) and both_routes(w.presemifield_cert)
    cert = build_l_minus_d(f58, 1)
    assert (cert.src.d, cert.dst.d) == (1, 3) and not cert.strong
    assert both_routes(cert)
    canon = with_canonical_beta(cert)
    assert canon.src.beta == canon.dst.beta == f58.gamma
    assert both_routes(canon)
    assert to_presemifield(cert).level == "presemifield"


def test_l_minus_d_preconditions(f38):
    with pytest.raises(WrongResidue):
        build_l_minus_d(f38, 1)
    with pytest.raises(OddL):
        build_l_minus_d(make_field(5, 1, 3), 2)


def test_isotopic_semifields_share_invariants(bh332, bh334):
    # nucleus sizes are isotopy invariants
    assert len(middle_nucleus(bh334)) == len(middle_nucleus(bh332)) == 9
    assert len(center(bh334)) == len(center(bh332)) == 3


@pytest.mark.slow
def test_two_term_search_small():
    params = BHParams.canonical(make_field(3, 1, 2), 1)
    hits = search_strong_isotopism_monomial(params, params, two_term=True)
    assert all(verify(c) for c in hits)
