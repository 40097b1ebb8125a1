"""Command-line front end.

Exit codes: 0 success or verified, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import bh_core, catalog, isotopy, nuclei
from .bh_core import BHParams
from .errors import SemifieldError
from .ff_tower import FieldSpec, canonical_constants, make_field

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _field_args(ap: argparse.ArgumentParser, need_d: bool = False) -> None:
    ap.add_argument("--q", type=int, help="prime power q = p^h (alternative to --p/--h)")
    ap.add_argument("--p", type=int)
    ap.add_argument("--h", type=int, default=None)
    ap.add_argument("--l", type=int, required=True)
    if need_d:
        ap.add_argument("--d", type=int, required=True)
        ap.add_argument("--beta-log", type=int, default=None,
                        help="override beta = gamma^k (k odd)")
        ap.add_argument("--omega-log", type=int, default=None,
                        help="override omega = gamma^k")


def _ph(args) -> tuple[int, int]:
    if args.q is not None:
        split = catalog.split_prime_power(args.q)
        if split is None:
            raise UsageError(f"q={args.q} is not a prime power")
        p, h = split
        if args.p is not None and args.p != p or args.h is not None and args.h != h:
            raise UsageError("--q disagrees with --p/--h")
        return p, h
    if args.p is None:
        raise UsageError("give --q or --p")
    return args.p, 1 if args.h is None else args.h


def _field(args) -> FieldSpec:
    p, h = _ph(args)
    return make_field(p, h, args.l)


def _params(args, d: Optional[int] = None) -> BHParams:
    f = _field(args)
    beta = None if args.beta_log is None else f.gamma_pow(args.beta_log)
    omega = None if args.omega_log is None else f.gamma_pow(args.omega_log)
    return BHParams.canonical(f, args.d if d is None else d, beta, omega)


def _emit(args, payload: dict, pretty_lines: Optional[list[str]] = None) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(payload, indent=1) + "\n")
    if args.pretty and pretty_lines is not None:
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(payload, indent=1 if args.pretty else None))


# -- commands ----------------------------------------------------------------

def cmd_field_make(args) -> int:
    f = _field(args)
    _emit(args, f.to_json(), [f"F_{f.p}^{f.n}: modulus {list(f.modulus)}, gamma {list(f.gamma_coeffs)}"])
    return EXIT_OK


def cmd_bh_construct(args) -> int:
    params = _params(args)
    payload = {"params": params.to_json(), "form": params.form.to_json(),
               "k_map": params.k_map.to_json()}
    _emit(args, payload, [f"{params.label()}: {len(params.form)} form terms, K_d invertible"])
    return EXIT_OK


def cmd_bh_check(args) -> int:
    params = _params(args)
    t0 = time.perf_counter()
    report = bh_core.check_presemifield(params, guard=args.guard)
    payload = report.to_json()
    ok = report.passed
    if args.planarity:
        planar = bh_core.check_planarity(params, guard=args.guard)
        payload["planar"] = planar
        ok = ok and planar
    payload["seconds"] = round(time.perf_counter() - t0, 3)
    _emit(args, payload, [f"{report.label}: {'PASS' if ok else 'FAIL'} "
                          f"({report.pairs_scanned} pairs, {report.zero_divisors} zero divisors)"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bh_table(args) -> int:
    params = _params(args)
    table = bh_core.build_table(params, guard=args.guard)
    table.save(args.table_out)
    payload = {"params": params.to_json(), "path": args.table_out, "n_elements": table.n_elements}
    print(json.dumps(payload, indent=1 if args.pretty else None))
    return EXIT_OK


def cmd_nuclei(args) -> int:
    params = _params(args)
    rep = nuclei.nucleus_report(params, mode=args.mode, guard=args.guard)
    payload = rep.to_json(params)
    ok = len(rep.center) == params.q and len(rep.middle) == params.q ** 2
    _emit(args, payload, [f"{params.label()}: |center| = {len(rep.center)}, "
                          f"|middle| = {len(rep.middle)}"])
    return EXIT_OK if ok else EXIT_FAIL


def _cert_out(args, cert: isotopy.IsotopismCert) -> int:
    ok = isotopy.verify(cert)
    _emit(args, cert.to_json(), [f"{cert.src.label()} -> {cert.dst.label()} "
                                 f"({'strong' if cert.strong else 'non-strong'}, {cert.level}): "
                                 f"{'verified' if ok else 'FAILED'}"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cert_build_beta(args) -> int:
    f = _field(args)
    consts = canonical_constants(f)
    beta = f.gamma_pow(args.beta_log) if args.beta_log is not None else consts.beta
    cert = isotopy.build_beta_change(f, args.d, beta, f.gamma_pow(args.beta_prime_log))
    return _cert_out(args, cert)


def cmd_cert_build_reflect(args) -> int:
    return _cert_out(args, isotopy.build_d_reflection(_params(args)))


def cmd_cert_build_lminusd(args) -> int:
    f = _field(args)
    cert = isotopy.build_l_minus_d(f, args.d)
    if args.canonical:
        cert = isotopy.with_canonical_beta(cert)
    return _cert_out(args, cert)


def cmd_cert_verify(args) -> int:
    data = json.loads(Path(args.file).read_text())
    cert = isotopy.IsotopismCert.from_json(data)
    ok = isotopy.verify(cert)
    payload = {"src": cert.src.label(), "dst": cert.dst.label(), "strong": cert.strong,
               "level": cert.level, "verified": ok}
    if args.basis_pairs:
        payload["basis_pairs"] = isotopy.verify_basis_pairs(cert)
        ok = ok and payload["basis_pairs"]
    _emit(args, payload, [f"{payload['src']} -> {payload['dst']}: {'verified' if ok else 'FAILED'}"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_autotopisms(args) -> int:
    params = _params(args)
    certs = isotopy.enumerate_strong_autotopisms(params)
    expected = isotopy.strong_autotopism_count(params)
    payload = {"params": params.to_json(), "count": len(certs), "expected": expected}
    if args.list:
        payload["certificates"] = [c.to_json() for c in certs]
    _emit(args, payload, [f"{params.label()}: {len(certs)} strong autotopisms "
                          f"(closed form {expected})"])
    return EXIT_OK if len(certs) == expected else EXIT_FAIL


def cmd_search_monomial(args) -> int:
    src = _params(args, args.d)
    dst = _params(args, args.d_dst)
    hits = isotopy.search_strong_isotopism_monomial(src, dst, two_term=args.two_term)
    payload = {"src": src.label(), "dst": dst.label(), "hits": len(hits),
               "cost": isotopy.search_cost(src, args.two_term)}
    if args.list:
        payload["certificates"] = [c.to_json() for c in hits]
    _emit(args, payload, [f"{src.label()} -> {dst.label()}: {len(hits)} strong isotopisms "
                          f"with {'two-term' if args.two_term else 'monomial'} N"])
    return EXIT_OK


def cmd_census(args) -> int:
    if args.l == 2:
        rep = catalog.dickson_report(args.q)
        _emit(args, rep, [rep["statement"]])
        return EXIT_OK
    c = catalog.census(args.q, args.l)
    payload = c.to_json()
    if args.witness:
        split = catalog.split_prime_power(args.q)
        if split is None:
            raise UsageError(f"q={args.q} is not a prime power")
        payload["witnesses"] = catalog.merged_class_witnesses(split[0], split[1], args.l)
    _emit(args, payload, [f"q={c.q}, l={c.l}: count {c.count}, classes {c.classes}"])
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semifield-lab",
                                 description="Budaghyan-Helleseth presemifields: construction, "
                                             "nuclei, isotopism certificates, census.")
    ap.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def leaf(parent, name, func, need_d=True, help=None):
        p = parent.add_parser(name, help=help)
        _field_args(p, need_d)
        p.add_argument("--out", help="also write the JSON result to this file")
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    field = sub.add_parser("field").add_subparsers(dest="sub", required=True)
    leaf(field, "make", cmd_field_make, need_d=False)

    bh = sub.add_parser("bh").add_subparsers(dest="sub", required=True)
    leaf(bh, "construct", cmd_bh_construct)
    p = leaf(bh, "check", cmd_bh_check)
    p.add_argument("--planarity", action="store_true")
    p.add_argument("--guard", type=int, default=None)
    p = leaf(bh, "table", cmd_bh_table)
    p.add_argument("--table-out", required=True, help="binary table path")
    p.add_argument("--guard", type=int, default=None)

    p = leaf(sub, "nuclei", cmd_nuclei)
    p.add_argument("--mode", choices=["exhaustive", "parametrized"], default="exhaustive")
    p.add_argument("--guard", type=int, default=None)

    cert = sub.add_parser("cert").add_subparsers(dest="sub", required=True)
    p = leaf(cert, "build-beta", cmd_cert_build_beta)
    p.add_argument("--beta-prime-log", type=int, required=True)
    leaf(cert, "build-reflect", cmd_cert_build_reflect)
    p = leaf(cert, "build-lminusd", cmd_cert_build_lminusd)
    p.add_argument("--canonical", action="store_true",
                   help="conjugate to beta = gamma at both ends (presemifield level)")
    p = cert.add_parser("verify")
    p.add_argument("file")
    p.add_argument("--basis-pairs", action="store_true", help="also check all n^2 basis pairs")
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_cert_verify)

    auto = sub.add_parser("autotopisms").add_subparsers(dest="sub", required=True)
    p = leaf(auto, "enumerate", cmd_autotopisms)
    p.add_argument("--list", action="store_true")

    search = sub.add_parser("search").add_subparsers(dest="sub", required=True)
    p = leaf(search, "monomial", cmd_search_monomial)
    p.add_argument("--d-dst", type=int, required=True)
    p.add_argument("--two-term", action="store_true")
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("census")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--witness", action="store_true",
                   help="build and verify an l-d certificate for each merged class")
    p.add_argument("--out")
    p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_census)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SemifieldError, ValueError) as exc:
        if isinstance(exc, isotopy.VerificationFailed):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
