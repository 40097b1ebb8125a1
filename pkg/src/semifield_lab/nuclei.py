"""Center and middle nucleus of the semifield isotope of BH(q, l, d).

For a fixed candidate alpha both sides of the associativity identities are
bilinear in the free pair (u, v), so checking the n^2 pairs of power-basis
elements is a complete membership test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bh_core import BHParams, _guard, semifield_mul, semifield_mul_many
from .errors import InputNotInFq, NoSolution, ZeroInput
from .ff_tower import xi_log_for


@dataclass
class NucleusReport:
    center: set
    middle: set
    kappa_index: dict
    xi: int

    def to_json(self, params: BHParams) -> dict:
        enc = params.field.encode
        return {
            "params": params.to_json(),
            "center": sorted(enc(x) for x in self.center),
            "middle": sorted(enc(x) for x in self.middle),
            "kappa": [{"a": enc(a), "b": enc(b), "alpha": enc(al)}
                      for (a, b), al in sorted(self.kappa_index.items())],
            "xi": enc(self.xi),
            "center_size": len(self.center),
            "middle_size": len(self.middle),
        }


def solve_xi(params: BHParams) -> int:
    """Smallest-log xi with xi^{q^{l+d}-1} = beta^{1-q^l}; checks xi^{q^l+1} is a nonsquare of F_q."""
    f = params.field
    beta_log = f.discrete_log(params.beta)
    xi = f.gamma_pow(xi_log_for(f, beta_log, params.d_reduced))
    lhs = f.div(f.frob_q(xi, params.l + params.d), xi)
    rhs = f.div(params.beta, f.frob_q(params.beta, params.l))
    if lhs != rhs:
        raise NoSolution("xi fails its defining identity")
    norm = xi_norm(params, xi)
    if not f.in_subfield(norm, 1) or f.is_square_in_fq(norm):
        raise NoSolution("xi^{q^l+1} is not a nonsquare of F_q")
    return xi


def xi_norm(params: BHParams, xi: int) -> int:
    """xi^{q^l+1}."""
    f = params.field
    return f.mul(f.frob_q(xi, params.l), xi)


def fq_elements(params: BHParams) -> list[int]:
    f = params.field
    g = f.subfield_generator(1)
    return [0] + [f.pow(g, k) for k in range(f.q - 1)]


def _check_fq(params: BHParams, *xs: int) -> None:
    for x in xs:
        if not params.field.in_subfield(x, 1):
            raise InputNotInFq(f"{x} is not in F_q")


def kappa(params: BHParams, xi: int, a: int, b: int) -> int:
    """alpha with (x*1) star alpha = (a x + b xi x^{q^l}) * 1, i.e. alpha = K_d(a + b xi)."""
    _check_fq(params, a, b)
    f = params.field
    return params.k_map.eval(f.add(a, f.mul(b, xi)))


def _assoc_mask(params: BHParams, alphas: np.ndarray, kind: str) -> np.ndarray:
    """Vectorized membership over candidate alphas, on all basis pairs."""
    basis = params.field.basis
    ok = np.ones(alphas.shape, dtype=bool)
    for u in basis:
        if kind == "middle":
            ua = semifield_mul_many(params, u, alphas)
        else:
            ua = alphas
        for v in basis:
            if kind == "middle":
                lhs = semifield_mul_many(params, ua, v)
                rhs = semifield_mul_many(params, u, semifield_mul_many(params, alphas, v))
            else:
                lhs = semifield_mul_many(params, semifield_mul_many(params, alphas, u), v)
                rhs = semifield_mul_many(params, alphas, semifield_mul(params, u, v))
            ok &= lhs == rhs
    return ok


def in_middle_nucleus(params: BHParams, alpha: int) -> bool:
    star = params.star
    basis = params.field.basis
    return all(star(star(u, alpha), v) == star(u, star(alpha, v)) for u in basis for v in basis)


def in_center(params: BHParams, alpha: int) -> bool:
    star = params.star
    basis = params.field.basis
    return all(star(star(alpha, u), v) == star(alpha, star(u, v)) for u in basis for v in basis)


def kappa_index(params: BHParams, xi: Optional[int] = None) -> dict:
    xi = solve_xi(params) if xi is None else xi
    fq = fq_elements(params)
    return {(a, b): kappa(params, xi, a, b) for a in fq for b in fq}


def middle_nucleus(params: BHParams, mode: str = "exhaustive", guard: Optional[int] = None) -> set:
    """Exhaustive scan over all alpha, or the verified kappa(a, b) image."""
    if mode == "exhaustive":
        _guard(params.field, guard)
        alphas = np.arange(params.field.size, dtype=np.int64)
        return set(alphas[_assoc_mask(params, alphas, "middle")].tolist())
    if mode == "parametrized":
        out = set()
        for alpha in kappa_index(params).values():
            if not in_middle_nucleus(params, alpha):
                raise NoSolution(f"kappa image {alpha} failed the membership test")
            out.add(alpha)
        return out
    raise ValueError(f"unknown mode {mode!r}")


def center(params: BHParams, mode: str = "exhaustive", guard: Optional[int] = None) -> set:
    """Exhaustive scan, or (parametrized) the kappa(a, 0) line filtered by membership."""
    if mode == "exhaustive":
        _guard(params.field, guard)
        alphas = np.arange(params.field.size, dtype=np.int64)
        return set(alphas[_assoc_mask(params, alphas, "center")].tolist())
    if mode == "parametrized":
        # the center is the F_q-line K(F_q) inside N_m
        out = {params.k_map.eval(a) for a in fq_elements(params)}
        for alpha in out:
            if not in_center(params, alpha):
                raise NoSolution(f"{alpha} failed the center membership test")
        return out
    raise ValueError(f"unknown mode {mode!r}")


def is_nonsquare_nm(params: BHParams, xi: int, a: int, b: int) -> bool:
    """kappa(a, b) is a nonsquare of N_m iff a^2 - b^2 xi^{q^l+1} is a nonsquare of F_q."""
    _check_fq(params, a, b)
    if a == 0 and b == 0:
        raise ZeroInput("(a, b) = (0, 0)")
    f = params.field
    disc = f.sub(f.mul(a, a), f.mul(f.mul(b, b), xi_norm(params, xi)))
    if not f.in_subfield(disc, 1):
        raise InputNotInFq("discriminant left F_q")
    return not f.is_square_in_fq(disc)


def star_squares(params: BHParams, nucleus: set) -> set:
    star = params.star
    return {star(g, g) for g in nucleus}


def nucleus_report(params: BHParams, mode: str = "exhaustive", guard: Optional[int] = None) -> NucleusReport:
    xi = solve_xi(params)
    return NucleusReport(
        center=center(params, mode, guard),
        middle=middle_nucleus(params, mode, guard),
        kappa_index=kappa_index(params, xi),
        xi=xi,
    )
