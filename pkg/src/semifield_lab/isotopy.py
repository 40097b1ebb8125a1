"""Isotopism certificates between BH presemifields: construction, verification, search.

A certificate (M, N, L) from S to S' asserts L(x * y) = M(x) *' N(y).  It is
checked as an identity of canonical bilinear forms, which is complete by
bilinearity, so no certificate check ever scans the field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Optional

from .bh_core import BHParams, bh_mul, semifield_mul
from .biform import BiForm
from .errors import (
    InvalidParams,
    NoSolution,
    OddL,
    SemifieldError,
    SizeGuard,
    SpecMismatch,
    WrongResidue,
)
from .ff_tower import FieldSpec, canonical_constants, solve_b0, solve_b1, solve_congruence
from .linmap import PLinearMap, row_reduce
from .nuclei import kappa, xi_norm

SEARCH_GUARD = 2 ** 20


class VerificationFailed(SemifieldError):
    pass


@dataclass(frozen=True)
class IsotopismCert:
    src: BHParams
    dst: BHParams
    M: PLinearMap
    N: PLinearMap
    L: PLinearMap
    strong: bool = False
    # "presemifield": the maps relate the * products; "semifield": the star products
    level: str = "presemifield"
    notes: dict = dc_field(default_factory=dict, compare=False)

    def inverse(self) -> "IsotopismCert":
        return IsotopismCert(self.dst, self.src, self.M.inverse, self.N.inverse,
                             self.L.inverse, self.strong, self.level)

    def then(self, other: "IsotopismCert") -> "IsotopismCert":
        """self: A -> B followed by other: B -> C."""
        return compose(self, other)

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(),
                "M": self.M.to_json(), "N": self.N.to_json(), "L": self.L.to_json(),
                "strong": self.strong, "level": self.level}

    @classmethod
    def from_json(cls, data: dict) -> "IsotopismCert":
        src = BHParams.from_json(data["src"])
        dst = BHParams.from_json(data["dst"])
        f = src.field
        return cls(src, dst, PLinearMap.from_json(f, data["M"]), PLinearMap.from_json(f, data["N"]),
                   PLinearMap.from_json(f, data["L"]), bool(data.get("strong", False)),
                   data.get("level", "presemifield"))


def _product_form(params: BHParams, level: str) -> BiForm:
    if level == "presemifield":
        return params.form
    if level == "semifield":
        return params.star_form
    raise ValueError(f"unknown level {level!r}")


def verify(cert: IsotopismCert) -> bool:
    """Permutation checks plus the identity L(x * y) = M(x) *' N(y) as bilinear forms."""
    if cert.src.field != cert.dst.field or any(
            m.field != cert.src.field for m in (cert.M, cert.N, cert.L)):
        raise SpecMismatch("certificate mixes fields")
    if cert.strong and cert.M != cert.N:
        return False
    if not all(m.is_permutation() for m in (cert.M, cert.N, cert.L)):
        return False
    lhs = _product_form(cert.src, cert.level).apply_left(cert.L)
    rhs = _product_form(cert.dst, cert.level).substitute(cert.M, cert.N)
    return lhs.equals(rhs)


def verify_basis_pairs(cert: IsotopismCert) -> bool:
    """Second route: evaluate both sides on all n^2 power-basis pairs."""
    if cert.src.field != cert.dst.field:
        raise SpecMismatch("certificate mixes fields")
    if cert.level == "presemifield":
        src_mul = lambda x, y: bh_mul(cert.src, x, y)
        dst_mul = lambda x, y: bh_mul(cert.dst, x, y)
    else:
        src_mul = lambda x, y: semifield_mul(cert.src, x, y)
        dst_mul = lambda x, y: semifield_mul(cert.dst, x, y)
    basis = cert.src.field.basis
    Mb = [cert.M.eval(u) for u in basis]
    Nb = [cert.N.eval(v) for v in basis]
    for iu, u in enumerate(basis):
        for iv, v in enumerate(basis):
            if cert.L.eval(src_mul(u, v)) != dst_mul(Mb[iu], Nb[iv]):
                return False
    return True


def _emit(cert: IsotopismCert) -> IsotopismCert:
    if not verify(cert):
        raise VerificationFailed(f"constructed certificate {cert.src.label()} -> "
                                 f"{cert.dst.label()} does not verify")
    return cert


def compose(first: IsotopismCert, second: IsotopismCert) -> IsotopismCert:
    """first: A -> B, second: B -> C; gives A -> C."""
    if first.level != second.level:
        raise SpecMismatch("cannot compose certificates of different levels")
    if first.dst != second.src:
        raise SpecMismatch("certificates do not chain")
    return IsotopismCert(first.src, second.dst, second.M @ first.M, second.N @ first.N,
                         second.L @ first.L, first.strong and second.strong, first.level)


def to_presemifield(cert: IsotopismCert) -> IsotopismCert:
    """Turn a star-level certificate into one for the underlying presemifields."""
    if cert.level == "presemifield":
        return cert
    ks, kt_inv = cert.src.k_map, cert.dst.k_inv
    return IsotopismCert(cert.src, cert.dst, kt_inv @ cert.M @ ks, kt_inv @ cert.N @ ks,
                         cert.L, cert.strong and cert.M == cert.N, "presemifield")


def identity_cert(params: BHParams) -> IsotopismCert:
    one = PLinearMap.identity(params.field)
    return IsotopismCert(params, params, one, one, one, True)


# -- explicit constructions --------------------------------------------------

def _half(field: FieldSpec) -> int:
    return field.scalar(pow(2, -1, field.p))


def _trace_split_map(field: FieldSpec, plus: int, minus: int, shift: int = 0,
                     minus_shift: Optional[int] = None) -> PLinearMap:
    """plus*(x + x^{q^l})^{p^shift} + minus*(x - x^{q^l})^{p^minus_shift}."""
    lh = field.l * field.h
    ms = shift if minus_shift is None else minus_shift
    terms: dict[int, int] = {}

    def put(e, c):
        e %= field.n
        terms[e] = field.add(terms.get(e, 0), c)

    put(shift, plus)
    put(shift + lh, plus)
    put(ms, minus)
    put(ms + lh, field.neg(minus))
    return PLinearMap.from_terms(field, terms)


def build_beta_change(field: FieldSpec, d: int, beta: int, beta_prime: int,
                      omega: Optional[int] = None) -> IsotopismCert:
    """Strong certificate BH(q,l,d; beta) -> BH(q,l,d; beta') with N0(x) = b0 x."""
    omega = canonical_constants(field).omega if omega is None else omega
    src = BHParams(field, d, beta, omega)
    dst = BHParams(field, d, beta_prime, omega)
    f = field
    b0 = solve_b0(f, f.discrete_log(beta), f.discrete_log(beta_prime), d)
    half = _half(f)
    plus = f.mul(half, f.mul(f.frob_q(b0, f.l), b0))
    minus = f.mul(half, f.mul(f.div(beta_prime, beta), f.mul(f.frob_q(b0, d), b0)))
    N0 = PLinearMap.monomial(f, 0, b0)
    L0 = _trace_split_map(f, plus, minus)
    return _emit(IsotopismCert(src, dst, N0, N0, L0, True, notes={"b0": b0}))


def build_d_reflection(params: BHParams) -> IsotopismCert:
    """Strong certificate BH(q,l,d) -> BH(q,l,2l-d) with N1(x) = b1 x."""
    f = params.field
    l, h = f.l, f.h
    d = params.d_reduced
    r = 2 * l - d
    dst = BHParams(f, r, params.beta, params.omega)
    b1 = solve_b1(f, f.discrete_log(params.beta), d)
    half = _half(f)
    beta, omega = params.beta, params.omega
    plus = f.mul(half, f.mul(f.frob_q(b1, l), b1))
    c = f.div(beta, f.frob_q(beta, r))
    c = f.mul(c, f.mul(f.frob_q(b1, r), b1))
    c = f.mul(c, f.div(omega, f.frob_q(omega, l - d)))
    minus = f.mul(half, c)
    N1 = PLinearMap.monomial(f, 0, b1)
    L1 = _trace_split_map(f, plus, minus, 0, (l - d) * h)
    return _emit(IsotopismCert(params, dst, N1, N1, L1, True, notes={"b1": b1}))


@dataclass
class LMinusDWitness:
    """Everything the d -> l-d construction produces, with its checks."""
    params_d: BHParams
    params_dp: BHParams
    xi: int
    alpha: int
    L_prime: PLinearMap
    N_prime: PLinearMap
    pair_identity_holds: bool
    discriminant_nonsquare: bool
    semifield_cert: IsotopismCert  # S_{l-d} -> S_d as derived
    presemifield_cert: IsotopismCert


def l_minus_d_witness(field: FieldSpec, d: int) -> LMinusDWitness:
    q, l, h = field.q, field.l, field.h
    if q % 4 != 1:
        raise WrongResidue(f"q={q} is not 1 mod 4")
    if l % 2:
        raise OddL(f"l={l} is odd")
    if l <= 2:
        raise InvalidParams("l must exceed 2")
    if not 0 < d < l:
        raise InvalidParams(f"need 0 < d < l, got d={d}")
    f = field
    omega = canonical_constants(f).omega
    beta = f.inv(omega)
    dp = l - d
    Pd = BHParams(f, d, beta, omega)
    Pdp = BHParams(f, dp, beta, omega)
    # xi in F_{q^2} with xi^q = -xi
    xi = f.pow(f.subfield_generator(2), (q + 1) // 2)
    assert f.frob_q(xi, 1) == f.neg(xi)
    alpha = kappa(Pd, xi, 0, 1)
    lh = l * h
    Lp = _trace_split_map(f, f.pow(xi, (q - 3) // 2), f.inv(xi), 0, dp * h)
    Np = PLinearMap.from_terms(f, {0: 1, lh: f.pow(xi, (q - 1) // 2)})
    # L'(a x *_d y) + L'(b (xi x^{q^l}) *_d y) = N'(x) *_{d'} N'(y), a = 0, b = 1
    lhs = Pd.form.substitute(PLinearMap.monomial(f, lh, xi), PLinearMap.identity(f)).apply_left(Lp)
    rhs = Pdp.form.substitute(Np, Np)
    pair_ok = lhs.equals(rhs) and Lp.is_permutation() and Np.is_permutation()
    disc = f.neg(xi_norm(Pd, xi))
    disc_ns = f.in_subfield(disc, 1) and not f.is_square_in_fq(disc)
    L = Lp.inverse
    N = Pd.k_map @ Np.inverse @ Pdp.k_inv
    # M(u) = N(u) star_d alpha
    M = PLinearMap.from_function(f, lambda u: semifield_mul(Pd, N.eval(u), alpha))
    sf = IsotopismCert(Pdp, Pd, M, N, L, False, "semifield",
                       notes={"alpha": alpha, "xi": xi})
    return LMinusDWitness(Pd, Pdp, xi, alpha, Lp, Np, pair_ok, disc_ns, sf, to_presemifield(sf))


def build_l_minus_d(field: FieldSpec, d: int) -> IsotopismCert:
    """Non-strong certificate between the semifield isotopes S_d and S_{l-d} (q = 1 mod 4, l even)."""
    w = l_minus_d_witness(field, d)
    if not w.pair_identity_holds:
        raise VerificationFailed("the defining identity for (L', N') does not hold")
    _emit(w.semifield_cert)
    return _emit(w.semifield_cert.inverse())


def with_canonical_beta(cert: IsotopismCert) -> IsotopismCert:
    """Conjugate a presemifield certificate by beta changes so both ends use beta = gamma."""
    cert = to_presemifield(cert)
    f = cert.src.field
    gamma = canonical_constants(f).beta
    out = cert
    if cert.src.beta != gamma:
        pre = build_beta_change(f, cert.src.d, gamma, cert.src.beta, cert.src.omega)
        out = compose(pre, out)
    if cert.dst.beta != gamma:
        post = build_beta_change(f, cert.dst.d, cert.dst.beta, gamma, cert.dst.omega)
        out = compose(out, post)
    return _emit(out)


# -- strong autotopisms ------------------------------------------------------

def strong_autotopism_count(params: BHParams) -> int:
    """4 l h (q^l - 1)."""
    f = params.field
    return 4 * f.l * f.h * (f.q ** f.l - 1)


def _autotopism_map_pairs(params: BHParams) -> Iterator[tuple[int, int, int]]:
    """(i, log b, b) for every admissible N(x) = b x^{p^i}, i then log b ascending.

    At i = 0 the condition is b^{(q^d+1)(q^l-1)} = 1; a Frobenius twist moves
    beta, so in general b^{(q^d+1)(q^l-1)} = beta^{(q^l-1)(p^i-1)}.
    """
    f = params.field
    q, l, order = f.q, f.l, f.order
    E = (pow(q, params.d_reduced, order) + 1) * (q ** l - 1)
    g = math.gcd(E, order)
    beta_log = f.discrete_log(params.beta)
    for i in range(f.n):
        target = beta_log * (q ** l - 1) * (f.p ** i - 1) % order
        s0 = _solve(E, target, order)
        step = order // g
        logs = sorted((s0 + k * step) % order for k in range(g))
        for s in logs:
            yield i, s, f.gamma_pow(s)


def _solve(a: int, b: int, m: int) -> int:
    s = solve_congruence(a, b, m)
    if s is None:
        raise NoSolution("autotopism congruence has no solution")
    return s


def autotopism_L(params: BHParams, i: int, b: int) -> PLinearMap:
    """1/2 b^{q^l+1}(x + x^{q^l})^{p^i} + 1/2 c (x - x^{q^l})^{p^i}, c = b^{q^d+1} (beta omega)^{1-p^i}."""
    f = params.field
    half = _half(f)
    bo = f.mul(params.beta, params.omega)
    c = f.mul(f.mul(f.frob_q(b, params.d), b), f.div(bo, f.frobenius(bo, i)))
    plus = f.mul(half, f.mul(f.frob_q(b, f.l), b))
    return _trace_split_map(f, plus, f.mul(half, c), i)


def enumerate_strong_autotopisms(params: BHParams, check: bool = True) -> list[IsotopismCert]:
    out = []
    for i, _, b in _autotopism_map_pairs(params):
        N = PLinearMap.monomial(params.field, i, b)
        cert = IsotopismCert(params, params, N, N, autotopism_L(params, i, b), True,
                             notes={"i": i, "b": b})
        out.append(_emit(cert) if check else cert)
    return out


# -- restricted exhaustive search --------------------------------------------

class LeftSolver:
    """Solve apply_left(L, form) = target for the unknown linearized L.

    The coefficient matrix depends only on the source form, so it is reduced
    once; each target then costs a sparse product.
    """

    def __init__(self, form: BiForm):
        f = form.field
        n = f.n
        self.field = f
        cells: dict[tuple[int, int], dict[int, int]] = {}
        for e in range(n):
            for (i, j), c in form.terms.items():
                slot = ((i + e) % n, (j + e) % n)
                row = cells.setdefault(slot, {})
                row[e] = f.add(row.get(e, 0), f.frobenius(c, e))
        self.slots = {slot: k for k, slot in enumerate(sorted(cells))}
        m = len(self.slots)
        rows = []
        for slot, k in self.slots.items():
            row = [cells[slot].get(e, 0) for e in range(n)] + [1 if t == k else 0 for t in range(m)]
            rows.append(row)
        red, pivots = row_reduce(f, rows, n)
        if pivots != list(range(n)):
            raise NoSolution("source form does not determine L")
        transform = [row[n:] for row in red]
        # column view: slot index -> [(row, coefficient)]
        self.columns = [[(r, transform[r][k]) for r in range(m) if transform[r][k]] for k in range(m)]
        self.n = n
        self.m = m

    def solve(self, target: BiForm) -> Optional[PLinearMap]:
        f = self.field
        mul, add = f.mul, f.add
        acc = [0] * self.m
        for slot, val in target.terms.items():
            k = self.slots.get(slot)
            if k is None:
                return None
            for r, t in self.columns[k]:
                acc[r] = add(acc[r], mul(t, val))
        if any(acc[self.n:]):
            return None
        return PLinearMap(f, acc[:self.n])


def search_cost(params: BHParams, two_term: bool = False) -> int:
    f = params.field
    if two_term:
        return (f.n * (f.n - 1) // 2) * f.order ** 2
    return f.n * f.order


def search_strong_isotopism_monomial(src: BHParams, dst: BHParams, two_term: bool = False,
                                     max_candidates: int = SEARCH_GUARD) -> list[IsotopismCert]:
    """All strong isotopisms (N, N, L) src -> dst with N a monomial b x^{p^i}.

    With two_term=True the space is N = b_i x^{p^i} + b_j x^{p^j} (i < j)
    instead; the cost is n(n-1)/2 (p^n - 1)^2 candidates.
    """
    f = src.field
    if dst.field != f:
        raise SpecMismatch("src and dst live over different fields")
    if f.order > max_candidates:
        raise SizeGuard(f"b-loop of {f.order} candidates exceeds {max_candidates}")
    if two_term and search_cost(src, True) > max_candidates * f.n ** 2:
        raise SizeGuard(f"two-term search needs {search_cost(src, True)} candidates")
    solver = LeftSolver(src.form)
    hits = []
    for N in _candidate_maps(f, two_term):
        L = solver.solve(dst.form.substitute(N, N))
        if L is None:
            continue
        cert = IsotopismCert(src, dst, N, N, L, True)
        if verify(cert):
            hits.append(cert)
    return hits


def _candidate_maps(f: FieldSpec, two_term: bool) -> Iterator[PLinearMap]:
    powers = [f.gamma_pow(k) for k in range(f.order)]
    if not two_term:
        for i in range(f.n):
            for b in powers:
                yield PLinearMap.monomial(f, i, b)
        return
    for i in range(f.n):
        for j in range(i + 1, f.n):
            for bi in powers:
                for bj in powers:
                    yield PLinearMap.from_terms(f, {i: bi, j: bj})
