"""Arithmetic in F_{p^n}, n = 2lh, seen as the tower F_p < F_q < F_{q^l} < F_{q^{2l}}.

Elements are plain ints: the base-p little-endian rank of the coefficient
vector in the power basis of the modulus, so ``c0 + c1*p + ... + c_{n-1}*p^{n-1}``.
Ranks 0..p-1 are exactly the prime-field constants.

Fields up to ``TABLE_LIMIT`` elements get exp/log/Zech tables and O(1)
scalar operations, plus vectorized numpy variants used by the exhaustive
scans.  Larger fields fall back to polynomial arithmetic.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegreeOverflow,
    DivisionByZero,
    InvalidParams,
    NoSolution,
    NotPrime,
    SizeGuard,
    ZeroInput,
)

INDEX_LIMIT = 2 ** 40
TABLE_LIMIT = 2 ** 22
BSGS_LIMIT = 2 ** 40


# -- integer helpers ---------------------------------------------------------

def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    k = 3
    while k * k <= m:
        if m % k == 0:
            return False
        k += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m by trial division."""
    out = []
    k = 2
    while k * k <= m:
        if m % k == 0:
            out.append(k)
            while m % k == 0:
                m //= k
        k += 1 if k == 2 else 2
    if m > 1:
        out.append(m)
    return out


def solve_congruence(a: int, b: int, m: int) -> Optional[int]:
    """Smallest s >= 0 with a*s = b (mod m), or None."""
    a %= m
    b %= m
    g = math.gcd(a, m)
    if b % g:
        return None
    m2 = m // g
    if m2 == 1:
        return 0
    return (b // g) * pow(a // g, -1, m2) % m2


# -- polynomials over F_p (coefficient lists, constant term first) -----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    # f monic
    a = _trim([c % p for c in a])
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1]
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _ppow_mod(a: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        monic = [c * inv % p for c in b]
        a, b = b, _pmod(a, monic, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin test: x^{p^n} = x mod f and gcd(x^{p^{n/r}} - x, f) = 1 for primes r | n."""
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    frob = [x]
    for _ in range(n):
        frob.append(_ppow_mod(frob[-1], p, f, p))
    if _psub(frob[n], x, p):
        return False
    for r in prime_factors(n):
        if _pgcd(list(f), _psub(frob[n // r], x, p), p) != [1]:
            return False
    return True


def first_irreducible(p: int, n: int) -> list[int]:
    """First monic irreducible of degree n, scanning (c0, ..., c_{n-1}) lexicographically."""
    for low in itertools.product(range(p), repeat=n):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return f
    raise NoSolution(f"no irreducible polynomial of degree {n} over F_{p}")


# -- the field ---------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalConstants:
    beta: int
    omega: int
    xi_log: Optional[int] = None


class FieldSpec:
    """F_{p^n} with n = 2lh, a fixed modulus and a fixed primitive element gamma."""

    def __init__(self, p: int, h: int, l: int, modulus: Sequence[int], gamma: Sequence[int]):
        if not is_prime(p) or p == 2:
            raise NotPrime(f"p={p} must be an odd prime")
        if h < 1 or l < 2:
            raise InvalidParams(f"need h >= 1 and l >= 2, got h={h}, l={l}")
        n = 2 * l * h
        if p ** n > INDEX_LIMIT:
            raise DegreeOverflow(f"{p}^{n} exceeds the index limit 2^40")
        modulus = [int(c) for c in modulus]
        if len(modulus) != n + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise InvalidParams("modulus must be monic of degree n with residues mod p")
        if not is_irreducible(modulus, p):
            raise InvalidParams("modulus is reducible")
        self.p, self.h, self.l, self.n = p, h, l, n
        self.q = p ** h
        self.size = p ** n
        self.order = self.size - 1
        self.modulus = tuple(modulus)
        self._pw = [p ** i for i in range(n)]
        # t^k mod f for k in [n, 2n-2], used by polynomial multiplication
        self._red = []
        for k in range(n, 2 * n - 1):
            r = _pmod([0] * k + [1], modulus, p)
            self._red.append(r + [0] * (n - len(r)))
        gamma = [int(c) % p for c in gamma] + [0] * (n - len(gamma))
        self.gamma_coeffs = tuple(gamma[:n])
        self.gamma = self.element(self.gamma_coeffs)
        self._half = self.order // 2
        self._pe = [pow(p, e, self.order) for e in range(n)]
        self.tabulated = self.size <= TABLE_LIMIT
        if self.tabulated:
            self._build_tables()
            self.add, self.neg, self.mul = self._add_t, self._neg_t, self._mul_t
            self.inv, self.pow, self.frobenius = self._inv_t, self._pow_t, self._frob_t
        else:
            self.add, self.neg, self.mul = self._add_p, self._neg_p, self._mul_p
            self.inv, self.pow, self.frobenius = self._inv_p, self._pow_p, self._frob_p
        if not self._is_primitive(self.gamma):
            raise InvalidParams("gamma is not a primitive element")

    # encoding

    def coeffs(self, x: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.n):
            x, r = divmod(x, p)
            out.append(r)
        return tuple(out)

    def element(self, coeffs: Iterable[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.n:
            raise InvalidParams("too many coefficients")
        return sum((int(c) % self.p) * w for c, w in zip(coeffs, self._pw))

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
            raise InvalidParams(f"{x!r} is not an element of F_{self.p}^{self.n}")
        return int(x)

    @property
    def basis(self) -> list[int]:
        return list(self._pw)

    def scalar(self, c: int) -> int:
        return c % self.p

    def elements(self) -> range:
        return range(self.size)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> int:
        return rng.randrange(1 if nonzero else 0, self.size)

    def gamma_pow(self, k: int) -> int:
        return self.pow(self.gamma, k % self.order)

    # polynomial-basis arithmetic; always available and independent of the tables

    def _add_p(self, a: int, b: int) -> int:
        p = self.p
        return self.element((x + y) % p for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def _neg_p(self, a: int) -> int:
        return self.element((-x) % self.p for x in self.coeffs(a))

    def _mul_p(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        p, n = self.p, self.n
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k] % p
            if c:
                red = self._red[k - n]
                for i in range(n):
                    out[i] += c * red[i]
        return self.element(c % p for c in out)

    def _pow_p(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if k == 0 else 0
        k %= self.order
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mul_p(result, base)
            base = self._mul_p(base, base)
            k >>= 1
        return result

    def _inv_p(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self._pow_p(a, self.order - 1)

    def _frob_p(self, a: int, e: int) -> int:
        mat = self.frobenius_matrix(e)
        v = np.array(self.coeffs(a), dtype=np.int64)
        return self.element((mat @ v) % self.p)

    # table arithmetic

    def _build_tables(self) -> None:
        p, n, order = self.p, self.n, self.order
        # matrix of y -> gamma*y on coefficient vectors (rows act on row vectors)
        gmat = np.array([self.coeffs(self._mul_p(self.gamma, w)) for w in self._pw], dtype=np.int64)
        block = min(order, 2048)
        first = np.zeros((block, n), dtype=np.int64)
        first[0, 0] = 1
        for k in range(1, block):
            first[k] = first[k - 1] @ gmat % p
        step = np.eye(n, dtype=np.int64)
        for _ in range(block):
            step = step @ gmat % p
        rows = [first]
        done = block
        while done < order:
            rows.append(rows[-1] @ step % p)
            done += block
        digits = np.concatenate(rows)[:order]
        exp = digits @ np.array(self._pw, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        if (log[1:] < 0).any():
            raise InvalidParams("gamma is not a primitive element")
        onep = np.where(exp % p == p - 1, exp - (p - 1), exp + 1)
        zech = np.where(onep == 0, -1, log[onep])
        self.exp_table = exp
        self.log_table = log
        self.zech_table = zech
        self._exp = exp.tolist() * 2
        self._log = log.tolist()
        self._zech = zech.tolist()

    def _add_t(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.order]
        return 0 if z < 0 else self._exp[la + z]

    def _neg_t(self, a: int) -> int:
        return 0 if a == 0 else self._exp[self._log[a] + self._half]

    def _mul_t(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def _inv_t(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self._exp[self.order - self._log[a]]

    def _pow_t(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if k == 0 else 0
        return self._exp[self._log[a] * k % self.order]

    def _frob_t(self, a: int, e: int) -> int:
        if a == 0:
            return 0
        return self._exp[self._log[a] * self._pe[e % self.n] % self.order]

    # derived scalar operations

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sum(self, xs: Iterable[int]) -> int:
        acc = 0
        add = self.add
        for x in xs:
            acc = add(acc, x)
        return acc

    def frob_q(self, a: int, k: int) -> int:
        """a^{q^k}; k may be negative."""
        return self.frobenius(a, (self.h * k) % self.n)

    def trace_to_half(self, x: int) -> int:
        """Relative trace x + x^{q^l} onto F_{q^l}."""
        return self.add(x, self.frobenius(x, self.l * self.h))

    def in_subfield(self, x: int, k: int) -> bool:
        """Whether x lies in F_{q^k} (fixed by x -> x^{q^k})."""
        return self.frob_q(x, k) == x

    def in_prime_power_subfield(self, x: int, e: int) -> bool:
        return self.frobenius(x, e % self.n) == x

    def is_square(self, x: int) -> bool:
        if x == 0:
            raise ZeroInput("squareness of 0 is not defined here")
        return self.pow(x, self._half) == 1

    def is_square_in_fq(self, x: int) -> bool:
        """Squareness inside the subfield F_q, for x in F_q*."""
        if x == 0:
            raise ZeroInput("squareness of 0 is not defined here")
        if not self.in_subfield(x, 1):
            raise InvalidParams("element not in F_q")
        return self.pow(x, (self.q - 1) // 2) == 1

    def _is_primitive(self, x: int) -> bool:
        if x == 0:
            return False
        return all(self._pow_p(x, self.order // r) != 1 for r in prime_factors(self.order))

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise ZeroInput("0 has no multiplicative order")
        k = self.order
        for r in prime_factors(self.order):
            while k % r == 0 and self.pow(x, k // r) == 1:
                k //= r
        return k

    def subfield_generator(self, k: int) -> int:
        """Generator of F_{q^k}*, k dividing 2l."""
        if (2 * self.l) % k:
            raise InvalidParams(f"F_q^{k} is not a subfield")
        return self.gamma_pow(self.order // (self.q ** k - 1))

    # Frobenius matrices over F_p

    @functools.cached_property
    def _frob_mats(self) -> list[np.ndarray]:
        mats = []
        for e in range(self.n):
            cols = []
            for w in self._pw:
                img = self._pow_p(w, self.p ** e)
                cols.append(self.coeffs(img))
            mats.append(np.array(cols, dtype=np.int64).T.copy())
        return mats

    def frobenius_matrix(self, e: int) -> np.ndarray:
        """n x n matrix over F_p of x -> x^{p^e}; column j is the image of t^j."""
        return self._frob_mats[e % self.n]

    # discrete logarithms

    @functools.cached_property
    def _bsgs(self) -> tuple[int, dict[int, int], int]:
        if self.size > BSGS_LIMIT:
            raise SizeGuard(f"field of size {self.size} exceeds the BSGS limit 2^40")
        m = math.isqrt(self.order - 1) + 1
        baby = {}
        cur = 1
        for j in range(m):
            baby.setdefault(cur, j)
            cur = self._mul_p(cur, self.gamma)
        giant = self._pow_p(self._inv_p(self.gamma), m)
        return m, baby, giant

    def discrete_log(self, x: int) -> int:
        """i in [0, p^n - 1) with gamma^i = x, by baby-step/giant-step."""
        if x == 0:
            raise ZeroInput("log of 0")
        m, baby, giant = self._bsgs
        y = x
        for i in range(m + 1):
            j = baby.get(y)
            if j is not None:
                return (i * m + j) % self.order
            y = self._mul_p(y, giant)
        raise NoSolution("gamma does not generate x")  # pragma: no cover

    def log(self, x: int) -> int:
        """Fast log: table lookup when tabulated, BSGS otherwise."""
        if x == 0:
            raise ZeroInput("log of 0")
        if self.tabulated:
            return self._log[x]
        return self.discrete_log(x)

    # vectorized operations on arrays of ranks (tabulated fields only)

    def _need_tables(self) -> None:
        if not self.tabulated:
            raise SizeGuard(f"vector arithmetic needs tables (field size <= {TABLE_LIMIT})")

    def mul_v(self, a, b) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_v(self, a, b) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la = self.log_table[a]
        z = self.zech_table[(self.log_table[b] - la) % self.order]
        out = np.where(z < 0, 0, self.exp_table[(la + z) % self.order])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def neg_v(self, a) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] + self._half) % self.order]
        return np.where(a == 0, 0, out)

    def frob_v(self, a, e: int) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] * self._pe[e % self.n]) % self.order]
        return np.where(a == 0, 0, out)

    def digits_v(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // np.array(self._pw, dtype=np.int64)) % self.p

    def from_digits_v(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ np.array(self._pw, dtype=np.int64)

    # serialization and identity

    def key(self) -> tuple:
        return (self.p, self.h, self.l, self.modulus, self.gamma_coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, h={self.h}, l={self.l}, n={self.n})"

    def to_json(self) -> dict:
        return {"p": self.p, "h": self.h, "l": self.l,
                "modulus": list(self.modulus), "gamma": list(self.gamma_coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        key = (data["p"], data["h"], data["l"], tuple(data["modulus"]), tuple(data["gamma"]))
        return _from_key(key)

    def encode(self, x: int) -> list[int]:
        return list(self.coeffs(x))

    def decode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.n:
            raise InvalidParams(f"expected {self.n} coefficients, got {len(coeffs)}")
        if any(not 0 <= int(c) < self.p for c in coeffs):
            raise InvalidParams("coefficients must be residues mod p")
        return self.element(coeffs)


@functools.lru_cache(maxsize=None)
def _from_key(key: tuple) -> FieldSpec:
    p, h, l, modulus, gamma = key
    return FieldSpec(p, h, l, modulus, gamma)


def _first_primitive(p: int, n: int, modulus: list[int]) -> tuple[int, ...]:
    order = p ** n - 1
    primes = prime_factors(order)
    for low in itertools.product(range(p), repeat=n):
        if not any(low):
            continue
        ok = True
        for r in primes:
            if _ppow_mod(list(low), order // r, modulus, p) == [1]:
                ok = False
                break
        if ok:
            return tuple(low)
    raise NoSolution("no primitive element")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def make_field(p: int, h: int, l: int) -> FieldSpec:
    """The deterministic field for (p, h, l): first lex irreducible modulus, first lex primitive."""
    if not is_prime(p) or p == 2:
        raise NotPrime(f"p={p} must be an odd prime")
    if h < 1 or l < 2:
        raise InvalidParams(f"need h >= 1 and l >= 2, got h={h}, l={l}")
    n = 2 * l * h
    if p ** n > INDEX_LIMIT:
        raise DegreeOverflow(f"{p}^{n} exceeds the index limit 2^40")
    modulus = first_irreducible(p, n)
    gamma = _first_primitive(p, n, modulus)
    return _from_key((p, h, l, tuple(modulus), gamma))


def solve_b0(field: FieldSpec, beta_log: int, beta_prime_log: int, d: int) -> int:
    """b0 with beta' beta^{-1} b0^{q^d+1} in F_{q^l}; smallest log solving the congruence."""
    if beta_log % 2 == 0 or beta_prime_log % 2 == 0:
        raise InvalidParams("both logs must be odd (nonsquares)")
    _check_ld(field, d)
    q, l = field.q, field.l
    mod = q ** l + 1
    s = solve_congruence(pow(q, d % (2 * l), mod) + 1, beta_log - beta_prime_log, mod)
    if s is None:
        raise NoSolution("no b0 for this pair")
    b0 = field.gamma_pow(s)
    beta, beta_p = field.gamma_pow(beta_log), field.gamma_pow(beta_prime_log)
    val = field.mul(field.div(beta_p, beta), field.mul(field.frob_q(b0, d), b0))
    if not field.in_subfield(val, l):
        raise NoSolution("b0 postcondition failed")
    return b0


def solve_b1(field: FieldSpec, beta_log: int, d: int) -> int:
    """b1 with beta^{1-q^{2l-d}} b1^{q^{2l-d}+1} in F_{q^l}."""
    if beta_log % 2 == 0:
        raise InvalidParams("beta_log must be odd (nonsquare)")
    _check_ld(field, d)
    q, l = field.q, field.l
    mod = q ** l + 1
    r = (2 * l - d) % (2 * l)
    qr = pow(q, r, mod)
    s = solve_congruence(qr + 1, -(1 - qr) * beta_log, mod)
    if s is None:
        raise NoSolution("no b1 for this beta")
    b1 = field.gamma_pow(s)
    beta = field.gamma_pow(beta_log)
    val = field.mul(field.div(beta, field.frob_q(beta, r)), field.mul(field.frob_q(b1, r), b1))
    if not field.in_subfield(val, l):
        raise NoSolution("b1 postcondition failed")
    return b1


def _check_ld(field: FieldSpec, d: int) -> None:
    if math.gcd(field.l, d) != 1 or (field.l + d) % 2 == 0:
        raise InvalidParams(f"need gcd(l, d) = 1 and l + d odd, got l={field.l}, d={d}")


def canonical_constants(field: FieldSpec, d: Optional[int] = None) -> CanonicalConstants:
    """beta = gamma, omega = gamma^{(q^l+1)/2}; xi_log filled in when d is given."""
    beta = field.gamma
    omega = field.gamma_pow((field.q ** field.l + 1) // 2)
    xi_log = None
    if d is not None:
        xi_log = xi_log_for(field, 1, d)
    return CanonicalConstants(beta, omega, xi_log)


def xi_log_for(field: FieldSpec, beta_log: int, d: int) -> int:
    """Smallest s with gamma^{s(q^{l+d}-1)} = beta^{1-q^l}."""
    q, l, order = field.q, field.l, field.order
    a = pow(q, (l + d) % (2 * l), order) - 1
    b = (1 - q ** l) * beta_log
    s = solve_congruence(a, b, order)
    if s is None:
        raise NoSolution("no xi for these parameters")
    return s
