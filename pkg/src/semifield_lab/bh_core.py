"""The Budaghyan-Helleseth presemifield BH(q, l, d) and its semifield isotope."""

from __future__ import annotations

import functools
import math
import os
import random
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .biform import BiForm
from .errors import InvalidParams, KMapSingular, SizeGuard
from .ff_tower import FieldSpec, canonical_constants
from .linmap import PLinearMap

TABLE_GUARD = 2 ** 16
SCAN_GUARD = 2 ** 32
MAGIC = b"BHTB"
TABLE_VERSION = 1


def table_guard() -> int:
    """Max table elements; SEMIFIELD_LAB_GUARD overrides the default."""
    env = os.environ.get("SEMIFIELD_LAB_GUARD")
    return int(env) if env else TABLE_GUARD


def _guard(field: FieldSpec, limit: Optional[int]) -> None:
    limit = table_guard() if limit is None else limit
    if field.size > limit:
        raise SizeGuard(f"field has {field.size} elements, guard is {limit}")
    if field.size ** 2 > SCAN_GUARD:
        raise SizeGuard(f"{field.size}^2 pairs exceed the scan guard {SCAN_GUARD}")


@dataclass(frozen=True)
class BHParams:
    field: FieldSpec
    d: int
    beta: int
    omega: int

    def __post_init__(self):
        f = self.field
        l, h = f.l, f.h
        if not 1 <= self.d <= 2 * l * h - 1:
            raise InvalidParams(f"d={self.d} outside [1, 2lh-1]")
        if math.gcd(l, self.d) != 1 or (l + self.d) % 2 == 0:
            raise InvalidParams(f"need gcd(l, d) = 1 and l + d odd, got l={l}, d={self.d}")
        f.check(self.beta)
        f.check(self.omega)
        if self.beta == 0 or f.is_square(self.beta):
            raise InvalidParams("beta must be a nonsquare")
        if self.omega == 0 or f.trace_to_half(self.omega) != 0:
            raise InvalidParams("omega must be nonzero with omega + omega^{q^l} = 0")

    @classmethod
    def canonical(cls, field: FieldSpec, d: int, beta: Optional[int] = None,
                  omega: Optional[int] = None) -> "BHParams":
        consts = canonical_constants(field)
        return cls(field, d, consts.beta if beta is None else beta,
                   consts.omega if omega is None else omega)

    def with_d(self, d: int) -> "BHParams":
        return BHParams(self.field, d, self.beta, self.omega)

    def with_beta(self, beta: int) -> "BHParams":
        return BHParams(self.field, self.d, beta, self.omega)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def l(self) -> int:
        return self.field.l

    @property
    def d_reduced(self) -> int:
        """d modulo 2l; x^{q^d} only depends on this."""
        return self.d % (2 * self.field.l)

    def label(self) -> str:
        return f"BH({self.q},{self.l},{self.d})"

    @functools.cached_property
    def form(self) -> BiForm:
        return BiForm.from_bh(self)

    @functools.cached_property
    def k_map(self) -> PLinearMap:
        return k_map(self)

    @functools.cached_property
    def k_inv(self) -> PLinearMap:
        return self.k_map.invert()

    @functools.cached_property
    def identity(self) -> int:
        """The identity 1*1 of the semifield isotope."""
        return bh_mul(self, 1, 1)

    @functools.cached_property
    def star_form(self) -> BiForm:
        """The semifield multiplication as a bilinear form."""
        return self.form.substitute(self.k_inv, self.k_inv)

    def mul(self, x: int, y: int) -> int:
        return bh_mul(self, x, y)

    def star(self, u: int, v: int) -> int:
        return semifield_mul(self, u, v)

    def to_json(self) -> dict:
        f = self.field
        return {"field": f.to_json(), "d": self.d, "beta": f.encode(self.beta),
                "omega": f.encode(self.omega)}

    @classmethod
    def from_json(cls, data: dict) -> "BHParams":
        f = FieldSpec.from_json(data["field"])
        return cls(f, int(data["d"]), f.decode(data["beta"]), f.decode(data["omega"]))


def bh_mul(params: BHParams, x: int, y: int) -> int:
    """x^{q^l} y + x y^{q^l} + (beta s + beta^{q^l} s^{q^l}) omega, s = x^{q^d} y + x y^{q^d}."""
    f = params.field
    lh, dh = f.l * f.h, params.d * f.h
    frob, mul, add = f.frobenius, f.mul, f.add
    s = add(mul(frob(x, dh), y), mul(x, frob(y, dh)))
    bs = mul(params.beta, s)
    return add(add(mul(frob(x, lh), y), mul(x, frob(y, lh))),
               mul(add(bs, frob(bs, lh)), params.omega))


def bh_mul_many(params: BHParams, xs, ys) -> np.ndarray:
    """Vectorized bh_mul with numpy broadcasting over xs and ys."""
    f = params.field
    lh, dh = f.l * f.h, params.d * f.h
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    s = f.add_v(f.mul_v(f.frob_v(xs, dh), ys), f.mul_v(xs, f.frob_v(ys, dh)))
    bs = f.mul_v(s, params.beta)
    tr = f.add_v(f.mul_v(f.frob_v(xs, lh), ys), f.mul_v(xs, f.frob_v(ys, lh)))
    return f.add_v(tr, f.mul_v(f.add_v(bs, f.frob_v(bs, lh)), params.omega))


def k_map(params: BHParams) -> PLinearMap:
    """K_d(x) = x * 1 as a linearized polynomial."""
    f = params.field
    lh, dh = f.l * f.h, params.d * f.h
    wb = f.mul(params.omega, params.beta)
    wbq = f.mul(params.omega, f.frobenius(params.beta, lh))
    terms: dict[int, int] = {}
    for e, c in [(0, 1), (lh, 1), (dh, wb), (0, wb), (lh + dh, wbq), (lh, wbq)]:
        e %= f.n
        terms[e] = f.add(terms.get(e, 0), c)
    k = PLinearMap.from_terms(f, terms)
    if not k.is_permutation():
        raise KMapSingular(f"K_d is singular for {params.label()}")
    return k


def semifield_mul(params: BHParams, u: int, v: int) -> int:
    kinv = params.k_inv
    return bh_mul(params, kinv.eval(u), kinv.eval(v))


def semifield_mul_many(params: BHParams, us, vs) -> np.ndarray:
    kinv = params.k_inv
    return bh_mul_many(params, kinv.eval_many(us), kinv.eval_many(vs))


# -- multiplication tables ---------------------------------------------------

@dataclass
class MulTable:
    p: int
    n: int
    entries: np.ndarray  # flat, row-major, entry(ix, iy) = index of x * y

    @property
    def n_elements(self) -> int:
        return self.p ** self.n

    def as_matrix(self) -> np.ndarray:
        return self.entries.reshape(self.n_elements, self.n_elements)

    def entry(self, ix: int, iy: int) -> int:
        return int(self.entries[ix * self.n_elements + iy])

    def row(self, ix: int) -> np.ndarray:
        size = self.n_elements
        return self.entries[ix * size:(ix + 1) * size]

    def dtype(self) -> np.dtype:
        return np.dtype("<u2") if self.n_elements <= 65535 else np.dtype("<u4")

    def to_bytes(self) -> bytes:
        header = struct.pack("<4sBBBx", MAGIC, TABLE_VERSION, self.p, self.n)
        return header + self.entries.astype(self.dtype()).tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes) -> "MulTable":
        magic, version, p, n = struct.unpack_from("<4sBBBx", raw)
        if magic != MAGIC or version != TABLE_VERSION:
            raise ValueError("not a BH multiplication table")
        size = p ** n
        dtype = np.dtype("<u2") if size <= 65535 else np.dtype("<u4")
        entries = np.frombuffer(raw, dtype=dtype, offset=8)
        if entries.size != size * size:
            raise ValueError("truncated table")
        return cls(p, n, entries.astype(np.int64))

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "MulTable":
        return cls.from_bytes(Path(path).read_bytes())


def _row_blocks(size: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, size)) for lo in range(0, size, chunk)]


def build_table(params: BHParams, guard: Optional[int] = None, workers: int = 1,
                chunk: int = 256) -> MulTable:
    f = params.field
    _guard(f, guard)
    size = f.size
    ys = np.arange(size, dtype=np.int64)[None, :]
    out = np.empty((size, size), dtype=np.int64)

    def fill(block):
        lo, hi = block
        xs = np.arange(lo, hi, dtype=np.int64)[:, None]
        out[lo:hi] = bh_mul_many(params, xs, ys)

    blocks = _row_blocks(size, chunk)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            list(ex.map(fill, blocks))
    else:
        for b in blocks:
            fill(b)
    return MulTable(f.p, f.n, out.reshape(-1))


# -- axiom checkers ----------------------------------------------------------

@dataclass
class PresemifieldReport:
    label: str
    n_elements: int
    pairs_scanned: int
    zero_divisors: int
    commutative: bool
    distributive: bool
    samples: int

    @property
    def passed(self) -> bool:
        return self.zero_divisors == 0 and self.commutative and self.distributive

    def to_json(self) -> dict:
        return {"label": self.label, "n_elements": self.n_elements,
                "pairs_scanned": self.pairs_scanned, "zero_divisors": self.zero_divisors,
                "commutative": self.commutative, "distributive": self.distributive,
                "samples": self.samples, "passed": self.passed}


def table_zero_divisors(table: MulTable) -> int:
    mat = table.as_matrix()
    return int(np.count_nonzero(mat[1:, 1:] == 0))


def check_presemifield(params: BHParams, guard: Optional[int] = None, samples: int = 2000,
                       seed: int = 0, table: Optional[MulTable] = None) -> PresemifieldReport:
    """Exhaustive zero-divisor and commutativity scan plus sampled distributivity."""
    f = params.field
    if table is None:
        table = build_table(params, guard=guard)
    mat = table.as_matrix()
    zero_div = table_zero_divisors(table)
    commutative = bool(np.array_equal(mat, mat.T))
    rng = random.Random(seed)
    distributive = True
    for _ in range(samples):
        x, x2, y = (f.random_element(rng) for _ in range(3))
        s = f.add(x, x2)
        if table.entry(s, y) != f.add(table.entry(x, y), table.entry(x2, y)):
            distributive = False
            break
        if table.entry(y, s) != f.add(table.entry(y, x), table.entry(y, x2)):
            distributive = False
            break
    return PresemifieldReport(params.label(), f.size, f.size ** 2, zero_div,
                              commutative, distributive, samples)


def is_planar_values(field: FieldSpec, fvals: np.ndarray) -> bool:
    """Whether x -> f(x+a) - f(x) is a bijection for every a != 0, f given as a value array."""
    fvals = np.asarray(fvals, dtype=np.int64)
    xs = np.arange(field.size, dtype=np.int64)
    neg_f = field.neg_v(fvals)
    for a in range(1, field.size):
        diff = field.add_v(fvals[field.add_v(xs, a)], neg_f)
        if np.unique(diff).size != field.size:
            return False
    return True


def check_planarity(params: BHParams, guard: Optional[int] = None) -> bool:
    f = params.field
    _guard(f, guard)
    xs = np.arange(f.size, dtype=np.int64)
    return is_planar_values(f, bh_mul_many(params, xs, xs))


def semifield_identity_holds(params: BHParams, guard: Optional[int] = None) -> bool:
    """e * u = u for every u, with e = 1*1 (exhaustive)."""
    f = params.field
    _guard(f, guard)
    us = np.arange(f.size, dtype=np.int64)
    return bool(np.array_equal(semifield_mul_many(params, params.identity, us), us))
