"""Linearized polynomials sum c_i x^{p^i} over F_{p^n}, as F_p-linear maps."""

from __future__ import annotations

import functools
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NotInvertible, SpecMismatch
from .ff_tower import FieldSpec


# -- linear algebra over F_p -------------------------------------------------

def rank_mod_p(mat: np.ndarray, p: int) -> int:
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        nz = np.nonzero(a[:, c])[0]
        for i in nz:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == rows:
            break
    return r


def inverse_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[0]
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i, c]), None)
        if piv is None:
            raise NotInvertible("matrix is singular mod p")
        aug[[c, piv]] = aug[[piv, c]]
        aug[c] = aug[c] * pow(int(aug[c, c]), -1, p) % p
        for i in range(n):
            if i != c and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[c]) % p
    return aug[:, n:]


# -- linear algebra over the big field ---------------------------------------

def row_reduce(field: FieldSpec, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_{p^n}; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    mul, sub, inv = field.mul, field.sub, field.inv
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = inv(rows[r][c])
        rows[r] = [mul(s, x) for x in rows[r]]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [sub(x, mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def field_matrix_inverse(field: FieldSpec, mat: list[list[int]]) -> list[list[int]]:
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    red, pivots = row_reduce(field, aug, n)
    if pivots != list(range(n)):
        raise NotInvertible("matrix over the field is singular")
    return [row[n:] for row in red[:n]]


@functools.lru_cache(maxsize=None)
def _moore_inverse(field: FieldSpec) -> list[list[int]]:
    # Moore matrix A[k][i] = (t^k)^{p^i}; interpolation solves A c = images
    moore = [[field.frobenius(w, i) for i in range(field.n)] for w in field.basis]
    return field_matrix_inverse(field, moore)


# -- the map type ------------------------------------------------------------

class PLinearMap:
    """x -> sum_i coeffs[i] * x^{p^i}, exponents read modulo n."""

    def __init__(self, field: FieldSpec, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != field.n:
            raise ValueError(f"expected {field.n} coefficients, got {len(coeffs)}")
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def identity(cls, field: FieldSpec) -> "PLinearMap":
        return cls.monomial(field, 0, 1)

    @classmethod
    def zero(cls, field: FieldSpec) -> "PLinearMap":
        return cls(field, [0] * field.n)

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: int = 1) -> "PLinearMap":
        """c * x^{p^e}."""
        coeffs = [0] * field.n
        coeffs[e % field.n] = c
        return cls(field, coeffs)

    @classmethod
    def from_terms(cls, field: FieldSpec, terms: dict[int, int]) -> "PLinearMap":
        coeffs = [0] * field.n
        for e, c in terms.items():
            coeffs[e % field.n] = field.add(coeffs[e % field.n], c)
        return cls(field, coeffs)

    @classmethod
    def from_images(cls, field: FieldSpec, images: Sequence[int]) -> "PLinearMap":
        """The unique linearized polynomial sending t^k to images[k]."""
        minv = _moore_inverse(field)
        mul, add = field.mul, field.add
        coeffs = []
        for row in minv:
            acc = 0
            for a, v in zip(row, images):
                if a and v:
                    acc = add(acc, mul(a, v))
            coeffs.append(acc)
        return cls(field, coeffs)

    @classmethod
    def from_matrix(cls, field: FieldSpec, mat: np.ndarray) -> "PLinearMap":
        mat = np.asarray(mat) % field.p
        return cls.from_images(field, [field.element(mat[:, j]) for j in range(field.n)])

    @classmethod
    def from_function(cls, field: FieldSpec, fn: Callable[[int], int]) -> "PLinearMap":
        """Interpolate an F_p-linear function from its values on the power basis."""
        return cls.from_images(field, [fn(w) for w in field.basis])

    def terms(self) -> list[tuple[int, int]]:
        return [(e, c) for e, c in enumerate(self.coeffs) if c]

    def __call__(self, x: int) -> int:
        return self.eval(x)

    def eval(self, x: int) -> int:
        f = self.field
        acc = 0
        for e, c in enumerate(self.coeffs):
            if c:
                acc = f.add(acc, f.mul(c, f.frobenius(x, e)))
        return acc

    def eval_many(self, xs) -> np.ndarray:
        f = self.field
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for e, c in enumerate(self.coeffs):
            if c:
                acc = f.add_v(acc, f.mul_v(f.frob_v(xs, e), c))
        return acc

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        f = self.field
        cols = [f.coeffs(self.eval(w)) for w in f.basis]
        mat = np.array(cols, dtype=np.int64).T.copy()
        mat.setflags(write=False)
        return mat

    def to_matrix(self) -> np.ndarray:
        return self.matrix

    def _same(self, other: "PLinearMap") -> None:
        if other.field != self.field:
            raise SpecMismatch("maps live over different fields")

    def compose(self, other: "PLinearMap") -> "PLinearMap":
        """self o other: x -> self(other(x))."""
        self._same(other)
        f = self.field
        n = f.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    k = (i + j) % n
                    out[k] = f.add(out[k], f.mul(a, f.frobenius(b, i)))
        return PLinearMap(f, out)

    def __matmul__(self, other: "PLinearMap") -> "PLinearMap":
        return self.compose(other)

    def __add__(self, other: "PLinearMap") -> "PLinearMap":
        self._same(other)
        f = self.field
        return PLinearMap(f, [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "PLinearMap") -> "PLinearMap":
        self._same(other)
        f = self.field
        return PLinearMap(f, [f.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: int) -> "PLinearMap":
        """x -> c * self(x)."""
        f = self.field
        return PLinearMap(f, [f.mul(c, a) for a in self.coeffs])

    def rank(self) -> int:
        return rank_mod_p(self.matrix, self.field.p)

    def is_permutation(self) -> bool:
        return self.rank() == self.field.n

    def invert(self) -> "PLinearMap":
        inv = inverse_mod_p(self.matrix, self.field.p)
        return PLinearMap.from_matrix(self.field, inv)

    @functools.cached_property
    def inverse(self) -> "PLinearMap":
        return self.invert()

    def __eq__(self, other) -> bool:
        return isinstance(other, PLinearMap) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x^(p^{e})" for e, c in self.terms()) or "0"
        return f"PLinearMap({body})"

    def to_json(self) -> dict:
        return {"coeffs": [self.field.encode(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "PLinearMap":
        return cls(field, [field.decode(c) for c in data["coeffs"]])


def compose_all(*maps: PLinearMap) -> PLinearMap:
    """maps[0] o maps[1] o ... o maps[-1]."""
    out: Optional[PLinearMap] = None
    for m in reversed(maps):
        out = m if out is None else m.compose(out)
    return out
