"""Bilinear forms sum c * x^{p^i} y^{p^j} in canonical (reduced, zero-free) form.

Monomials x^{p^i} y^{p^j} with 0 <= i, j < n are linearly independent as
functions on F_{p^n}^2, so two forms induce the same bilinear map exactly
when their canonical term dictionaries agree.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Mapping

from .errors import SpecMismatch
from .ff_tower import FieldSpec
from .linmap import PLinearMap

if TYPE_CHECKING:
    from .bh_core import BHParams


class BiForm:
    def __init__(self, field: FieldSpec, terms: Mapping[tuple[int, int], int] = ()):
        n = field.n
        clean: dict[tuple[int, int], int] = {}
        for (i, j), c in dict(terms).items():
            key = (i % n, j % n)
            clean[key] = field.add(clean.get(key, 0), c)
        self.field = field
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    @classmethod
    def _accumulate(cls, field: FieldSpec, items) -> "BiForm":
        n = field.n
        add = field.add
        acc: dict[tuple[int, int], int] = {}
        for i, j, c in items:
            key = (i % n, j % n)
            acc[key] = add(acc.get(key, 0), c)
        out = cls.__new__(cls)
        out.field = field
        out.terms = {k: v for k, v in sorted(acc.items()) if v}
        return out

    @classmethod
    def from_bh(cls, params: "BHParams") -> "BiForm":
        f = params.field
        lh, dh = f.l * f.h, params.d * f.h
        wb = f.mul(params.omega, params.beta)
        wbq = f.mul(params.omega, f.frobenius(params.beta, lh))
        return cls._accumulate(f, [
            (lh, 0, 1), (0, lh, 1),
            (dh, 0, wb), (0, dh, wb),
            (lh + dh, lh, wbq), (lh, lh + dh, wbq),
        ])

    def _same(self, other_field: FieldSpec) -> None:
        if other_field != self.field:
            raise SpecMismatch("objects live over different fields")

    def __len__(self) -> int:
        return len(self.terms)

    def eval(self, x: int, y: int) -> int:
        f = self.field
        acc = 0
        for (i, j), c in self.terms.items():
            acc = f.add(acc, f.mul(c, f.mul(f.frobenius(x, i), f.frobenius(y, j))))
        return acc

    def __call__(self, x: int, y: int) -> int:
        return self.eval(x, y)

    def apply_left(self, m: PLinearMap) -> "BiForm":
        """(x, y) -> m(self(x, y))."""
        self._same(m.field)
        f = self.field
        items = []
        for e, ce in m.terms():
            for (i, j), c in self.terms.items():
                items.append((i + e, j + e, f.mul(ce, f.frobenius(c, e))))
        return BiForm._accumulate(f, items)

    def substitute(self, mx: PLinearMap, my: PLinearMap) -> "BiForm":
        """(x, y) -> self(mx(x), my(y))."""
        self._same(mx.field)
        self._same(my.field)
        f = self.field
        tx, ty = mx.terms(), my.terms()
        items = []
        for (i, j), c in self.terms.items():
            for u, a in tx:
                ca = f.mul(c, f.frobenius(a, i))
                for v, b in ty:
                    items.append((u + i, v + j, f.mul(ca, f.frobenius(b, j))))
        return BiForm._accumulate(f, items)

    def __add__(self, other: "BiForm") -> "BiForm":
        self._same(other.field)
        items = [(i, j, c) for (i, j), c in self.terms.items()]
        items += [(i, j, c) for (i, j), c in other.terms.items()]
        return BiForm._accumulate(self.field, items)

    def __neg__(self) -> "BiForm":
        f = self.field
        return BiForm._accumulate(f, [(i, j, f.neg(c)) for (i, j), c in self.terms.items()])

    def __sub__(self, other: "BiForm") -> "BiForm":
        return self + (-other)

    def conjugate(self, e: int) -> "BiForm":
        """(x, y) -> self(x, y)^{p^e}."""
        return self.apply_left(PLinearMap.monomial(self.field, e))

    def swap(self) -> "BiForm":
        return BiForm._accumulate(self.field, [(j, i, c) for (i, j), c in self.terms.items()])

    def is_symmetric(self) -> bool:
        return self.swap() == self

    def equals(self, other: "BiForm") -> bool:
        self._same(other.field)
        return self.terms == other.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BiForm) and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x^(p^{i})*y^(p^{j})" for (i, j), c in self.terms.items()) or "0"
        return f"BiForm({body})"

    def to_json(self) -> dict:
        enc = self.field.encode
        return {"terms": [{"i": i, "j": j, "c": enc(c)} for (i, j), c in self.terms.items()]}

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "BiForm":
        return cls(field, {(t["i"], t["j"]): field.decode(t["c"]) for t in data["terms"]})


def equals(a: BiForm, b: BiForm) -> bool:
    return a.equals(b)


def agree_on_basis(a: BiForm, b: BiForm) -> bool:
    """Compare the induced maps on all n^2 pairs of power-basis elements."""
    basis = a.field.basis
    return all(a.eval(x, y) == b.eval(x, y) for x in basis for y in basis)
