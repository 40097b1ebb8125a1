"""Parameter enumeration and the isotopism-class census of the BH family."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

from .errors import InvalidParams, UnsupportedL


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def valid_ds(q: int, l: int) -> list[int]:
    """{0 < d < l : gcd(l, d) = 1, l + d odd}; q does not matter."""
    if l < 2:
        raise UnsupportedL(f"l={l} < 2")
    return [d for d in range(1, l) if math.gcd(l, d) == 1 and (l + d) % 2 == 1]


def formula_value(q: int, l: int) -> int:
    phi = euler_phi(l)
    if l % 2 == 0 and q % 4 == 3:
        return phi
    return phi // 2


@dataclass
class ClassCensus:
    q: int
    l: int
    valid_d: list
    classes: list
    count: int
    formula_value: int

    def to_json(self) -> dict:
        return asdict(self)


def census(q: int, l: int) -> ClassCensus:
    if q % 2 == 0:
        raise InvalidParams(f"q={q} must be odd")
    if l < 2:
        raise UnsupportedL(f"l={l} < 2")
    if l == 2:
        raise UnsupportedL("l = 2 falls under the Dickson report")
    ds = valid_ds(q, l)
    merge = q % 4 == 1 and l % 2 == 0
    classes, seen = [], set()
    for d in ds:
        if d in seen:
            continue
        cls = sorted({d, l - d}) if merge and (l - d) in ds else [d]
        seen.update(cls)
        classes.append(cls)
    result = ClassCensus(q, l, ds, classes, len(classes), formula_value(q, l))
    if result.count != result.formula_value:
        raise AssertionError(f"census {result.count} disagrees with the totient formula "
                             f"{result.formula_value} for q={q}, l={l}")
    return result


def dickson_report(q: int, l: int = 2) -> dict:
    if l != 2:
        raise UnsupportedL("the Dickson report only covers l = 2; use census")
    return {
        "q": q,
        "l": 2,
        "valid_d": valid_ds(q, 2),
        "statement": (
            "BH(q, 2, 1) has center F_q and middle nucleus F_{q^2}. By the bound of "
            "Blokhuis et al. (q >= 4n^2 - 8n + 2 with n = 2 holds for every odd q), a "
            "commutative semifield with these nuclei is a Dickson semifield or a "
            "field, so BH(q, 2, 1) is isotopic to a Dickson semifield."
        ),
        "constructed": False,
    }


def full_autotopism_order(q: int, l: int, h: int) -> dict:
    """Reported, not enumerated: 2 l h (q^l - 1)(q^2 - 1)."""
    return {"order": 2 * l * h * (q ** l - 1) * (q ** 2 - 1), "verified": False}


def merged_class_witnesses(p: int, h: int, l: int, budget: int = 5 ** 8) -> list[dict]:
    """Build and verify an l-d certificate for each merged class, when the field fits."""
    from .ff_tower import make_field
    from .isotopy import build_l_minus_d, verify

    q = p ** h
    out: list[dict] = []
    result = census(q, l)
    if q ** (2 * l) > budget:
        return out
    field = None
    for cls in result.classes:
        if len(cls) != 2:
            continue
        field = field or make_field(p, h, l)
        cert = build_l_minus_d(field, cls[0])
        out.append({"class": cls, "verified": verify(cert)})
    return out


def split_prime_power(q: int) -> Optional[tuple[int, int]]:
    """(p, h) with q = p^h, or None."""
    if q < 2:
        return None
    p = next(k for k in range(2, q + 1) if q % k == 0)
    h, m = 0, q
    while m % p == 0:
        m //= p
        h += 1
    return (p, h) if m == 1 else None


def gcd_grid(qs=(3, 5, 7, 9, 11), ls=range(2, 9)) -> dict:
    """gcd(q^d + 1, q^l + 1) for every admissible (q, l, d) in the grid."""
    return {(q, l, d): math.gcd(q ** d + 1, q ** l + 1)
            for q in qs for l in ls for d in valid_ds(q, l)}
