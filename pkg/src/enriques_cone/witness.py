"""Laurent polynomials over F_p and the escaping element for the span of t^{-2n} a.

In characteristic p the additive subgroup generated by finitely many
elements equals their F_p-linear span, so membership is linear algebra mod
p over the union of monomial supports. ``t`` is a formal variable.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

__all__ = [
    "FpElement",
    "LaurentPoly",
    "PrimeMismatch",
    "poly_add",
    "poly_scale",
    "monomial",
    "span_member",
    "escape_witness",
    "escape_chain",
    "subgroup_closure",
    "is_prime",
    "all_polys",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


class PrimeMismatch(ValueError):
    pass


def _check_prime(p: int) -> int:
    p = int(p)
    if p <= 2 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    return p


@dataclass(frozen=True)
class FpElement:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", _check_prime(self.p))
        object.__setattr__(self, "value", int(self.value) % self.p)

    def __int__(self) -> int:
        return self.value

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise PrimeMismatch(f"{self.p} != {other.p}")
            return other
        return FpElement(int(other), self.p)

    def __add__(self, other) -> "FpElement":
        return FpElement(self.value + self._coerce(other).value, self.p)

    def __mul__(self, other) -> "FpElement":
        return FpElement(self.value * self._coerce(other).value, self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> "FpElement":
        return FpElement(-self.value, self.p)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpElement(pow(self.value, -1, self.p), self.p)


@dataclass(frozen=True)
class LaurentPoly:
    """Sum of c_e t^e with c_e in F_p; ``terms`` maps exponent -> nonzero residue."""

    p: int
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        p = _check_prime(self.p)
        object.__setattr__(self, "p", p)
        clean = {int(e): int(c) % p for e, c in self.terms.items() if int(c) % p}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __hash__(self) -> int:
        return hash((self.p, tuple(self.terms.items())))

    @classmethod
    def zero(cls, p: int) -> "LaurentPoly":
        return cls(p, {})

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return poly_add(self, other)

    def __neg__(self) -> "LaurentPoly":
        return poly_scale(self, -1)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return poly_add(self, -other)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly(self.p, {e + k: c for e, c in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            parts.append(mono if c == 1 else f"{c}*{mono}" if e else str(c))
        return " + ".join(parts)

    def as_dict(self) -> dict:
        return {"p": str(self.p), "terms": {str(e): str(c) for e, c in self.terms.items()}}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "LaurentPoly":
        return cls(int(doc["p"]), {int(e): int(c) for e, c in doc["terms"].items()})


def monomial(p: int, exponent: int, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly(p, {exponent: coeff})


def poly_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.p != b.p:
        raise PrimeMismatch(f"{a.p} != {b.p}")
    out = dict(a.terms)
    for e, c in b.terms.items():
        out[e] = out.get(e, 0) + c
    return LaurentPoly(a.p, out)


def poly_scale(a: LaurentPoly, c) -> LaurentPoly:
    if isinstance(c, FpElement):
        if c.p != a.p:
            raise PrimeMismatch(f"{a.p} != {c.p}")
        c = c.value
    return LaurentPoly(a.p, {e: v * int(c) for e, v in a.terms.items()})


def _same_prime(polys: Iterable[LaurentPoly]) -> int:
    ps = {f.p for f in polys}
    if len(ps) > 1:
        raise PrimeMismatch(f"mixed primes {sorted(ps)}")
    return ps.pop() if ps else 0


def span_member(gens: Sequence[LaurentPoly], target: LaurentPoly) -> bool:
    """Is ``target`` an F_p-combination of ``gens``? Row reduction mod p."""
    p = _same_prime([*gens, target])
    # incremental echelon basis keyed by pivot exponent
    basis: dict[int, dict[int, int]] = {}

    def reduce(v: dict[int, int]) -> dict[int, int]:
        v = dict(v)
        while v:
            piv = max(v)
            row = basis.get(piv)
            if row is None:
                return v
            f = v[piv]
            for e, c in row.items():
                nv = (v.get(e, 0) - f * c) % p
                if nv:
                    v[e] = nv
                else:
                    v.pop(e, None)
        return v

    for g in gens:
        r = reduce(g.terms)
        if r:
            piv = max(r)
            inv = pow(r[piv], -1, p)
            basis[piv] = {e: c * inv % p for e, c in r.items()}
    return not reduce(target.terms)


def _parse_generators(gens: Sequence[LaurentPoly], a: LaurentPoly | None):
    """Indices n with gens[k] = t^{-2n} a; ``a`` defaults to the constant 1."""
    if not gens:
        raise ValueError("need at least one generator")
    p = _same_prime(gens)
    a = a if a is not None else monomial(p, 0)
    if a.is_zero():
        raise ValueError("a must be nonzero")
    if a.p != p:
        raise PrimeMismatch(f"{a.p} != {p}")
    ns = []
    for g in gens:
        if g.is_zero():
            raise ValueError("zero generator is not of the form t^(-2n) a")
        shift = min(g.terms) - min(a.terms)
        if shift > 0 or shift % 2 or g != a.shift(shift):
            raise ValueError(f"generator {g} is not t^(-2n) * ({a}) for n >= 0")
        ns.append(-shift // 2)
    return a, ns


def escape_witness(gens: Sequence[LaurentPoly], a: LaurentPoly | None = None) -> LaurentPoly:
    """t^{-2(N+1)} a for the largest index N among the generators; verified outside their span."""
    a, ns = _parse_generators(gens, a)
    w = a.shift(-2 * (max(ns) + 1))
    if span_member(gens, w):  # pragma: no cover - the supports are disjoint
        raise AssertionError("escape witness unexpectedly lies in the span")
    return w


def escape_chain(p: int, steps: int, a: LaurentPoly | None = None) -> list[LaurentPoly]:
    """Start from {a} and adjoin the escape witness ``steps`` times."""
    a = a if a is not None else monomial(p, 0)
    gens = [a]
    for _ in range(steps):
        gens.append(escape_witness(gens, a))
    return gens


def subgroup_closure(gens: Sequence[LaurentPoly], limit: int = 100_000) -> set[LaurentPoly]:
    """Breadth-first closure of the additive subgroup generated by ``gens``."""
    p = _same_prime(gens)
    zero = LaurentPoly.zero(p) if p else None
    if zero is None:
        return set()
    seen = {zero}
    queue = deque([zero])
    steps = [*gens, *(-g for g in gens)]
    while queue:
        x = queue.popleft()
        for g in steps:
            y = x + g
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError("subgroup closure exceeded the size limit")
                queue.append(y)
    return seen


def all_polys(p: int, exponents: Sequence[int]) -> list[LaurentPoly]:
    """Every polynomial supported on ``exponents`` (p^k of them)."""
    return [LaurentPoly(p, dict(zip(exponents, cs))) for cs in product(range(p), repeat=len(exponents))]
