"""Dense polynomials over F_q with canonical monic indexing.

A ``Poly`` holds ascending coefficients (integer field elements) with no
trailing zero; the zero polynomial has an empty coefficient tuple and degree
``NEG_INF`` (a float sentinel, never -1, so that comparisons stay total and
``norm(0) == 0`` holds without special cases leaking into callers).

Monic polynomials of degree n are in bijection with [0, q**n): the index is
the base-q number whose digit i is the coefficient of T**i, the leading 1
being implicit.  Every enumeration in the package walks indices in
increasing order, which makes sharded computations reproducible.

Degrees stay small (<= ~25), so all arithmetic is schoolbook.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple

from .errors import (
    BadIntervalError,
    BadLiteralError,
    BothZeroError,
    DivisionByZeroError,
    FieldMismatchError,
    NotMonicError,
)
from .gf import FieldSpec

NEG_INF = float("-inf")


class Poly:
    """Immutable dense polynomial over a fixed FieldSpec."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not 0 <= c < field.q:
                raise ValueError(f"coefficient {c} outside [0, {field.q})")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors --

    @classmethod
    def zero(cls, field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field, c) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def T(cls, field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def x_pow(cls, field, e: int) -> "Poly":
        return cls(field, (0,) * e + (1,))

    # -- basic queries --

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def norm(self) -> int:
        """q**deg, with norm(0) == 0."""
        return self.field.q ** (len(self.coeffs) - 1) if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Poly(q={self.field.q}, [{poly_literal(self)}])"

    def _check_field(self, other: "Poly"):
        if self.field != other.field:
            raise FieldMismatchError(
                f"operands over F_{self.field.q} and F_{other.field.q}"
            )

    # -- ring operations --

    def __add__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.add(self[i], other[i]) for i in range(n)])

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.sub(self[i], other[i]) for i in range(n)])

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_field(other)
        F = self.field
        if self.is_zero or other.is_zero:
            return Poly.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(c, a) for a in self.coeffs])

    def __divmod__(self, other: "Poly"):
        self._check_field(other)
        if other.is_zero:
            raise DivisionByZeroError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        dg = len(other.coeffs) - 1
        inv_lead = F.inv(other.lc)
        quot = [0] * max(len(r) - dg, 0)
        while len(r) - 1 >= dg and r:
            c = F.mul(r[-1], inv_lead)
            shift = len(r) - 1 - dg
            quot[shift] = c
            for i in range(dg + 1):
                r[shift + i] = F.sub(r[shift + i], F.mul(c, other.coeffs[i]))
            while r and r[-1] == 0:
                r.pop()
        return Poly(F, quot), Poly(F, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        out = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self) -> "Poly":
        """Unit-normalize: divide by the leading coefficient."""
        if self.is_zero or self.lc == 1:
            return self
        return self.scale(self.field.inv(self.lc))

    def __call__(self, x: int) -> int:
        """Evaluate at a field element (Horner)."""
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; raises BothZeroError for gcd(0, 0)."""
    f._check_field(g)
    if f.is_zero and g.is_zero:
        raise BothZeroError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# Monic indexing and enumerations


class MonicIndex(NamedTuple):
    """Degree n and index in [0, q**n); digit i of idx is the T**i coefficient."""

    n: int
    idx: int


def encode(f: Poly) -> MonicIndex:
    if not f.is_monic:
        raise NotMonicError(f"cannot index non-monic polynomial [{poly_literal(f)}]")
    n = len(f.coeffs) - 1
    idx = 0
    q = f.field.q
    for c in reversed(f.coeffs[:n]):
        idx = idx * q + c
    return MonicIndex(n, idx)


def decode(field: FieldSpec, m: MonicIndex) -> Poly:
    n, idx = m
    if not 0 <= idx < field.q**n:
        raise ValueError(f"index {idx} outside [0, {field.q}**{n})")
    cs = []
    for _ in range(n):
        cs.append(idx % field.q)
        idx //= field.q
    cs.append(1)
    return Poly(field, cs)


def iter_monic(field: FieldSpec, n: int) -> Iterator[MonicIndex]:
    """All of M_n in increasing index order."""
    for idx in range(field.q**n):
        yield MonicIndex(n, idx)


def iter_p_le(field: FieldSpec, h: int) -> Iterator[Poly]:
    """All q**(h+1) polynomials of degree <= h, including 0, by index."""
    q = field.q
    for v in range(q ** (h + 1)):
        cs = []
        x = v
        for _ in range(h + 1):
            cs.append(x % q)
            x //= q
        yield Poly(field, cs)


def iter_interval(A: Poly, h: int) -> Iterator[Poly]:
    """The interval A + P_{<=h}: the q**(h+1) polynomials within norm q**h of A."""
    if A.is_zero or not 0 <= h < A.degree:
        raise BadIntervalError(f"interval needs 0 <= h < deg A, got h={h}")
    for g in iter_p_le(A.field, h):
        yield A + g


# ---------------------------------------------------------------------------
# Literals (shared with the CLI): ascending comma-separated coefficients.


def parse_poly(field: FieldSpec, text: str) -> Poly:
    """Parse "c0,c1,..." (ascending); leading coefficient must be nonzero."""
    body = text.strip()
    if not body:
        raise BadLiteralError("empty polynomial literal")
    parts = [s.strip() for s in body.split(",")]
    try:
        cs = [int(s) for s in parts]
    except ValueError as exc:
        raise BadLiteralError(f"bad polynomial literal {text!r}") from exc
    if any(not 0 <= c < field.q for c in cs):
        raise BadLiteralError(
            f"coefficients of {text!r} must lie in [0, {field.q})"
        )
    if len(cs) > 1 and cs[-1] == 0:
        raise BadLiteralError(f"leading coefficient of {text!r} must be nonzero")
    return Poly(field, cs)


def poly_literal(f: Poly) -> str:
    if f.is_zero:
        return "0"
    return ",".join(str(c) for c in f.coeffs)
