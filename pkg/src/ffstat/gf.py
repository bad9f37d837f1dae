"""Exact arithmetic in F_q, q = p**k, with a canonical extension construction.

Field elements are plain integers in [0, q).  For prime fields the value is
the residue itself; for extensions the value encodes the polynomial-basis
coordinates (a_0, ..., a_{k-1}) as sum a_i * p**i, so element 0 is the zero
of the field and element 1 its unit.

The extension modulus is never a free choice: it is the first monic
irreducible of degree k over F_p in monic-index order (base-p digits of the
index are the low coefficients).  Two constructions of the same (p, k) are
therefore bit-identical, with no external constant tables.

Multiplication uses precomputed q x q tables when q <= 256 and
coefficient-wise reduction otherwise; the supported ceiling is q <= 2**16.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BadExtensionDegreeError,
    DivisionByZeroError,
    FieldTooLargeError,
    NonPrimeError,
)

MAX_Q = 1 << 16
# q*q uint16 entries; 4096**2 * 2 bytes = 32 MiB per table.
MAX_TABLE_Q = 4096
_EAGER_TABLE_Q = 256


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (n <= 2**16 here)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Coefficient-tuple arithmetic over F_p, used only to bootstrap the field.
# Tuples are ascending with no trailing zeros; () is the zero polynomial.


def _trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


def _mul_fp(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _mod_fp(a, m, p):
    """Remainder of a modulo monic m, coefficients in F_p."""
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for i in range(dm + 1):
                r[shift + i] = (r[shift + i] - lead * m[i]) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _is_irreducible_fp(f, p):
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    df = len(f) - 1
    for d in range(1, df // 2 + 1):
        for idx in range(p**d):
            g = _digits(idx, p, d) + (1,)
            if not _mod_fp(f, g, p):
                return False
    return True


def _digits(value, base, width):
    out = []
    for _ in range(width):
        out.append(value % base)
        value //= base
    return tuple(out)


def _find_modulus(p: int, k: int):
    """First monic irreducible of degree k over F_p in monic-index order."""
    for idx in range(p**k):
        cand = _digits(idx, p, k) + (1,)
        if _is_irreducible_fp(cand, p):
            return cand
    raise AssertionError(f"no irreducible of degree {k} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------


class FieldSpec:
    """Immutable description of F_q plus its arithmetic.

    All per-field tables are computed once at construction (q <= 256) or on
    first use, and never mutated afterwards, so a FieldSpec is safe to share
    across threads.
    """

    def __init__(self, p: int, k: int):
        if k < 1:
            raise BadExtensionDegreeError(f"extension degree must be >= 1, got {k}")
        if not is_prime(p):
            raise NonPrimeError(f"q must be a prime power; {p} is not prime")
        q = p**k
        if q > MAX_Q:
            raise FieldTooLargeError(f"p**k = {p}**{k} = {q} exceeds ceiling {MAX_Q}")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = _find_modulus(p, k) if k > 1 else None
        # reduction rows: x**(k+t) mod modulus, t = 0..k-2, as length-k rows
        if k > 1:
            rows = []
            r = self.modulus
            for t in range(k - 1):
                xe = (0,) * (k + t) + (1,)
                red = _mod_fp(xe, r, p)
                rows.append(tuple(red) + (0,) * (k - len(red)))
            self._red_rows = rows
        self._add_table = None
        self._sub_table = None
        self._mul_table = None
        self._inv_table = None
        if q <= _EAGER_TABLE_Q:
            self._build_tables()

    # -- identity / hashing --

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.k == other.k
        )

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        if self.k == 1:
            return f"FieldSpec(q={self.q})"
        return f"FieldSpec(q={self.q}={self.p}^{self.k}, modulus={list(self.modulus)})"

    # -- coordinates --

    def coords(self, a: int):
        """Polynomial-basis coordinates (a_0, ..., a_{k-1}) of an element."""
        return _digits(a, self.p, self.k)

    def from_coords(self, coords) -> int:
        v = 0
        for c in reversed(coords):
            v = v * self.p + c % self.p
        return v

    def elements(self):
        return range(self.q)

    # -- scalar arithmetic --

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.from_coords(
            [(x + y) % self.p for x, y in zip(self.coords(a), self.coords(b))]
        )

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.from_coords([-x % self.p for x in self.coords(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return int(self._mul_table[a, b])
        return self._mul_ext(a, b)

    def _mul_ext(self, a: int, b: int) -> int:
        prod = _mul_fp(_trim(self.coords(a)), _trim(self.coords(b)), self.p)
        red = _mod_fp(prod, self.modulus, self.p)
        return self.from_coords(red + (0,) * (self.k - len(red)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZeroError("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is not None:
            return int(self._inv_table[a])
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    # -- tables --

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        if q > MAX_TABLE_Q:
            raise FieldTooLargeError(
                f"q={q} exceeds the q<={MAX_TABLE_Q} limit for full q x q tables"
            )
        vals = np.arange(q, dtype=np.int64)
        dig = np.empty((q, k), dtype=np.int64)
        v = vals.copy()
        for i in range(k):
            dig[:, i] = v % p
            v //= p
        pw = p ** np.arange(k, dtype=np.int64)
        add_dig = (dig[:, None, :] + dig[None, :, :]) % p
        self._add_table = (add_dig @ pw).astype(np.uint16)
        sub_dig = (dig[:, None, :] - dig[None, :, :]) % p
        self._sub_table = (sub_dig @ pw).astype(np.uint16)
        if k == 1:
            self._mul_table = (np.outer(vals, vals) % p).astype(np.uint16)
        else:
            conv = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
            for i in range(k):
                for j in range(k):
                    conv[:, :, i + j] += dig[:, i, None] * dig[None, :, j]
            red = np.array(self._red_rows, dtype=np.int64)  # (k-1, k)
            low = conv[:, :, :k] + conv[:, :, k:] @ red
            self._mul_table = ((low % p) @ pw).astype(np.uint16)
        inv = np.zeros(q, dtype=np.uint16)
        a_of_one = np.argwhere(self._mul_table == 1)
        inv[a_of_one[:, 0]] = a_of_one[:, 1]
        self._inv_table = inv

    def add_table(self) -> np.ndarray:
        if self._add_table is None:
            self._build_tables()
        return self._add_table

    def sub_table(self) -> np.ndarray:
        if self._sub_table is None:
            self._build_tables()
        return self._sub_table

    def mul_table(self) -> np.ndarray:
        if self._mul_table is None:
            self._build_tables()
        return self._mul_table


def field_new(p: int, k: int = 1) -> FieldSpec:
    """Construct F_{p**k}; deterministic, repeated calls are identical."""
    return FieldSpec(p, k)


def field_from_q(q: int) -> FieldSpec:
    """Resolve q to (p, k); rejects non prime powers."""
    if q < 2:
        raise NonPrimeError(f"q must be a prime power >= 2, got {q}")
    p = 2
    while q % p:
        p += 1
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NonPrimeError(f"q must be a prime power; {q} is not")
    return FieldSpec(p, k)
