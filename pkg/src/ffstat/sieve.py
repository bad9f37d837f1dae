"""Exact tables of Lambda, mu, d and smallest prime factor over M_n.

Tables are built one degree at a time by a two-phase sieve over the monic
index space:

1. Marking.  For each irreducible p with deg p <= m/2, in increasing
   (degree, index) order, every still-unmarked product p*g with g monic of
   degree m - deg p is marked with p and the quotient index of g.  The
   first marker of an entry is its smallest prime factor under
   degree-then-index order; entries never marked are irreducible (a
   reducible f always has a prime factor of degree <= deg f / 2).

2. Derivation.  Knowing f = p*g with p the smallest prime of f, the values
   follow from the lower-degree rows by vectorized gathers:

       e(f)  = 1 + e(g)  if p | g else 1        (multiplicity of p in f)
       mu(f) = 0 if p | g else -mu(g)
       Lam(f) = deg p if p | g and Lam(g) = deg p else 0
       d(f)  = d(g) * (e(f)+1) / e(f)           (exact integer division)

   with "p | g" decided by SPF(g) == p (or g == p), never by a division.

The von Mangoldt table can also be built directly, by writing deg p into
p**(m/deg p) for each irreducible p with deg p | m; ``lambda_direct``
provides that second construction so the two can be compared array-for-array.

Note on the squared-Mobius count: sum_{f in M_n} mu(f)^2 equals the
squarefree count q^n - q^(n-1) = q^n / zeta_q(2) for n >= 2, i.e. the
coefficient of Z(u)/Z(u^2); sources sometimes typeset the series as
Z(u)/Z(2u), which does not match that count.  The tables follow the count.
"""

from __future__ import annotations

import enum
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    BudgetExceededError,
    CacheFormatError,
    DivisionByZeroError,
    FieldTooLargeError,
)
from .gf import MAX_TABLE_Q, FieldSpec, field_new
from .polyring import MonicIndex, Poly, decode, encode

DEFAULT_BUDGET = 2 << 30  # bytes
_SPF_NONE = kernels.SPF_NONE
SPF_SENTINEL = (1 << 64) - 1  # packed-SPF value for entries with no factor

# construction bytes per entry and per degree:
# spf_deg 1 + spf_idx 4 + lam 1 + mu 1 + div 4 + mult 1, plus quo 4 transient
_BYTES_PER_ENTRY = 16


class ArithFunc(enum.IntEnum):
    """Arithmetic function selector; values are the cache-file ids."""

    LAMBDA = 0
    MU = 1
    DIVISOR = 2
    SPF = 3

    @property
    def label(self) -> str:
        return _FUNC_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "ArithFunc":
        for func, label in _FUNC_LABELS.items():
            if label == text:
                return func
        raise ValueError(f"unknown arithmetic function {text!r}")


_FUNC_LABELS = {
    ArithFunc.LAMBDA: "lambda",
    ArithFunc.MU: "mu",
    ArithFunc.DIVISOR: "divisor",
    ArithFunc.SPF: "spf",
}

_FUNC_WIDTH = {
    ArithFunc.LAMBDA: 1,
    ArithFunc.MU: 1,
    ArithFunc.DIVISOR: 4,
    ArithFunc.SPF: 8,
}


@dataclass
class ArithTable:
    """Values of one arithmetic function on all of M_n, indexed by MonicIndex."""

    field: FieldSpec
    n: int
    func: ArithFunc
    values: np.ndarray

    def sums(self) -> tuple[int, int]:
        """Exact (sum, sum of squares) over M_n."""
        if self.func is ArithFunc.SPF:
            raise ValueError("sums are not defined for the SPF table")
        return kernels.exact_sum(self.values), kernels.exact_sum_sq(self.values)


@dataclass
class IrreducibleList:
    """Sorted index arrays of the monic irreducibles of each degree <= n."""

    field: FieldSpec
    n: int
    by_degree: list

    def count(self, d: int) -> int:
        return int(self.by_degree[d].shape[0])

    def indices(self, d: int) -> np.ndarray:
        return self.by_degree[d]

    def polys(self, d: int):
        for idx in self.by_degree[d]:
            yield decode(self.field, MonicIndex(d, int(idx)))


class SieveTables:
    """All per-degree tables of a field up to a maximum degree.

    Arrays are immutable after construction and safe for concurrent reads.
    """

    def __init__(self, field: FieldSpec, n: int, budget: int = DEFAULT_BUDGET):
        need = _BYTES_PER_ENTRY * sum(field.q**m for m in range(n + 1))
        if need > budget:
            raise BudgetExceededError(
                f"sieve to degree {n} over F_{field.q} needs ~{need} bytes, "
                f"budget is {budget}"
            )
        self.field = field
        self.n = n
        self._kf = None
        # degree-0 row: the unit polynomial 1
        self.spf_deg = [np.full(1, _SPF_NONE, dtype=np.uint8)]
        self.spf_idx = [np.zeros(1, dtype=np.uint32)]
        self.lam = [np.zeros(1, dtype=np.uint8)]
        self.mu = [np.ones(1, dtype=np.int8)]
        self.div = [np.ones(1, dtype=np.uint32)]
        self.mult = [np.zeros(1, dtype=np.uint8)]
        self._irr_cache: dict[int, np.ndarray] = {}
        for m in range(1, n + 1):
            self._build_degree(m)

    def kernel_field(self) -> kernels.KernelField:
        if self._kf is None:
            if self.field.k > 1 and self.field.q > MAX_TABLE_Q:
                raise FieldTooLargeError(
                    f"extension-field sieve needs q <= {MAX_TABLE_Q}, got {self.field.q}"
                )
            self._kf = kernels.KernelField.from_field(self.field)
        return self._kf

    def _build_degree(self, m: int):
        q = self.field.q
        N = q**m
        spf_deg = np.full(N, _SPF_NONE, dtype=np.uint8)
        spf_idx = np.zeros(N, dtype=np.uint32)
        quo = np.zeros(N, dtype=np.uint32)
        if m >= 2:
            kf = self.kernel_field()
            for dp in range(1, m // 2 + 1):
                p_list = self.irreducibles(dp)
                for p_i in p_list:
                    p_low = _index_digits(int(p_i), q, dp)
                    kernels.mark_products(
                        spf_deg, spf_idx, quo, p_low, dp, int(p_i), m - dp, kf
                    )
        lam = np.zeros(N, dtype=np.uint8)
        mu = np.zeros(N, dtype=np.int8)
        div = np.zeros(N, dtype=np.uint32)
        mult = np.zeros(N, dtype=np.uint8)
        irr = spf_deg == _SPF_NONE
        lam[irr] = m
        mu[irr] = -1
        div[irr] = 2
        mult[irr] = 1
        for dp in range(1, m // 2 + 1):
            sel = np.nonzero(spf_deg == dp)[0]
            if sel.size == 0:
                continue
            s = m - dp
            gq = quo[sel].astype(np.int64)
            ip = spf_idx[sel]
            g_sd = self.spf_deg[s][gq]
            g_si = self.spf_idx[s][gq]
            p_div_g = (g_sd == dp) & (g_si == ip)
            if s == dp:
                p_div_g |= gq == ip.astype(np.int64)
            e = np.where(p_div_g, self.mult[s][gq].astype(np.int64) + 1, 1)
            mult[sel] = e.astype(np.uint8)
            mu[sel] = np.where(p_div_g, 0, -self.mu[s][gq].astype(np.int64)).astype(
                np.int8
            )
            g_lam = self.lam[s][gq]
            lam[sel] = np.where(p_div_g & (g_lam == dp), dp, 0).astype(np.uint8)
            g_div = self.div[s][gq].astype(np.int64)
            div[sel] = ((g_div * (e + 1)) // e).astype(np.uint32)
        self.spf_deg.append(spf_deg)
        self.spf_idx.append(spf_idx)
        self.lam.append(lam)
        self.mu.append(mu)
        self.div.append(div)
        self.mult.append(mult)

    # -- accessors --

    def irreducibles(self, d: int) -> np.ndarray:
        """Sorted indices of the monic irreducibles of degree d."""
        if d == 0:
            return np.empty(0, dtype=np.int64)
        if d not in self._irr_cache:
            self._irr_cache[d] = np.nonzero(self.spf_deg[d] == _SPF_NONE)[0]
        return self._irr_cache[d]

    def irreducible_list(self) -> IrreducibleList:
        return IrreducibleList(
            self.field, self.n, [self.irreducibles(d) for d in range(self.n + 1)]
        )

    def values(self, func: ArithFunc, m: int) -> np.ndarray:
        if func is ArithFunc.LAMBDA:
            return self.lam[m]
        if func is ArithFunc.MU:
            return self.mu[m]
        if func is ArithFunc.DIVISOR:
            return self.div[m]
        return self.spf_packed(m)

    def spf_packed(self, m: int) -> np.ndarray:
        """SPF as (degree << 32) | index in uint64, sentinel for no factor."""
        code = (self.spf_deg[m].astype(np.uint64) << np.uint64(32)) | self.spf_idx[
            m
        ].astype(np.uint64)
        code[self.spf_deg[m] == _SPF_NONE] = np.uint64(SPF_SENTINEL)
        return code

    def table(self, func: ArithFunc, m: int | None = None) -> ArithTable:
        m = self.n if m is None else m
        return ArithTable(self.field, m, func, self.values(func, m))

    def lambda_direct(self, m: int) -> np.ndarray:
        """Independent Lambda construction: mark p**(m/d) for each prime p.

        Uses only the irreducible lists and polynomial powering, bypassing
        the factorization recurrences entirely.
        """
        out = np.zeros(self.field.q**m, dtype=np.uint8)
        out[self.spf_deg[m] == _SPF_NONE] = m
        for d in range(1, m // 2 + 1):
            if m % d:
                continue
            for p_i in self.irreducibles(d):
                p = decode(self.field, MonicIndex(d, int(p_i)))
                pe = p ** (m // d)
                out[encode(pe).idx] = d
        return out


def _index_digits(idx: int, q: int, width: int) -> np.ndarray:
    out = np.empty(width, dtype=np.uint16)
    for j in range(width):
        out[j] = idx % q
        idx //= q
    return out


def build_tables(field: FieldSpec, n: int, budget: int = DEFAULT_BUDGET) -> SieveTables:
    return SieveTables(field, n, budget=budget)


def build_table(
    field: FieldSpec, n: int, func: ArithFunc, budget: int = DEFAULT_BUDGET
) -> ArithTable:
    return SieveTables(field, n, budget=budget).table(func, n)


def build_irreducibles(
    field: FieldSpec, n: int, budget: int = DEFAULT_BUDGET
) -> IrreducibleList:
    return SieveTables(field, n, budget=budget).irreducible_list()


def table_sums(table: ArithTable) -> tuple[int, int]:
    return table.sums()


# ---------------------------------------------------------------------------
# Counting oracles, independent of the sieve


def mobius_int(n: int) -> int:
    """Mobius function on the integers, by trial factorization."""
    if n < 1:
        raise ValueError("mobius_int needs n >= 1")
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def divisors_int(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d: (1/d) sum mu(e) q^(d/e)."""
    total = sum(mobius_int(e) * q ** (d // e) for e in divisors_int(d))
    assert total % d == 0
    return total // d


def divisor_moment_series(q: int, n_max: int) -> tuple[list[int], list[int]]:
    """Coefficients of Z(u)^2 and Z(u)^4 / Z(u^2) up to degree n_max.

    Series are expanded by exact convolution from Z(u) = sum q^n u^n, giving
    the moments sum d(f) and sum d(f)^2 over M_n with no combinatorial input.
    """
    z = [q**i for i in range(n_max + 1)]

    def conv(a, b):
        out = [0] * (n_max + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(0, n_max + 1 - i):
                    out[i + j] += ai * b[j]
        return out

    z2 = conv(z, z)
    z4 = conv(z2, z2)
    # divide by Z(u^2): multiply by (1 - q u^2)
    mom2 = [z4[i] - (q * z4[i - 2] if i >= 2 else 0) for i in range(n_max + 1)]
    return z2, mom2


# ---------------------------------------------------------------------------
# Naive factorization: the oracle path, independent of all tables


def factor_naive(f: Poly) -> list[tuple[Poly, int]]:
    """Factor a nonzero polynomial by trial division in (degree, index) order."""
    if f.is_zero:
        raise DivisionByZeroError("cannot factor the zero polynomial")
    F = f.field
    g = f.monic()
    factors = []
    d = 1
    while isinstance(g.degree, int) and g.degree >= 1:
        if 2 * d > g.degree:
            factors.append((g, 1))
            break
        for idx in range(F.q**d):
            p = decode(F, MonicIndex(d, idx))
            e = 0
            while True:
                quot, rem = divmod(g, p)
                if not rem.is_zero:
                    break
                g = quot
                e += 1
            if e:
                factors.append((p, e))
        d += 1
    return factors


def naive_lambda(f: Poly) -> int:
    fac = factor_naive(f)
    if len(fac) == 1:
        return int(fac[0][0].degree)
    return 0


def naive_mu(f: Poly) -> int:
    fac = factor_naive(f)
    if any(e >= 2 for _, e in fac):
        return 0
    return (-1) ** len(fac)


def naive_divisor(f: Poly) -> int:
    out = 1
    for _, e in factor_naive(f):
        out *= e + 1
    return out


# ---------------------------------------------------------------------------
# Table cache files ("FFAT"): little-endian, CRC-trailed


_MAGIC = b"FFAT"
_VERSION = 1

_NP_DTYPE = {
    ArithFunc.LAMBDA: "<u1",
    ArithFunc.MU: "<i1",
    ArithFunc.DIVISOR: "<u4",
    ArithFunc.SPF: "<u8",
}


def _modulus_words(field: FieldSpec) -> tuple[int, ...]:
    if field.k == 1:
        return (0, 1)  # canonical linear T, fixed header layout
    return field.modulus


def write_table(path, table: ArithTable) -> int:
    """Write a cache file; returns the payload CRC32."""
    field = table.field
    payload = np.ascontiguousarray(table.values.astype(_NP_DTYPE[table.func])).tobytes()
    crc = zlib.crc32(payload) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sHIH", _MAGIC, _VERSION, field.p, field.k))
        for w in _modulus_words(field):
            fh.write(struct.pack("<I", w))
        fh.write(
            struct.pack("<HBB", table.n, int(table.func), _FUNC_WIDTH[table.func])
        )
        fh.write(payload)
        fh.write(struct.pack("<I", crc))
    return crc


def read_table(path) -> ArithTable:
    """Read and validate a cache file; raises CacheFormatError on mismatch."""
    with open(path, "rb") as fh:
        blob = fh.read()
    try:
        magic, version, p, k = struct.unpack_from("<4sHIH", blob, 0)
    except struct.error as exc:
        raise CacheFormatError(f"truncated header in {path}") from exc
    if magic != _MAGIC:
        raise CacheFormatError(f"bad magic {magic!r} in {path}")
    if version != _VERSION:
        raise CacheFormatError(f"unsupported cache version {version} in {path}")
    off = struct.calcsize("<4sHIH")
    try:
        modulus = struct.unpack_from(f"<{k + 1}I", blob, off)
        off += 4 * (k + 1)
        n, func_id, width = struct.unpack_from("<HBB", blob, off)
        off += struct.calcsize("<HBB")
    except struct.error as exc:
        raise CacheFormatError(f"truncated header in {path}") from exc
    try:
        func = ArithFunc(func_id)
    except ValueError as exc:
        raise CacheFormatError(f"unknown function id {func_id} in {path}") from exc
    if width != _FUNC_WIDTH[func]:
        raise CacheFormatError(f"width {width} mismatches function {func.label}")
    field = field_new(p, k)
    if _modulus_words(field) != tuple(modulus):
        raise CacheFormatError(f"modulus mismatch in {path}")
    count = field.q**n
    need = count * width
    if len(blob) != off + need + 4:
        raise CacheFormatError(f"payload size mismatch in {path}")
    payload = blob[off : off + need]
    (crc_stored,) = struct.unpack_from("<I", blob, off + need)
    if zlib.crc32(payload) & 0xFFFFFFFF != crc_stored:
        raise CacheFormatError(f"CRC mismatch in {path}")
    values = np.frombuffer(payload, dtype=_NP_DTYPE[func]).copy()
    return ArithTable(field, n, func, values)
