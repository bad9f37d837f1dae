"""Exact correlation, interval, and progression statistics over M_n.

Everything here is a fold over immutable sieve tables, computed in guarded
64-bit chunks and returned as Python ints or Fractions; no statistic ever
passes through floating point.  Shards of a fold are combined by integer
addition, so results are bit-identical for any chunking or thread count.

Two structural facts about the monic index space carry all the fast paths
(both are verified exhaustively in the test suite):

- field addition has no carries between digit positions, so adding a fixed
  shift K with deg K <= k permutes the low q^(k+1) block of the index;
- the interval I(A;h) = A + P_{<=h} is exactly the contiguous block of
  q^(h+1) indices sharing A's digits above position h.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    AllEvenError,
    BadIntervalError,
    BadModulusDegreeError,
    BadShiftsError,
    DegreeTooLargeError,
    NotCoprimeError,
    NotMonicError,
    ZeroShiftError,
)
from .gf import FieldSpec
from .polyring import MonicIndex, Poly, decode, encode, iter_monic, poly_gcd
from .sieve import ArithFunc, SieveTables, factor_naive, naive_divisor, naive_lambda, naive_mu

_DIRECT_ROUTE_OPS = 5 * 10**8  # element-ops ceiling for per-shift folds


@dataclass
class StatParams:
    """Parameter bundle for the shift/interval statistics."""

    field: FieldSpec
    n: int
    func: ArithFunc = ArithFunc.LAMBDA
    h: int | None = None
    shift: Poly | None = None
    Q: Poly | None = None
    A: Poly | None = None
    kshift: int | None = None

    def __post_init__(self):
        if self.n <= 0:
            raise DegreeTooLargeError(f"main degree must be positive, got {self.n}")


def _tables(field: FieldSpec, n: int, tables: SieveTables | None) -> SieveTables:
    if tables is None:
        return SieveTables(field, n)
    if tables.field != field or tables.n < n:
        raise ValueError("supplied tables do not cover this field/degree")
    return tables


def _poly_low_index(f: Poly) -> int:
    """The polynomial read as a base-q number (all coefficients, ascending)."""
    v = 0
    for c in reversed(f.coeffs):
        v = v * f.field.q + c
    return v


def main_term(func: ArithFunc, n: int) -> Fraction:
    """Leading term of the normalized autocorrelation: 1, (n+1)^2, or 0."""
    if func is ArithFunc.LAMBDA:
        return Fraction(1)
    if func is ArithFunc.DIVISOR:
        return Fraction((n + 1) ** 2)
    if func is ArithFunc.MU:
        return Fraction(0)
    raise ValueError(f"no correlation main term for {func}")


def mean_value(
    field: FieldSpec, n: int, func: ArithFunc, tables: SieveTables | None = None
) -> Fraction:
    """<alpha>_n = q^-n sum over M_n of alpha(f)."""
    tb = _tables(field, n, tables)
    return Fraction(kernels.exact_sum(tb.values(func, n)), field.q**n)


# ---------------------------------------------------------------------------
# Pairwise correlations


def _shift_fold(tb: SieveTables, n: int, func: ArithFunc, low_idx: int, width: int,
                threads: int = 1) -> int:
    """sum over f in M_n of alpha(f) * alpha(f + K), K given by its low index."""
    vals = tb.values(func, n)
    kf = tb.kernel_field()
    perm = kernels.add_shift_perm(kf, width, low_idx)
    return kernels.corr_fold(vals, vals, perm, threads=threads)


def autocorr(params: StatParams, tables: SieveTables | None = None,
             threads: int = 1) -> Fraction:
    """q^-n sum over M_n of alpha(f) alpha(f+K)."""
    K = params.shift
    if K is None or K.is_zero:
        raise ZeroShiftError("correlation shift K must be nonzero")
    if K.degree >= params.n:
        raise DegreeTooLargeError(
            f"shift degree {K.degree} must be < n = {params.n}"
        )
    tb = _tables(params.field, params.n, tables)
    raw = _shift_fold(
        tb, params.n, params.func, _poly_low_index(K), int(K.degree) + 1, threads
    )
    return Fraction(raw, params.field.q**params.n)


def autocorr_naive(params: StatParams) -> Fraction:
    """Oracle route: same sum via per-f trial-division factorization."""
    K = params.shift
    if K is None or K.is_zero:
        raise ZeroShiftError("correlation shift K must be nonzero")
    if K.degree >= params.n:
        raise DegreeTooLargeError(
            f"shift degree {K.degree} must be < n = {params.n}"
        )
    alpha = {
        ArithFunc.LAMBDA: naive_lambda,
        ArithFunc.MU: naive_mu,
        ArithFunc.DIVISOR: naive_divisor,
    }[params.func]
    F = params.field
    total = 0
    for m in iter_monic(F, params.n):
        f = decode(F, m)
        total += alpha(f) * alpha(f + K)
    return Fraction(total, F.q**params.n)


def error_term(params: StatParams, tables: SieveTables | None = None,
               threads: int = 1) -> Fraction:
    """Deviation of the normalized autocorrelation from its main term."""
    return autocorr(params, tables, threads) - main_term(params.func, params.n)


# ---------------------------------------------------------------------------
# Shift-averaged error terms: direct route and fiber (interval) route


def pair_sum_monic(tb: SieveTables, n: int, j: int, func: ArithFunc,
                   threads: int = 1) -> int:
    """sum over monic J of degree j of sum_f alpha(f) alpha(f+J), directly."""
    q = tb.field.q
    total = 0
    for t in range(q**j):
        total += _shift_fold(tb, n, func, q**j + t, j + 1, threads)
    return total


def pair_sum_nonzero(tb: SieveTables, n: int, j: int, func: ArithFunc,
                     threads: int = 1) -> int:
    """Same but over all J with deg J = j (any nonzero leading coefficient)."""
    q = tb.field.q
    total = 0
    for c in range(1, q):
        for t in range(q**j):
            total += _shift_fold(tb, n, func, c * q**j + t, j + 1, threads)
    return total


def pair_sum_cumulative(tb: SieveTables, n: int, h: int, func: ArithFunc) -> int:
    """sum over nonzero J with deg J <= h of sum_f alpha(f) alpha(f+J).

    Computed from interval fiber sums: summing alpha over each block of
    q^(h+1) indices and squaring counts every ordered pair (f, g) in a
    common interval once, i.e. the diagonal plus exactly the J-sum wanted.
    """
    if h < 0:
        return 0
    vals = tb.values(func, n)
    fib = kernels.fiber_sums(vals, tb.field.q ** (h + 1))
    return kernels.exact_sum_sq(fib) - kernels.exact_sum_sq(vals)


def pair_sum_nonzero_fiber(tb: SieveTables, n: int, j: int, func: ArithFunc) -> int:
    """Fiber route for the deg J = j pair sum: difference of cumulatives."""
    return pair_sum_cumulative(tb, n, j, func) - pair_sum_cumulative(tb, n, j - 1, func)


def sum_error(
    field: FieldSpec,
    n: int,
    k: int,
    func: ArithFunc = ArithFunc.LAMBDA,
    *,
    monic: bool = True,
    route: str = "auto",
    tables: SieveTables | None = None,
    threads: int = 1,
) -> Fraction:
    """Error-term sum over shifts of degree k.

    With ``monic=True`` this is sum over K in M_k of E(K, n, q) (and its d, mu
    analogues); with ``monic=False`` the sum runs over all nonzero K of
    degree k.  ``route`` picks the per-shift fold ("direct"), the interval
    fiber identity ("fiber"), or by cost ("auto"); both routes are exact and
    must agree, which the verification suite asserts.
    """
    if not 0 <= k < n:
        raise DegreeTooLargeError(f"shift degree k={k} must satisfy 0 <= k < n")
    q = field.q
    tb = _tables(field, n, tables)
    if route == "auto":
        route = "direct" if q ** (n + k) <= _DIRECT_ROUTE_OPS else "fiber"
    if route == "direct":
        raw = (
            pair_sum_monic(tb, n, k, func, threads)
            if monic
            else pair_sum_nonzero(tb, n, k, func, threads)
        )
        total = Fraction(raw)
    elif route == "fiber":
        nz = pair_sum_nonzero_fiber(tb, n, k, func)
        total = Fraction(nz, q - 1) if monic else Fraction(nz)
    else:
        raise ValueError(f"unknown route {route!r}")
    terms = q**k if monic else (q - 1) * q**k
    return total / q**n - terms * main_term(func, n)


def twisted_sum_error(
    field: FieldSpec,
    n: int,
    Q: Poly,
    *,
    tables: SieveTables | None = None,
    threads: int = 1,
) -> Fraction:
    """sum over j < n - deg Q, K in M_j of E(K*Q, n, q), for the Lambda table."""
    if Q.is_zero or not 1 <= Q.degree < n:
        raise BadModulusDegreeError(
            f"twisted sum needs 1 <= deg Q < n, got deg Q = {Q.degree}"
        )
    dq = int(Q.degree)
    tb = _tables(field, n, tables)
    q = field.q
    raw = 0
    terms = 0
    for j in range(n - dq):
        for t in range(q**j):
            K = decode(field, MonicIndex(j, t))
            KQ = K * Q
            raw += _shift_fold(
                tb, n, ArithFunc.LAMBDA, _poly_low_index(KQ), int(KQ.degree) + 1,
                threads,
            )
            terms += 1
    return Fraction(raw, q**n) - terms * main_term(ArithFunc.LAMBDA, n)


# ---------------------------------------------------------------------------
# Short intervals


def interval_sum(params: StatParams, tables: SieveTables | None = None) -> int:
    """upsilon_alpha(A; h): the alpha-sum over the interval around A."""
    A, h, n = params.A, params.h, params.n
    if A is None or not A.is_monic:
        raise NotMonicError("interval center A must be monic")
    if A.degree != n:
        raise DegreeTooLargeError(f"deg A = {A.degree} must equal n = {n}")
    if h is None or not 0 <= h < n:
        raise BadIntervalError(f"interval needs 0 <= h < n, got h={h}")
    tb = _tables(params.field, n, tables)
    vals = tb.values(params.func, n)
    L = params.field.q ** (h + 1)
    start = (encode(A).idx // L) * L
    return kernels.exact_sum(vals[start : start + L])


def interval_variance(
    field: FieldSpec,
    n: int,
    h: int,
    func: ArithFunc,
    tables: SieveTables | None = None,
) -> Fraction:
    """V(upsilon_alpha(.; h)) over M_n, exactly."""
    if not 0 <= h < n:
        raise BadIntervalError(f"interval needs 0 <= h < n, got h={h}")
    q = field.q
    tb = _tables(field, n, tables)
    vals = tb.values(func, n)
    L = q ** (h + 1)
    fib = kernels.fiber_sums(vals, L)
    total = kernels.exact_sum(vals)
    sumsq = kernels.exact_sum_sq(fib)
    mean = Fraction(L * total, q**n)  # q^(h+1) <alpha>_n
    fibers = q ** (n - h - 1)
    centered = sumsq - 2 * mean * total + fibers * mean * mean
    return Fraction(L, q**n) * centered


# ---------------------------------------------------------------------------
# Arithmetic progressions


def _residue_index(field: FieldSpec, r: Poly) -> int:
    return _poly_low_index(r)


def _residue_rows(field: FieldSpec, n: int, Q: Poly):
    """Digit rows of T^i mod Q for i = 0..n, for the residue kernel."""
    dq = int(Q.degree)
    rows = np.zeros((n + 1, dq), dtype=np.uint16)
    for i in range(n + 1):
        r = Poly.x_pow(field, i) % Q
        for t, c in enumerate(r.coeffs):
            rows[i, t] = c
    return rows


def progression_classes(
    field: FieldSpec,
    n: int,
    Q: Poly,
    func: ArithFunc = ArithFunc.LAMBDA,
    tables: SieveTables | None = None,
):
    """Per-residue-class exact totals of alpha and alpha^2 over M_n mod Q."""
    dq = int(Q.degree)
    tb = _tables(field, n, tables)
    vals = tb.values(func, n)
    kf = tb.kernel_field()
    residx = kernels.residues_mod(n, _residue_rows(field, n, Q), kf)
    nclasses = field.q**dq
    totals = kernels.class_totals(residx, vals, nclasses)
    sq = vals.astype(np.int64)
    totals_sq = kernels.class_totals(residx, sq * sq, nclasses)
    return totals, totals_sq


def progression_sum(
    field: FieldSpec,
    n: int,
    Q: Poly,
    A: Poly,
    tables: SieveTables | None = None,
) -> int:
    """Psi(n; Q, A): Lambda-sum over monic f of degree n with f = A mod Q."""
    if Q.is_zero or Q.degree < 1:
        raise BadModulusDegreeError("modulus Q must have degree >= 1")
    if n < 1:
        raise DegreeTooLargeError("progression sums need n >= 1")
    if A.is_zero or poly_gcd(A, Q).degree != 0:
        raise NotCoprimeError("residue A must be coprime to Q")
    totals, _ = progression_classes(field, n, Q, ArithFunc.LAMBDA, tables)
    return int(totals[_residue_index(field, A % Q)])


def coprime_residues(field: FieldSpec, Q: Poly):
    """Indices of the reduced residue classes modulo Q, in index order."""
    dq = int(Q.degree)
    out = []
    for v in range(field.q**dq):
        cs = []
        x = v
        for _ in range(dq):
            cs.append(x % field.q)
            x //= field.q
        r = Poly(field, cs)
        if not r.is_zero and poly_gcd(r, Q).degree == 0:
            out.append(v)
    return out


def progression_variance(
    field: FieldSpec,
    n: int,
    Q: Poly,
    tables: SieveTables | None = None,
) -> Fraction:
    """G(n; Q): squared deviation of Psi from q^n / Phi(Q) over reduced classes."""
    if Q.is_zero or Q.degree < 1:
        raise BadModulusDegreeError("modulus Q must have degree >= 1")
    totals, _ = progression_classes(field, n, Q, ArithFunc.LAMBDA, tables)
    phi = euler_phi(field, Q)
    mean = Fraction(field.q**n, phi)
    acc = Fraction(0)
    for v in coprime_residues(field, Q):
        acc += (Fraction(int(totals[v])) - mean) ** 2
    return acc


def euler_phi(field: FieldSpec, Q: Poly) -> int:
    """Phi(Q): number of reduced residues mod Q.

    Computed from the factorization of Q; for small moduli a brute-force
    gcd count over all residues is run as well and the two must agree.
    """
    if Q.is_zero or Q.degree < 1:
        raise BadModulusDegreeError("Phi needs deg Q >= 1")
    q = field.q
    phi = 1
    for p, e in factor_naive(Q):
        d = int(p.degree)
        phi *= q ** (d * e) - q ** (d * (e - 1))
    if q ** int(Q.degree) <= 100_000:
        brute = len(coprime_residues(field, Q))
        assert brute == phi, f"Phi mismatch: formula {phi}, brute force {brute}"
    return phi


# ---------------------------------------------------------------------------
# Shifted-Mobius products


@dataclass
class ChowlaResult:
    value: int
    bound: float
    within_bound: bool


def chowla_sum(
    field: FieldSpec,
    n: int,
    shifts: list[Poly],
    epsilons: list[int],
    tables: SieveTables | None = None,
) -> ChowlaResult:
    """sum over M_n of prod_i mu(f + shift_i)^eps_i, with the cancellation bound.

    The bound 2 r n q^(n-1/2) + 3 r n^2 q^(n-1) is evaluated exactly (the
    comparison squares out the q^(1/2)) and also returned as a float for
    reporting.
    """
    r = len(shifts)
    if r < 2:
        raise BadShiftsError("need at least two shifts")
    if len(epsilons) != r:
        raise BadShiftsError("one exponent per shift required")
    if any(e not in (1, 2) for e in epsilons):
        raise BadShiftsError("exponents must be 1 or 2")
    if all(e == 2 for e in epsilons):
        raise AllEvenError("at least one exponent must be odd")
    if len({s.coeffs for s in shifts}) != r:
        raise BadShiftsError("shifts must be distinct")
    if any((not s.is_zero) and s.degree >= n for s in shifts):
        raise BadShiftsError("shifts must have degree < n")
    if n <= 1 or (field.p == 2 and n <= 2):
        raise BadShiftsError("need n > 1 (n > 2 in characteristic 2)")

    tb = _tables(field, n, tables)
    mu = tb.values(ArithFunc.MU, n)
    kf = tb.kernel_field()
    q = field.q
    prod = np.ones(q**n, dtype=np.int8)
    for s, e in zip(shifts, epsilons):
        if s.is_zero:
            shifted = mu
        else:
            width = int(s.degree) + 1
            perm = kernels.add_shift_perm(kf, width, _poly_low_index(s))
            shifted = mu.reshape(-1, q**width)[:, perm].reshape(-1)
        prod = prod * (shifted if e == 1 else shifted * shifted)
    value = kernels.exact_sum(prod)

    # |value| <= 2 r n q^(n-1/2) + 3 r n^2 q^(n-1), squared out exactly
    tail = abs(value) - 3 * r * n * n * q ** (n - 1)
    within = tail <= 0 or tail * tail <= (2 * r * n) ** 2 * q ** (2 * n - 1)
    bound = 2 * r * n * q ** (n - 1) * q**0.5 + 3 * r * n * n * q ** (n - 1)
    return ChowlaResult(int(value), float(bound), bool(within))
