"""ffstat: exact arithmetic statistics for polynomials over finite fields.

Sieve-built tables of the von Mangoldt, Mobius and divisor functions over
all monic polynomials of a given degree, exact correlation and error-term
sums, short-interval and arithmetic-progression variances, and a
verification harness that checks exact identities by integer equality and
asymptotic predictions by q-sweeps.
"""

from .errors import FFStatError
from .gf import FieldSpec, field_from_q, field_new
from .kernels import BACKEND
from .polyring import (
    MonicIndex,
    Poly,
    decode,
    encode,
    iter_interval,
    iter_monic,
    iter_p_le,
    parse_poly,
    poly_gcd,
    poly_literal,
)
from .sieve import (
    ArithFunc,
    ArithTable,
    IrreducibleList,
    SieveTables,
    build_irreducibles,
    build_table,
    build_tables,
    irreducible_count,
    read_table,
    table_sums,
    write_table,
)
from .stats import (
    ChowlaResult,
    StatParams,
    autocorr,
    autocorr_naive,
    chowla_sum,
    error_term,
    euler_phi,
    interval_sum,
    interval_variance,
    mean_value,
    progression_sum,
    progression_variance,
    sum_error,
    twisted_sum_error,
)

__version__ = "0.1.0"

__all__ = [
    "ArithFunc",
    "ArithTable",
    "BACKEND",
    "ChowlaResult",
    "FFStatError",
    "FieldSpec",
    "IrreducibleList",
    "MonicIndex",
    "Poly",
    "SieveTables",
    "StatParams",
    "autocorr",
    "autocorr_naive",
    "build_irreducibles",
    "build_table",
    "build_tables",
    "chowla_sum",
    "decode",
    "encode",
    "error_term",
    "euler_phi",
    "field_from_q",
    "field_new",
    "interval_sum",
    "interval_variance",
    "irreducible_count",
    "iter_interval",
    "iter_monic",
    "iter_p_le",
    "mean_value",
    "parse_poly",
    "poly_gcd",
    "poly_literal",
    "progression_sum",
    "progression_variance",
    "read_table",
    "sum_error",
    "table_sums",
    "twisted_sum_error",
    "write_table",
    "__version__",
]
