"""Sieved tables of multiplicative functions and Dirichlet convolution.

Tables are 1-based: ``table[n]`` is the value at ``n``.  Values are int64
while the convolution bound allows it and fall back to Python integers
(object arrays) otherwise, so results are always exact.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np

from .errors import CapacityError, DomainError, LengthMismatchError

MAX_N = 50_000_000
CACHE_ENV = "ZETAMOMENTS_CACHE"
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class ArithTable:
    label: str
    values: np.ndarray = field(repr=False)
    multiplicative: bool = False

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("table values must be a nonempty 1-d array")
        if self.values.dtype != object:
            self.values.flags.writeable = False

    @property
    def N(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.N

    def __getitem__(self, n):
        if isinstance(n, slice):
            raise TypeError("use .values for slicing (0-based)")
        if not 1 <= n <= self.N:
            raise IndexError(f"n = {n} outside 1..{self.N}")
        v = self.values[n - 1]
        return int(v) if self.values.dtype != object else v

    def partial_sums(self) -> np.ndarray:
        """S(n) = sum_{m <= n} f(m), exact for integer tables."""
        return np.cumsum(self.values)


def _check_capacity(N: int) -> None:
    if N < 1:
        raise DomainError("table length must be at least 1")
    if N > MAX_N:
        raise CapacityError(f"N = {N} exceeds the configured limit {MAX_N}")


def primes_up_to(N: int) -> np.ndarray:
    if N < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(N + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(N) + 1, 2):
        if is_p[p]:
            is_p[p * p::2 * p] = False
    return np.nonzero(is_p)[0]


def ones_table(N: int) -> ArithTable:
    _check_capacity(N)
    return ArithTable("1", np.ones(N, dtype=np.int64), multiplicative=True)


def _max_abs(a: np.ndarray) -> int:
    if a.dtype == object:
        return max(abs(int(x)) for x in a)
    return int(np.abs(a).max())


def _convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f*g)(n) = sum_{dm = n} f(d) g(m) over 0-based arrays of equal length."""
    N = f.size
    bound = _max_abs(f) * _max_abs(g) * (2 * math.isqrt(N) + 2)
    dtype = np.int64 if (bound < _INT64_SAFE and f.dtype != object and g.dtype != object) else object
    f = f.astype(dtype)
    g = g.astype(dtype)
    out = np.zeros(N, dtype=dtype)
    root = math.isqrt(N)
    # pairs (d, m) with d <= root
    for d in range(1, root + 1):
        if f[d - 1]:
            count = N // d
            out[d - 1::d] += f[d - 1] * g[:count]
    # pairs with d > root, hence m <= N // (root + 1) <= root
    for m in range(1, N // (root + 1) + 1):
        if g[m - 1]:
            d = np.arange(root + 1, N // m + 1)
            out[m * d - 1] += f[d - 1] * g[m - 1]
    return out


def dirichlet_convolve(f: ArithTable, g: ArithTable) -> ArithTable:
    """Exact Dirichlet convolution of two tables of equal length."""
    if f.N != g.N:
        raise LengthMismatchError(f"table lengths differ: {f.N} vs {g.N}")
    values = _convolve(f.values, g.values)
    return ArithTable(f"({f.label}*{g.label})", values, f.multiplicative and g.multiplicative)


def sieve_dk(k: int, N: int) -> ArithTable:
    """d_k(n) for n <= N via k - 1 passes of convolution with 1."""
    if k < 1:
        raise DomainError("k must be at least 1")
    _check_capacity(N)
    if k * N > 8 * MAX_N:
        raise CapacityError(f"k*N = {k * N} exceeds the work budget")
    ones = np.ones(N, dtype=np.int64)
    values = ones.copy()
    for _ in range(k - 1):
        values = _convolve(values, ones)
    return ArithTable(f"d_{k}", values, multiplicative=True)


def sieve_phi(N: int) -> ArithTable:
    _check_capacity(N)
    phi = np.arange(N + 1, dtype=np.int64)
    for p in primes_up_to(N):
        phi[p::p] -= phi[p::p] // p
    return ArithTable("phi", phi[1:].copy(), multiplicative=True)


def sieve_mu(N: int) -> ArithTable:
    _check_capacity(N)
    mu = np.ones(N + 1, dtype=np.int64)
    for p in primes_up_to(N):
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p::p * p] = 0
    return ArithTable("mu", mu[1:].copy(), multiplicative=True)


def dk_prime_power(k: int, m: int) -> int:
    """d_k(p^m) = C(k+m-1, m) (stars and bars)."""
    if k < 1 or m < 0:
        raise DomainError("need k >= 1 and m >= 0")
    return comb(k + m - 1, m)


# ---------------------------------------------------------------- disk cache
#
# Layout (all little-endian):
#   magic   4 bytes  b"ATBL"
#   version u16      1
#   width   u16      element width in bytes (8, signed int64)
#   k       i32      divisor-function order, 0 when not applicable
#   N       i64      number of values
#   nlabel  u16      byte length of the UTF-8 label
#   label   nlabel bytes
#   flags   u8       bit 0 = multiplicative
#   values  N * width bytes, n = 1..N in order

_MAGIC = b"ATBL"
_HEADER = struct.Struct("<4sHHiqH")


def save_table(table: ArithTable, path: str | os.PathLike, k: int = 0) -> Path:
    if table.values.dtype == object:
        raise TypeError("only int64 tables can be cached")
    label = table.label.encode("utf-8")
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, 8, k, table.N, len(label)))
        fh.write(label)
        fh.write(bytes([1 if table.multiplicative else 0]))
        fh.write(table.values.astype("<i8").tobytes())
    return path


def load_table(path: str | os.PathLike) -> tuple[ArithTable, int]:
    """Read a cached table; returns ``(table, k)``."""
    data = Path(path).read_bytes()
    magic, version, width, k, N, nlabel = _HEADER.unpack_from(data)
    if magic != _MAGIC or version != 1 or width != 8:
        raise ValueError(f"{path}: not a version-1 int64 table file")
    pos = _HEADER.size
    label = data[pos:pos + nlabel].decode("utf-8")
    pos += nlabel
    flags = data[pos]
    pos += 1
    values = np.frombuffer(data, dtype="<i8", count=N, offset=pos).astype(np.int64)
    return ArithTable(label, values, bool(flags & 1)), k


def cached_sieve_dk(k: int, N: int, cache_dir: str | os.PathLike | None = None) -> ArithTable:
    """sieve_dk backed by the on-disk cache in ``$ZETAMOMENTS_CACHE`` if set."""
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return sieve_dk(k, N)
    path = Path(cache_dir) / f"d{k}_{N}.atbl"
    if path.exists():
        table, _ = load_table(path)
        return table
    table = sieve_dk(k, N)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_table(table, path, k=k)
    return table
