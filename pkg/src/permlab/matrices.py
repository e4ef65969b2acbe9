"""Sign matrices, row prefixes, seeded sampling, and the text fixture format.

A sign matrix is an n x n array with entries in {-1, +1}.  The row prefix
type holds the first k rows of such a matrix; everything downstream (minor
lattice, growth runs) consumes prefixes so that "expose one more row" is a
first-class operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .rng import RngStream, as_generator

MAX_N = 63  # column sets must fit a single machine word
ENUM_CELL_LIMIT = 20  # enumerate_all_sign_matrices walks 2**(n*n) matrices


class CapError(ValueError):
    """A documented size cap was exceeded."""


def _check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"dimension must be in 1..{MAX_N}, got {n}")


def _as_sign_array(data, rows: int, cols: int) -> np.ndarray:
    arr = np.asarray(data, dtype=np.int8)
    if arr.shape != (rows, cols):
        raise ValueError(f"expected shape {(rows, cols)}, got {arr.shape}")
    if not np.isin(arr, (-1, 1)).all():
        raise ValueError("entries must be -1 or +1")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """Immutable n x n matrix with entries in {-1, +1}."""

    entries: np.ndarray

    def __init__(self, entries) -> None:
        arr = np.asarray(entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries must be a square 2-d array")
        _check_dimension(arr.shape[0])
        object.__setattr__(self, "entries", _as_sign_array(arr, *arr.shape))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def prefix(self, k: int) -> "RowPrefix":
        """First k rows as a RowPrefix."""
        if not 0 <= k <= self.n:
            raise ValueError(f"prefix length must be in 0..{self.n}")
        return RowPrefix(self.n, self.entries[:k])

    def __eq__(self, other) -> bool:
        return isinstance(other, SignMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"SignMatrix(n={self.n})"


@dataclass(frozen=True, eq=False)
class RowPrefix:
    """The first k exposed rows of a (future) n x n sign matrix."""

    n: int
    rows: np.ndarray

    def __init__(self, n: int, rows) -> None:
        _check_dimension(n)
        arr = np.asarray(rows, dtype=np.int8).reshape(-1, n) if np.size(rows) else np.zeros((0, n), np.int8)
        if arr.shape[0] > n:
            raise ValueError(f"prefix has {arr.shape[0]} rows but n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", _as_sign_array(arr, arr.shape[0], n) if arr.size else arr)

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.rows[i]

    def as_matrix(self) -> SignMatrix:
        if self.k != self.n:
            raise ValueError(f"prefix has {self.k} of {self.n} rows, not a full matrix")
        return SignMatrix(self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RowPrefix)
            and self.n == other.n
            and np.array_equal(self.rows, other.rows)
        )

    def __repr__(self) -> str:
        return f"RowPrefix(n={self.n}, k={self.k})"


def empty_prefix(n: int) -> RowPrefix:
    return RowPrefix(n, np.zeros((0, n), np.int8))


def extend_prefix(p: RowPrefix, row) -> RowPrefix:
    """Append one exposed row; earlier rows are unchanged."""
    if p.k >= p.n:
        raise ValueError(f"prefix already holds all {p.n} rows")
    r = np.asarray(row, dtype=np.int8).reshape(-1)
    if r.shape[0] != p.n:
        raise ValueError(f"row has length {r.shape[0]}, expected {p.n}")
    if not np.isin(r, (-1, 1)).all():
        raise ValueError("row entries must be -1 or +1")
    return RowPrefix(p.n, np.vstack([p.rows, r[None, :]]))


def sample_row(n: int, rng: RngStream | np.random.Generator) -> np.ndarray:
    """One row of n iid uniform signs."""
    _check_dimension(n)
    gen = as_generator(rng)
    return (2 * gen.integers(0, 2, size=n, dtype=np.int8) - 1).astype(np.int8)


def sample_sign_matrix(n: int, rng: RngStream | np.random.Generator) -> SignMatrix:
    """An n x n matrix of iid uniform signs, drawn row-major."""
    _check_dimension(n)
    gen = as_generator(rng)
    bits = gen.integers(0, 2, size=(n, n), dtype=np.int8)
    return SignMatrix(2 * bits - 1)


def matrix_from_counter(n: int, counter: int) -> SignMatrix:
    """Canonical enumeration: entry (i, j) is bit i*n+j of the counter, 0 -> -1, 1 -> +1."""
    bits = (counter >> np.arange(n * n, dtype=np.int64)) & 1
    return SignMatrix((2 * bits - 1).astype(np.int8).reshape(n, n))


def enumerate_all_sign_matrices(n: int) -> Iterator[SignMatrix]:
    """Every n x n sign matrix exactly once, in canonical counter order."""
    _check_dimension(n)
    if n * n > ENUM_CELL_LIMIT:
        raise CapError(f"enumeration is capped at n*n <= {ENUM_CELL_LIMIT} cells, got n={n}")
    for counter in range(1 << (n * n)):
        yield matrix_from_counter(n, counter)


def all_ones(n: int) -> SignMatrix:
    return SignMatrix(np.ones((n, n), np.int8))


# Text fixture format: first line is n, then n lines of n space-separated
# entries; "1", "+1" and "-1" are accepted on input, "1"/"-1" are printed.

def to_text(m: SignMatrix) -> str:
    lines = [str(m.n)]
    for i in range(m.n):
        lines.append(" ".join(str(int(v)) for v in m.row(i)))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> SignMatrix:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows after the dimension line, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        vals = []
        for tok in ln.split():
            if tok in ("1", "+1"):
                vals.append(1)
            elif tok == "-1":
                vals.append(-1)
            else:
                raise ValueError(f"bad entry {tok!r}; expected 1, +1 or -1")
        rows.append(vals)
    return SignMatrix(rows)
