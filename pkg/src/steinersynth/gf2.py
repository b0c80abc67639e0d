"""Exact GF(2) linear algebra on packed bit rows.

Rows are stored as Python integers (bit j of rows[i] is entry (i, j)), so a
row XOR runs over machine words rather than per entry.  Matrices are
immutable; every operation returns a fresh value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .circuits import Circuit


class SingularMatrixError(ValueError):
    """Inversion failed; pivot_column is the first column without a pivot."""

    def __init__(self, pivot_column: int):
        super().__init__(f"matrix is singular: no pivot in column {pivot_column}")
        self.pivot_column = pivot_column


@dataclass(frozen=True)
class RowOp:
    """Row addition: row[target] ^= row[control]."""

    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("row op control and target must differ")

    def flipped(self) -> "RowOp":
        return RowOp(self.target, self.control)


@dataclass(frozen=True)
class BinaryMatrix:
    """Square GF(2) matrix; rows[i] packs row i with bit j = entry (i, j)."""

    dim: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if len(self.rows) != self.dim:
            raise ValueError("row count does not match dimension")
        mask = (1 << self.dim) - 1
        for r in self.rows:
            if r & ~mask:
                raise ValueError("row has bits outside the matrix width")

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, bit_rows) -> "BinaryMatrix":
        """Build from an iterable of 0/1 row iterables."""
        packed = []
        for row in bit_rows:
            bits = list(row)
            packed.append(sum((1 if b else 0) << j for j, b in enumerate(bits)))
        n = len(packed)
        return cls(n, tuple(packed))

    def bit(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.bit(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def transpose(self) -> "BinaryMatrix":
        cols = [0] * self.dim
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return BinaryMatrix(self.dim, tuple(cols))

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def __str__(self) -> str:
        return "\n".join(
            "".join(str(self.bit(i, j)) for j in range(self.dim)) for i in range(self.dim)
        )


def apply_row_op(m: BinaryMatrix, op: RowOp) -> BinaryMatrix:
    """Return m with row[target] ^= row[control]; involutive."""
    if not (0 <= op.control < m.dim and 0 <= op.target < m.dim):
        raise IndexError(f"row op {op} out of range for dim {m.dim}")
    rows = list(m.rows)
    rows[op.target] ^= rows[op.control]
    return BinaryMatrix(m.dim, tuple(rows))


def simulate_cnot_circuit(c: Circuit) -> BinaryMatrix:
    """Fold the circuit's CNOTs as row ops starting from the identity.

    CNOT(control, target) maps to RowOp(control, target): the target wire's
    parity picks up the control wire's parity.
    """
    rows = [1 << i for i in range(c.num_qubits)]
    for g in c.gates:
        if g.kind != "cnot":
            raise ValueError(f"non-CNOT gate {g.kind!r} in linear simulation")
        rows[g.target] ^= rows[g.control]
    return BinaryMatrix(c.num_qubits, tuple(rows))


def multiply(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """GF(2) matrix product a @ b."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    out = []
    for r in a.rows:
        acc = 0
        row = r
        while row:
            j = (row & -row).bit_length() - 1
            acc ^= b.rows[j]
            row &= row - 1
        out.append(acc)
    return BinaryMatrix(a.dim, tuple(out))


def _eliminate(rows: list[int], n: int, companion: list[int] | None) -> int:
    """In-place forward elimination; returns rank.

    When companion is given, the same row ops are mirrored onto it
    (Gauss-Jordan, producing the inverse if rows started full-rank).
    """
    rank = 0
    for col in range(n):
        pivot = None
        for i in range(rank, n):
            if (rows[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            if companion is not None:
                raise SingularMatrixError(col)
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            if companion is not None:
                companion[rank], companion[pivot] = companion[pivot], companion[rank]
        span = range(n) if companion is not None else range(rank + 1, n)
        for i in span:
            if i != rank and (rows[i] >> col) & 1:
                rows[i] ^= rows[rank]
                if companion is not None:
                    companion[i] ^= companion[rank]
        rank += 1
    return rank


def rank(m: BinaryMatrix) -> int:
    return _eliminate(list(m.rows), m.dim, None)


def is_invertible(m: BinaryMatrix) -> bool:
    return rank(m) == m.dim


def invert(m: BinaryMatrix) -> BinaryMatrix:
    """Inverse over GF(2); raises SingularMatrixError with the failing column."""
    rows = list(m.rows)
    companion = [1 << i for i in range(m.dim)]
    _eliminate(rows, m.dim, companion)
    return BinaryMatrix(m.dim, tuple(companion))


def random_invertible(n: int, seed: int, max_tries: int = 1000) -> BinaryMatrix:
    """Rejection-sample uniform bit matrices until one is invertible.

    Deterministic in (n, seed).  A uniform matrix is invertible with
    probability > 0.288, so the retry cap is never reached in practice.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        rows = tuple(rng.getrandbits(n) for _ in range(n))
        m = BinaryMatrix(n, rows)
        if is_invertible(m):
            return m
    raise RuntimeError(f"no invertible matrix after {max_tries} draws (n={n}, seed={seed})")


def parse_matrix(text: str) -> BinaryMatrix:
    """Parse the matrix text format: a line "n", then n rows of n '0'/'1' chars."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"bad dimension line {lines[0]!r}") from exc
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:]):
        if len(line) != n or set(line) - {"0", "1"}:
            raise ValueError(f"row {i}: expected {n} characters of 0/1, got {line!r}")
        rows.append(sum((line[j] == "1") << j for j in range(n)))
    return BinaryMatrix(n, tuple(rows))


def emit_matrix(m: BinaryMatrix) -> str:
    return f"{m.dim}\n{m}\n"
