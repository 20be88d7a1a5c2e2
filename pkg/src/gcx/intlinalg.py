"""Exact sparse integer matrices, Smith normal form and rational kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import IO, Iterable, Mapping, Sequence

from .errors import DimensionMismatch, InputError


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        clean = {}
        for (r, c), x in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise InputError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            x = int(x)
            if x:
                clean[(int(r), int(c))] = x
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        if any(len(row) != cols for row in data):
            raise InputError("ragged dense matrix")
        return cls(rows, cols, {(i, j): x for i, row in enumerate(data) for j, x in enumerate(row) if x})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return self.entries.get(rc, 0)

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): x for (r, c), x in self.entries.items()})

    def column(self, j: int) -> dict[int, int]:
        return {r: x for (r, c), x in self.entries.items() if c == j}

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return multiply(self, other)


def multiply(a: SparseIntMatrix, b: SparseIntMatrix) -> SparseIntMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    b_rows: dict[int, list[tuple[int, int]]] = {}
    for (r, c), x in b.entries.items():
        b_rows.setdefault(r, []).append((c, x))
    out: dict[tuple[int, int], int] = {}
    for (i, k), x in a.entries.items():
        for j, y in b_rows.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + x * y
    return SparseIntMatrix(a.rows, b.cols, out)


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 1)


def smith_normal_form(m: SparseIntMatrix) -> SmithForm:
    """Invariant factors of ``m`` over the integers.

    Pivot: smallest absolute value in the active block, ties broken by
    lowest (row, col).  Python ints keep intermediate growth exact.
    """
    a = m.to_dense()
    rows, cols = m.rows, m.cols
    diag: list[int] = []
    top = 0
    while top < min(rows, cols):
        pivot = _min_pivot(a, top, rows, cols)
        if pivot is None:
            break
        pr, pc = pivot
        a[top], a[pr] = a[pr], a[top]
        for row in a:
            row[top], row[pc] = row[pc], row[top]
        while True:
            p = a[top][top]
            dirty = False
            for i in range(top + 1, rows):
                if a[i][top]:
                    q = a[i][top] // p
                    if q:
                        ri, rt = a[i], a[top]
                        for j in range(top, cols):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if a[i][top]:
                        dirty = True
            for j in range(top + 1, cols):
                if a[top][j]:
                    q = a[top][j] // p
                    if q:
                        for i in range(top, rows):
                            if a[i][top]:
                                a[i][j] -= q * a[i][top]
                    if a[top][j]:
                        dirty = True
            if dirty:
                # a remainder is smaller than the pivot: move it to the corner
                pr, pc = _min_pivot_cross(a, top, rows, cols)
                a[top], a[pr] = a[pr], a[top]
                for row in a:
                    row[top], row[pc] = row[pc], row[top]
                continue
            bad = _non_divisible(a, top, rows, cols, p)
            if bad is None:
                break
            # fold the offending row into the pivot row and keep reducing
            for j in range(top, cols):
                a[top][j] += a[bad][j]
        diag.append(abs(a[top][top]))
        top += 1
    return SmithForm(tuple(_chain(diag)))


def _min_pivot(a, top, rows, cols):
    best = None
    for i in range(top, rows):
        row = a[i]
        for j in range(top, cols):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else (best[1], best[2])


def _min_pivot_cross(a, top, rows, cols):
    cand = [(abs(a[top][top]), top, top)] if a[top][top] else []
    cand += [(abs(a[i][top]), i, top) for i in range(top + 1, rows) if a[i][top]]
    cand += [(abs(a[top][j]), top, j) for j in range(top + 1, cols) if a[top][j]]
    _, i, j = min(cand)
    return i, j


def _non_divisible(a, top, rows, cols, p):
    for i in range(top + 1, rows):
        row = a[i]
        for j in range(top + 1, cols):
            if row[j] % p:
                return i
    return None


def _chain(diag: list[int]) -> list[int]:
    # enforce d1 | d2 | ... in case reduction left them out of order
    d = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = math.gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
    return d


def rank(m: SparseIntMatrix) -> int:
    return smith_normal_form(m).rank


def _rref(m: SparseIntMatrix) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in m.to_dense()]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pr = next((i for i in range(r, m.rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a, pivots


def rational_rank(m: SparseIntMatrix) -> int:
    """Rank over the rationals by fraction-exact elimination."""
    return len(_rref(m)[1])


def primitive(v: Iterable[Fraction | int]) -> tuple[int, ...]:
    """Scale to a primitive integer vector whose first nonzero entry is positive."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def rational_kernel_basis(m: SparseIntMatrix) -> list[tuple[int, ...]]:
    """Primitive integer vectors spanning the rational kernel, one per free column."""
    a, pivots = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(primitive(v))
    return basis


def apply(m: SparseIntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    if len(v) != m.cols:
        raise DimensionMismatch(f"vector of length {len(v)} for {m.cols} columns")
    out = [0] * m.rows
    for (r, c), x in m.entries.items():
        out[r] += x * v[c]
    return tuple(out)


# ---------------------------------------------------------------------------
# Matrix Market (coordinate, integer, general, 1-indexed)
# ---------------------------------------------------------------------------

MM_HEADER = "%%MatrixMarket matrix coordinate integer general"


def write_matrix_market(m: SparseIntMatrix, fh: IO[str], comments: Sequence[str] = ()) -> None:
    fh.write(MM_HEADER + "\n")
    for line in comments:
        fh.write(f"% {line}\n")
    fh.write(f"{m.rows} {m.cols} {len(m.entries)}\n")
    for (r, c), x in sorted(m.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        fh.write(f"{r + 1} {c + 1} {x}\n")


def matrix_market_string(m: SparseIntMatrix, comments: Sequence[str] = ()) -> str:
    import io

    buf = io.StringIO()
    write_matrix_market(m, buf, comments)
    return buf.getvalue()


def read_matrix_market(fh: IO[str] | Iterable[str]) -> SparseIntMatrix:
    lines = iter(fh)
    header = next(lines, "").strip()
    if header.lower().split() != MM_HEADER.lower().split():
        raise InputError(f"unsupported Matrix Market header: {header!r}")
    size = None
    entries: dict[tuple[int, int], int] = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            if len(parts) != 3:
                raise InputError(f"bad size line: {line!r}")
            size = tuple(int(p) for p in parts)
            continue
        if len(parts) != 3:
            raise InputError(f"bad entry line: {line!r}")
        r, c, x = (int(p) for p in parts)
        entries[(r - 1, c - 1)] = entries.get((r - 1, c - 1), 0) + x
    if size is None:
        raise InputError("missing size line")
    rows, cols, nnz = size
    m = SparseIntMatrix(rows, cols, entries)
    if len(m.entries) != nnz:
        raise InputError(f"declared {nnz} entries, read {len(m.entries)} nonzero")
    return m
