"""Integer matrices, Smith and Hermite normal forms, and lattices in Z^r.

Everything is exact over Python ints; there is no fixed-width fast path
because entries such as those of ``b_k**n`` grow without bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable dense integer matrix (row-major)."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def diag(cls, *entries: int) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        cols = [tuple(c) for c in columns]
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self._rows) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], other.ncols
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * a for a in r] for r in self._rows], self.ncols)

    def __pow__(self, n: int) -> "IntMatrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = IntMatrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def mod(self, modulus: int) -> "IntMatrix":
        return IntMatrix([[a % modulus for a in r] for r in self._rows], self.ncols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self._rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix."""
        U, D, V = smith_normal_form(self)
        if self.nrows != self.ncols or any(D[i, i] != 1 for i in range(self.nrows)):
            raise ValueError("matrix is not invertible over the integers")
        # U M V = 1  =>  M^-1 = V U
        return V @ U

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.ncols, self._rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"

    def to_json(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self._rows]

    @classmethod
    def from_json(cls, data: list[list[str]], ncols: int | None = None) -> "IntMatrix":
        return cls([[int(a) for a in r] for r in data], ncols)


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular ``U, V`` and diagonal ``D`` with ``U @ M @ V == D``.

    Pivots are chosen as the entry of minimal nonzero absolute value in the
    active block (first in row-major scan order on ties), which makes the
    transforms reproducible. The diagonal is nonnegative and forms a
    divisibility chain ``d1 | d2 | ...``.
    """
    m, n = M.shape
    A = [list(r) for r in M.rows()]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # a smaller remainder appeared in row/column t: re-pivot on it
                best = None
                for i in range(t, m):
                    v = abs(A[i][t])
                    if v and (best is None or v < best[0]):
                        best = (v, i, "r")
                for j in range(t, n):
                    v = abs(A[t][j])
                    if v and (best is None or v < best[0]):
                        best = (v, j, "c")
                _, idx, kind = best
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            # row and column cleared; enforce divisibility of the block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    return IntMatrix(U, m), IntMatrix(A, n), IntMatrix(V, n)


def smith_diagonal(M: IntMatrix) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i, i] for i in range(min(D.shape))]


def rank(M: IntMatrix) -> int:
    return sum(1 for d in smith_diagonal(M) if d)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups

@dataclass(frozen=True)
class AbelianGroupInvariants:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ...`` and every ``di > 1``."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if any(d <= 1 for d in self.torsion):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("invariant factors must form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], ambient: int) -> "AbelianGroupInvariants":
        diagonal = list(diagonal)
        nonzero = [abs(d) for d in diagonal if d]
        return cls(tuple(d for d in nonzero if d > 1), ambient - len(nonzero))

    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = ["Z"] * min(self.free_rank, 1)
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"torsion": [str(d) for d in self.torsion], "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroupInvariants":
        return cls(tuple(int(d) for d in data["torsion"]), int(data["free_rank"]))


def cokernel(M: IntMatrix) -> AbelianGroupInvariants:
    """Invariants of ``Z^rows / M Z^cols``."""
    return AbelianGroupInvariants.from_diagonal(smith_diagonal(M), M.nrows)


# ---------------------------------------------------------------------------
# Lattices

def _row_hnf(vectors: Iterable[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """Row Hermite normal form of the span of ``vectors``.

    Rows are in echelon form with positive pivots, entries above each pivot
    reduced into ``[0, pivot)``, zero rows dropped.
    """
    rows = [list(v) for v in vectors if any(v)]
    out: list[list[int]] = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        rows = rest
        col += 1
    # reduce above pivots
    for i, r in enumerate(out):
        pc = next(j for j, a in enumerate(r) if a)
        for h in range(i):
            q = out[h][pc] // r[pc]
            if q:
                out[h] = [a - q * b for a, b in zip(out[h], r)]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class Lattice:
    """Subgroup of ``Z^dim`` generated by a set of vectors, kept in Hermite form.

    ``basis`` holds the row-HNF basis vectors; as a matrix, the lattice is the
    column span of ``matrix``.
    """

    dim: int
    basis: tuple[tuple[int, ...], ...] = field(default=())

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[int]], dim: int) -> "Lattice":
        vectors = [tuple(int(a) for a in v) for v in vectors]
        if any(len(v) != dim for v in vectors):
            raise ValueError("generator of the wrong length")
        return cls(dim, _row_hnf(vectors, dim))

    @classmethod
    def column_span(cls, M: IntMatrix) -> "Lattice":
        return cls.from_generators(M.columns(), M.nrows)

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls.column_span(IntMatrix.identity(dim))

    @classmethod
    def scaled(cls, c: int, dim: int) -> "Lattice":
        return cls.column_span(IntMatrix.identity(dim).scale(c))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.basis, self.dim) if self.basis else IntMatrix.zeros(self.dim, 0)

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = [int(a) for a in vec]
        if len(v) != self.dim:
            raise ValueError("vector of the wrong length")
        for b in self.basis:
            pc = next(j for j, a in enumerate(b) if a)
            if any(v[:pc]):
                return False
            if v[pc] % b[pc]:
                return False
            q = v[pc] // b[pc]
            v = [a - q * c for a, c in zip(v, b)]
        return not any(v)

    def contains(self, other: "Lattice") -> bool:
        """Whether ``other`` is a sublattice of ``self``."""
        if other.dim != self.dim:
            raise ValueError("ambient dimensions differ")
        return all(b in self for b in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.basis + other.basis, self.dim)

    def image(self, M: IntMatrix) -> "Lattice":
        return Lattice.from_generators([M @ b for b in self.basis], M.nrows)

    def index(self) -> int | None:
        """``[Z^dim : L]`` when finite."""
        if self.rank < self.dim:
            return None
        return abs(IntMatrix(self.basis, self.dim).det())

    def to_json(self) -> list[list[str]]:
        return [[str(a) for a in b] for b in self.basis]


def lattice_contains(A: Lattice, B: Lattice) -> bool:
    """True iff ``B`` is contained in ``A``."""
    return A.contains(B)


def kernel(M: IntMatrix) -> Lattice:
    """Integer kernel of ``M`` as a lattice in ``Z^cols``."""
    U, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(D.shape)) if D[i, i])
    cols = V.columns()[r:]
    return Lattice.from_generators(cols, M.ncols)


def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """Column-style HNF: the columns generate the same lattice as those of ``M``."""
    return Lattice.column_span(M).matrix


@dataclass(frozen=True)
class FiltrationComparison:
    """Per-level offsets witnessing equivalence of two descending filtrations.

    ``forward[n]`` is the least ``p`` with ``F[n+p]`` inside ``G[n]`` and
    ``backward[n]`` the least ``q`` with ``G[n+q]`` inside ``F[n]``; ``None``
    means no offset was found among the supplied terms.
    """

    forward: tuple[int | None, ...]
    backward: tuple[int | None, ...]
    start: int = 0

    @property
    def equivalent(self) -> bool:
        return None not in self.forward and None not in self.backward

    def to_json(self) -> dict:
        return {"start": self.start, "forward": list(self.forward), "backward": list(self.backward)}


def _check_descending(chain: Sequence[Lattice], name: str):
    for i in range(len(chain) - 1):
        if not chain[i].contains(chain[i + 1]):
            raise ValueError(f"filtration {name} is not descending at position {i}")


def filtration_equivalent(
    F: Sequence[Lattice], G: Sequence[Lattice], depth: int, start: int = 0
) -> FiltrationComparison:
    """Compare two descending chains of lattices indexed from ``start``.

    ``F[i]`` is the term of index ``start + i``; offsets are reported for the
    indices ``start .. start + depth``.
    """
    _check_descending(F, "F")
    _check_descending(G, "G")
    fwd, bwd = [], []
    for n in range(depth + 1):
        if n >= len(F) or n >= len(G):
            raise ValueError("filtrations shorter than the requested depth")
        fwd.append(next((p for p in range(len(F) - n) if G[n].contains(F[n + p])), None))
        bwd.append(next((q for q in range(len(G) - n) if F[n].contains(G[n + q])), None))
    return FiltrationComparison(tuple(fwd), tuple(bwd), start)
