"""Vectors, point sets and subspaces of F_q^n.

A vector is a tuple of field elements.  Its canonical index is the base-q
number whose most significant digit is coordinate 0, so ascending index
order is lexicographic order of coordinate tuples.  A :class:`PointSet` is a
read-only membership bitmap over all q^n indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, ParseError, TooLarge
from .gf import Field, field_new
from .rng import make_rng

UNIVERSE_LIMIT = 1 << 34
SUBSPACE_LIMIT = 10**8

Vec = tuple


# ---------------------------------------------------------------- indexing

@lru_cache(maxsize=None)
def weights(q: int, n: int) -> np.ndarray:
    w = np.array([q ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=32)
def all_coords(q: int, n: int) -> np.ndarray:
    """Coordinates of every vector of F_q^n, row i being the vector with index i."""
    size = q**n
    if size > 1 << 26:
        raise TooLarge(f"refusing to materialize {size} coordinate rows")
    out = np.empty((size, n), dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = idx % q
        idx //= q
    out.setflags(write=False)
    return out


def vec_index(v: Sequence[int], q: int) -> int:
    out = 0
    for c in v:
        out = out * q + int(c)
    return out


def vec_from_index(index: int, q: int, n: int) -> Vec:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, q)
    return tuple(out)


def coords_to_index(coords: np.ndarray, q: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    return coords @ weights(q, coords.shape[-1])


def vec_add(field: Field, a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(field.add(x, y) for x, y in zip(a, b))


def vec_scale(field: Field, c: int, a: Sequence[int]) -> Vec:
    return tuple(field.mul(c, x) for x in a)


# ------------------------------------------------------------ row reduction

def rref(rows: Sequence[Sequence[int]], field: Field) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over ``field``; zero rows are dropped.

    Pivot search takes the first usable row, so the result is deterministic.
    """
    M = [list(r) for r in rows]
    pivots: list[int] = []
    if not M:
        return [], pivots
    ncols = len(M[0])
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = field.inv(M[row][col])
        M[row] = [field.mul(inv, x) for x in M[row]]
        for i in range(len(M)):
            c = M[i][col]
            if i != row and c:
                M[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(M[i], M[row])]
        pivots.append(col)
        row += 1
        if row == len(M):
            break
    return M[:row], pivots


def rank(rows: Sequence[Sequence[int]], field: Field) -> int:
    return len(rref(rows, field)[1])


def nullspace_vector(rows: Sequence[Sequence[int]], ncols: int, field: Field) -> Optional[list[int]]:
    """A nonzero solution of ``rows @ x = 0``: first free column set to 1, other free columns 0."""
    R, pivots = rref(rows, field) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return None
    f0 = free[0]
    x = [0] * ncols
    x[f0] = 1
    for r, pc in zip(R, pivots):
        x[pc] = field.neg(r[f0])
    return x


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------- point sets

class PointSet:
    """Immutable subset of F_q^n stored as a membership bitmap."""

    __slots__ = ("field", "n", "bits", "card")

    def __init__(self, field: Field, n: int, bits: np.ndarray):
        size = field.q**n
        if size > UNIVERSE_LIMIT:
            raise TooLarge(f"universe q^n = {size} exceeds {UNIVERSE_LIMIT}")
        bits = np.array(bits, dtype=bool, copy=True)
        if bits.shape != (size,):
            raise DimensionMismatch(f"bitmap has shape {bits.shape}, expected ({size},)")
        bits.setflags(write=False)
        self.field = field
        self.n = n
        self.bits = bits
        self.card = int(np.count_nonzero(bits))

    @classmethod
    def empty(cls, field: Field, n: int) -> "PointSet":
        return cls(field, n, np.zeros(field.q**n, dtype=bool))

    @classmethod
    def full(cls, field: Field, n: int) -> "PointSet":
        return cls(field, n, np.ones(field.q**n, dtype=bool))

    @classmethod
    def from_indices(cls, field: Field, n: int, indices: Iterable[int]) -> "PointSet":
        bits = np.zeros(field.q**n, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64) if not isinstance(
            indices, np.ndarray
        ) else indices.astype(np.int64)
        bits[idx] = True
        return cls(field, n, bits)

    @classmethod
    def from_coords(cls, field: Field, n: int, coords) -> "PointSet":
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, n)
        if coords.size and (coords.min() < 0 or coords.max() >= field.q):
            raise ValueError("coordinate outside the field")
        return cls.from_indices(field, n, coords_to_index(coords, field.q))

    @property
    def size(self) -> int:
        return self.card

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def coords(self) -> np.ndarray:
        return all_coords(self.field.q, self.n)[self.bits]

    def __len__(self) -> int:
        return self.card

    def __iter__(self) -> Iterator[Vec]:
        q, n = self.field.q, self.n
        for i in self.indices():
            yield vec_from_index(int(i), q, n)

    def __contains__(self, item) -> bool:
        if isinstance(item, (int, np.integer)):
            return bool(self.bits[item])
        if len(item) != self.n:
            return False
        return bool(self.bits[vec_index(item, self.field.q)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.field == other.field
            and self.n == other.n
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"PointSet({self.field!r}, n={self.n}, card={self.card})"

    def _check_compatible(self, other: "PointSet") -> None:
        if self.field != other.field or self.n != other.n:
            raise DimensionMismatch("point sets live in different spaces")

    def union(self, other: "PointSet") -> "PointSet":
        self._check_compatible(other)
        return PointSet(self.field, self.n, self.bits | other.bits)

    def intersection(self, other: "PointSet") -> "PointSet":
        self._check_compatible(other)
        return PointSet(self.field, self.n, self.bits & other.bits)

    def complement(self) -> "PointSet":
        return PointSet(self.field, self.n, ~self.bits)

    def issubset(self, other: "PointSet") -> bool:
        self._check_compatible(other)
        return not np.any(self.bits & ~other.bits)

    # ------------------------------------------------------ serialization
    def to_text(self) -> str:
        lines = ["kakeya-pointset v1", self.field.header(), f"n={self.n} card={self.card}"]
        for row in self.coords():
            lines.append(",".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointSet":
        lines = text.splitlines()
        if len(lines) < 3 or lines[0].strip() != "kakeya-pointset v1":
            raise ParseError("missing 'kakeya-pointset v1' header")
        try:
            header = dict(tok.split("=", 1) for tok in lines[1].split())
            field = field_new(int(header["q"]))
            if field.header() != lines[1].strip():
                raise ParseError(f"field header mismatch: {lines[1]!r} vs {field.header()!r}")
            meta = dict(tok.split("=", 1) for tok in lines[2].split())
            n, card = int(meta["n"]), int(meta["card"])
            rows = [tuple(int(c) for c in ln.split(",")) for ln in lines[3:] if ln.strip()]
        except ParseError:
            raise
        except (KeyError, ValueError) as exc:
            raise ParseError(f"malformed pointset file: {exc}") from exc
        if any(len(r) != n for r in rows):
            raise ParseError("coordinate row of the wrong length")
        if any(not 0 <= c < field.q for r in rows for c in r):
            raise ParseError("coordinate outside the field")
        ps = cls.from_coords(field, n, np.array(rows, dtype=np.int64).reshape(-1, n))
        if ps.card != card or len(rows) != card:
            raise ParseError(f"card={card} but {len(rows)} rows ({ps.card} distinct)")
        return ps

    def save(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "PointSet":
        with open(path, encoding="ascii") as fh:
            return cls.from_text(fh.read())


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    """An r-dimensional subspace given by its reduced row echelon basis."""

    n: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], field: Field, n: Optional[int] = None) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if n is None:
            if not vectors:
                raise ValueError("dimension needed for the span of no vectors")
            n = len(vectors[0])
        R, pivots = rref(vectors, field)
        return cls(n, tuple(tuple(r) for r in R), tuple(pivots))

    def points(self, field: Field) -> np.ndarray:
        """Coordinates of all q^r members; row 0 is the zero vector."""
        q, r = field.q, self.r
        if r == 0:
            return np.zeros((1, self.n), dtype=np.int64)
        coeffs = all_coords(q, r)
        B = np.array(self.basis, dtype=np.int64)
        out = np.zeros((coeffs.shape[0], self.n), dtype=np.int64)
        for i in range(r):
            out = field.add_arr(out, field.mul_arr(coeffs[:, i : i + 1], B[i][None, :]))
        return out

    def point_indices(self, field: Field) -> np.ndarray:
        return coords_to_index(self.points(field), field.q)

    def __str__(self) -> str:
        return "[" + "; ".join(",".join(map(str, row)) for row in self.basis) + "]"


def enum_subspaces(n: int, r: int, field: Field) -> Iterator[Subspace]:
    """Every r-dimensional subspace of F_q^n exactly once.

    Order: pivot-column tuples lexicographically, then the free entries of
    the RREF basis (row-major) lexicographically.
    """
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    q = field.q
    total = gaussian_binomial(n, r, q)
    if total > SUBSPACE_LIMIT:
        raise TooLarge(f"{total} subspaces exceeds enumeration limit {SUBSPACE_LIMIT}")
    for pivots in itertools.combinations(range(n), r):
        pset = set(pivots)
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pset]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, values):
                rows[i][c] = v
            yield Subspace(n, tuple(tuple(row) for row in rows), pivots)


def count_subspaces(n: int, r: int, field: Field) -> int:
    return gaussian_binomial(n, r, field.q)


def enum_directions(n: int, field: Field) -> Iterator[Vec]:
    """Projective representatives of nonzero directions: leading nonzero coordinate is 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for L in enum_subspaces(n, 1, field):
        yield L.basis[0]


# ------------------------------------------------------- translate primitives

def translate_mask(K: PointSet, L: Subspace) -> np.ndarray:
    """Boolean mask over v in F_q^n: True where v + L is contained in K."""
    field = K.field
    if L.n != K.n:
        raise DimensionMismatch(f"subspace of F^{L.n} vs point set in F^{K.n}")
    q, n = field.q, K.n
    allc = all_coords(q, n)
    w = weights(q, n)
    ok = K.bits.copy()
    for pt in L.points(field)[1:]:
        if not ok.any():
            break
        ok &= K.bits[field.add_arr(allc, pt) @ w]
    return ok


def contains_translate(K: PointSet, L: Subspace) -> Optional[Vec]:
    """Smallest-index v with v + L inside K, or None."""
    ok = translate_mask(K, L)
    if not ok.any():
        return None
    return vec_from_index(int(np.argmax(ok)), K.field.q, K.n)


def random_matrix(n: int, cols: int, field: Field, rng) -> tuple[tuple[int, ...], ...]:
    vals = rng.integers(field.q, n * cols)
    return tuple(tuple(int(x) for x in vals[i * cols : (i + 1) * cols]) for i in range(n))


def random_invertible(n: int, field: Field, seed=None) -> tuple[tuple[int, ...], ...]:
    """Uniform element of GL(n, q) by rejection sampling of random matrices."""
    rng = make_rng(seed)
    while True:
        M = random_matrix(n, n, field, rng)
        if rank(M, field) == n:
            return M


def apply_map(T: Sequence[Sequence[int]], K: PointSet) -> PointSet:
    """Image {T v : v in K} of K under the linear map with matrix T."""
    field, n = K.field, K.n
    T = np.asarray(T, dtype=np.int64)
    if T.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {T.shape} does not act on F^{n}")
    src = K.coords()
    out = np.zeros_like(src)
    for i in range(n):
        acc = np.zeros(src.shape[0], dtype=np.int64)
        for j in range(n):
            if T[i, j]:
                acc = field.add_arr(acc, field.mul_arr(T[i, j], src[:, j]))
        out[:, i] = acc
    return PointSet.from_coords(field, n, out)


def translate(K: PointSet, v: Sequence[int]) -> PointSet:
    if len(v) != K.n:
        raise DimensionMismatch(f"vector of length {len(v)} in F^{K.n}")
    field = K.field
    moved = field.add_arr(K.coords(), np.asarray(v, dtype=np.int64)[None, :])
    return PointSet.from_coords(field, K.n, moved)


def product(Ka: PointSet, Kb: PointSet) -> PointSet:
    """Cartesian product in F^(na+nb), Ka on the leading coordinates."""
    if Ka.field != Kb.field:
        raise DimensionMismatch("product of sets over different fields")
    field = Ka.field
    q = field.q
    n = Ka.n + Kb.n
    ia = Ka.indices() * (q**Kb.n)
    ib = Kb.indices()
    return PointSet.from_indices(field, n, np.add.outer(ia, ib).ravel())


def embed(K: PointSet, n: int) -> PointSet:
    """K in F^k placed on the first k coordinates of F^n (trailing coordinates zero)."""
    if n < K.n:
        raise DimensionMismatch(f"cannot embed F^{K.n} into F^{n}")
    return PointSet.from_indices(K.field, n, K.indices() * (K.field.q ** (n - K.n)))


def gl_fraction(n: int, q: int) -> float:
    """Fraction of n x n matrices over F_q that are invertible."""
    return math.prod(1 - q ** (-i) for i in range(1, n + 1))
