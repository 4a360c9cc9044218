"""Kakeya-set and universal-set constructions.

Each builder returns a :class:`ConstructionResult`: the point set together
with the closed-form size it is claimed to meet (with equality, ``<=`` or
``<``).  Stable string ids used by the CLI live in :data:`CONSTRUCTION_IDS`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import bounds as B
from .errors import (
    AttemptsExhausted,
    BadK,
    DimensionMismatch,
    LinearFunction,
    ParseError,
    TooLarge,
    UnsupportedField,
)
from .gf import Field
from .linalg import (
    PointSet,
    all_coords,
    apply_map,
    coords_to_index,
    embed,
    enum_subspaces,
    product,
    random_invertible,
    translate_mask,
)
from .rng import make_rng

CONSTRUCTION_IDS = (
    "missing-digit",
    "quadratic",
    "lift",
    "final-upper",
    "universal",
    "kakeya-universal",
    "random-rotation",
    "product",
    "value-set",
)

ROTATION_UNIVERSE_LIMIT = 1 << 20


@dataclass(frozen=True)
class ConstructionResult:
    cid: str
    set: PointSet
    predicted_size: B.Number
    relation: str  # "eq", "le" or "lt": how set.card relates to predicted_size
    rank: int
    provenance: str
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.set.card

    def claim_holds(self) -> bool:
        c = B.cmp(self.set.card, self.predicted_size)
        return {"eq": c == 0, "le": c <= 0, "lt": c < 0}[self.relation]

    def summary(self) -> dict:
        out = {
            "id": self.cid,
            "q": self.set.field.q,
            "n": self.set.n,
            "rank": self.rank,
            "size": self.set.card,
            "predicted_size": B.fmt(self.predicted_size),
            "relation": self.relation,
            "claim_holds": self.claim_holds(),
            "provenance": self.provenance,
        }
        for k, v in self.extra.items():
            out[k] = B.fmt(v) if isinstance(v, (Fraction, B.SqrtExpr)) else v
        return out


# ------------------------------------------------------------ missing digit

def missing_digit(n: int, field: Field) -> ConstructionResult:
    """Vectors with all coordinates nonzero, together with the {0,1}-cube."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = field.q
    coords = all_coords(q, n)
    A = np.all(coords != 0, axis=1)
    Bc = np.all(coords <= 1, axis=1)
    K = PointSet(field, n, A | Bc)
    return ConstructionResult(
        "missing-digit", K, (q - 1) ** n + 2**n - 1, "eq", 1,
        "missing-digit construction: all-nonzero cube union {0,1}-cube",
    )


# -------------------------------------------------------------- value sets

@dataclass(frozen=True)
class FunctionTable:
    """A total map F_q -> F_q stored as its value table."""

    field: Field
    values: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.values) != self.field.q:
            raise ValueError(f"table has {len(self.values)} entries, field has {self.field.q}")

    def __call__(self, x: int) -> int:
        return self.values[x]

    @classmethod
    def from_callable(cls, field: Field, fn: Callable[[int], int], name: str = "") -> "FunctionTable":
        return cls(field, tuple(int(fn(x)) for x in range(field.q)), name)

    @classmethod
    def from_terms(cls, field: Field, terms: Sequence[tuple[int, int]], name: str = "") -> "FunctionTable":
        """Sum of ``coef * x^exp``; x^e at x = 0 is 0 for e > 0 and 1 for e = 0."""

        def f(x):
            total = 0
            for coef, e in terms:
                total = field.add(total, field.mul(coef, field.pow(x, e)))
            return total

        return cls.from_callable(field, f, name)

    @classmethod
    def parse(cls, field: Field, expr: str) -> "FunctionTable":
        """Parse sums like ``x^6+x^2``, ``x^(q-2)+x^2`` or ``3*x^2+1``."""
        text = expr.replace(" ", "")
        if not text:
            raise ParseError("empty function expression")
        terms = []
        for raw in text.split("+"):
            m = re.fullmatch(r"(?:(\d+)\*?)?(x(?:\^(\(?q(?:-\d+)?\)?|\d+))?)?", raw)
            if not raw or m is None or (m.group(1) is None and m.group(2) is None):
                raise ParseError(f"cannot parse term {raw!r} in {expr!r}")
            coef = int(m.group(1)) if m.group(1) is not None else 1
            if coef >= field.q:
                raise ParseError(f"coefficient {coef} is not an element of GF({field.q})")
            if m.group(2) is None:
                e = 0
            elif m.group(3) is None:
                e = 1
            else:
                ex = m.group(3).strip("()")
                e = field.q - int(ex[2:] or 0) if ex.startswith("q") else int(ex)
            if e < 0:
                raise ParseError(f"negative exponent in {raw!r}")
            terms.append((coef, e))
        return cls.from_terms(field, terms, expr)


def square(field: Field) -> FunctionTable:
    return FunctionTable.from_terms(field, [(1, 2)], "x^2")


def cube(field: Field) -> FunctionTable:
    return FunctionTable.from_terms(field, [(1, 3)], "x^3")


def inverse_plus_square(field: Field) -> FunctionTable:
    return FunctionTable.from_terms(field, [(1, field.q - 2), (1, 2)], "x^(q-2)+x^2")


def if_set(f: FunctionTable, t: int) -> frozenset[int]:
    """The value set {f(x) + t x : x in F}."""
    F = f.field
    return frozenset(F.add(f(x), F.mul(t, x)) for x in range(F.q))


def value_set_sizes(f: FunctionTable) -> list[int]:
    return [len(if_set(f, t)) for t in range(f.field.q)]


def value_set_sum(f: FunctionTable, n: int) -> int:
    """sum over t of (s^n - 1)/(s - 1) with s = |I_f(t)| (requires every s > 1)."""
    sizes = value_set_sizes(f)
    if any(s == 1 for s in sizes):
        raise LinearFunction(f"{f.name or 'f'} has a value set of size 1")
    return sum((s**n - 1) // (s - 1) for s in sizes)


def if_core(f: FunctionTable, n: int) -> PointSet:
    """The set {(x_1..x_j, t, 0..0) : 0 <= j < n, t in F, x_i in I_f(t)}.

    Contains the line through (f(d_1),..,f(d_j),0,..,0) in every direction d
    normalised so that d_(j+1) = 1 and later coordinates vanish.  Strata for
    different j overlap (t = 0 rows), so the cardinality is at most the
    value-set sum.
    """
    F = f.field
    q = F.q
    if n < 1:
        raise ValueError("n must be >= 1")
    chunks = []
    for t in range(q):
        vals = np.array(sorted(if_set(f, t)), dtype=np.int64)
        for j in range(n):
            grid = vals[all_coords(len(vals), j)] if j else np.zeros((1, 0), dtype=np.int64)
            pts = np.zeros((grid.shape[0], n), dtype=np.int64)
            pts[:, :j] = grid
            pts[:, j] = t
            chunks.append(coords_to_index(pts, q))
    return PointSet.from_indices(F, n, np.concatenate(chunks))


def pad_to(K: PointSet, size: int) -> PointSet:
    """K plus its smallest-index non-members until it has ``size`` points."""
    extra = size - K.card
    if extra < 0:
        raise ValueError(f"set already has {K.card} > {size} points")
    if extra == 0:
        return K
    bits = K.bits.copy()
    bits[np.flatnonzero(~bits)[:extra]] = True
    return PointSet(K.field, K.n, bits)


def if_construction(f: FunctionTable, n: int, field: Optional[Field] = None) -> ConstructionResult:
    """Rank-1 Kakeya set of size exactly the value-set sum for a non-linear f.

    The core set from :func:`if_core` has overlapping strata; it is padded
    with the smallest-index outside points up to the exact sum (any superset
    of a Kakeya set is Kakeya).  ``extra['core_size']`` keeps the unpadded size.
    """
    if field is not None and field != f.field:
        raise DimensionMismatch("function table lives over a different field")
    target = value_set_sum(f, n)
    core = if_core(f, n)
    K = pad_to(core, target)
    return ConstructionResult(
        "value-set", K, target, "eq", 1, "value-set construction for a non-linear f",
        {"function": f.name, "core_size": core.card, "value_set_sizes": value_set_sizes(f)},
    )


def quadratic_function(field: Field) -> FunctionTable:
    branch = B.quadratic_branch(field.q)
    if field.q == 2:
        raise UnsupportedField("the value-set construction needs q >= 3")
    if branch == "odd":
        return square(field)
    if branch == "even-power-of-2":
        return cube(field)
    return inverse_plus_square(field)


def quadratic_rank1(n: int, field: Field) -> ConstructionResult:
    """Rank-1 set from the value-set core with x^2, x^3 or x^(q-2)+x^2 by field type."""
    f = quadratic_function(field)
    K = if_core(f, n)
    return ConstructionResult(
        "quadratic", K, B.quadratic_bound(field.q, n), "lt", 1,
        f"value-set core with f = {f.name} ({B.quadratic_branch(field.q)})",
        {"function": f.name, "value_set_sum": value_set_sum(f, n), "value_set_sizes": value_set_sizes(f)},
    )


# ---------------------------------------------------------------- lifting

def lift(K1: PointSet, n: int, r: int, r1: int) -> ConstructionResult:
    """K1 (rank r1 in F^(n-(r-r1)), leading coordinates) union F^n minus that subspace."""
    if not n >= r >= r1 >= 1:
        raise DimensionMismatch(f"need n >= r >= r1 >= 1, got n={n}, r={r}, r1={r1}")
    n1 = n - (r - r1)
    if K1.n != n1:
        raise DimensionMismatch(f"K1 lives in F^{K1.n}, expected F^{n1}")
    F = K1.field
    q = F.q
    outside = np.ones(q**n, dtype=bool)
    outside[np.arange(q**n1, dtype=np.int64) * q ** (n - n1)] = False
    K = PointSet(F, n, embed(K1, n).bits | outside)
    return ConstructionResult(
        "lift", K, q**n - q**n1 + K1.card, "eq", r,
        "lifting: rank-r1 set in a subspace plus the subspace's complement",
        {"r1": r1, "base_size": K1.card},
    )


def planar_rank1(field: Field) -> PointSet:
    """Small rank-1 set in F_q^2: the 7-point missing-digit set for q = 3,
    otherwise the value-set core of x^2."""
    if field.q == 3:
        return missing_digit(2, field).set
    return if_core(square(field), 2)


def rank_r_block(r: int, field: Field) -> ConstructionResult:
    """Rank-r Kakeya set in F_q^(r+1) lifted from :func:`planar_rank1`."""
    res = lift(planar_rank1(field), r + 1, r, 1)
    return ConstructionResult(
        "lift", res.set, B.rank_r_block_bound(field.q, r), "le", r,
        "lift of a planar rank-1 set to F^(r+1)", {"planar_size": res.extra["base_size"]},
    )


def final_upper(n: int, r: int, field: Field) -> ConstructionResult:
    """floor(n/(r+1)) copies of the (r+1)-dimensional block, times a full remainder."""
    if not n >= r >= 1:
        raise ValueError(f"need n >= r >= 1, got n={n}, r={r}")
    k, rem = divmod(n, r + 1)
    if k == 0:
        K = PointSet.full(field, n)
        block_size = None
    else:
        block = rank_r_block(r, field).set
        block_size = block.card
        K = block
        for _ in range(k - 1):
            K = product(K, block)
        if rem:
            K = product(K, PointSet.full(field, rem))
    return ConstructionResult(
        "final-upper", K, B.final_upper_bound(field.q, n, r), "le", r,
        "product of rank-r blocks in F^(r+1) with a full remainder space",
        {"blocks": k, "remainder": rem, "block_size": block_size, "delta_q": B.fmt(B.delta_q(field.q))},
    )


def final_upper_size(n: int, r: int, field: Field) -> int:
    k, rem = divmod(n, r + 1)
    if k == 0:
        return field.q**n
    return rank_r_block(r, field).set.card ** k * field.q**rem


def product_construction(Ka: PointSet, Kb: PointSet, rank: int) -> ConstructionResult:
    return ConstructionResult(
        "product", product(Ka, Kb), Ka.card * Kb.card, "eq", rank,
        "Cartesian product of two rank-r sets",
    )


# --------------------------------------------------------- universal sets

def universal_set(n: int, k: int, field: Field) -> ConstructionResult:
    """Vectors whose projection to at least one of k coordinate blocks vanishes.

    Blocks V_1..V_k have floor(n/k) coordinates each and occupy the leading
    coordinates; the remainder V_0 is last.  For k > n the blocks are empty
    and the set is the whole space.
    """
    q = field.q
    if not 1 <= k <= q**n:
        raise BadK(f"k={k} outside [1, q^n = {q**n}]")
    m = n // k if k <= n else 0
    coords = all_coords(q, n)
    if m == 0:
        U = np.ones(q**n, dtype=bool)
    else:
        U = np.zeros(q**n, dtype=bool)
        for i in range(k):
            U |= np.all(coords[:, i * m : (i + 1) * m] == 0, axis=1)
    return ConstructionResult(
        "universal", PointSet(field, n, U), B.universal_size(q, n, k), "eq", 0,
        "direct-sum projection universal set", {"k": k, "block_dim": m},
    )


def kakeya_from_universal(n: int, r: int, field: Field) -> ConstructionResult:
    """A q^r-universal set; every r-dimensional subspace has exactly q^r points."""
    q = field.q
    if not n >= r >= 1:
        raise ValueError(f"need n >= r >= 1, got n={n}, r={r}")
    U = universal_set(n, q**r, field)
    refined = B.universal_refined_bound(q, n, r)
    return ConstructionResult(
        "kakeya-universal", U.set, U.predicted_size, "eq", r,
        "q^r-universal set used as a rank-r Kakeya set",
        {"k": q**r, "block_dim": U.extra["block_dim"], "refined_bound": refined,
         "within_refined": U.set.card <= refined},
    )


# ---------------------------------------------------------- random rotations

def popular_threshold(n: int, q: int) -> float:
    """n/q - delta sqrt(n/q) with delta = 2 sqrt(ln q)."""
    delta = 2 * math.sqrt(math.log(q))
    return n / q - delta * math.sqrt(n / q)


def rotation_base_set(n: int, field: Field) -> PointSet:
    """B union A_0: the {0,1}-cube and the all-nonzero vectors with many 1 coordinates."""
    q = field.q
    coords = all_coords(q, n)
    A = np.all(coords != 0, axis=1)
    Bc = np.all(coords <= 1, axis=1)
    ones = np.count_nonzero(coords == 1, axis=1)
    A0 = A & (ones > 2 * popular_threshold(n, q))
    return PointSet(field, n, A0 | Bc)


def popular_direction_rate(n: int, field: Field, samples: int, seed=None, chunk: int = 10000) -> float:
    """Fraction of uniformly drawn vectors whose every value count exceeds the popularity threshold."""
    rng = make_rng(seed)
    q = field.q
    thr = popular_threshold(n, q)
    hits = 0
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        draws = rng.integers(q, size * n).reshape(size, n)
        ok = np.ones(size, dtype=bool)
        for eps in range(q):
            ok &= np.count_nonzero(draws == eps, axis=1) > thr
        hits += int(np.count_nonzero(ok))
        done += size
    return hits / samples


def direction_coverage(K: PointSet) -> float:
    total = covered = 0
    for L in enum_subspaces(K.n, 1, K.field):
        total += 1
        covered += bool(translate_mask(K, L).any())
    return covered / total


def random_rotation_rank1(n: int, field: Field, seed=None, max_attempts: int = 32) -> ConstructionResult:
    """Union of n random invertible images of :func:`rotation_base_set`, retried until rank-1 Kakeya."""
    q = field.q
    if q < 3:
        raise UnsupportedField("random rotations need q >= 3")
    if n < 1:
        raise ValueError("n must be >= 1")
    if q**n > ROTATION_UNIVERSE_LIMIT:
        raise TooLarge(f"q^n = {q**n} exceeds {ROTATION_UNIVERSE_LIMIT}")
    rng = make_rng(seed)
    K0 = rotation_base_set(n, field)
    best = 0.0
    for attempt in range(1, max_attempts + 1):
        bits = np.zeros(q**n, dtype=bool)
        for _ in range(n):
            bits |= apply_map(random_invertible(n, field, rng), K0).bits
        K = PointSet(field, n, bits)
        coverage = direction_coverage(K)
        best = max(best, coverage)
        if coverage == 1.0:
            return ConstructionResult(
                "random-rotation", K, n * K0.card, "le", 1,
                "union of n random linear images of the popular-direction set",
                {"attempts": attempt, "base_size": K0.card, "seed": rng.seed},
            )
    raise AttemptsExhausted(max_attempts, best)
