"""Brute-force and sampled oracles for Kakeya and universal sets, value-set
profiling, and exact minimum search at desk scale."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import bounds as B
from .constructions import FunctionTable, if_set, inverse_plus_square
from .errors import BudgetExhausted, TooLarge, WrongFieldKind
from .gf import Field
from .linalg import (
    PointSet,
    Subspace,
    Vec,
    all_coords,
    count_subspaces,
    enum_subspaces,
    random_matrix,
    rank,
    translate_mask,
    vec_from_index,
    weights,
)
from .rng import make_rng

EXHAUSTIVE_SUBSPACE_LIMIT = 10**6
EXHAUSTIVE_UNIVERSE_LIMIT = 1 << 30
UNIVERSAL_LIMIT = 10**7
FUNCTION_LIMIT = 10**7


@dataclass
class VerificationReport:
    """Outcome of a Kakeya (or universality) check.

    ``verified`` is only ever True for exhaustive runs; a clean sampled run
    sets ``no_failure`` instead.
    """

    verified: bool
    no_failure: bool
    mode: str  # "exhaustive" | "sampled"
    subspaces_checked: int
    witnesses: dict = field(default_factory=dict)
    first_failure: Optional[object] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def status(self) -> str:
        if self.verified:
            return "verified"
        if self.no_failure:
            return "no-failure-in-sample"
        return "failed"

    def to_dict(self, max_witnesses: int = 16) -> dict:
        items = list(self.witnesses.items())[:max_witnesses]
        return {
            "status": self.status,
            "verified": self.verified,
            "mode": self.mode,
            "checked": self.subspaces_checked,
            "samples": self.samples,
            "seed": self.seed,
            "first_failure": _jsonable(self.first_failure),
            "witness_count": len(self.witnesses),
            "witness_sample": [[_jsonable(k), list(v)] for k, v in items],
        }


def _jsonable(obj):
    if obj is None:
        return None
    if isinstance(obj, Subspace):
        return [list(row) for row in obj.basis]
    return [list(x) if isinstance(x, tuple) else x for x in obj]


def _check_chunk(K: PointSet, chunk: list[Subspace]):
    q, n = K.field.q, K.n
    out = []
    for L in chunk:
        ok = translate_mask(K, L)
        out.append((L, vec_from_index(int(np.argmax(ok)), q, n) if ok.any() else None))
    return out


def _run(K: PointSet, subspaces, threads: int):
    """Check subspaces in order; stop at the first one with no translate in K."""
    witnesses, checked = {}, 0
    if threads <= 1:
        results = (_check_chunk(K, [L]) for L in subspaces)
    else:
        subspaces = list(subspaces)
        size = max(1, math.ceil(len(subspaces) / (threads * 4)))
        chunks = [subspaces[i : i + size] for i in range(0, len(subspaces), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _check_chunk(K, c), chunks))
    # results come back in canonical order, so the first failure does not depend on threads
    for res in results:
        for L, w in res:
            checked += 1
            if w is None:
                return witnesses, L, checked
            witnesses[L] = w
    return witnesses, None, checked


def is_kakeya(K: PointSet, r: int, mode: str = "exhaustive", samples: int = 1000,
              seed=None, threads: int = 1) -> VerificationReport:
    """Does K contain a translate of every r-dimensional subspace?"""
    F, n = K.field, K.n
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    if mode == "exhaustive":
        total = count_subspaces(n, r, F)
        if total > EXHAUSTIVE_SUBSPACE_LIMIT or F.q**n > EXHAUSTIVE_UNIVERSE_LIMIT:
            raise TooLarge(f"{total} subspaces in a universe of {F.q**n}; use sampled mode")
        witnesses, failure, checked = _run(K, enum_subspaces(n, r, F), threads)
        return VerificationReport(failure is None, failure is None, "exhaustive", checked,
                                  witnesses, failure)
    if mode == "sampled":
        rng = make_rng(seed)
        sample = [random_subspace(n, r, F, rng) for _ in range(samples)]
        witnesses, failure, checked = _run(K, sample, threads)
        return VerificationReport(False, failure is None, "sampled", checked, witnesses, failure,
                                  samples=samples, seed=rng.seed)
    raise ValueError(f"unknown mode {mode!r}")


def random_subspace(n: int, r: int, field: Field, rng) -> Subspace:
    """Row space of a uniformly random full-rank r x n matrix (uniform over subspaces)."""
    while True:
        M = random_matrix(r, n, field, rng)
        if rank(M, field) == r:
            return Subspace.span(M, field, n)


def is_universal(U: PointSet, k: int, mode: str = "exhaustive", samples: int = 1000,
                 seed=None) -> VerificationReport:
    """Does U contain a translate of every k-element subset of F_q^n?"""
    F, n = U.field, U.n
    size = F.q**n
    if not 1 <= k <= size:
        raise ValueError(f"k={k} outside [1, {size}]")
    allc = all_coords(F.q, n)
    w = weights(F.q, n)
    shifted_cache: dict[int, np.ndarray] = {}

    def shifted(a: int) -> np.ndarray:
        # mask over b: b + a in U
        if a not in shifted_cache:
            shifted_cache[a] = U.bits[F.add_arr(allc, allc[a]) @ w]
        return shifted_cache[a]

    def check(subset) -> Optional[Vec]:
        ok = np.ones(size, dtype=bool)
        for a in subset:
            ok &= shifted(a)
            if not ok.any():
                return None
        return vec_from_index(int(np.argmax(ok)), F.q, n)

    if mode == "exhaustive":
        total = math.comb(size, k)
        if total > UNIVERSAL_LIMIT:
            raise TooLarge(f"{total} subsets; use sampled mode")
        subsets = itertools.combinations(range(size), k)
        rng_seed, n_samples = None, None
    elif mode == "sampled":
        rng = make_rng(seed)
        subsets = (_random_subset(size, k, rng) for _ in range(samples))
        rng_seed, n_samples = rng.seed, samples
    else:
        raise ValueError(f"unknown mode {mode!r}")
    witnesses, checked = {}, 0
    for subset in subsets:
        checked += 1
        wv = check(subset)
        key = tuple(vec_from_index(a, F.q, n) for a in subset)
        if wv is None:
            return VerificationReport(False, False, mode, checked, witnesses, key, n_samples, rng_seed)
        if len(witnesses) < 64:
            witnesses[key] = wv
    return VerificationReport(mode == "exhaustive", True, mode, checked, witnesses, None,
                              n_samples, rng_seed)


def _random_subset(size: int, k: int, rng) -> tuple[int, ...]:
    chosen: set[int] = set()
    while len(chosen) < k:
        chosen.add(rng.integer(size))
    return tuple(sorted(chosen))


# ------------------------------------------------------------ value sets

@dataclass(frozen=True)
class ClassProfile:
    t: int
    class_sizes: tuple[int, ...]  # descending
    classes: tuple[tuple[int, ...], ...]

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    def shape(self) -> dict[int, int]:
        """class size -> number of classes of that size"""
        return dict(sorted(Counter(self.class_sizes).items()))


def class_profile(f: FunctionTable, t: int) -> ClassProfile:
    """Partition of F by x ~ y iff f(x) + t x = f(y) + t y."""
    F = f.field
    groups: dict[int, list[int]] = {}
    for x in range(F.q):
        groups.setdefault(F.add(f(x), F.mul(t, x)), []).append(x)
    classes = sorted((tuple(g) for g in groups.values()), key=lambda c: (-len(c), c))
    return ClassProfile(t, tuple(len(c) for c in classes), tuple(classes))


@dataclass
class QEvenReport:
    q: int
    sizes: list[int]
    bound: Fraction
    pattern_ok: list[bool]  # per t != 0: (q/2-2)/3 triples, one pair, q/2 singletons

    @property
    def passed(self) -> bool:
        return all(s <= self.bound for s in self.sizes) and all(self.pattern_ok)


def prop_qeven_audit(field: Field) -> QEvenReport:
    """Class profiles of x^3 + t x over GF(2^even)."""
    if field.p != 2 or field.m % 2:
        raise WrongFieldKind(f"{field!r} is not an even power of 2")
    from .constructions import cube

    q = field.q
    f = cube(field)
    sizes, pattern = [], []
    expected = {3: (q // 2 - 2) // 3, 2: 1, 1: q // 2}
    expected = {k: v for k, v in expected.items() if v}
    for t in range(q):
        prof = class_profile(f, t)
        sizes.append(prof.num_classes)
        if t:
            pattern.append(prof.shape() == dict(sorted(expected.items())))
    return QEvenReport(q, sizes, Fraction(2 * q + 1, 3), pattern)


@dataclass
class QOddRow:
    t: int
    size: int
    bound_ok: bool
    n_count: Optional[int] = None
    n_bound_ok: Optional[bool] = None
    class_bound_ok: Optional[bool] = None  # |I_f(t)| <= q - 2N/3 - [t != 1]


@dataclass
class QOddReport:
    q: int
    rows: list[QOddRow]
    zero_exact: bool  # |I_f(0)| == (2q-1)/3
    one_ok: bool  # |I_f(1)| <= (2q+2)/3

    @property
    def passed(self) -> bool:
        rest = [r for r in self.rows if r.t not in (0, 1)]
        return (
            self.zero_exact
            and self.one_ok
            and all(r.bound_ok for r in self.rows)
            and all(r.n_bound_ok for r in rest)
            and all(r.class_bound_ok for r in self.rows if r.t)
        )

    @property
    def max_size(self) -> int:
        return max(r.size for r in self.rows)


def prop_qodd_audit(field: Field) -> QOddReport:
    """Value-set sizes of x^(q-2) + x^2 over GF(2^odd) against their proven bounds."""
    if field.p != 2 or field.m % 2 == 0 or field.m < 3:
        raise WrongFieldKind(f"{field!r} is not an odd power of 2 with q >= 8")
    F = field
    q = F.q
    f = inverse_plus_square(F)
    size_bound = B.prop_qodd_bound(q)
    n_bound = B.prop_qodd_n_bound(q)  # value is -(q/2 - sqrt q - 5/2)
    rows = []
    for t in range(q):
        size = len(if_set(f, t))
        row = QOddRow(t, size, B.cmp(size, size_bound) <= 0)
        if t:
            inv_sqrt_t = F.sqrt(F.inv(t))
            N = 0
            for x in range(1, q):
                if x in (t, inv_sqrt_t):
                    continue
                s = F.add(x, t)
                if F.trace(F.inv(F.mul(x, F.mul(s, s)))) == 0:
                    N += 1
            row.n_count = N
            row.n_bound_ok = B.cmp(-N, n_bound) <= 0
            row.class_bound_ok = 3 * size <= 3 * q - 2 * N - (3 if t != 1 else 0)
        rows.append(row)
    return QOddReport(q, rows, 3 * rows[0].size == 2 * q - 1, 3 * rows[1].size <= 2 * q + 2)


@dataclass
class LargeIfReport:
    q: int
    mode: str
    functions_checked: int
    failures: list[tuple[int, ...]]
    min_max_size: int  # min over f of max over t of |I_f(t)|

    @property
    def passed(self) -> bool:
        return not self.failures


def _max_value_set_sizes(F: Field, tables: np.ndarray) -> np.ndarray:
    q = F.q
    xs = np.arange(q, dtype=np.int64)
    best = np.zeros(tables.shape[0], dtype=np.int64)
    for t in range(q):
        vals = np.sort(F.add_arr(tables, F.mul_arr(t, xs)[None, :]), axis=1)
        distinct = 1 + np.count_nonzero(np.diff(vals, axis=1), axis=1)
        best = np.maximum(best, distinct)
    return best


def exists_large_if(field: Field, mode: str = "exhaustive", samples: int = 10000,
                    seed=None, chunk: int = 1 << 16) -> LargeIfReport:
    """For every f: F -> F (or a sample), find t with |I_f(t)| > q/2."""
    q = field.q
    if mode == "exhaustive":
        total = q**q
        if total > FUNCTION_LIMIT:
            raise TooLarge(f"{total} functions; use sampled mode")
        rng = None
    elif mode == "sampled":
        total = samples
        rng = make_rng(seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    failures: list[tuple[int, ...]] = []
    min_max = q
    done = 0
    while done < total:
        size = min(chunk, total - done)
        if rng is None:
            idx = np.arange(done, done + size, dtype=np.int64)
            tables = np.empty((size, q), dtype=np.int64)
            for i in range(q - 1, -1, -1):
                tables[:, i] = idx % q
                idx //= q
        else:
            tables = rng.integers(q, size * q).reshape(size, q)
        best = _max_value_set_sizes(field, tables)
        bad = np.flatnonzero(2 * best <= q)
        failures.extend(tuple(int(v) for v in tables[i]) for i in bad)
        min_max = min(min_max, int(best.min()))
        done += size
    return LargeIfReport(q, mode, total, failures, min_max)


# ---------------------------------------------------------- minimum search

@dataclass
class MinKakeyaResult:
    q: int
    n: int
    r: int
    minimum: int
    set: PointSet
    lower_bound_ceiling: int
    nodes: int
    phase1_nodes: int
    exhaustive: bool = True

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "minimum": self.minimum,
            "lower_bound_ceiling": self.lower_bound_ceiling,
            "nodes": self.nodes,
            "phase1_nodes": self.phase1_nodes,
            "optimal_set": [list(v) for v in self.set],
        }


def _coset_masks(L: Subspace, field: Field, n: int) -> list[int]:
    q = field.q
    allc = all_coords(q, n)
    w = weights(q, n)
    pts = L.points(field)
    seen = np.zeros(q**n, dtype=bool)
    masks = []
    for v in range(q**n):
        if seen[v]:
            continue
        members = field.add_arr(pts, allc[v][None, :]) @ w
        seen[members] = True
        masks.append(sum(1 << int(i) for i in members))
    return masks


def min_kakeya(n: int, r: int, field: Field, budget: int = 10**6) -> MinKakeyaResult:
    """Exact minimum size of a rank-r Kakeya set in F_q^n by branch and bound.

    A minimum Kakeya set is a union of one coset per r-dimensional subspace,
    so the search picks cosets.  Phase 1 finds the optimum (stopping early
    once it meets the lower-bound ceiling); phase 2 enumerates all optimal
    unions and keeps the lexicographically smallest sorted index list.
    """
    q = field.q
    if q**n > 64:
        raise TooLarge(f"universe q^n = {q**n} too large for exact search")
    subspaces = list(enum_subspaces(n, r, field))
    cosets = [_coset_masks(L, field, n) for L in subspaces]
    lb_ceiling = B.lower_bound_ceiling(q, n, r) if r >= 1 else 1
    nodes = 0

    def search(mask: int, remaining: list[int], limit: int, strict: bool, collect):
        # strict: improve on the incumbent (prune at >=); otherwise enumerate sets of size <= limit
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        pc = mask.bit_count()
        worst, worst_i, still = 0, -1, []
        for i in remaining:
            need = min((c & ~mask).bit_count() for c in cosets[i])
            if need:
                still.append(i)
                if need > worst:
                    worst, worst_i = need, i
        bound = state["limit"] if strict else limit
        if (pc + worst >= bound) if strict else (pc + worst > bound):
            return
        if not still:
            collect(mask)
            return
        rest = [i for i in still if i != worst_i]
        options = sorted(cosets[worst_i], key=lambda c: ((c & ~mask).bit_count(), _lex_key(c)))
        for c in options:
            search(mask | c, rest, limit, strict, collect)
            if strict and state["limit"] <= lb_ceiling:
                return

    state = {"limit": q**n + 1, "best": (1 << q**n) - 1}

    def improve(mask):
        size = mask.bit_count()
        if size < state["limit"]:
            state["limit"], state["best"] = size, mask

    try:
        search(0, list(range(len(subspaces))), state["limit"], True, improve)
        phase1 = nodes
        optimum = state["limit"]
        found = {"mask": state["best"]}

        def keep_lex_min(mask):
            if mask.bit_count() == optimum and _lex_key(mask) < _lex_key(found["mask"]):
                found["mask"] = mask

        search(0, list(range(len(subspaces))), optimum, False, keep_lex_min)
    except _OutOfBudget:
        raise BudgetExhausted(lb_ceiling, min(state["limit"], q**n), nodes) from None
    best = found["mask"]
    idx = [i for i in range(q**n) if (best >> i) & 1]
    return MinKakeyaResult(q, n, r, optimum, PointSet.from_indices(field, n, idx), lb_ceiling,
                           nodes, phase1)


class _OutOfBudget(Exception):
    pass


def _lex_key(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)
