"""Sparse multivariate polynomials over GF(q) with Hasse derivatives,
vanishing multiplicities and the auditing batteries built on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ConditionViolated, DimensionMismatch, KakeyaError, ZeroPolynomial
from .gf import Field
from .linalg import PointSet, nullspace_vector
from .rng import make_rng

MAX_VARS = 6
MAX_DEGREE = 64
SZ_POINT_LIMIT = 10**5
INF = math.inf

Exp = tuple[int, ...]


def _gradlex_key(e: Exp):
    # total degree descending, then lexicographic descending
    return (-sum(e), tuple(-x for x in e))


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        out = out * math.comb(a, b) % p
        n //= p
        k //= p
    return out


class MultiPoly:
    """Polynomial in ``n_vars`` variables: a map exponent-vector -> nonzero coefficient."""

    __slots__ = ("field", "n_vars", "terms", "_hash")

    def __init__(self, field: Field, n_vars: int, terms: Optional[Mapping[Exp, int]] = None):
        if not 0 <= n_vars <= MAX_VARS:
            raise ValueError(f"n_vars must be in [0, {MAX_VARS}], got {n_vars}")
        clean: dict[Exp, int] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n_vars:
                raise DimensionMismatch(f"exponent {e} has length {len(e)}, expected {n_vars}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = field.check(int(c))
            if c:
                clean[e] = c
        if clean and max(map(sum, clean)) > MAX_DEGREE:
            raise ValueError(f"degree exceeds cap {MAX_DEGREE}")
        self.field = field
        self.n_vars = n_vars
        self.terms = clean
        self._hash = None

    # -- constructors
    @classmethod
    def zero(cls, field: Field, n_vars: int) -> "MultiPoly":
        return cls(field, n_vars)

    @classmethod
    def const(cls, field: Field, n_vars: int, c: int) -> "MultiPoly":
        return cls(field, n_vars, {(0,) * n_vars: c})

    @classmethod
    def var(cls, field: Field, n_vars: int, i: int, c: int = 1) -> "MultiPoly":
        e = [0] * n_vars
        e[i] = 1
        return cls(field, n_vars, {tuple(e): c})

    @classmethod
    def _raw(cls, field: Field, n_vars: int, terms: dict[Exp, int]) -> "MultiPoly":
        # terms already validated and free of zeros
        P = object.__new__(cls)
        P.field, P.n_vars, P.terms, P._hash = field, n_vars, terms, None
        return P

    # -- basic properties
    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max(map(sum, self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.n_vars == other.n_vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.n_vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly(q={self.field.q}, n={self.n_vars}, {self.to_text()!r})"

    def sorted_terms(self) -> list[tuple[Exp, int]]:
        return sorted(self.terms.items(), key=lambda t: _gradlex_key(t[0]))

    def to_text(self) -> str:
        """``c * X1^a1 X2^a2`` terms in graded-lex order joined by `` + ``; ``0`` if zero."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(f"X{i + 1}^{a}" for i, a in enumerate(e) if a)
            parts.append(f"{c} * {mono}" if mono else str(c))
        return " + ".join(parts)

    # -- arithmetic
    def _compatible(self, other: "MultiPoly") -> None:
        if self.field != other.field or self.n_vars != other.n_vars:
            raise DimensionMismatch("polynomials over different rings")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._compatible(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(F, self.n_vars, out)

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly._raw(F, self.n_vars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c: int) -> "MultiPoly":
        F = self.field
        if not F.check(c):
            return MultiPoly.zero(F, self.n_vars)
        return MultiPoly._raw(F, self.n_vars, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._compatible(other)
        F = self.field
        out: dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        out = {e: c for e, c in out.items() if c}
        if out and max(map(sum, out)) > MAX_DEGREE:
            raise ValueError(f"degree exceeds cap {MAX_DEGREE}")
        return MultiPoly._raw(F, self.n_vars, out)

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(self.field, self.n_vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- evaluation and structure
    def evaluate(self, a: Sequence[int]) -> int:
        if len(a) != self.n_vars:
            raise DimensionMismatch(f"point has {len(a)} coordinates, expected {self.n_vars}")
        F = self.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(a, e):
                if k:
                    v = F.mul(v, F.pow(x, k))
            total = F.add(total, v)
        return total

    __call__ = evaluate

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at each row of an integer array of shape (N, n_vars)."""
        F = self.field
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(points.shape[0], dtype=np.int64)
        for e, c in self.terms.items():
            v = np.full(points.shape[0], c, dtype=np.int64)
            for j, k in enumerate(e):
                if k:
                    v = F.mul_arr(v, F.pow_arr(points[:, j], k))
            total = F.add_arr(total, v)
        return total

    def homogeneous_part(self) -> "MultiPoly":
        """Terms of top total degree (zero for the zero polynomial)."""
        d = self.degree
        return MultiPoly._raw(self.field, self.n_vars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """P(images[0], ..., images[n-1]); the images share a ring, possibly with other arity."""
        if len(images) != self.n_vars:
            raise DimensionMismatch(f"need {self.n_vars} images, got {len(images)}")
        if not images:
            raise DimensionMismatch("cannot substitute into a polynomial in zero variables")
        F, m = self.field, images[0].n_vars
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.const(F, m, 1)} for _ in images]

        def power(j: int, k: int) -> MultiPoly:
            cache = powers[j]
            if k not in cache:
                cache[k] = power(j, k - 1) * images[j]
            return cache[k]

        out = MultiPoly.zero(F, m)
        for e, c in self.terms.items():
            term = MultiPoly.const(F, m, c)
            for j, k in enumerate(e):
                if k:
                    term = term * power(j, k)
            out = out + term
        return out

    def shift(self, a: Sequence[int]) -> "MultiPoly":
        """P(X + a), expanded term by term with the binomial theorem."""
        if len(a) != self.n_vars:
            raise DimensionMismatch(f"point has {len(a)} coordinates, expected {self.n_vars}")
        F = self.field
        p = F.p
        out: dict[Exp, int] = {}
        for e, c in self.terms.items():
            # per-variable expansions (X_j + a_j)^{e_j} = sum_i C(e_j, i) a_j^{e_j - i} X_j^i
            factors = []
            for x, k in zip(a, e):
                opts = []
                for i in range(k + 1):
                    b = binom_mod(k, i, p)
                    if b:
                        v = F.mul(F.scalar(b), F.pow(x, k - i))
                        if v:
                            opts.append((i, v))
                factors.append(opts)
            for combo in itertools.product(*factors):
                v = c
                for _, w in combo:
                    v = F.mul(v, w)
                ex = tuple(i for i, _ in combo)
                out[ex] = F.add(out.get(ex, 0), v)
        return MultiPoly._raw(F, self.n_vars, {e: v for e, v in out.items() if v})


def monomials(n_vars: int, max_degree: int) -> list[Exp]:
    """All exponent vectors of total degree <= max_degree, ascending degree then lex."""
    out = []
    for d in range(max_degree + 1):
        out.extend(sorted(_compositions(d, n_vars), reverse=True))
    return out


def _compositions(d: int, n: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


def hasse_derivative(P: MultiPoly, i: Sequence[int]) -> MultiPoly:
    """Coefficient of X^i in P(X + Y), as a polynomial in Y."""
    i = tuple(int(x) for x in i)
    if len(i) != P.n_vars:
        raise DimensionMismatch(f"order {i} has length {len(i)}, expected {P.n_vars}")
    F = P.field
    out: dict[Exp, int] = {}
    for e, c in P.terms.items():
        if any(a < b for a, b in zip(e, i)):
            continue
        b = 1
        for a, k in zip(e, i):
            b = b * binom_mod(a, k, F.p) % F.p
            if not b:
                break
        if b:
            ex = tuple(a - k for a, k in zip(e, i))
            v = F.mul(F.scalar(b), c)
            out[ex] = F.add(out.get(ex, 0), v)
    return MultiPoly._raw(F, P.n_vars, {e: v for e, v in out.items() if v})


def multiplicity(P: MultiPoly, a: Sequence[int]) -> float | int:
    """Lowest total degree among the terms of P(X + a); ``math.inf`` for P = 0."""
    if P.is_zero():
        return INF
    if P.evaluate(a):
        return 0
    return min(map(sum, P.shift(a).terms))


def multiplicity_by_derivatives(P: MultiPoly, a: Sequence[int]) -> float | int:
    """Smallest m such that some Hasse derivative of order m is nonzero at a."""
    if P.is_zero():
        return INF
    for m in range(P.degree + 1):
        for i in _compositions(m, P.n_vars):
            if hasse_derivative(P, i).evaluate(a):
                return m
    raise AssertionError("a nonzero polynomial has a nonvanishing derivative")  # pragma: no cover


def restrict(P: MultiPoly, b: Sequence[int], ds: Sequence[Sequence[int]]) -> MultiPoly:
    """P(b + T1 d1 + ... + Tr dr) as a polynomial in T1..Tr."""
    n, r = P.n_vars, len(ds)
    if len(b) != n or any(len(d) != n for d in ds):
        raise DimensionMismatch(f"base point and directions must have {n} coordinates")
    if r == 0:
        raise DimensionMismatch("need at least one direction")
    F = P.field
    images = []
    for j in range(n):
        img = MultiPoly.const(F, r, b[j])
        for l, d in enumerate(ds):
            if d[j]:
                img = img + MultiPoly.var(F, r, l, d[j])
        images.append(img)
    return P.substitute(images)


def vanishing_poly(S: Iterable[Sequence[int]], m: int, k: int, field: Field,
                   n_vars: Optional[int] = None) -> MultiPoly:
    """Nonzero polynomial of degree <= k vanishing to order >= m on every point of S.

    Solves the homogeneous system "every Hasse derivative of order < m is zero
    at every s"; the unknowns are the coefficients of all monomials of degree
    <= k. Requires C(m+n-1, n) |S| < C(n+k, n), which forces a nonzero solution.
    """
    pts = sorted({tuple(int(x) for x in s) for s in S})
    if n_vars is None:
        if not pts:
            raise DimensionMismatch("n_vars is required when S is empty")
        n_vars = len(pts[0])
    n = n_vars
    if any(len(s) != n for s in pts):
        raise DimensionMismatch("points of S have inconsistent dimension")
    if m < 1 or k < 0:
        raise ConditionViolated(f"need m >= 1 and k >= 0, got m={m}, k={k}")
    lhs, rhs = math.comb(m + n - 1, n) * len(pts), math.comb(n + k, n)
    if not lhs < rhs:
        raise ConditionViolated(f"C(m+n-1,n)|S| = {lhs} is not below C(n+k,n) = {rhs}")
    F = field
    cols = monomials(n, k)
    orders = [i for w in range(m) for i in _compositions(w, n)]
    rows = []
    for s in pts:
        for i in orders:
            # coefficient of c_e in P^{(i)}(s) is C(e, i) s^{e - i}
            row = []
            for e in cols:
                if any(a < b for a, b in zip(e, i)):
                    row.append(0)
                    continue
                v = 1
                for a, kk, x in zip(e, i, s):
                    v = F.mul(v, F.mul(F.scalar(binom_mod(a, kk, F.p)), F.pow(x, a - kk)))
                row.append(v)
            rows.append(row)
    vec = nullspace_vector(rows, len(cols), F)
    if vec is None:  # pragma: no cover - excluded by the counting argument
        raise KakeyaError("solver found no nonzero solution despite the dimension count")
    return MultiPoly(F, n, {e: c for e, c in zip(cols, vec) if c})


@dataclass(frozen=True)
class SZAudit:
    lhs: int
    rhs: int
    passed: bool

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.passed))


def multiplicities_on_grid(P: MultiPoly, S: Sequence[int]) -> dict[Exp, int]:
    """mu(P, z) for every z in S^n (P nonzero)."""
    S = sorted(set(int(s) for s in S))
    grid = np.array(list(itertools.product(S, repeat=P.n_vars)), dtype=np.int64).reshape(-1, P.n_vars)
    vals = P.evaluate_many(grid)
    out = {}
    for z, v in zip(map(tuple, grid.tolist()), vals):
        out[z] = 0 if v else min(map(sum, P.shift(z).terms))
    return out


def sz_audit(P: MultiPoly, S: Iterable[int]) -> SZAudit:
    """Both sides of sum_{z in S^n} mu(P, z) <= deg P * |S|^(n-1)."""
    if P.is_zero():
        raise ZeroPolynomial("the multiplicity bound needs a nonzero polynomial")
    S = sorted(set(int(s) for s in S))
    n = P.n_vars
    if len(S) ** n > SZ_POINT_LIMIT:
        raise ValueError(f"|S|^n = {len(S) ** n} exceeds {SZ_POINT_LIMIT}")
    if n == 0:
        return SZAudit(0, 0, True)
    lhs = sum(multiplicities_on_grid(P, S).values())
    rhs = P.degree * len(S) ** (n - 1)
    return SZAudit(lhs, rhs, lhs <= rhs)


@dataclass
class WitnessAudit:
    q: int
    n: int
    r: int
    N: int
    k: int
    m: int
    size: int
    lhs: int
    rhs: int
    precondition_ok: bool  # k < q^r * ceil((q m - k) / (q - 1))

    @property
    def passed(self) -> bool:
        return self.precondition_ok and self.lhs >= self.rhs

    def to_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n, "r": self.r, "N": self.N, "k": self.k, "m": self.m,
            "size": self.size, "lhs": self.lhs, "rhs": self.rhs,
            "precondition_ok": self.precondition_ok, "passed": self.passed,
        }


def lower_bound_witness_audit(K: PointSet, r: int, N: int) -> WitnessAudit:
    """Check C(m+n-1, n)|K| >= C(n+k, n) at k = N q^(r+1) - 1, m = (q^r + q - 1) N.

    K is assumed to be a verified rank-r Kakeya set; the counting inequality
    is exactly what any such set must satisfy.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    q, n = K.field.q, K.n
    k = N * q ** (r + 1) - 1
    m = (q**r + q - 1) * N
    ceil_l = -((k - q * m) // (q - 1))
    lhs = math.comb(m + n - 1, n) * K.size
    rhs = math.comb(n + k, n)
    return WitnessAudit(q, n, r, N, k, m, K.size, lhs, rhs, k < q**r * ceil_l)


# ------------------------------------------------------------ batteries

def random_poly(field: Field, n_vars: int, max_degree: int, rng, max_terms: int = 8,
                nonzero: bool = False) -> MultiPoly:
    rng = make_rng(rng)
    mons = monomials(n_vars, max_degree)
    while True:
        t = 1 + rng.integer(max_terms)
        terms = {}
        for _ in range(t):
            terms[mons[rng.integer(len(mons))]] = rng.integer(field.q)
        P = MultiPoly(field, n_vars, terms)
        if P or not nonzero:
            return P


def _points(field: Field, n: int):
    return itertools.product(range(field.q), repeat=n)


def expand_translate(P: MultiPoly) -> dict[Exp, MultiPoly]:
    """Coefficients of X^i in P(X + Y), by direct polynomial multiplication in 2n variables."""
    F, n = P.field, P.n_vars
    images = [MultiPoly.var(F, 2 * n, j) + MultiPoly.var(F, 2 * n, n + j) for j in range(n)]
    big = P.substitute(images)
    out: dict[Exp, dict[Exp, int]] = {}
    for e, c in big.terms.items():
        out.setdefault(e[:n], {})[e[n:]] = c
    return {i: MultiPoly(F, n, t) for i, t in out.items()}


@dataclass
class BatteryResult:
    name: str
    field: int
    trials: int
    failures: int
    detail: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"name": self.name, "q": self.field, "trials": self.trials,
                "failures": self.failures, "passed": self.passed}


def battery_hasse(field: Field, trials: int, rng, n_max: int = 3, deg_max: int = 5) -> BatteryResult:
    """Hasse derivatives agree with the expansion of P(X+Y); homogeneous parts commute."""
    rng = make_rng(rng)
    fails = []
    for _ in range(trials):
        n = 1 + rng.integer(n_max)
        P = random_poly(field, n, 1 + rng.integer(deg_max), rng)
        expanded = expand_translate(P)
        orders = monomials(n, max(P.degree, 0) + 1)
        bad = False
        for i in orders:
            D = hasse_derivative(P, i)
            if D != expanded.get(i, MultiPoly.zero(field, n)):
                bad = True
            if sum(i) > P.degree and D:
                bad = True
            DH = hasse_derivative(P.homogeneous_part(), i)
            if D and DH and D.degree == DH.degree and D.homogeneous_part() != DH:
                bad = True
        if hasse_derivative(P, (0,) * n) != P:
            bad = True
        if bad:
            fails.append(P.to_text())
    return BatteryResult("hasse-expansion", field.q, trials, len(fails), fails[:5])


def battery_multiplicity_routes(field: Field, trials: int, rng, n_max: int = 2, deg_max: int = 4) -> BatteryResult:
    """Shift route and derivative route give the same multiplicity at every point."""
    rng = make_rng(rng)
    fails = []
    for _ in range(trials):
        n = 1 + rng.integer(n_max)
        P = _poly_with_zeros(field, n, deg_max, rng)
        for a in _points(field, n):
            if multiplicity(P, a) != multiplicity_by_derivatives(P, a):
                fails.append((P.to_text(), a))
                break
    return BatteryResult("multiplicity-routes", field.q, trials, len(fails), fails[:5])


def _poly_with_zeros(field: Field, n: int, deg_max: int, rng) -> MultiPoly:
    """Random nonzero polynomial, often a product so that high multiplicities occur."""
    P = random_poly(field, n, max(1, deg_max // 2), rng, nonzero=True)
    if rng.integer(2):
        Q = random_poly(field, n, max(1, deg_max - P.degree), rng, nonzero=True)
        P = P * Q
    return P


def battery_multder(field: Field, trials: int, rng, n: int = 2, deg_max: int = 4, order_max: int = 3) -> BatteryResult:
    """mu(P^(i), a) >= mu(P, a) - |i| at every point and every |i| <= order_max."""
    rng = make_rng(rng)
    fails = []
    orders = [i for i in monomials(n, order_max)]
    for _ in range(trials):
        P = _poly_with_zeros(field, n, deg_max, rng)
        mus = {a: multiplicity(P, a) for a in _points(field, n)}
        for i in orders:
            D = hasse_derivative(P, i)
            if any(multiplicity(D, a) < mu - sum(i) for a, mu in mus.items()):
                fails.append((P.to_text(), i))
                break
    return BatteryResult("multder", field.q, trials, len(fails), fails[:5])


def battery_composition(field: Field, trials: int, rng, n: int = 3, r: int = 2, deg_max: int = 3) -> BatteryResult:
    """mu(P(b + sum T_l d_l), t) >= mu(P, b + sum t_l d_l) for all t in F^r."""
    rng = make_rng(rng)
    F = field
    fails = []
    for _ in range(trials):
        P = _poly_with_zeros(F, n, deg_max, rng)
        b = [rng.integer(F.q) for _ in range(n)]
        ds = [[rng.integer(F.q) for _ in range(n)] for _ in range(r)]
        R = restrict(P, b, ds)
        for t in _points(F, r):
            pt = list(b)
            for tl, d in zip(t, ds):
                pt = [F.add(x, F.mul(tl, y)) for x, y in zip(pt, d)]
            if multiplicity(R, t) < multiplicity(P, pt):
                fails.append((P.to_text(), b, ds, t))
                break
    return BatteryResult("composition", F.q, trials, len(fails), fails[:5])


def battery_dimmult(field: Field, trials: int, rng, n: int = 2) -> BatteryResult:
    """vanishing_poly meets its multiplicity claim whenever the counting condition holds."""
    rng = make_rng(rng)
    F = field
    fails = []
    done = 0
    while done < trials:
        size = 1 + rng.integer(min(F.q**n, 6))
        S = sorted({tuple(rng.integer(F.q) for _ in range(n)) for _ in range(size)})
        m = 1 + rng.integer(3)
        k = rng.integer(10)
        if not math.comb(m + n - 1, n) * len(S) < math.comb(n + k, n):
            continue
        done += 1
        try:
            P = vanishing_poly(S, m, k, F)
        except KakeyaError as exc:
            fails.append((S, m, k, repr(exc)))
            continue
        if P.is_zero() or P.degree > k or any(multiplicity(P, s) < m for s in S):
            fails.append((S, m, k, P.to_text()))
    return BatteryResult("dimmult", F.q, trials, len(fails), fails[:5])


def battery_sz(field: Field, trials: int, rng, n_max: int = 3, deg_max: int = 5) -> BatteryResult:
    """Multiplicity Schwartz-Zippel over S = F (and random subsets) for random nonzero P."""
    rng = make_rng(rng)
    F = field
    fails = []
    for t in range(trials):
        n = 1 + rng.integer(n_max)
        P = _poly_with_zeros(F, n, deg_max, rng)
        if t % 2:
            S = sorted({rng.integer(F.q) for _ in range(1 + rng.integer(F.q))})
        else:
            S = list(range(F.q))
        if not sz_audit(P, S).passed:
            fails.append((P.to_text(), S))
    return BatteryResult("sz", F.q, trials, len(fails), fails[:5])


def battery_sbe(field: Field, trials: int, rng, n: int = 2) -> BatteryResult:
    """A nonzero P vanishing to order m on all of S^n has degree >= m|S|.

    Two checks per trial: the counting condition can never certify a
    polynomial of degree m|S| - 1 on S^n, and a polynomial built with
    vanishing_poly on S^n (when allowed) has degree >= m|S|.
    """
    rng = make_rng(rng)
    F = field
    fails = []
    for _ in range(trials):
        S = sorted({rng.integer(F.q) for _ in range(1 + rng.integer(F.q))})
        m = 1 + rng.integer(2)
        grid = list(itertools.product(S, repeat=n))
        low_k = m * len(S) - 1
        if math.comb(m + n - 1, n) * len(grid) < math.comb(n + low_k, n):
            fails.append(("count", S, m))
            continue
        k = low_k + 1
        while not math.comb(m + n - 1, n) * len(grid) < math.comb(n + k, n):
            k += 1
        if k > 12:
            continue
        P = vanishing_poly(grid, m, k, F)
        if P.degree < m * len(S) or not sz_audit(P, S).passed:
            fails.append(("degree", S, m, P.to_text()))
    return BatteryResult("sbe", F.q, trials, len(fails), fails[:5])


@dataclass
class PolycheckReport:
    q: int
    seed: int
    batteries: list[BatteryResult]

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.batteries)

    def to_dict(self) -> dict:
        return {
            "schema": "polycheck v1",
            "q": self.q,
            "seed": self.seed,
            "passed": self.passed,
            "batteries": [b.to_dict() for b in self.batteries],
        }


def polycheck(field: Field, trials: int = 200, seed=None) -> PolycheckReport:
    """Run every property battery with per-battery child streams of one seed."""
    root = make_rng(seed)
    few = max(1, trials // 4)
    runs = [
        ("hasse", battery_hasse, trials),
        ("routes", battery_multiplicity_routes, few),
        ("multder", battery_multder, few),
        ("composition", battery_composition, few),
        ("dimmult", battery_dimmult, few),
        ("sz", battery_sz, trials),
        ("sbe", battery_sbe, few),
    ]
    results = [fn(field, count, root.spawn(i)) for i, (_, fn, count) in enumerate(runs)]
    return PolycheckReport(field.q, root.seed, results)
