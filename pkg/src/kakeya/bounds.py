"""Exact evaluation of the lower and upper bounds for rank-r Kakeya sets.

Every value is a :class:`~fractions.Fraction` or ``int`` except two kinds:
bounds involving sqrt(q) are :class:`SqrtExpr` (compared exactly through
rational enclosures of sqrt(q)), and the universal-set bound with its
real exponent is a float flagged ``exact=False``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .gf import factor_prime_power

ATLAS_SCHEMA = "bounds-atlas v1"


# ------------------------------------------------------------- sqrt helpers

def sqrt_enclosure(q: int, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(q) <= hi with hi - lo <= 2^-bits."""
    scale = 1 << bits
    s = math.isqrt(q * scale * scale)
    lo = Fraction(s, scale)
    hi = lo if s * s == q * scale * scale else Fraction(s + 1, scale)
    return lo, hi


@dataclass(frozen=True)
class SqrtExpr:
    """The number ``fn(sqrt(radicand))`` for a rational ``fn`` increasing on [0, inf)."""

    radicand: int
    fn: Callable[[Fraction], Fraction] = field(compare=False)
    text: str = ""

    def enclosure(self, bits: int = 96) -> tuple[Fraction, Fraction]:
        lo, hi = sqrt_enclosure(self.radicand, bits)
        return self.fn(lo), self.fn(hi)

    def __float__(self) -> float:
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def compare(self, x) -> int:
        """Sign of (self - x); 0 only when exact equality is certain."""
        x = Fraction(x)
        for bits in (64, 256, 1024):
            lo, hi = self.enclosure(bits)
            if lo > x:
                return 1
            if hi < x:
                return -1
            if lo == hi == x:
                return 0
        raise ArithmeticError(f"cannot separate {self.text} from {x}")

    def __str__(self) -> str:
        return self.text or f"f(sqrt({self.radicand}))"


Number = Union[int, Fraction, float, SqrtExpr]


def cmp(a: Number, b: Number) -> int:
    """Exact three-way comparison for ints, Fractions and SqrtExprs."""
    if isinstance(a, SqrtExpr):
        return a.compare(b)
    if isinstance(b, SqrtExpr):
        return -b.compare(a)
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def largest_int_below(value: Number, strict: bool) -> int:
    """Largest integer size guaranteed by an upper bound (``< value`` when strict)."""
    if isinstance(value, SqrtExpr):
        lo, hi = value.enclosure(256)
        fl = math.floor(lo)
        if math.floor(hi) != fl:
            return fl
        return fl - 1 if strict and value.compare(fl) == 0 else fl
    v = Fraction(value)
    fl = math.floor(v)
    return fl - 1 if strict and fl == v else fl


def fmt(value: Optional[Number]) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, SqrtExpr):
        return f"{float(value):.12g}"
    if isinstance(value, float):
        return f"{value:.12g}"
    v = Fraction(value)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ------------------------------------------------------------------ bounds

def lower_bound(q: int, n: int, r: int) -> Fraction:
    """(q^(r+1) / (q^r + q - 1))^n, the minimum size of any rank-r Kakeya set."""
    if not n >= r >= 1:
        raise ValueError(f"need n >= r >= 1, got n={n}, r={r}")
    return Fraction(q ** (r + 1), q**r + q - 1) ** n


def lower_bound_ceiling(q: int, n: int, r: int) -> int:
    if r == 0:
        return 1
    return math.ceil(lower_bound(q, n, r))


def simple_lower_bound(q: int, n: int, r: int) -> tuple[Fraction, bool]:
    """(1 - n(q-1)q^-r) q^n and whether it is vacuous (<= 0)."""
    value = (1 - Fraction(n * (q - 1), q**r)) * q**n
    return value, value <= 0


def delta_q(q: int) -> Fraction:
    if q % 2 == 0:
        return Fraction(1)
    if q == 3:
        return Fraction(5, 3)
    return Fraction(3)


def explicit_rank1_bound(q: int, n: int) -> Fraction:
    if q % 2:
        return Fraction(q * ((q + 1) // 2) ** (n - 1) + q ** (n - 1))
    return Fraction((q - 1) * (q // 2) ** (n - 1) + q ** (n - 1))


def rank_r_block_bound(q: int, r: int) -> Fraction:
    """Size bound for the rank-r set in F_q^(r+1) obtained by lifting a planar set."""
    if q == 3:
        return Fraction(3 ** (r + 1) - 2)
    cut = q - 3 if q % 2 else q - 1
    return (1 - Fraction(cut, 2 * q**r)) * q ** (r + 1)


def final_upper_bound(q: int, n: int, r: int) -> Fraction:
    k = n // (r + 1)
    return (1 - (q - delta_q(q)) / (2 * Fraction(q) ** r)) ** k * q**n


def quadratic_branch(q: int) -> str:
    p, m = factor_prime_power(q)
    if p != 2:
        return "odd"
    return "even-power-of-2" if m % 2 == 0 else "odd-power-of-2"


def quadratic_bound(q: int, n: int) -> Number:
    """Strict upper bound of the value-set construction for rank 1."""
    branch = quadratic_branch(q)
    if branch == "odd":
        return 2 * (1 + Fraction(1, q - 1)) * Fraction(q + 1, 2) ** n
    if branch == "even-power-of-2":
        return Fraction(3, 2) * (1 + Fraction(1, q - 1)) * Fraction(2 * q + 1, 3) ** n
    return SqrtExpr(
        q,
        lambda s, q=q, n=n: Fraction(3, 2) * (Fraction(2, 3) * (q + s + 1)) ** n,
        f"3/2*(2({q}+sqrt({q})+1)/3)^{n}",
    )


def universal_size(q: int, n: int, k: int) -> int:
    """(1 - (1 - q^-floor(n/k))^k) q^n, an integer."""
    m = n // k
    return q**n - (q**m - 1) ** k * q ** (n - m * k)


def kakeya_universal_bound(q: int, n: int, r: int) -> int:
    return universal_size(q, n, q**r)


def universal_exponent_bound(q: int, n: int, r: int) -> float:
    return float(q) ** (n * (1 - q ** (-r)) + r + 1)


def universal_refined_bound(q: int, n: int, r: int) -> int:
    return q ** (n - n // q**r + r)


def prop_qodd_bound(q: int) -> SqrtExpr:
    return SqrtExpr(q, lambda s, q=q: Fraction(2, 3) * (q + s + 1), f"2({q}+sqrt({q})+1)/3")


def prop_qodd_n_bound(q: int) -> SqrtExpr:
    # q/2 - sqrt(q) - 5/2 is decreasing in sqrt(q); negate to keep fn increasing
    return SqrtExpr(q, lambda s, q=q: -(Fraction(q, 2) - s - Fraction(5, 2)), f"-({q}/2-sqrt({q})-5/2)")


# ----------------------------------------------------------------- reports

@dataclass
class BoundRow:
    bound_id: str
    kind: str  # "lower" | "upper"
    value: Optional[Number]
    exact: bool = True
    applicable: bool = True
    strict: bool = False
    vacuous: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "kind": self.kind,
            "value": fmt(self.value),
            "exact": self.exact,
            "applicable": self.applicable,
            "strict": self.strict,
            "vacuous": self.vacuous,
            "note": self.note,
        }


def _upper_vacuous(value: Number, q: int, n: int) -> bool:
    if isinstance(value, float):
        return value >= q**n
    return cmp(value, q**n) >= 0


def upper_bounds(q: int, n: int, r: int) -> list[BoundRow]:
    """Every upper bound row for (q, n, r); inapplicable rows are kept with value None."""
    factor_prime_power(q)
    if not n >= r >= 1:
        raise ValueError(f"need n >= r >= 1, got n={n}, r={r}")
    rows: list[BoundRow] = []

    def add(bound_id, value, applicable=True, exact=True, strict=False, note=""):
        vac = applicable and value is not None and _upper_vacuous(value, q, n)
        rows.append(BoundRow(bound_id, "upper", value if applicable else None, exact, applicable, strict, vac, note))

    parity = "odd" if q % 2 else "even"
    add("explicit-rank1", explicit_rank1_bound(q, n) if r == 1 else None, r == 1,
        note=f"{parity} q; rank 1 only")
    add("rank-r-block", rank_r_block_bound(q, r) if n == r + 1 else None, n == r + 1,
        note="n = r+1 only" + ("; q=3 uses the 7-point planar set" if q == 3 else ""))
    add("final-upper", final_upper_bound(q, n, r), note=f"delta_q={fmt(delta_q(q))}")
    branch = quadratic_branch(q)
    add("quadratic", quadratic_bound(q, n) if r == 1 else None, r == 1,
        exact=branch != "odd-power-of-2", strict=True, note=f"{branch}; rank 1 only")
    add("universal", Fraction(kakeya_universal_bound(q, n, r)), note=f"k=q^r={q**r}")
    add("universal-real-exponent", universal_exponent_bound(q, n, r), exact=False, strict=True,
        note="real exponent, evaluated in floating point")
    add("universal-refined", Fraction(universal_refined_bound(q, n, r)))
    add("trivial", Fraction(q**n))
    rows.append(BoundRow("relaxed-shape", "upper", None, False, True, False, False,
                         "q^n - Omega(q^(n-(r-1))); implicit constants, shape only"))
    rows.append(BoundRow("random-rotations", "upper", None, False, r == 1, True, False,
                         "(q/2^(2/q))^(n+O(sqrt(n ln q/q))); asymptotic, shape only"))
    return rows


@dataclass
class BoundReport:
    q: int
    n: int
    r: int
    lower: Fraction
    lower_simple: Fraction
    lower_simple_vacuous: bool
    rows: list[BoundRow]
    construction_sizes: dict[str, Optional[int]]
    construction_sources: dict[str, str]
    best_lower_ceiling: int
    best_upper: int
    best_upper_source: str
    universal_beats_final: bool

    def row(self, bound_id: str) -> BoundRow:
        return next(r for r in self.rows if r.bound_id == bound_id)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "r": self.r,
            "lower": fmt(self.lower),
            "lower_simple": fmt(self.lower_simple),
            "lower_simple_vacuous": self.lower_simple_vacuous,
            "upper": [row.to_dict() for row in self.rows],
            "constructions": {
                k: {"size": v, "source": self.construction_sources.get(k)}
                for k, v in sorted(self.construction_sizes.items())
            },
            "best_lower_ceiling": self.best_lower_ceiling,
            "best_upper": self.best_upper,
            "best_upper_source": self.best_upper_source,
            "universal_beats_final": self.universal_beats_final,
        }


def construction_sizes(q: int, n: int, r: int, build_limit: int = 4096) -> tuple[dict, dict]:
    """Sizes of the applicable constructions, built when q^n <= build_limit."""
    from . import constructions as C
    from .gf import field_new

    F = field_new(q)
    build = q**n <= build_limit
    sizes: dict[str, Optional[int]] = {}
    sources: dict[str, str] = {}

    def record(cid, fn_build, fn_formula=None):
        if build:
            sizes[cid] = fn_build().set.card
            sources[cid] = "built"
        elif fn_formula is not None:
            sizes[cid] = fn_formula()
            sources[cid] = "formula"

    if r == 1:
        record("missing-digit", lambda: C.missing_digit(n, F), lambda: (q - 1) ** n + 2**n - 1)
        if q >= 3:
            record("quadratic", lambda: C.quadratic_rank1(n, F))
    record("final-upper", lambda: C.final_upper(n, r, F), lambda: C.final_upper_size(n, r, F))
    record("kakeya-universal", lambda: C.kakeya_from_universal(n, r, F),
           lambda: kakeya_universal_bound(q, n, r))
    return sizes, sources


def bound_report(q: int, n: int, r: int, build_limit: int = 4096) -> BoundReport:
    lower = lower_bound(q, n, r)
    cor, cor_vac = simple_lower_bound(q, n, r)
    rows = upper_bounds(q, n, r)
    sizes, sources = construction_sizes(q, n, r, build_limit)

    candidates: list[tuple[int, str]] = []
    for cid, size in sizes.items():
        if size is not None:
            candidates.append((size, f"construction:{cid}"))
    for row in rows:
        if row.applicable and row.value is not None and not isinstance(row.value, float):
            candidates.append((largest_int_below(row.value, row.strict), f"bound:{row.bound_id}"))
    best_upper, source = min(candidates)
    universal_beats = cmp(row_value(rows, "universal"), row_value(rows, "final-upper")) < 0
    return BoundReport(
        q, n, r, lower, cor, cor_vac, rows, sizes, sources,
        math.ceil(lower), best_upper, source, universal_beats,
    )


def row_value(rows: list[BoundRow], bound_id: str):
    return next(r.value for r in rows if r.bound_id == bound_id)


def _is_prime_power(q: int) -> bool:
    try:
        factor_prime_power(q)
    except ValueError:
        return False
    return True


def atlas(qs, ns, rs, build_limit: int = 4096) -> list[BoundReport]:
    """One report per valid (q, n, r) with n >= r >= 1, in sorted order."""
    out = []
    for q in sorted(set(qs)):
        if not _is_prime_power(q):
            continue
        for n in sorted(set(ns)):
            for r in sorted(set(rs)):
                if n >= r >= 1:
                    out.append(bound_report(q, n, r, build_limit))
    return out


CSV_COLUMNS = ["schema", "q", "n", "r", "bound_id", "kind", "value", "exact",
               "applicable", "strict", "vacuous", "note"]


def atlas_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        head = [ATLAS_SCHEMA, rep.q, rep.n, rep.r]
        w.writerow(head + ["lower", "lower", fmt(rep.lower), True, True, False, False, ""])
        w.writerow(head + ["lower-simple", "lower", fmt(rep.lower_simple), True, True, False,
                           rep.lower_simple_vacuous, ""])
        for row in rep.rows:
            d = row.to_dict()
            w.writerow(head + [d[c] for c in CSV_COLUMNS[4:]])
        for cid, size in sorted(rep.construction_sizes.items()):
            w.writerow(head + [f"construction:{cid}", "size", size, True, True, False, False,
                               rep.construction_sources[cid]])
        w.writerow(head + ["best-lower-ceiling", "lower", rep.best_lower_ceiling, True, True, False, False, ""])
        w.writerow(head + ["best-upper", "upper", rep.best_upper, True, True, False, False,
                           rep.best_upper_source])
        w.writerow(head + ["universal-beats-final", "flag", rep.universal_beats_final, True, True,
                           False, False, ""])
    return buf.getvalue()


def atlas_json(reports: list[BoundReport]) -> str:
    return json.dumps({"schema": ATLAS_SCHEMA, "rows": [r.to_dict() for r in reports]},
                      indent=2, sort_keys=True) + "\n"
