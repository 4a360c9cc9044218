import csv
import io
import json
import math
from fractions import Fraction

import pytest

from kakeya import bounds as B
from kakeya import constructions as C
from kakeya.gf import GF

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_lower_bound_examples():
    assert B.lower_bound(2, 2, 1) == Fraction(16, 9)
    assert B.lower_bound(3, 2, 1) == Fraction(81, 25)
    assert B.lower_bound(3, 1, 1) == Fraction(9, 5)
    assert B.lower_bound_ceiling(3, 2, 1) == 4
    with pytest.raises(ValueError):
        B.lower_bound(3, 1, 2)


def test_simple_lower_bound_and_vacuity():
    value, vac = B.simple_lower_bound(3, 2, 1)
    assert value == -3 and vac
    value, vac = B.simple_lower_bound(2, 2, 3)
    assert value == Fraction(4 * 6, 8) and not vac
    # vacuous exactly when n >= (1 + 1/(q-1)) q^(r-1)
    for q in (2, 3, 4, 5):
        for r in (1, 2, 3):
            for n in range(r, 12):
                _, vac = B.simple_lower_bound(q, n, r)
                assert vac == (n >= (1 + Fraction(1, q - 1)) * q ** (r - 1))


def test_lower_bound_factor_monotone_in_r():
    for q in PRIME_POWERS:
        for r in range(1, 9):
            assert Fraction(q ** (r + 2), q ** (r + 1) + q - 1) >= Fraction(q ** (r + 1), q**r + q - 1)


def test_delta_q():
    assert [B.delta_q(q) for q in (2, 3, 4, 5, 9)] == [1, Fraction(5, 3), 1, 3, 3]


def test_upper_bound_examples():
    assert B.row_value(B.upper_bounds(3, 2, 1), "final-upper") == 7
    assert B.row_value(B.upper_bounds(3, 2, 1), "rank-r-block") == 7
    assert B.row_value(B.upper_bounds(2, 4, 2), "universal") == 15
    assert B.row_value(B.upper_bounds(5, 2, 1), "quadratic") == Fraction(45, 2)
    assert B.explicit_rank1_bound(5, 2) == 5 * 3 + 5
    assert B.rank_r_block_bound(3, 3) == 79


def test_quadratic_odd_bound_against_value_set_sum():
    # with |I_f(t)| = (q+1)/2 for all t the value-set sum sits strictly below the closed form
    for q in (3, 5, 7, 9):
        s = (q + 1) // 2
        for n in range(1, 5):
            total = q * (s**n - 1) // (s - 1)
            assert total < B.quadratic_bound(q, n)
            assert C.value_set_sum(C.square(GF(q)), n) == total


def test_explicit_rank1_matches_value_set_sum_at_n2():
    for q in (3, 5, 7, 9):
        s = (q + 1) // 2
        assert q * (s**2 - 1) // (s - 1) == B.explicit_rank1_bound(q, 2)


def test_sqrt_expr_comparisons():
    e = B.prop_qodd_bound(8)  # 2(8 + sqrt 8 + 1)/3 ~ 7.885
    assert B.cmp(7, e) < 0 and B.cmp(8, e) > 0
    assert float(e) == pytest.approx(2 * (9 + math.sqrt(8)) / 3)
    assert B.largest_int_below(e, strict=False) == 7
    assert B.largest_int_below(Fraction(45, 2), strict=True) == 22
    assert B.largest_int_below(7, strict=True) == 6
    n_bound = B.prop_qodd_n_bound(32)  # -(16 - sqrt 32 - 5/2)
    assert float(n_bound) == pytest.approx(-(16 - math.sqrt(32) - 2.5))
    q4 = B.quadratic_bound(8, 2)
    assert B.cmp(46, q4) < 0 < B.cmp(94, q4)


def test_fmt():
    assert B.fmt(Fraction(81, 25)) == "81/25"
    assert B.fmt(Fraction(7)) == "7"
    assert B.fmt(None) is None


def test_universal_sizes():
    assert B.universal_size(2, 4, 2) == 7
    assert B.universal_size(3, 2, 3) == 9  # k > n: whole space
    assert B.universal_refined_bound(2, 4, 2) == 2 ** (4 - 1 + 2)


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (5, 2, 1), (3, 1, 1), (3, 2, 1), (4, 3, 1), (2, 3, 1)])
def test_report_consistency(q, n, r):
    rep = B.bound_report(q, n, r)
    assert rep.best_lower_ceiling <= rep.best_upper
    for cid, size in rep.construction_sizes.items():
        assert B.cmp(rep.lower, size) <= 0, cid
    for row in rep.rows:
        if row.applicable and row.value is not None:
            assert row.vacuous == (B.cmp(row.value, q**n) >= 0 if not isinstance(row.value, float) else row.value >= q**n)


def test_universal_versus_final_upper():
    # at (2, 4, 2) the product construction gives 14 < 15; universal wins from (2, 8, 2) on
    rep = B.bound_report(2, 4, 2)
    assert (rep.construction_sizes["final-upper"], rep.construction_sizes["kakeya-universal"]) == (14, 15)
    assert not rep.universal_beats_final
    assert B.kakeya_universal_bound(2, 8, 2) == 175 < B.final_upper_bound(2, 8, 2) == 196
    assert B.bound_report(2, 8, 2, build_limit=0).universal_beats_final


def test_atlas_examples():
    rep = B.bound_report(5, 2, 1)
    assert rep.construction_sizes["missing-digit"] == 19
    assert rep.best_upper == min(19, 22, rep.construction_sizes["quadratic"])
    assert B.bound_report(3, 1, 1).best_upper == 3
    rep = B.bound_report(3, 2, 1)
    assert (rep.lower, rep.best_upper) == (Fraction(81, 25), 7)


def test_atlas_serialization_is_deterministic():
    reps = B.atlas([2, 3, 6], [1, 2, 3], [1, 2])
    assert {(r.q, r.n, r.r) for r in reps} == {(q, n, r) for q in (2, 3) for n in (1, 2, 3) for r in (1, 2) if n >= r}
    text = B.atlas_csv(reps)
    assert text == B.atlas_csv(B.atlas([2, 3, 6], [1, 2, 3], [1, 2]))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert all(row["schema"] == "bounds-atlas v1" for row in rows)
    data = json.loads(B.atlas_json(reps))
    assert data["schema"] == "bounds-atlas v1" and len(data["rows"]) == len(reps)


def test_shape_only_rows_carry_no_value():
    rows = {r.bound_id: r for r in B.upper_bounds(3, 3, 1)}
    assert rows["relaxed-shape"].value is None and not rows["relaxed-shape"].exact
    assert rows["random-rotations"].value is None
    assert not rows["universal-real-exponent"].exact
