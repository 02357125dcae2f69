from fractions import Fraction

import pytest

from lamenum.counting import (
    count_family,
    count_lambda_all,
    export_csv,
    load_table,
    motzkin_exact_unary_series_via_pq,
    pq_polynomial,
    save_table,
)
from lamenum.errors import CorruptTableError, ResourceLimitError
from lamenum.terms import Family

from oracles import catalan, count_by_validator, motzkin_series

CLOSED_SERIES = [1, 2, 4, 13, 42, 139, 506, 1915, 7558]  # n = 2..10


def test_closed_lambda_series():
    t = count_lambda_all(10)
    assert [t.count(n) for n in range(2, 11)] == CLOSED_SERIES


def test_context_rows_base_case():
    t = count_lambda_all(12)
    for d in range(0, 13):
        assert t.rows[d][1] == d


def test_closed_count_11_vs_exhaustive():
    from oracles import closed_terms

    t = count_lambda_all(11)
    assert t.count(11) == len(closed_terms(11))


def test_motzkin_series_against_closed_form():
    t = count_family(Family.motzkin(), 20)
    oracle = motzkin_series(20)
    assert [t.count(n) for n in range(1, 21)] == oracle[1:]
    assert [t.count(n) for n in range(1, 8)] == [1, 1, 2, 4, 9, 21, 51]


def test_exact_unary_one_is_shifted_catalan():
    t = count_family(Family.lambda_exact_unary(1), 12)
    assert [t.count(n) for n in (2, 4, 6, 8)] == [1, 1, 2, 5]
    for n in range(2, 13, 2):
        assert t.count(n) == catalan(n // 2 - 1)


def test_unary_height_equals_unrestricted_below_k():
    # the bound is inactive while n <= k (heights stay below the size)
    full = count_lambda_all(12)
    for k in (4, 7, 11):
        t = count_family(Family.lambda_unary_height(k), 12)
        for n in range(1, k + 1):
            assert t.count(n) == full.count(n)


def test_exact_unary_partition_of_closed_terms():
    n_max = 30
    full = count_lambda_all(n_max)
    master = count_family(Family.lambda_exact_unary(n_max - 1), n_max)
    for n in range(2, n_max + 1):
        total = sum(
            master.rows[(q, 0)][n] for q in range(n_max) if (q, 0) in master.rows
        )
        assert total == full.count(n)


def test_unary_height_partition_telescopes():
    n = 14
    full = count_lambda_all(n)
    prev = 0
    total = 0
    for k in range(1, n):
        cur = count_family(Family.lambda_unary_height(k), n).count(n)
        total += cur - prev
        prev = cur
    assert total == full.count(n)


def test_parity_zeroes():
    for q in (1, 2, 3):
        t = count_family(Family.motzkin_exact_unary(q), 15)
        s = count_family(Family.lambda_exact_unary(q), 15)
        for n in range(1, 16):
            if (n - q) % 2 == 0:
                assert t.count(n) == 0
                assert s.count(n) == 0


def test_monotone_inclusion_chain():
    n = 16
    full = count_lambda_all(n)
    for k in (1, 2, 3):
        h = count_family(Family.lambda_unary_height(k), n)
        g = count_family(Family.lambda_binding_length(k), n)
        for m in range(1, n + 1):
            assert h.count(m) <= g.count(m) <= full.count(m)


def test_oracle_equivalence_all_families_small():
    # deeper sweep lives in the acceptance suite; spot-check here
    fams = [
        Family.lambda_all(),
        Family.motzkin(),
        Family.lambda_exact_unary(2),
        Family.lambda_at_most_unary(2),
        Family.lambda_unary_height(1),
        Family.lambda_binding_length(2),
        Family.motzkin_exact_unary(1),
        Family.motzkin_height_exact(1),
        Family.motzkin_height_at_most(2),
    ]
    for fam in fams:
        table = count_family(fam, 9)
        for n in range(1, 10):
            assert table.count(n) == count_by_validator(fam, n), (fam.label(), n)


def test_pq_polynomial_basics():
    assert pq_polynomial(2).coefficients == (1,)
    assert pq_polynomial(3).coefficients == (1,)
    with pytest.raises(ValueError):
        pq_polynomial(1)


def test_pq_at_quarter_is_scaled_catalan():
    for q in range(2, 16):
        assert pq_polynomial(q)(Fraction(1, 4)) == Fraction(catalan(q - 1), 2 ** (q - 2))


def test_mq_closed_representation_matches_dp():
    for q in range(2, 6):
        via_pq = motzkin_exact_unary_series_via_pq(q, 25)
        dp = count_family(Family.motzkin_exact_unary(q), 25)
        assert via_pq[1:] == [dp.count(n) for n in range(1, 26)]


def test_vacuous_bounds_alias_unrestricted():
    full = count_lambda_all(9)
    for fam in (Family.lambda_unary_height(50), Family.lambda_binding_length(9)):
        t = count_family(fam, 9)
        assert t.note
        assert [t.count(n) for n in range(1, 10)] == [full.count(n) for n in range(1, 10)]
    t = count_family(Family.motzkin_exact_unary(40), 9)
    assert t.note and all(t.count(n) == 0 for n in range(1, 10))


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        count_lambda_all(100, limit=50)
    with pytest.raises(ResourceLimitError):
        count_family(Family.motzkin(), 100, limit=50)


def test_save_load_round_trip(tmp_path):
    tables = [count_lambda_all(50), count_family(Family.lambda_exact_unary(3), 15)]
    for i, t in enumerate(tables):
        for name in (f"t{i}.json", f"t{i}.json.gz"):
            path = tmp_path / name
            save_table(t, path)
            loaded = load_table(path)
            assert loaded.family == t.family
            assert loaded.max_size == t.max_size
            assert loaded.rows == t.rows
            assert loaded.closed == t.closed


def test_loaded_table_passes_inclusion_invariant(tmp_path):
    h = count_family(Family.lambda_unary_height(2), 12)
    g = count_family(Family.lambda_binding_length(2), 12)
    full = count_lambda_all(12)
    ph, pg = tmp_path / "h.json", tmp_path / "g.json.gz"
    save_table(h, ph)
    save_table(g, pg)
    h2, g2 = load_table(ph), load_table(pg)
    for n in range(1, 13):
        assert h2.count(n) <= g2.count(n) <= full.count(n)


def test_load_rejects_truncated(tmp_path):
    t = count_lambda_all(10)
    path = tmp_path / "t.json"
    save_table(t, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(CorruptTableError):
        load_table(path)


def test_load_rejects_bad_version(tmp_path):
    path = tmp_path / "t.json"
    path.write_text('{"version": 99, "family": "motzkin", "max_size": 3, "rows": [], "closed": []}')
    with pytest.raises(CorruptTableError):
        load_table(path)


def test_csv_export_header_and_rows():
    t = count_family(Family.lambda_unary_height(2), 6)
    csv = export_csv(t)
    lines = csv.strip().split("\n")
    assert lines[0] == "family,params,n,count"
    assert lines[1] == "lambda-unary-height,2,1,0"
    assert lines[2] == "lambda-unary-height,2,2,1"
