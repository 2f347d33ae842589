import json
from fractions import Fraction

import pytest

from stsurf import census
from stsurf.origami import from_key, stratum

# records per (stratum, n); n <= 5 is cross-checked against the brute-force oracle below
TOTALS = {
    "H2": {3: 3, 4: 9, 5: 27, 6: 45, 7: 90, 8: 135, 9: 201, 10: 297},
    "H11": {3: 0, 4: 10, 5: 24, 6: 88, 7: 160, 8: 366, 9: 568, 10: 1032},
}


def test_partitions():
    assert list(census.partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_cycle_type_representative():
    assert list(census.cycle_type_representative((3, 2))) == [1, 2, 0, 4, 3]


@pytest.mark.parametrize("stratum_tag", ["H2", "H11"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_search_agrees_with_naive_enumeration(stratum_tag, n):
    assert census.enumerate_keys(n, stratum_tag) == census.naive_keys(n, stratum_tag)


def test_totals(census_records):
    for (s, n), recs in census_records.items():
        assert len(recs) == TOTALS[s][n], (s, n)


def test_records_land_in_their_stratum(census_records):
    for (s, n), recs in census_records.items():
        for r in recs[:40]:
            assert stratum(r.origami).tag == s and r.origami.n == n


def test_bound_is_enforced():
    with pytest.raises(ValueError):
        census.enumerate_keys(13, "H2")
    with pytest.raises(ValueError):
        census.enumerate_keys(5, "H3")


def test_automorphisms_by_degree(census_records):
    for recs in census_records.values():
        for r in recs:
            if r.invariants.reduced and r.invariants.d >= 3:
                assert r.automorphisms == 1
            elif r.invariants.reduced and r.invariants.d == 2:
                assert r.automorphisms == 2


def test_weighted_counts_only_differ_at_degree_two(census_table):
    for key, c in census_table.buckets.items():
        if key[1] >= 3:
            assert census_table.value(key) == c
        else:
            assert census_table.value(key) == Fraction(c, 2)


def test_round_trip(tmp_path):
    recs = census.enumerate(5, "H2")
    path = census.write_census(recs, tmp_path, "H2", 5, {"command": "test"})
    rows = census.read_census(tmp_path, "H2", 5)
    assert rows == [r.to_json() for r in recs]
    assert path.read_text().count("\n") == 27


def test_incomplete_or_stale_cache_is_ignored(tmp_path):
    recs = census.enumerate(4, "H11")
    path = census.write_census(recs, tmp_path, "H11", 4)
    man = path.with_suffix(".manifest.json")
    meta = json.loads(man.read_text())
    man.write_text(json.dumps({**meta, "complete": False}))
    assert census.read_census(tmp_path, "H11", 4) is None
    man.write_text(json.dumps({**meta, "enumerator": "old"}))
    assert census.read_census(tmp_path, "H11", 4) is None
    man.unlink()
    assert census.read_census(tmp_path, "H11", 4) is None


def test_every_bucket_matches(census_table):
    rows = census.verify(census_table) + census.kani_rows(census_table)
    bad = [r for r in rows if not r.match]
    assert not bad


def test_corrupted_counts_are_flagged(census_table):
    buckets = dict(census_table.buckets)
    key = ("H11", 5, 1, 1)
    buckets[key] += 1
    t = census.CountTable(buckets, census_table.totals, census_table.weighted)
    assert any(not r.match for r in census.verify(t))


def test_even_degree_rows_are_conjectural():
    for d, m, eps, exp, src in census.expected_buckets("H11", 8):
        assert src == ("conjecture" if d % 2 == 0 else "formula")


def test_csv_layout():
    row = census.VerifyRow("H11", 5, 1, 1, Fraction(24), 24, "formula", True)
    text = census.rows_to_csv([row])
    assert text.splitlines() == ["stratum,d,M,epsilon,count,source,match",
                                 "H11,5,1,1,24,census,True", "H11,5,1,1,24,formula,True"]
