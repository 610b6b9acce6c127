from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shulga.engine import DecompositionResult, StopReason, decompose
from shulga.growth import (
    ScanFailure,
    audit,
    c_drop_index,
    enumerate_prefixes,
    enumerate_prefixes_brute,
    find_c_drop,
    scan,
)
from shulga.intervals import feasible_region
from shulga.oracle import oracle_decompose
from shulga.rational import QuadraticIrrational

BIG = F(9974074083712426, 149649898029019789)


# --- audit ---------------------------------------------------------------

def test_audit_paper_example_passes_without_monotone_c():
    a = F(28244, 141973)
    rep = audit(a, decompose(a))
    assert rep.ok
    assert rep.stats["c_monotone"] is False
    assert rep.stats["c_drop_indices"] == [2]


def test_audit_tight_example():
    a = F(18769, 22230)
    r = decompose(a)
    rep = audit(a, r)
    assert rep.ok
    assert r.b[1] == r.b[0] and r.b[2] == 3 and r.c[1] == r.b[1] + 1


def test_audit_large_example():
    rep = audit(BIG, decompose(BIG))
    assert rep.ok and 4 in rep.stats["c_drop_indices"]


def test_audit_reports_failures_with_witness():
    a = F(18769, 22230)
    r = decompose(a)
    forged = DecompositionResult(a, (2, 2, 3, 6), r.c, True, 4, StopReason.TERMINATED, r.beta, r.gamma)
    rep = audit(a, forged)
    assert not rep.ok
    names = {c.name for c in rep.failures()}
    assert {"sum_exact", "digit_consistency"} <= names
    assert rep["digit_consistency"].index == 4
    assert rep["sum_exact"].witness["alpha"] == "18769/22230"
    flags = rep.flags()
    assert flags["sum_exact"]["status"] == "fail" and flags["b_linear"] == {"status": "pass"}


def test_audit_flags_strictness_violation():
    # a prefix with c_2 = b_2 breaks strictness; hand it to the auditor directly
    a = F(1, 2)
    forged = DecompositionResult(a, (3, 4), (6, 4), False, 2, StopReason.STEP_CAP)
    rep = audit(a, forged)
    assert rep["strict_c_gt_b"].index == 2 and not rep["strict_c_gt_b"].ok


@pytest.mark.parametrize("x", [
    QuadraticIrrational.of(-1, 2, 1),
    QuadraticIrrational.of(-1, 5, 2),
    QuadraticIrrational.of(-1, 3, 1),
])
def test_surd_audit_to_depth(x):
    r = decompose(x, 25)
    rep = audit(x, r)
    assert rep.ok
    assert rep["ratio_le_q"].status == "n/a" and rep["sum_exact"].status == "n/a"
    # running max of c grows, the evidence for divergence
    assert rep.stats["max_c_running"][-1] > rep.stats["max_c_running"][5]


@given(st.integers(2, 20000).flatmap(lambda q: st.tuples(st.integers(0, q), st.just(q))))
def test_audit_passes_on_random_rationals(pq):
    a = F(*pq)
    r = decompose(a)
    assert audit(a, r).ok


# --- oracle --------------------------------------------------------------

def test_oracle_examples():
    assert oracle_decompose(F(28244, 141973)) == ((6, 27), (30, 29), True)
    assert oracle_decompose(F(531, 629)) == ((2, 2, 3), (2, 3, 5), True)
    assert oracle_decompose(F(1)) == ((2,), (2,), True)
    assert oracle_decompose(F(0)) == ((), (), True)
    with pytest.raises(ValueError):
        oracle_decompose(F(3, 2))


def test_oracle_equivalence_small_q():
    for q in range(1, 151):
        for p in range(q + 1):
            if gcd(p, q) == 1:
                r = decompose(F(p, q))
                assert (r.b, r.c, r.terminated) == oracle_decompose(F(p, q)), (p, q)


@given(st.integers(1, 10**15).flatmap(lambda q: st.tuples(st.integers(0, q), st.just(q))))
def test_oracle_equivalence_random(pq):
    r = decompose(F(*pq))
    assert (r.b, r.c, r.terminated) == oracle_decompose(F(*pq))


# --- scan ----------------------------------------------------------------

def test_scan_small():
    recs, summary = scan(35)
    r = [x for x in recs if (x.p, x.q) == (29, 35)][0]
    assert r.terminated and r.steps == 2
    d = decompose(F(29, 35))
    assert audit(F(29, 35), d).ok
    # 2/5 + 3/7 = 29/35, yet the algorithm's digits differ: c_1 = a_1(23/70) = 3
    assert (d.b, d.c) == ((2, 53), (3, 1248))
    assert feasible_region(((2, 2), (2, 3))).contains(F(29, 35)) is False
    assert [(x.q, x.p) for x in recs] == sorted((x.q, x.p) for x in recs)
    assert summary.count == len(recs) == 1 + sum(1 for q in range(1, 36) for p in range(1, q + 1) if gcd(p, q) == 1)
    assert summary.to_dict()["max_steps"] == str(max(x.steps for x in recs))


def test_scan_cross_check_and_parallel_determinism():
    a, sa = scan(120, cross_check=True)
    b, sb = scan(120, jobs=2)
    assert a == b and sa.to_dict() == sb.to_dict()


def test_scan_record_fields():
    recs, summary = scan(377, 377)
    r = [x for x in recs if x.p == 75][0]
    assert not r.c_monotone and r.c_drop_indices == [2] and r.first_c_drop == 2
    # gamma = 1242910/37331671 and beta = 213235/1287299
    assert r.ratio_final == F(37331671, 1287299)
    assert r.csv_row()[:4] == ["75", "377", "4", "true"]
    assert summary.first_c_drop == (75, 377)


def test_scan_failure_on_cap():
    with pytest.raises(ScanFailure) as info:
        scan(30, max_steps=2)
    assert info.value.reason.startswith("step cap")
    _, summary = scan(30, max_steps=2, raise_on_failure=False)
    assert summary.count > 0


def test_scan_rejects_bad_range():
    with pytest.raises(ValueError):
        scan(0)


def test_trend_table_shape():
    _, s = scan(500)
    rows = s.trend()
    assert rows[-1]["q_upto"] == "500"
    assert all(int(r["max_steps"]) > 0 for r in rows)


# --- c-drops -------------------------------------------------------------

def test_find_c_drop():
    assert find_c_drop(2, 10) is None
    assert find_c_drop(2, 400) == F(75, 377)
    assert c_drop_index(F(28244, 141973), 2) == 2
    assert c_drop_index(BIG, 4) == 4
    assert c_drop_index(F(1, 2)) is None
    with pytest.raises(ValueError):
        find_c_drop(1, 10)


# --- enumeration ---------------------------------------------------------

def test_enumerate_examples():
    assert enumerate_prefixes(6, 7) == []
    assert ((2, 2), (2,)) in enumerate_prefixes(2, 2)
    assert enumerate_prefixes(3, 2) == []
    with pytest.raises(ValueError):
        enumerate_prefixes(1, 5)


def test_enumerate_tightness_of_b6():
    found = enumerate_prefixes(6, 8)
    assert found and all(b[-1] == 8 for b, _ in found)


@pytest.mark.parametrize("depth, b_cap, c_cap", [(2, 6, 60), (3, 4, 30)])
def test_enumerate_matches_brute_force(depth, b_cap, c_cap):
    assert enumerate_prefixes(depth, b_cap) == enumerate_prefixes_brute(depth, b_cap, c_cap)


def test_enumerate_soundness_and_completeness_against_runs():
    found = set(enumerate_prefixes(4, 6))
    for b, c in found:
        assert feasible_region((b, c)) is not None
    # every run whose b_4 <= 6 must appear
    seen = 0
    for q in range(2, 1500):
        for p in range(1, q):
            r = decompose(F(p, q))
            if r.steps >= 4 and r.b[3] <= 6:
                assert (r.b[:4], r.c[:3]) in found
                seen += 1
    assert seen > 0


def test_enumerate_parallel_same():
    assert enumerate_prefixes(5, 7, jobs=2) == enumerate_prefixes(5, 7)
