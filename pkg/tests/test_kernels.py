"""The compiled kernel and the pure-Python twin must agree bit for bit."""
import random

import pytest

from shulga import _pykernels as py
from shulga import kernels

cy = pytest.importorskip("shulga._kernels")


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_failed_checks_names():
    assert kernels.failed_checks(0) == []
    assert kernels.failed_checks(1 | 1 << 10) == ["sum_exact", "region_membership"]
    assert kernels.failed_checks(-1) == ["undefined_digit"]


@pytest.mark.parametrize("q", [1, 2, 35, 377, 1000, 2999])
def test_scan_equivalence(q):
    assert cy.scan_q(q, 200) == py.scan_q(q, 200)


def test_big_values_take_gmp_path():
    p, q = 9974074083712426, 149649898029019789
    assert cy.decompose_pq(p, q, 50) == py.decompose_pq(p, q, 50) == (
        [16, 227, 231, 235], [240, 229, 233, 237], py.DONE)
    rng = random.Random(5)
    for _ in range(200):
        q = rng.randint(10**20, 10**40)
        p = rng.randint(0, q)
        b, c, st = py.decompose_pq(p, q, 400)
        assert cy.decompose_pq(p, q, 400) == (b, c, st)
        assert cy.audit_pq(p, q, b, c, st == py.DONE) == py.audit_pq(p, q, b, c, st == py.DONE) == 0


def test_audit_detects_tampering_identically():
    b, c = [2, 2, 3, 5], [2, 3, 4, 8]
    p, q = 18769, 22230
    for i in range(4):
        for delta in (-1, 1):
            bb = list(b)
            bb[i] = max(2, bb[i] + delta)
            m1 = cy.audit_pq(p, q, bb, c, True)
            assert m1 == py.audit_pq(p, q, bb, c, True)
            if bb != b:
                assert m1 & 1  # the sum no longer matches


def test_cap_and_undefined_status():
    assert py.decompose_pq(18769, 22230, 2)[2] == py.CAPPED
    assert cy.decompose_pq(18769, 22230, 2)[2] == py.CAPPED
    # not reduced to lowest terms and still fine
    assert cy.decompose_pq(2, 4, 10) == py.decompose_pq(2, 4, 10) == ([3], [6], py.DONE)


def test_scan_fields_shape():
    assert [r[0] for r in py.scan_q(1, 10)] == [0, 1]
    rec = dict(zip(py.SCAN_FIELDS, py.scan_q(377, 100)[0]))
    assert rec["p"] == 1 and rec["status"] == py.DONE and rec["mask"] == 0
    drop = dict(zip(py.SCAN_FIELDS, [r for r in py.scan_q(377, 100) if r[0] == 75][0]))
    assert drop["first_c_drop"] == drop["first_c_decrease"] == 2
