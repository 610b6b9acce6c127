from fractions import Fraction as F

import pytest

from shulga.construction import (
    ConstructionState,
    as_real_input,
    extend,
    generate,
    verify_growth_bounds,
    verify_nesting,
    verify_window,
)
from shulga.engine import decompose
from shulga.rational import partial_quotient


def test_seeds_and_first_digits():
    assert (generate(1).b, generate(1).c) == ((2,), (4,))
    s = generate(6)
    assert s.b == (2, 6, 11, 16, 21, 26)
    assert s.c == (4, 9, 14, 19, 24, 28)
    with pytest.raises(ValueError):
        generate(0)


def test_extend_step_two_rejects_m2():
    s = extend(generate(1))
    cd = s.candidates[0]
    assert s.b[-1] == 6 and cd.q == 13 and cd.t2 == 33
    assert cd.margin(2) == 8 * 169 - 33 ** 2 == 263 >= 169
    assert cd.chosen == 3 and s.c[-1] == 9


def test_first_m2_selection_at_six():
    s = generate(6)
    assert [cd.chosen for cd in s.candidates] == [3, 3, 3, 3, 2]


def test_recurrence_invariants():
    s = generate(60)
    for k in range(1, s.n):
        assert s.b[k] == s.c[k - 1] + 2
        assert s.c[k] - s.b[k] in (2, 3)


def test_window_level_two():
    row = verify_window(generate(2)).rows[0]
    assert row["margin"] == "152" and row["q_squared"] == "169"


def test_window_fails_at_level_three_only():
    # c_3 - (t_3/q_3)^2 = 14 - (522/145)^2 = 26/25, outside (0, 1)
    s = generate(200)
    v = verify_window(s)
    assert not v.ok and v.first_failure == 3
    assert [f["level"] for f in v.failures] == ["3"]
    assert F(int(v.failures[0]["margin"]), int(v.failures[0]["q_squared"])) == F(26, 25)
    # both candidates miss at level 3, so the selection rule had no good choice
    cd = s.candidates[1]
    assert cd.n == 3 and not 0 < cd.margin(2) < cd.q ** 2 and not 0 < cd.margin(3) < cd.q ** 2


def test_nesting_and_bounds_deep():
    s = generate(200)
    assert verify_nesting(s).ok
    g = verify_growth_bounds(s)
    assert g.ok
    assert g.rows[0] == {"level": "1", "b_slack": "0", "c_slack": "1"}
    assert g.rows[5] == {"level": "6", "b_slack": "4", "c_slack": "2"}


def test_nesting_level_one():
    assert verify_nesting(generate(1)).ok


def test_tampered_digit_breaks_nesting_at_level_three():
    s = generate(6)
    bad = ConstructionState.from_digits(s.b, s.c[:2] + (13,) + s.c[3:])
    v = verify_nesting(bad)
    assert not v.ok and v.first_failure == 3
    assert all(f["geometric"] == f["algebraic"] for f in v.failures)


def test_growth_bounds_detect_violation():
    bad = ConstructionState.from_digits((2, 5), (4, 9))
    assert verify_growth_bounds(bad).first_failure == 2


def test_as_real_input():
    a = as_real_input(generate(6))
    assert a.ok
    assert a.decomposed_b[:6] == (2, 6, 11, 16, 21, 26)
    assert a.decomposed_c[:6] == (4, 9, 14, 19, 24, 28)
    assert as_real_input(generate(2)).alpha_n == F(6, 13) + F(9, 37)
    assert as_real_input(generate(10)).in_region
    assert partial_quotient(a.beta, 8) == generate(8).b[-1]
    assert a.gamma.digit(7) == generate(7).c[-1]
    with pytest.raises(ValueError):
        as_real_input(generate(1))


def test_deep_truncation_reproduces_prefix():
    deep = generate(12)
    r = decompose(deep.alpha(), 20)
    assert r.b[:11] == deep.b[:11] and r.c[:11] == deep.c[:11]
