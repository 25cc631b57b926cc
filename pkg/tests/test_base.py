import json

import pytest

from recnum.base import (
    IntegerWidthError,
    PreconditionError,
    RecurrenceSpec,
    dominant_root,
    make_context,
    parse_config,
    strengthened_initials,
    validate_spec,
)

PHI = (1 + 5**0.5) / 2


def test_strengthened_initials_fibonacci():
    assert strengthened_initials((1, 1)) == (1, 2)


def test_strengthened_initials_general():
    # G_0 = 1, G_1 = a_1 G_0 + 1, G_2 = a_1 G_1 + a_2 G_0 + 1
    assert strengthened_initials((3, 2, 1)) == (1, 4, 15)


def test_validate_accepts_zeckendorf():
    spec = RecurrenceSpec((1, 1), (1, 2))
    assert validate_spec(spec).ok


def test_validate_rejects_nonincreasing():
    spec = RecurrenceSpec((1, 1), (2, 1))
    report = validate_spec(spec)
    assert not report.ok and report.violations


def test_validate_rejects_bad_lexicographic_tail():
    # a_d = 0 violates the trailing-coefficient condition
    spec = RecurrenceSpec((2, 0), strengthened_initials((2, 0)))
    assert not validate_spec(spec).ok


def test_dominant_root_fibonacci():
    spec = RecurrenceSpec((1, 1), (1, 2))
    assert dominant_root(spec) == pytest.approx(PHI, abs=1e-12)


def test_dominant_root_in_unit_window():
    for coeffs in [(3, 1), (5, 2, 1), (7, 7, 7)]:
        spec = RecurrenceSpec(coeffs, strengthened_initials(coeffs))
        alpha = dominant_root(spec)
        assert coeffs[0] <= alpha < coeffs[0] + 1


def test_terms_satisfy_recurrence():
    ctx = make_context((2, 1, 1))
    for n in range(3, 20):
        expected = 2 * ctx.term(n - 1) + ctx.term(n - 2) + ctx.term(n - 3)
        assert ctx.term(n) == expected


def test_terms_upto():
    ctx = make_context((1, 1))
    terms = ctx.terms_upto(100)
    assert terms == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_growth_constant_fibonacci():
    ctx = make_context((1, 1))
    est = ctx.growth_constant()
    # G_n ~ c alpha^n with c = phi^2 / sqrt(5) for the strengthened base
    assert est.c == pytest.approx(PHI**2 / 5**0.5, rel=1e-6)


def test_integer_width_guard():
    ctx = make_context((100, 1))
    with pytest.raises(IntegerWidthError):
        ctx.term(100)


def test_spec_json_roundtrip():
    spec = RecurrenceSpec((4, 3, 2, 1), strengthened_initials((4, 3, 2, 1)))
    again = RecurrenceSpec.from_json(spec.to_json())
    assert again == spec
    assert json.loads(spec.to_json())["coeffs"] == [4, 3, 2, 1]


def test_parse_config():
    spec = parse_config("coeffs = 3,1\ninitials = 1,4\n")
    assert spec.coeffs == (3, 1) and spec.initials == (1, 4)


def test_make_context_rejects_invalid():
    with pytest.raises(PreconditionError):
        make_context((0, 1))


def test_dominance_gap_estimate_positive():
    ctx = make_context((2, 1))
    assert ctx.dominance_gap_estimate() > 0
