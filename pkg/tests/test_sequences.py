from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinacci.sequences import (
    MAX_DIGITS,
    RecurrenceSpec,
    ValidationError,
    convergence_scan,
    difference_sequence,
    format_display,
    generate_sequence,
    phi,
    phi_scan,
)


def naive_terms(order, n, init=None):
    # slice-sum reference, deliberately not the sliding window
    t = list(init or [1] * order)
    while len(t) < n:
        t.append(sum(t[-order:]))
    return t[:n]


def test_fibonacci_first_ten():
    seq = generate_sequence(RecurrenceSpec(2, term_count=10))
    assert seq.terms == (1, 1, 2, 3, 5, 8, 13, 21, 34, 55)


def test_tribonacci_hand_computed():
    assert generate_sequence(RecurrenceSpec(3, term_count=8)).terms == (1, 1, 1, 3, 5, 9, 17, 31)


def test_lucas_initial_values():
    seq = generate_sequence(RecurrenceSpec(2, (1, 3), term_count=6))
    assert seq.terms == (1, 3, 4, 7, 11, 18)


def test_terms_exceed_machine_integers():
    seq = generate_sequence(RecurrenceSpec(20))
    assert seq.terms[-1] > 2**64
    assert list(seq.terms) == naive_terms(20, 100)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(order=1), "order"),
        (dict(order=3, initial_values=(1, 1)), "initial_values"),
        (dict(order=2, initial_values=(0, 0)), "initial_values"),
        (dict(order=2, initial_values=(1, -1)), "initial_values"),
        (dict(order=4, term_count=5), "term_count"),
    ],
)
def test_spec_validation_names_field(kwargs, field):
    with pytest.raises(ValidationError) as info:
        RecurrenceSpec(**kwargs)
    assert info.value.field == field


@settings(max_examples=60, deadline=None)
@given(
    order=st.integers(2, 12),
    data=st.data(),
)
def test_exact_recurrence_identity(order, data):
    init = data.draw(
        st.lists(st.integers(0, 10**6), min_size=order, max_size=order).filter(any)
    )
    n = data.draw(st.integers(order + 2, 120))
    terms = generate_sequence(RecurrenceSpec(order, init, n)).terms
    assert len(terms) == n
    for i in range(order, n):
        assert terms[i] == sum(terms[i - order:i])


def test_nondecreasing_from_order_with_unit_start():
    for m in range(2, 15):
        t = generate_sequence(RecurrenceSpec(m)).terms
        assert all(a <= b for a, b in zip(t[m:], t[m + 1:]))


@pytest.mark.parametrize(
    "order, expected",
    [(2, "0.618034"), (3, "0.543689"), (4, "0.51879"), (10, "0.500245")],
)
def test_phi_known_values(order, expected):
    assert phi(order).display == expected


@pytest.mark.parametrize("order", [2, 5, 13, 20, 31])
def test_phi_matches_fraction_oracle(order):
    digits = 40
    t = naive_terms(order, 100)
    exact = Fraction(t[-2], t[-1])
    got = phi(order, digits=digits)
    assert abs(Fraction(got.value) - exact) <= Fraction(1, 2 * 10**digits) + Fraction(1, 10**(digits + 4))
    assert got.terms_used == 100 and got.digits == digits


def test_phi_rounding_is_half_even_at_requested_digits():
    value = phi(4, digits=6).value
    assert value == Decimal("0.518790")
    assert value.as_tuple().exponent == -6


def test_phi_rejects_excess_precision():
    with pytest.raises(ValidationError):
        phi(3, digits=MAX_DIGITS + 1)
    with pytest.raises(ValidationError):
        phi(3, digits=5)


def test_initial_value_independence():
    a = phi(2, initial_values=(1, 1), digits=40).value
    b = phi(2, initial_values=(1, 3), digits=40).value
    assert abs(a - b) < Decimal("1e-20")


def test_phi_monotone_and_above_half():
    phis = phi_scan(40, digits=30)
    vals = [p.value for p in phis]
    assert all(v > Decimal("0.5") for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(Decimal("0.5") < v < Decimal("0.62") for v in vals)


def test_phi_scan_shapes():
    assert [p.display for p in phi_scan(2)] == ["0.618034"]
    assert [p.display for p in phi_scan(5)] == ["0.618034", "0.543689", "0.51879", "0.50866"]
    tail = phi_scan(31, digits=30)[17:]
    assert [p.paper_k for p in tail] == list(range(18, 31))
    assert {p.display for p in tail} == {"0.5"}


def test_difference_sequence_values_and_shape():
    diffs = difference_sequence(phi_scan(40))
    assert diffs.by_paper_k(1).display == "0.074345"
    assert diffs.by_paper_k(5).display == "0.0021212"
    assert diffs.is_positive() and diffs.is_strictly_decreasing()
    assert len(diffs) == 38


def test_difference_ratio_tends_to_half():
    diffs = difference_sequence(phi_scan(32, digits=30))
    ratio = diffs.by_paper_k(21).value / diffs.by_paper_k(20).value
    assert abs(ratio - Decimal("0.5")) < Decimal("1e-3")


def test_difference_sequence_rejects_bad_input():
    phis = phi_scan(5)
    with pytest.raises(ValidationError):
        difference_sequence(phis[:1])
    with pytest.raises(ValidationError):
        difference_sequence(list(reversed(phis)))
    with pytest.raises(ValidationError):
        difference_sequence([phis[0], phis[0]])
    with pytest.raises(ValidationError):
        difference_sequence([phis[0], phis[2]])


def test_convergence_scan():
    assert convergence_scan(5e-7).paper_k == 18
    assert convergence_scan(0.1).order == 3
    res = convergence_scan(1e-30, max_order=30)
    assert not res.reached and res.order is None
    assert len(res.differences) == 28


@pytest.mark.parametrize(
    "value, text",
    [
        ("0.618033988", "0.618034"),
        ("0.50000095", "0.500001"),
        ("0.5000004768", "0.5"),
        ("0.0000612972", "0.0000612972"),
        ("0.00001527786", "0.0000152779"),
        ("0.000007634520830", "7.63452e-6"),
        ("1.1641532182693481e-10", "1.16415e-10"),
        ("0", "0"),
    ],
)
def test_format_display(value, text):
    assert format_display(Decimal(value)) == text
