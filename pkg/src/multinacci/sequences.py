"""k-step Fibonacci/Lucas sequences and their limiting inverse ratios.

Orders are counted by the number of summed predecessors ``m`` (``m = 2`` is
Fibonacci).  Published tables index the same constants by ``k = m - 1``;
every record here carries both.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

from ._validation import ValidationError, check_int, check_positive

DEFAULT_TERMS = 100
DEFAULT_DIGITS = 30
MAX_DIGITS = 10_000
GUARD_DIGITS = 5
DISPLAY_DIGITS = 6


@dataclass(frozen=True)
class RecurrenceSpec:
    """An order-``m`` additive recurrence plus how many terms to produce."""

    order: int
    initial_values: tuple = None
    term_count: int = DEFAULT_TERMS

    def __post_init__(self):
        order = check_int(self.order, "order", minimum=2)
        init = self.initial_values
        if init is None:
            init = (1,) * order
        init = tuple(init)
        if len(init) != order:
            raise ValidationError(
                "initial_values", f"expected {order} values, got {len(init)}"
            )
        init = tuple(check_int(v, "initial_values", minimum=0) for v in init)
        if not any(init):
            raise ValidationError("initial_values", "must not be all zero")
        check_int(self.term_count, "term_count", minimum=order + 2)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "initial_values", init)

    @property
    def paper_k(self):
        return self.order - 1


@dataclass(frozen=True)
class BigSequence:
    spec: RecurrenceSpec
    terms: tuple

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]


@dataclass(frozen=True)
class PhiValue:
    """Inverse ratio ``terms[N-2] / terms[N-1]`` rounded to ``digits`` decimals."""

    order: int
    value: Decimal
    digits: int
    terms_used: int

    @property
    def paper_k(self):
        return self.order - 1

    @property
    def display(self):
        return format_display(self.value)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class DifferenceEntry:
    paper_k: int
    order: int
    value: Decimal

    @property
    def display(self):
        return format_display(self.value)


@dataclass(frozen=True)
class DifferenceSequence:
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def by_paper_k(self, k):
        for e in self.entries:
            if e.paper_k == k:
                return e
        raise KeyError(k)

    def is_positive(self):
        return all(e.value > 0 for e in self.entries)

    def is_strictly_decreasing(self):
        vals = [e.value for e in self.entries]
        return all(a > b for a, b in zip(vals, vals[1:]))


@dataclass(frozen=True)
class ConvergenceResult:
    tolerance: float
    max_order: int
    order: int | None
    phis: tuple
    differences: DifferenceSequence = field(repr=False)

    @property
    def reached(self):
        return self.order is not None

    @property
    def paper_k(self):
        return None if self.order is None else self.order - 1


def generate_sequence(spec):
    """Return the first ``spec.term_count`` terms, exactly.

    A sliding window sum keeps the cost linear in the term count regardless
    of the order.

    >>> generate_sequence(RecurrenceSpec(3, term_count=8)).terms
    (1, 1, 1, 3, 5, 9, 17, 31)
    """
    if not isinstance(spec, RecurrenceSpec):
        raise ValidationError("spec", f"expected RecurrenceSpec, got {type(spec).__name__}")
    m = spec.order
    terms = list(spec.initial_values)
    window = sum(terms)
    for n in range(m, spec.term_count):
        terms.append(window)
        window += window - terms[n - m]
    return BigSequence(spec, tuple(terms))


def _round_ratio(num, den, digits):
    # floor division carries GUARD_DIGITS extra digits before the final rounding
    scale = 10 ** (digits + GUARD_DIGITS)
    scaled = num * scale // den
    with localcontext() as ctx:
        ctx.prec = max(len(str(scaled)) + 2, 28)
        raw = Decimal(scaled).scaleb(-(digits + GUARD_DIGITS))
        return raw.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)


def phi(order, term_count=DEFAULT_TERMS, digits=DEFAULT_DIGITS, initial_values=None):
    """Inverse ratio of the last two terms of the order-``order`` sequence.

    Parameters
    ----------
    order : int
        Number of summed predecessors, ``m >= 2``.
    term_count : int
        Terms generated before taking the ratio (default 100).
    digits : int
        Decimal places kept in the result, between 6 and ``MAX_DIGITS``.

    Returns
    -------
    PhiValue
    """
    digits = check_int(digits, "digits", minimum=DISPLAY_DIGITS, maximum=MAX_DIGITS)
    seq = generate_sequence(RecurrenceSpec(order, initial_values, term_count))
    value = _round_ratio(seq.terms[-2], seq.terms[-1], digits)
    return PhiValue(seq.spec.order, value, digits, seq.spec.term_count)


def phi_scan(max_order, term_count=DEFAULT_TERMS, digits=DEFAULT_DIGITS, min_order=2):
    """``phi`` for every order from ``min_order`` through ``max_order``."""
    max_order = check_int(max_order, "max_order", minimum=2)
    min_order = check_int(min_order, "min_order", minimum=2, maximum=max_order)
    return [phi(m, term_count, digits) for m in range(min_order, max_order + 1)]


def difference_sequence(phis):
    """Gaps ``phi(m) - phi(m+1)`` between consecutive orders.

    Each entry is labelled with the smaller order of its pair.  ``phis`` must
    be sorted by strictly increasing order with no gaps.
    """
    phis = list(phis)
    if len(phis) < 2:
        raise ValidationError("phis", "need at least two values")
    entries = []
    for a, b in zip(phis, phis[1:]):
        if b.order <= a.order:
            raise ValidationError("phis", "orders must be strictly increasing")
        if b.order != a.order + 1:
            raise ValidationError("phis", f"gap between orders {a.order} and {b.order}")
        with localcontext() as ctx:
            ctx.prec = max(a.digits, b.digits) + 10
            entries.append(DifferenceEntry(a.paper_k, a.order, a.value - b.value))
    return DifferenceSequence(tuple(entries))


def convergence_scan(tolerance, max_order=31, term_count=DEFAULT_TERMS, digits=DEFAULT_DIGITS):
    """First order whose ratio lies within ``tolerance`` of 1/2.

    Not reaching the tolerance is reported through ``result.reached``, never
    raised.
    """
    tolerance = check_positive(tolerance, "tolerance")
    phis = phi_scan(max_order, term_count, digits)
    half = Decimal("0.5")
    tol = Decimal(repr(tolerance))
    hit = next((p.order for p in phis if abs(p.value - half) < tol), None)
    diffs = difference_sequence(phis)
    return ConvergenceResult(tolerance, max_order, hit, tuple(phis), diffs)


def format_display(value, significant=DISPLAY_DIGITS):
    """Six significant digits with trailing zeros trimmed.

    Values below ``1e-5`` in magnitude switch to ``mantissa e exponent``
    notation, e.g. ``7.63452e-6``.

    >>> format_display(Decimal("0.518790063"))
    '0.51879'
    >>> format_display(Decimal("0.50000047"))
    '0.5'
    """
    value = Decimal(value)
    if value == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = significant
        ctx.rounding = ROUND_HALF_EVEN
        rounded = +value
    if abs(rounded) >= Decimal("1e-5"):
        text = format(rounded, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text
    sign, digits, exp = rounded.as_tuple()
    mant = "".join(map(str, digits))
    exponent = exp + len(digits) - 1
    mant = (mant[0] + "." + mant[1:]).rstrip("0").rstrip(".")
    return f"{'-' if sign else ''}{mant}e{exponent}"


PHI_COLUMNS = ("paper_k", "order_m", "phi", "phi_display")
DIFF_COLUMNS = ("paper_k", "order_m", "difference", "difference_display")


def phi_rows(phis):
    return [
        {"paper_k": p.paper_k, "order_m": p.order, "phi": str(p.value), "phi_display": p.display}
        for p in phis
    ]


def difference_rows(diffs):
    return [
        {
            "paper_k": e.paper_k,
            "order_m": e.order,
            "difference": str(e.value),
            "difference_display": e.display,
        }
        for e in diffs
    ]


def to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def to_json(rows):
    return json.dumps(rows, indent=2) + "\n"
