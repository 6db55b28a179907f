"""Companion matrices of the k-step recurrences and their spectra.

The order-``m`` matrix has a first row of ones and ones on the subdiagonal, so
its eigenvalues are the roots of ``x**m - x**(m-1) - ... - x - 1``.  Roots are
found all at once with Aberth-Ehrlich iteration in double precision, then
Newton-polished in extended precision so residuals stay tiny even when the
dominant root's derivative is of size ``2**m``.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ._validation import ConvergenceError, ValidationError, check_int, check_positive

MAX_ORDER = 20
DEFAULT_TOLERANCE = 1e-12
MAX_ITERATIONS = 500
STEP_TOLERANCE = 1e-14
POLISH_STEPS = 3
POLISH_DIGITS = 40
SEED = 0.4 + 0.9j
# Cauchy bound: every root of x^m - x^(m-1) - ... - 1 has modulus < 2
ROOT_BOUND = 2.0
MODULUS_TIE = 1e-9
PUBLISHED_POINT_COUNT = 155


@dataclass(frozen=True)
class CompanionMatrix:
    order: int
    entries: tuple

    def to_array(self):
        return np.array(self.entries, dtype=int)


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """Coefficients, highest degree first."""

    order: int
    coefficients: tuple

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def derivative_at(self, x):
        n = len(self.coefficients) - 1
        acc = 0
        for i, c in enumerate(self.coefficients[:-1]):
            acc = acc * x + c * (n - i)
        return acc

    def __str__(self):
        m = self.order
        parts = [f"x^{m}"] + [f"x^{d}" if d > 1 else "x" for d in range(m - 1, 0, -1)]
        return " - ".join(parts) + " - 1"


@dataclass(frozen=True)
class EigenvalueSet:
    order: int
    roots: tuple
    residuals: tuple
    iterations_used: int
    precise_roots: tuple

    @property
    def paper_k(self):
        return self.order - 1

    @property
    def dominant(self):
        return self.roots[0]


@dataclass(frozen=True)
class PhiPoint:
    paper_k: int
    n: int
    value: complex
    source_root: complex
    residual: float = 0.0

    @property
    def order(self):
        return self.paper_k + 1

    @property
    def is_real(self):
        return self.value.imag == 0.0


def build_companion(order, max_order=MAX_ORDER):
    """Order-``m`` companion matrix: row 0 all ones, ones below the diagonal.

    >>> build_companion(3).entries
    ((1, 1, 1), (1, 0, 0), (0, 1, 0))
    """
    m = check_int(order, "order", minimum=2, maximum=max_order)
    rows = [tuple([1] * m)]
    for i in range(1, m):
        rows.append(tuple(1 if j == i - 1 else 0 for j in range(m)))
    return CompanionMatrix(m, tuple(rows))


def characteristic_polynomial(order):
    m = check_int(order, "order", minimum=2)
    return CharacteristicPolynomial(m, (1,) + (-1,) * m)


def _aberth(coeffs, tol, max_iter):
    """Simultaneous Aberth-Ehrlich iteration; returns (roots, iterations)."""
    n = len(coeffs) - 1
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    z = [ROOT_BOUND * SEED**j for j in range(n)]
    for it in range(1, max_iter + 1):
        biggest = 0.0
        for i in range(n):
            zi = z[i]
            p = poly(zi)
            if p == 0:
                continue
            ratio = p / dpoly(zi)
            s = sum(1.0 / (zi - z[j]) for j in range(n) if j != i)
            step = ratio / (1.0 - ratio * s)
            z[i] = zi - step
            biggest = max(biggest, abs(step))
        if biggest < tol:
            return z, it
    raise ConvergenceError(
        f"Aberth iteration did not converge in {max_iter} steps",
        residuals=[abs(poly(zi)) for zi in z],
    )


def canonical_order(items, key=complex):
    """Sort by descending modulus; ties within ``MODULUS_TIE`` by ascending argument."""
    ranked = sorted(items, key=lambda it: -abs(key(it)))
    out, group = [], []
    for it in ranked:
        if group and abs(abs(key(group[0])) - abs(key(it))) > MODULUS_TIE:
            out.extend(sorted(group, key=lambda g: cmath.phase(key(g))))
            group = []
        group.append(it)
    out.extend(sorted(group, key=lambda g: cmath.phase(key(g))))
    return out


def eigenvalues(
    order,
    tolerance=DEFAULT_TOLERANCE,
    max_iterations=MAX_ITERATIONS,
    polish_steps=POLISH_STEPS,
    polish_digits=POLISH_DIGITS,
    max_order=MAX_ORDER,
):
    """All ``m`` eigenvalues of the order-``m`` companion matrix.

    Parameters
    ----------
    order : int
        Matrix dimension ``m``, ``2 <= m <= max_order``.
    tolerance : float
        Bound on ``|p(root)|`` every returned root must satisfy.
    max_iterations : int
        Cap on Aberth sweeps.
    polish_steps, polish_digits : int
        Newton steps and working precision of the extended-precision polish.
        ``polish_digits=0`` skips the polish (double precision only).

    Returns
    -------
    EigenvalueSet
        Roots sorted by descending modulus, then ascending argument.

    Raises
    ------
    ConvergenceError
        If Aberth iteration stalls or a residual stays above ``tolerance``.
    """
    m = check_int(order, "order", minimum=2, maximum=max_order)
    tolerance = check_positive(tolerance, "tolerance")
    max_iterations = check_int(max_iterations, "max_iterations", minimum=1)
    poly = characteristic_polynomial(m)
    approx, iters = _aberth(list(poly.coefficients), STEP_TOLERANCE, max_iterations)

    if polish_digits:
        with mpmath.workdps(polish_digits):
            precise = []
            for z in approx:
                x = mpmath.mpc(z)
                for _ in range(polish_steps):
                    x = x - poly(x) / poly.derivative_at(x)
                if abs(x.imag) < mpmath.mpf(10) ** (-(polish_digits // 2)):
                    x = mpmath.mpc(x.real, 0)
                precise.append(x)
            residuals = [float(abs(poly(x))) for x in precise]
    else:
        precise = [complex(z.real, 0.0) if abs(z.imag) < 1e-15 else z for z in approx]
        residuals = [abs(poly(z)) for z in precise]

    if max(residuals) >= tolerance:
        raise ConvergenceError(
            f"order {m}: residual {max(residuals):.3g} exceeds tolerance {tolerance:.3g}",
            residuals=residuals,
        )
    ordered = canonical_order(zip(precise, residuals), key=lambda pr: complex(pr[0]))
    return EigenvalueSet(
        order=m,
        roots=tuple(complex(r) for r, _ in ordered),
        residuals=tuple(res for _, res in ordered),
        iterations_used=iters,
        precise_roots=tuple(r for r, _ in ordered),
    )


def phi_points(orders=range(2, MAX_ORDER + 1), tolerance=DEFAULT_TOLERANCE, **kwargs):
    """Inverses ``1/root`` of every eigenvalue for each order, with provenance."""
    points = []
    for m in orders:
        eig = eigenvalues(m, tolerance, **kwargs)
        for n, (root, precise, res) in enumerate(
            zip(eig.roots, eig.precise_roots, eig.residuals), start=1
        ):
            inv = complex(1 / precise)
            if root.imag == 0.0:
                inv = complex(inv.real, 0.0)
            points.append(PhiPoint(m - 1, n, inv, root, res))
    return points


def cloud_metadata(points):
    orders = sorted({p.order for p in points})
    return {
        "orders": [orders[0], orders[-1]] if orders else [],
        "point_count": len(points),
        "published_point_count": PUBLISHED_POINT_COUNT,
        "count_matches_published": len(points) == PUBLISHED_POINT_COUNT,
    }


POINT_COLUMNS = ("paper_k", "order_m", "n", "re", "im", "residual")


def point_rows(points):
    return [
        {
            "paper_k": p.paper_k,
            "order_m": p.order,
            "n": p.n,
            "re": repr(p.value.real),
            "im": repr(p.value.imag),
            "residual": repr(p.residual),
        }
        for p in points
    ]


def points_to_csv(points):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=POINT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(point_rows(points))
    return buf.getvalue()


def points_to_json(points):
    doc = {"metadata": cloud_metadata(points), "points": point_rows(points)}
    return json.dumps(doc, indent=2) + "\n"


def _row_to_point(row):
    try:
        value = complex(float(row["re"]), float(row["im"]))
        k = int(row["paper_k"])
        n = int(row["n"])
        res = float(row.get("residual", 0.0) or 0.0)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("points", f"malformed point record {row!r}") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)) or value == 0:
        raise ValidationError("points", f"invalid point value in {row!r}")
    if "order_m" in row and int(row["order_m"]) != k + 1:
        raise ValidationError("points", f"order_m and paper_k disagree in {row!r}")
    return PhiPoint(k, n, value, 1 / value, res)


def read_points(text):
    """Parse a point file written by ``points_to_json`` or ``points_to_csv``."""
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        doc = json.loads(text)
        rows = doc["points"] if isinstance(doc, dict) else doc
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValidationError("points", "no point records found")
    return [_row_to_point(r) for r in rows]


def eigen_to_json(eigsets):
    doc = [
        {
            "paper_k": e.paper_k,
            "order_m": e.order,
            "iterations": e.iterations_used,
            "roots": [
                {"n": i, "re": repr(r.real), "im": repr(r.imag), "residual": repr(res)}
                for i, (r, res) in enumerate(zip(e.roots, e.residuals), start=1)
            ],
        }
        for e in eigsets
    ]
    return json.dumps(doc, indent=2) + "\n"


def eigen_to_csv(eigsets):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=POINT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for e in eigsets:
        for i, (r, res) in enumerate(zip(e.roots, e.residuals), start=1):
            writer.writerow(
                {
                    "paper_k": e.paper_k,
                    "order_m": e.order,
                    "n": i,
                    "re": repr(r.real),
                    "im": repr(r.imag),
                    "residual": repr(res),
                }
            )
    return buf.getvalue()
