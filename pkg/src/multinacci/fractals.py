"""Escape-time kernels for the quadratic family ``z -> z**2 + c``.

Counting convention: iteration ``n`` produces ``z_n`` from ``z_{n-1}``; the
count is the first ``n >= 1`` with ``|z_n| > bailout``.  An orbit that never
exceeds the bailout within ``max_iterations`` reports ``max_iterations + 1``
and counts as a member.  Membership is always "member at this budget": points
near a set boundary can be false members at any finite budget.

The Julia tests here detect the *filled* Julia set (bounded orbits), not its
boundary.
"""

from __future__ import annotations

import base64
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import ValidationError, check_complex, check_int, check_positive

DEFAULT_MAX_ITERATIONS = 1000
MANDELBROT_BAILOUT = 2.0
# Radius 4 reproduces the published c = -2 count list entry for entry.
JULIA_BAILOUT = 4.0
MAX_PIXELS = 16_000_000
REAL_TOLERANCE = 1e-9
# Real-axis slice of the Mandelbrot set, and the filled Julia set of z^2 - 2.
MANDELBROT_REAL_INTERVAL = (-2.0, 0.25)
JULIA_MINUS_TWO_SEGMENT = (-2.0, 2.0)
PUBLISHED_MANDELBROT_MEMBERS = 54


@dataclass(frozen=True)
class QuadraticParams:
    c: complex
    z0: complex = 0j
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    bailout: float = MANDELBROT_BAILOUT

    def __post_init__(self):
        object.__setattr__(self, "c", check_complex(self.c, "c"))
        object.__setattr__(self, "z0", check_complex(self.z0, "z0"))
        check_int(self.max_iterations, "max_iterations", minimum=1)
        bailout = check_positive(self.bailout, "bailout")
        if bailout < 2.0:
            raise ValidationError("bailout", f"must be >= 2, got {bailout}")
        object.__setattr__(self, "bailout", bailout)


@dataclass(frozen=True)
class EscapeResult:
    iterations: int
    escaped: bool
    final_modulus: float


def _escape(z, c, max_iterations, bailout):
    for n in range(1, max_iterations + 1):
        z = z * z + c
        if abs(z) > bailout:
            return EscapeResult(n, True, abs(z))
    return EscapeResult(max_iterations + 1, False, abs(z))


def escape_iterate(params):
    """Iterate ``z -> z**2 + c`` from ``params.z0`` until escape or budget."""
    return _escape(params.z0, params.c, params.max_iterations, params.bailout)


def mandelbrot_member(c, max_iterations=DEFAULT_MAX_ITERATIONS, bailout=MANDELBROT_BAILOUT):
    """Whether the orbit of 0 under ``z**2 + c`` stays bounded at this budget.

    Returns ``(member, EscapeResult)``.
    """
    res = escape_iterate(QuadraticParams(c, 0j, max_iterations, bailout))
    return not res.escaped, res


def julia_iteration_count(c, z0, max_iterations=DEFAULT_MAX_ITERATIONS, bailout=JULIA_BAILOUT):
    """Escape count of ``z0`` under ``z**2 + c``; ``max_iterations + 1`` means member."""
    return escape_iterate(QuadraticParams(c, z0, max_iterations, bailout)).iterations


@dataclass(frozen=True)
class SetSpec:
    """A membership test: ``kind`` is ``"mandelbrot"`` or ``"julia"`` (needs ``c``)."""

    kind: str
    c: complex | None = None
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    bailout: float | None = None

    def __post_init__(self):
        if self.kind not in ("mandelbrot", "julia"):
            raise ValidationError("set", f"unknown set kind {self.kind!r}")
        if self.kind == "julia":
            if self.c is None:
                raise ValidationError("set", "julia set needs a parameter c")
            object.__setattr__(self, "c", check_complex(self.c, "set"))
        elif self.c is not None:
            raise ValidationError("set", "mandelbrot set takes no parameter")
        check_int(self.max_iterations, "max_iterations", minimum=1)
        if self.bailout is None:
            default = JULIA_BAILOUT if self.kind == "julia" else MANDELBROT_BAILOUT
            object.__setattr__(self, "bailout", default)

    @classmethod
    def parse(cls, text, max_iterations=DEFAULT_MAX_ITERATIONS, bailout=None):
        """``"mandelbrot"``, ``"julia:-2"`` or ``"julia:-0.5+0.3j"``."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.lower()
        c = None
        if arg:
            try:
                c = complex(arg.replace(" ", "").replace("i", "j"))
            except ValueError:
                raise ValidationError("set", f"cannot parse parameter in {text!r}") from None
        return cls(kind, c, max_iterations, bailout)

    @property
    def name(self):
        if self.kind == "mandelbrot":
            return "mandelbrot"
        c = self.c
        if c.imag == 0:
            return f"julia:{_fmt_num(c.real)}"
        return f"julia:{_fmt_num(c.real)}{'+' if c.imag >= 0 else '-'}{_fmt_num(abs(c.imag))}j"

    def test(self, value):
        if self.kind == "mandelbrot":
            return escape_iterate(QuadraticParams(value, 0j, self.max_iterations, self.bailout))
        return escape_iterate(QuadraticParams(self.c, value, self.max_iterations, self.bailout))

    def oracle(self, value):
        """Closed-form membership where one is known, else ``None``."""
        value = complex(value)
        if abs(value.imag) > REAL_TOLERANCE:
            if self.kind == "julia" and self.c == -2:
                return False
            return None
        x = value.real
        if self.kind == "mandelbrot":
            lo, hi = MANDELBROT_REAL_INTERVAL
            return lo <= x <= hi
        if self.c == -2:
            lo, hi = JULIA_MINUS_TWO_SEGMENT
            return lo <= x <= hi
        return None


def _fmt_num(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


@dataclass(frozen=True)
class MembershipRecord:
    point: object
    set_name: str
    result: EscapeResult
    member: bool
    oracle: bool | None
    boundary_suspect: bool
    near_boundary: bool = False


@dataclass(frozen=True)
class MembershipReport:
    records: tuple
    sets: tuple
    counts: dict = field(default_factory=dict)
    totals: dict = field(default_factory=dict)

    def for_set(self, name):
        return [r for r in self.records if r.set_name == name]

    def iteration_counts(self, name):
        return [r.result.iterations for r in self.for_set(name)]

    def disagreements(self):
        return [
            r for r in self.records if r.oracle is not None and r.oracle != r.member
        ]

    def summary(self):
        parts = []
        for s in self.sets:
            parts.append(f"{s.name}: {self.counts[s.name]}/{self.totals[s.name]} members")
        return "; ".join(parts)


def _point_value(p):
    return complex(getattr(p, "value", p))


def classify_points(points, sets, boundary_width=REAL_TOLERANCE):
    """Run every point through every set test and attach oracle verdicts.

    Parameters
    ----------
    points : sequence of PhiPoint or complex
    sets : sequence of SetSpec or str
        Strings are parsed with ``SetSpec.parse``.
    boundary_width : float
        Points this close to a closed-form boundary are flagged
        ``boundary_suspect`` and excused from oracle agreement.

    Returns
    -------
    MembershipReport
    """
    points = list(points)
    if not points:
        raise ValidationError("points", "must not be empty")
    sets = tuple(SetSpec.parse(s) if isinstance(s, str) else s for s in sets)
    if not sets:
        raise ValidationError("set", "need at least one set")
    records = []
    counts = {}
    for spec in sets:
        counts[spec.name] = 0
        for p in points:
            value = _point_value(p)
            res = spec.test(value)
            member = not res.escaped
            oracle = spec.oracle(value)
            near = _near_boundary(spec, value, boundary_width)
            suspect = near or (oracle is not None and oracle != member)
            counts[spec.name] += member
            records.append(MembershipRecord(p, spec.name, res, member, oracle, suspect, near))
    totals = {s.name: len(points) for s in sets}
    return MembershipReport(tuple(records), sets, counts, totals)


def _near_boundary(spec, value, width):
    if abs(value.imag) > REAL_TOLERANCE:
        return False
    if spec.kind == "mandelbrot":
        edges = MANDELBROT_REAL_INTERVAL
    elif spec.c == -2:
        edges = JULIA_MINUS_TWO_SEGMENT
    else:
        return False
    return any(abs(value.real - e) <= width for e in edges)


CLASSIFY_COLUMNS = (
    "paper_k", "order_m", "n", "re", "im", "set", "iterations", "member", "oracle",
)


def report_rows(report):
    rows = []
    for r in report.records:
        p = r.point
        value = _point_value(p)
        rows.append(
            {
                "paper_k": getattr(p, "paper_k", ""),
                "order_m": getattr(p, "order", ""),
                "n": getattr(p, "n", ""),
                "re": repr(value.real),
                "im": repr(value.imag),
                "set": r.set_name,
                "iterations": r.result.iterations,
                "member": int(r.member),
                "oracle": "" if r.oracle is None else int(r.oracle),
            }
        )
    return rows


def report_to_csv(report):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CLASSIFY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(report_rows(report))
    return buf.getvalue()


@dataclass(frozen=True)
class GridSpec:
    """Viewport over the complex plane.

    Pixel ``(row, col)`` samples the centre of its cell; row 0 is the top edge
    ``center.imag + height/2``, column 0 the left edge ``center.real - width/2``.
    """

    center: complex
    width: float
    height: float
    columns: int
    rows: int
    params: QuadraticParams = None
    mode: str = "mandelbrot"
    julia_c: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", check_complex(self.center, "center"))
        object.__setattr__(self, "width", check_positive(self.width, "width"))
        object.__setattr__(self, "height", check_positive(self.height, "height"))
        check_int(self.columns, "columns", minimum=1)
        check_int(self.rows, "rows", minimum=1)
        if self.mode not in ("mandelbrot", "julia"):
            raise ValidationError("mode", f"unknown mode {self.mode!r}")
        params = self.params
        if params is None:
            bailout = JULIA_BAILOUT if self.mode == "julia" else MANDELBROT_BAILOUT
            params = QuadraticParams(self.julia_c or 0j, 0j, DEFAULT_MAX_ITERATIONS, bailout)
        if self.mode == "julia" and self.julia_c is not None:
            params = QuadraticParams(self.julia_c, 0j, params.max_iterations, params.bailout)
        object.__setattr__(self, "params", params)

    def pixel_coordinates(self):
        """Complex sample point of every pixel, shape ``(rows, columns)``."""
        xs = self.center.real + self.width * ((np.arange(self.columns) + 0.5) / self.columns - 0.5)
        ys = self.center.imag + self.height * (0.5 - (np.arange(self.rows) + 0.5) / self.rows)
        return xs[np.newaxis, :] + 1j * ys[:, np.newaxis]

    def to_pixel(self, z):
        """Fractional ``(row, col)`` of a complex point, matching ``pixel_coordinates``."""
        z = complex(z)
        col = ((z.real - self.center.real) / self.width + 0.5) * self.columns - 0.5
        row = (0.5 - (z.imag - self.center.imag) / self.height) * self.rows - 0.5
        return row, col

    @property
    def left(self):
        return self.center.real - self.width / 2

    @property
    def top(self):
        return self.center.imag + self.height / 2


def render_grid(spec, max_pixels=MAX_PIXELS):
    """Iteration-count matrix for every pixel of ``spec`` (rows x columns).

    Vectorised over pixels; each entry equals what ``escape_iterate`` returns
    for that pixel's sample point.
    """
    n_pix = spec.rows * spec.columns
    if n_pix > max_pixels:
        raise ValidationError("grid", f"{n_pix} pixels exceeds budget of {max_pixels}")
    pts = spec.pixel_coordinates().ravel()
    p = spec.params
    if spec.mode == "mandelbrot":
        c = pts.copy()
        z = np.zeros_like(pts)
    else:
        c = np.full_like(pts, p.c)
        z = pts.copy()
    counts = np.full(pts.shape, p.max_iterations + 1, dtype=np.int64)
    active = np.arange(pts.size)
    for n in range(1, p.max_iterations + 1):
        if active.size == 0:
            break
        za = z[active]
        za = za * za + c[active]
        z[active] = za
        out = np.abs(za) > p.bailout
        if out.any():
            counts[active[out]] = n
            active = active[~out]
    return counts.reshape(spec.rows, spec.columns)


def grid_to_pgm(counts, maxval=None):
    """Plain (P2) PGM text of an iteration-count matrix."""
    counts = np.asarray(counts, dtype=np.int64)
    if counts.ndim != 2:
        raise ValidationError("counts", "expected a 2-d matrix")
    rows, cols = counts.shape
    maxval = int(counts.max()) if maxval is None else int(maxval)
    maxval = max(1, min(maxval, 65535))
    clipped = np.clip(counts, 0, maxval)
    lines = ["P2", f"{cols} {rows}", str(maxval)]
    lines += [" ".join(map(str, row)) for row in clipped.tolist()]
    return "\n".join(lines) + "\n"


def read_pgm(text):
    tokens = [t for line in text.splitlines() for t in line.split("#")[0].split()]
    if not tokens or tokens[0] != "P2":
        raise ValidationError("pgm", "not a plain P2 PGM")
    cols, rows, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = np.array(tokens[4:], dtype=np.int64)
    if data.size != rows * cols:
        raise ValidationError("pgm", f"expected {rows * cols} samples, got {data.size}")
    return data.reshape(rows, cols), maxval


def shade(counts, max_iterations):
    """Map counts to 8-bit grey: members black, fast escapes light."""
    counts = np.asarray(counts, dtype=np.float64)
    member = counts > max_iterations
    level = np.log1p(counts) / math.log1p(max_iterations)
    grey = np.rint(255 * (1.0 - np.clip(level, 0.0, 1.0))).astype(np.uint8)
    grey[member] = 0
    return grey


def _png_data_uri(grey):
    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(grey).save(buf, format="PNG", optimize=False)
    return "data:image/png;base64," + base64.b64encode(buf.getvalue()).decode("ascii")


def svg_overlay(spec, counts, points, marker_radius=3.0, highlight=None, title=None):
    """SVG of a rendered backdrop with the point cloud drawn as markers.

    Points outside the viewport are skipped.  ``highlight`` is an optional
    collection of complex values drawn with a distinct ring marker.
    """
    counts = np.asarray(counts)
    grey = shade(counts, spec.params.max_iterations)
    w, h = spec.columns, spec.rows
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<image x="0" y="0" width="{w}" height="{h}" href="{_png_data_uri(grey)}"/>')
    out.append('<g fill="#d62728" fill-opacity="0.85" stroke="none">')
    for p in points:
        z = _point_value(p)
        row, col = spec.to_pixel(z)
        x, y = col + 0.5, row + 0.5
        if not (0 <= x <= w and 0 <= y <= h):
            continue
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{marker_radius:g}"/>')
    out.append("</g>")
    if highlight:
        out.append('<g fill="none" stroke="#1f77b4" stroke-width="2">')
        for z in highlight:
            row, col = spec.to_pixel(z)
            out.append(
                f'<circle cx="{col + 0.5:.3f}" cy="{row + 0.5:.3f}" r="{3 * marker_radius:g}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
