"""Exit criteria for the package; one PASS/FAIL line each in the terminal summary."""

import csv
import io
import math
import random
import re

import mpmath
import pytest

from multinacci import fractals, sequences, spectra
from multinacci.cli import main
from multinacci.fractals import QuadraticParams, escape_iterate

RATIO_TABLE = [
    "0.618034", "0.543689", "0.51879", "0.50866", "0.504138",
    "0.502017", "0.500994", "0.500493", "0.500245",
]
SCAN_10_TO_17 = [
    "0.500122", "0.500061", "0.500031", "0.500015",
    "0.500008", "0.500004", "0.500002", "0.500001",
]
DIFFS_1_TO_12 = [
    "0.074345", "0.0248989", "0.0101297", "0.00452213", "0.0021212", "0.00102288",
    "0.00050106", "0.000247656", "0.000123033", "0.0000612972", "0.0000305886", "0.0000152779",
]


@pytest.fixture(scope="module")
def cloud():
    return spectra.phi_points(range(2, 21))


def _table(argv, capsys):
    assert main(argv) == 0
    out = capsys.readouterr().out
    return list(csv.DictReader(io.StringIO(out)))


def test_01_ratio_table(criterion, capsys):
    with criterion(1, "inverse-ratio table, paper_k 1..9", limit=1.0):
        rows = _table(["phis", "--max-paper-k", "9", "--digits", "6"], capsys)
        assert [r["phi_display"] for r in rows] == RATIO_TABLE
        assert [int(r["paper_k"]) for r in rows] == list(range(1, 10))


def test_02_convergence_list(criterion, capsys):
    with criterion(2, "convergence list 10..30 and scan(5e-7) -> paper_k 18", limit=5.0):
        rows = _table(["phis", "--max-paper-k", "30"], capsys)
        shown = [r["phi_display"] for r in rows]
        assert shown[9:17] == SCAN_10_TO_17
        assert shown[17:30] == ["0.5"] * 13
        assert sequences.convergence_scan(5e-7).paper_k == 18


def test_03_difference_list(criterion):
    with criterion(3, "difference list values, positivity, monotonicity, ratio -> 1/2"):
        diffs = sequences.difference_sequence(sequences.phi_scan(31))
        assert [diffs.by_paper_k(k).display for k in range(1, 13)] == DIFFS_1_TO_12
        vals = [diffs.by_paper_k(k).value for k in range(1, 30)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))
        for k in range(15, 29):
            ratio = diffs.by_paper_k(k + 1).value / diffs.by_paper_k(k).value
            assert 0.49 < ratio < 0.51


def test_04_golden_eigenpair(criterion):
    with criterion(4, "order-2 roots (1 +- sqrt5)/2"):
        eig = spectra.eigenvalues(2)
        assert abs(eig.roots[0] - (1 + math.sqrt(5)) / 2) < 1e-12
        assert abs(eig.roots[1] - (1 - math.sqrt(5)) / 2) < 1e-12
        assert f"{1 / eig.roots[0].real:.6f}" == "0.618034"


def test_05_spectral_properties(criterion):
    with criterion(5, "residual/Vieta/Pisot/cross-module for orders 2..20", limit=10.0):
        for m in range(2, 21):
            eig = spectra.eigenvalues(m)
            assert max(eig.residuals) < 1e-12, m
            with mpmath.workdps(40):
                assert abs(complex(sum(eig.precise_roots)) - 1) < 1e-10, m
            assert sum(abs(r) > 1 for r in eig.roots) == 1, m
            phi_m = float(sequences.phi(m).value)
            assert abs(1 / eig.dominant.real - phi_m) < 1e-6, m


def test_06_julia_minus_one(criterion):
    with criterion(6, "julia(-1): 0.6180339887 -> 1001, 0.543689 -> finite"):
        assert fractals.julia_iteration_count(-1, 0.6180339887, 1000) == 1001
        count = fractals.julia_iteration_count(-1, 0.543689, 1000)
        assert count <= 1000, f"0.543689 did not escape under z^2 - 1 (count {count})"


def test_07_julia_minus_two_oracle(criterion, cloud):
    with criterion(7, "julia(-2) segment oracle over the full cloud"):
        report = fractals.classify_points(cloud, ["julia:-2"])
        for rec in report.records:
            v = rec.point.value
            expected = abs(v.imag) <= 1e-9 and abs(v.real) <= 2
            assert rec.member == expected, v
        counts = report.iteration_counts("julia:-2")
        assert set(counts) <= {2, 3, 4, 1001}
        assert {2, 3, 4, 1001} <= set(counts)


def test_08_mandelbrot_real_axis(criterion, cloud, capsys):
    with criterion(8, "mandelbrot real-axis oracle; aggregate count reported"):
        report = fractals.classify_points(cloud, ["mandelbrot"])
        for rec in report.records:
            v = rec.point.value
            if v.imag == 0.0:
                assert rec.member == (-2 <= v.real <= 0.25), v
        assert not fractals.mandelbrot_member(0.618034)[0]
        assert fractals.mandelbrot_member(-1.618034)[0]
        members = report.counts["mandelbrot"]
        with capsys.disabled():
            print(f"\n  mandelbrot members: {members} of {len(cloud)} "
                  f"(published: {fractals.PUBLISHED_MANDELBROT_MEMBERS} of {spectra.PUBLISHED_POINT_COUNT}; "
                  f"point counts differ)")


def test_09_escape_kernel_properties(criterion):
    with criterion(9, "randomized bailout/budget checks and oracle agreement", limit=30.0):
        rng = random.Random(20261018)

        def rand_disk(r):
            rad, ang = r * math.sqrt(rng.random()), rng.uniform(-math.pi, math.pi)
            return complex(rad * math.cos(ang), rad * math.sin(ang))

        for _ in range(1000):
            c, z0 = rand_disk(2.0), rand_disk(2.5)
            budget = rng.randint(1, 200)
            res = escape_iterate(QuadraticParams(c, z0, budget))
            if res.escaped:
                assert res.final_modulus > 2
                z = z0
                for _ in range(res.iterations):
                    z = z * z + c
                prev = abs(z)
                for _ in range(10):
                    z = z * z + c
                    if prev > 1e100:
                        break
                    assert abs(z) > prev
                    prev = abs(z)
            bigger = escape_iterate(QuadraticParams(c, z0, budget + rng.randint(0, 200)))
            if res.escaped:
                assert bigger.escaped and bigger.iterations == res.iterations
            else:
                assert bigger.iterations > budget

        agree = total = 0
        for _ in range(1000):
            x = rng.uniform(-2.5, 2.5)
            if abs(abs(x) - 2) <= 1e-9:
                continue
            total += 1
            member = fractals.julia_iteration_count(-2, x, 1000) == 1001
            agree += member == (abs(x) <= 2)
        assert agree / total >= 0.999

        agree = total = 0
        for _ in range(1000):
            c = rng.uniform(-2.2, 0.5)
            if abs(c + 2) <= 1e-6 or abs(c - 0.25) <= 1e-6:
                continue
            total += 1
            member = fractals.mandelbrot_member(c, 1000)[0]
            agree += member == (-2 <= c <= 0.25)
        assert agree / total >= 0.999


def test_10_figure_artifacts(criterion, tmp_path, capsys):
    with criterion(10, "render: mandelbrot PGM + SVG overlay, julia(-1) zoom; deterministic"):
        outputs = []
        for run in range(2):
            d = tmp_path / f"run{run}"
            d.mkdir()
            for argv in (
                ["render", "--figure", "2", "--format", "pgm", "-o", str(d / "fig2.pgm")],
                ["render", "--figure", "2", "--format", "svg", "-o", str(d / "fig2.svg")],
                ["render", "--figure", "4", "--format", "svg", "-o", str(d / "fig4.svg")],
            ):
                assert main(argv) == 0
            capsys.readouterr()
            outputs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
        assert outputs[0] == outputs[1]
        files = outputs[0]
        assert files["fig2.pgm"].startswith(b"P2\n600 520\n")
        assert files["fig2.svg"].count(b"<circle") == 209
        fig4 = files["fig4.svg"].decode()
        # 0.618034 sits at the centre pixel of the 400x400 zoom
        centres = re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)"', fig4)
        assert any(abs(float(x) - 200) < 0.5 and abs(float(y) - 200) < 0.5 for x, y in centres)
        assert "julia:-1" in fig4
