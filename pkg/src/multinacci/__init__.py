"""Multinacci ratios, companion-matrix spectra and quadratic escape-time sets."""

from ._validation import ConvergenceError, ValidationError
from .estimators import CompanionSpectrum, EscapeTimeClassifier, MultinacciRatio
from .fractals import (
    EscapeResult,
    GridSpec,
    MembershipReport,
    QuadraticParams,
    SetSpec,
    classify_points,
    escape_iterate,
    julia_iteration_count,
    mandelbrot_member,
    render_grid,
)
from .sequences import (
    BigSequence,
    DifferenceSequence,
    PhiValue,
    RecurrenceSpec,
    convergence_scan,
    difference_sequence,
    generate_sequence,
    phi,
    phi_scan,
)
from .spectra import (
    CharacteristicPolynomial,
    CompanionMatrix,
    EigenvalueSet,
    PhiPoint,
    build_companion,
    characteristic_polynomial,
    eigenvalues,
    phi_points,
)

__version__ = "0.1.0"
