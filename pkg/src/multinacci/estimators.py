"""scikit-learn style wrappers so the pipeline composes with sklearn tooling.

Orders go in as a 1-d integer array (or an ``(n, 1)`` column); complex points
as a complex 1-d array or an ``(n, 2)`` array of ``(re, im)`` columns.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import fractals, sequences, spectra
from ._validation import check_complex_array, check_int, check_orders, check_positive


class MultinacciRatio(TransformerMixin, BaseEstimator):
    """Map recurrence orders to their inverse limiting ratios.

    Parameters
    ----------
    term_count : int, default=100
    digits : int, default=30
    """

    def __init__(self, term_count=sequences.DEFAULT_TERMS, digits=sequences.DEFAULT_DIGITS):
        self.term_count = term_count
        self.digits = digits

    def fit(self, X=None, y=None):
        check_int(self.term_count, "term_count", minimum=4)
        check_int(self.digits, "digits", minimum=sequences.DISPLAY_DIGITS,
                  maximum=sequences.MAX_DIGITS)
        self.phis_ = {}
        if X is not None:
            for m in check_orders(X, "X"):
                self._phi(m)
        return self

    def _phi(self, m):
        if m not in self.phis_:
            self.phis_[m] = sequences.phi(m, self.term_count, self.digits)
        return self.phis_[m]

    def transform(self, X):
        check_is_fitted(self, "phis_")
        orders = check_orders(X, "X")
        return np.array([float(self._phi(m).value) for m in orders])

    def phi_values(self, X):
        """Full-precision ``PhiValue`` records rather than floats."""
        check_is_fitted(self, "phis_")
        return [self._phi(m) for m in check_orders(X, "X")]


class CompanionSpectrum(TransformerMixin, BaseEstimator):
    """Companion-matrix spectra; ``transform`` yields the inverse-root cloud.

    ``transform(orders)`` returns an ``(n_points, 2)`` array of ``(re, im)``
    for ``1/root`` over every root of every requested order, in canonical
    root order.  Provenance lives in ``points_``.
    """

    def __init__(self, tolerance=spectra.DEFAULT_TOLERANCE, max_iterations=spectra.MAX_ITERATIONS,
                 polish_digits=spectra.POLISH_DIGITS, max_order=spectra.MAX_ORDER):
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.polish_digits = polish_digits
        self.max_order = max_order

    def _solve(self, m):
        if m not in self.eigenvalue_sets_:
            self.eigenvalue_sets_[m] = spectra.eigenvalues(
                m, self.tolerance, self.max_iterations,
                polish_digits=self.polish_digits, max_order=self.max_order,
            )
        return self.eigenvalue_sets_[m]

    def fit(self, X, y=None):
        check_positive(self.tolerance, "tolerance")
        orders = check_orders(X, "X", maximum=self.max_order)
        self.eigenvalue_sets_ = {}
        for m in orders:
            self._solve(m)
        self.points_ = spectra.phi_points(
            orders, self.tolerance, max_iterations=self.max_iterations,
            polish_digits=self.polish_digits, max_order=self.max_order,
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "eigenvalue_sets_")
        orders = check_orders(X, "X", maximum=self.max_order)
        out = []
        for m in orders:
            out.extend(1 / r for r in self._solve(m).precise_roots)
        vals = np.array([complex(v) for v in out])
        return np.column_stack([vals.real, vals.imag])


class EscapeTimeClassifier(ClassifierMixin, BaseEstimator):
    """Membership in the Mandelbrot set or a filled Julia set at a fixed budget.

    ``set="mandelbrot"`` treats each sample as the parameter ``c``;
    ``set="julia"`` treats each sample as a starting point ``z0`` for
    ``z**2 + c``.  Nothing is learned: ``fit`` only validates.
    """

    def __init__(self, set="mandelbrot", c=None, max_iterations=fractals.DEFAULT_MAX_ITERATIONS,
                 bailout=None):
        self.set = set
        self.c = c
        self.max_iterations = max_iterations
        self.bailout = bailout

    def fit(self, X=None, y=None):
        self.set_spec_ = fractals.SetSpec(self.set, self.c, self.max_iterations, self.bailout)
        self.classes_ = np.array([False, True])
        if X is not None:
            check_complex_array(X)
        return self

    def iteration_counts(self, X):
        check_is_fitted(self, "set_spec_")
        return np.array([self.set_spec_.test(z).iterations for z in check_complex_array(X)])

    def transform(self, X):
        return self.iteration_counts(X)

    def predict(self, X):
        return self.iteration_counts(X) > self.set_spec_.max_iterations

    def oracle(self, X):
        """Closed-form verdicts; entries are ``None`` where no oracle exists."""
        check_is_fitted(self, "set_spec_")
        return [self.set_spec_.oracle(z) for z in check_complex_array(X)]
