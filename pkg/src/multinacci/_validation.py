"""Input checks shared by the functional API and the estimators."""

import math
import numbers

import numpy as np


class ValidationError(ValueError):
    """Raised when an argument fails validation; ``field`` names the culprit."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


def check_int(value, field, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError(field, f"expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(field, f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(field, f"must be <= {maximum}, got {value}")
    return value


def check_positive(value, field, minimum=0.0):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(field, f"expected a real number, got {value!r}") from None
    if not math.isfinite(value) or value <= minimum:
        raise ValidationError(field, f"must be finite and > {minimum}, got {value}")
    return value


def check_complex(value, field):
    try:
        value = complex(value)
    except (TypeError, ValueError):
        raise ValidationError(field, f"expected a complex number, got {value!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValidationError(field, f"must be finite, got {value}")
    return value


def check_complex_array(X, field="X"):
    """Coerce ``X`` to a flat complex128 array.

    Accepts a 1-d array of complex numbers, or an ``(n, 2)`` real array of
    ``(re, im)`` pairs (the layout scikit-learn pipelines produce).
    """
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    elif arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValidationError(field, f"expected shape (n,) or (n, 2), got {arr.shape}")
    if arr.size == 0:
        raise ValidationError(field, "must not be empty")
    try:
        arr = arr.astype(np.complex128)
    except (TypeError, ValueError):
        raise ValidationError(field, "not convertible to complex") from None
    if not np.all(np.isfinite(arr)):
        raise ValidationError(field, "contains non-finite values")
    return arr


def check_orders(orders, field="orders", minimum=2, maximum=None):
    """Validate an iterable of recurrence orders; returns a list of ints."""
    if isinstance(orders, numbers.Integral):
        orders = [orders]
    orders = [check_int(m, field, minimum, maximum) for m in np.ravel(np.asarray(list(orders)))]
    if not orders:
        raise ValidationError(field, "must not be empty")
    return orders
