"""Closed-form entropies, OWID and concurrence for the two state families.

Every function takes a :class:`~owid.states.BellDiagonalParams` or
:class:`~owid.states.XStateParams`. OWID values are clamped at zero;
pass ``raw=True`` to get the unclamped floating-point result.
"""

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PreconditionError
from .states import XStateParams, validate_corner_condition

LOG_CLAMP = 1e-12


class MeasurementReduction(NamedTuple):
    """(phi, theta) pair that fixes the post-measurement spectrum."""

    phi: float
    theta: float


def xlog2x(x):
    """x log2 x with 0 log 0 = 0; arguments in [-1e-12, 0) count as 0."""
    if x < 0.0:
        if x < -LOG_CLAMP:
            raise DomainError(f"negative logarithm argument {x:.3g}")
        return 0.0
    if x == 0.0:
        return 0.0
    return x * math.log2(x)


def _sum_xlog2x(*args):
    return sum(xlog2x(a) for a in args)


def f_phi_theta(phi, theta):
    """Entropy of the post-measurement state with spectrum (1 +- phi +- theta)/4.

    Evaluated on (|phi|, |theta|) so the reflection symmetries hold exactly.
    """
    phi, theta = abs(float(phi)), abs(float(theta))
    return 2.0 - 0.25 * _sum_xlog2x(1 + phi - theta, 1 + phi + theta, 1 - phi - theta, 1 - phi + theta)


def entropy_bell_diagonal(p):
    p.check_physical()
    c1, c2, c3 = p.c1, p.c2, p.c3
    return 2.0 - 0.25 * _sum_xlog2x(
        1 - c1 - c2 - c3,
        1 - c1 + c2 + c3,
        1 + c1 - c2 + c3,
        1 + c1 + c2 - c3,
    )


def _max_abs_c(p):
    return max(abs(p.c1), abs(p.c2), abs(p.c3))


def min_measured_entropy_bell(p):
    p.check_physical()
    c = _max_abs_c(p)
    return 2.0 - 0.5 * xlog2x(1 - c) - 0.5 * xlog2x(1 + c)


def owid_bell_diagonal(p, raw=False):
    p.check_physical()
    c1, c2, c3 = p.c1, p.c2, p.c3
    c = _max_abs_c(p)
    value = 0.25 * _sum_xlog2x(
        1 - c1 - c2 - c3,
        1 - c1 + c2 + c3,
        1 + c1 - c2 + c3,
        1 + c1 + c2 - c3,
    ) - 0.5 * xlog2x(1 - c) - 0.5 * xlog2x(1 + c)
    return value if raw else max(value, 0.0)


def _x_radii(s, c1, c2):
    return math.hypot(s, c1 + c2), math.hypot(s, c1 - c2)


def entropy_x_state(p):
    p.check_physical()
    plus, minus = _x_radii(p.s, p.c1, p.c2)
    c3 = p.c3
    return 2.0 - 0.25 * _sum_xlog2x(1 - c3 + plus, 1 - c3 - plus, 1 + c3 + minus, 1 + c3 - minus)


def _require_corner_condition(p, allow_boundary):
    report = validate_corner_condition(p, allow_boundary=allow_boundary)
    if not report:
        raise PreconditionError(
            f"{p} is outside the corner condition: {', '.join(report.violations)}; "
            "use owid.oracle.min_measured_entropy_x_reduced instead"
        )


def min_measured_entropy_x(p, allow_boundary=False):
    """Minimum measured entropy, attained at the measurement direction (0, 0, 1)."""
    p.check_physical()
    _require_corner_condition(p, allow_boundary)
    s, c3 = p.s, p.c3
    return 2.0 - 0.25 * _sum_xlog2x(1 + s - c3, 1 + s + c3, 1 - s - c3, 1 - s + c3)


def owid_x_state(p, allow_boundary=False, raw=False):
    p.check_physical()
    _require_corner_condition(p, allow_boundary)
    s, c3 = p.s, p.c3
    plus, minus = _x_radii(s, p.c1, p.c2)
    value = 0.25 * _sum_xlog2x(
        1 - c3 + plus, 1 - c3 - plus, 1 + c3 + minus, 1 + c3 - minus
    ) - 0.25 * _sum_xlog2x(1 + s - c3, 1 + s + c3, 1 - s - c3, 1 - s + c3)
    return value if raw else max(value, 0.0)


def concurrence_sqrt_eigs(p):
    """Square roots of the four eigenvalues of rho * rho_tilde, unsorted."""
    s, c1, c2, c3 = p.s, p.c1, p.c2, p.c3
    r_plus = math.sqrt(max((1 + c3) ** 2 - s * s, 0.0))
    r_minus = math.sqrt(max((1 - c3) ** 2 - s * s, 0.0))
    return np.array([
        abs(c1 - c2 - r_plus),
        abs(c1 - c2 + r_plus),
        abs(c1 + c2 - r_minus),
        abs(c1 + c2 + r_minus),
    ]) / 4


def concurrence_x_state(p, raw=False):
    """Wootters concurrence of an X state (or a Bell-diagonal state)."""
    if not isinstance(p, XStateParams):
        p = XStateParams.from_bell(p)
    p.check_physical()
    roots = concurrence_sqrt_eigs(p)
    value = float(2.0 * roots.max() - roots.sum())
    return value if raw else max(value, 0.0)
