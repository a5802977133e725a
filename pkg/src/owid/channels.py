"""Phase-flip decoherence on both qubits and the resulting correlation dynamics."""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .closed_form import concurrence_x_state, entropy_x_state, owid_bell_diagonal, xlog2x
from .linalg import I2, DensityMatrix, as_density, kron
from .errors import ConvergenceError
from .oracle import min_measured_entropy_x_reduced, reduced_minimize_batch
from .states import BellDiagonalParams, XStateParams, validate_corner_condition

COMPLETENESS_TOL = 1e-10
EVENT_TOL = 1e-8
SCAN_POINTS = 1001


def p_of_time(gamma, t):
    """Decoherence strength p = 1 - exp(-gamma t)."""
    if gamma < 0 or t < 0:
        raise ValueError(f"gamma and t must be non-negative, got gamma={gamma}, t={t}")
    return -math.expm1(-gamma * t)


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class PhaseFlipChannel:
    p: float

    def __post_init__(self):
        _check_p(self.p)

    def kraus(self):
        return kraus_phase_flip(self.p)

    def apply(self, rho):
        return apply_channel_kraus(rho, self.kraus())

    def apply_params(self, params):
        return apply_phase_flip_x(params, self.p)


def kraus_phase_flip(p):
    """Kraus operators per side: ``((G0_A, G1_A), (G0_B, G1_B))``, each 4x4."""
    _check_p(p)
    keep = math.sqrt(1 - p / 2)
    flip = math.sqrt(p / 2)
    g0 = np.diag([keep, keep]).astype(np.complex128)
    g1 = np.diag([flip, -flip]).astype(np.complex128)
    return (kron(g0, I2), kron(g1, I2)), (kron(I2, g0), kron(I2, g1))


def _as_sets(kraus):
    kraus = list(kraus)
    if kraus and np.asarray(kraus[0]).ndim == 2:
        return [kraus]
    return kraus


def apply_channel_kraus(rho, kraus):
    """Apply ``sum_k K rho K^H`` for each Kraus set in turn.

    ``kraus`` is either one set (a list of matrices) or a sequence of sets,
    e.g. the per-side pair returned by :func:`kraus_phase_flip`.
    """
    m = np.asarray(as_density(rho), dtype=np.complex128)
    dim = m.shape[0]
    for ops in _as_sets(kraus):
        ops = [np.asarray(k, dtype=np.complex128) for k in ops]
        total = sum(k.conj().T @ k for k in ops)
        defect = np.abs(total - np.eye(dim)).max()
        if defect > COMPLETENESS_TOL:
            raise ValueError(f"Kraus set is not complete (max |sum K^H K - I| = {defect:.3g})")
        m = sum(k @ m @ k.conj().T for k in ops)
    return DensityMatrix(0.5 * (m + m.conj().T))


def apply_phase_flip_x(params, p):
    """Parameters after phase flip of strength ``p`` on both qubits (same family)."""
    _check_p(p)
    scale = float((1 - p) ** 2)
    if isinstance(params, BellDiagonalParams):
        return BellDiagonalParams(scale * params.c1, scale * params.c2, params.c3)
    return XStateParams(params.s, scale * params.c1, scale * params.c2, params.c3)


def _as_bell(params):
    """Bell-diagonal view of ``params`` when it has no s component, else None."""
    if isinstance(params, BellDiagonalParams):
        return params
    if params.s == 0.0:
        return BellDiagonalParams(params.c1, params.c2, params.c3)
    return None


def owid_under_phase_flip(params, p):
    """OWID of the dephased state, evaluated in closed form when it applies.

    If the dephased parameters leave the region where the closed form is
    proven (for instance p = 1, where c1 = c2 = 0), the value comes from
    the reduced sphere search instead and a warning is issued.
    """
    _check_p(p)
    params.check_physical()
    bell = _as_bell(params)
    if bell is not None:
        return owid_bell_diagonal(apply_phase_flip_x(bell, p))
    after = apply_phase_flip_x(params, p)
    if not validate_corner_condition(after):
        warnings.warn(
            f"dephased state {after} is outside the corner condition; using reduced sphere search",
            RuntimeWarning,
            stacklevel=2,
        )
        return max(min_measured_entropy_x_reduced(after) - entropy_x_state(after), 0.0)
    s, c1, c2, c3 = params.s, params.c1, params.c2, params.c3
    k = (1 - p) ** 4
    plus = math.sqrt(s * s + k * (c1 + c2) ** 2)
    minus = math.sqrt(s * s + k * (c1 - c2) ** 2)
    value = 0.25 * (
        xlog2x(1 - c3 + plus) + xlog2x(1 - c3 - plus) + xlog2x(1 + c3 + minus) + xlog2x(1 + c3 - minus)
    ) - 0.25 * (
        xlog2x(1 + s - c3) + xlog2x(1 + s + c3) + xlog2x(1 - s - c3) + xlog2x(1 - s + c3)
    )
    return max(value, 0.0)


def concurrence_under_phase_flip(params, p, raw=False):
    return concurrence_x_state(apply_phase_flip_x(params, p), raw=raw)


class TrajectoryPoint(NamedTuple):
    p: float
    owid: float
    concurrence: float


def dynamics_trajectory(params, p_grid, cfg=None):
    """OWID and concurrence along ``p_grid`` (ascending values in [0, 1]).

    Points outside the closed-form region are evaluated together in one
    batched reduced sphere search, with a single warning.
    """
    p_grid = [float(p) for p in p_grid]
    if any(b < a for a, b in zip(p_grid, p_grid[1:])):
        raise ValueError("p_grid must be sorted ascending")
    for p in p_grid:
        _check_p(p)
    params.check_physical()
    owid = np.empty(len(p_grid))
    fallback = []
    for i, p in enumerate(p_grid):
        after = apply_phase_flip_x(params, p)
        if _as_bell(params) is not None or validate_corner_condition(after):
            owid[i] = owid_under_phase_flip(params, p)
        else:
            fallback.append(i)
    if fallback:
        warnings.warn(
            f"{len(fallback)} trajectory point(s) outside the corner condition; using reduced sphere search",
            RuntimeWarning,
            stacklevel=2,
        )
        after = [apply_phase_flip_x(params, p_grid[i]) for i in fallback]
        vals, dirs, conv = reduced_minimize_batch(
            np.array([a.s for a in after]), np.array([a.c for a in after]), cfg
        )
        if not conv.all():
            k = int(np.argmin(conv))
            raise ConvergenceError(
                f"dynamics_trajectory: reduced search did not converge at p = {p_grid[fallback[k]]:g}",
                best_value=float(vals[k]),
                best_direction=dirs[k],
            )
        for j, i in enumerate(fallback):
            owid[i] = max(float(vals[j]) - entropy_x_state(after[j]), 0.0)
    return [
        TrajectoryPoint(p, float(owid[i]), concurrence_under_phase_flip(params, p))
        for i, p in enumerate(p_grid)
    ]


@dataclass(frozen=True)
class EventReport:
    kind: str
    found: bool
    p_star: Optional[float] = None
    residual: Optional[float] = None
    message: str = ""

    def to_json(self):
        return {
            "kind": self.kind,
            "found": self.found,
            "p_star": self.p_star,
            "residual": self.residual,
            "message": self.message,
        }


def _bisect(pred, lo, hi, tol=EVENT_TOL):
    """Shrink [lo, hi] with pred(lo) true and pred(hi) false until hi - lo <= tol."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def find_sudden_death(params):
    """Smallest p at which the concurrence reaches zero and stays there."""
    params.check_physical()
    grid = np.linspace(0.0, 1.0, SCAN_POINTS)
    conc = np.array([concurrence_under_phase_flip(params, p) for p in grid])
    if conc[0] <= 0.0:
        return EventReport("sudden_death", False, message="state is separable at p = 0")
    if conc[-1] > 0.0:
        return EventReport("sudden_death", False, message="concurrence stays positive up to p = 1")
    k = int(np.argmax(conc <= 0.0))
    if (conc[k:] > 0.0).any():
        return EventReport("sudden_death", False, message="concurrence revives after first zero")
    lo, hi = _bisect(lambda p: concurrence_under_phase_flip(params, p) > 0.0, grid[k - 1], grid[k])
    p_star = 0.5 * (lo + hi)
    residual = concurrence_under_phase_flip(params, p_star, raw=True)
    return EventReport("sudden_death", True, float(p_star), float(residual))


def find_crossing(params):
    """First p where the concurrence falls to the OWID."""
    params.check_physical()
    death = find_sudden_death(params)
    p_end = death.p_star if death.found else 1.0

    def gap(p):
        return concurrence_under_phase_flip(params, p) - owid_under_phase_flip(params, p)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        if gap(0.0) <= 0.0:
            report = EventReport("crossing", False, message="OWID already >= concurrence at p = 0")
        else:
            grid = np.linspace(0.0, p_end, SCAN_POINTS)
            gaps = np.array([pt.concurrence - pt.owid for pt in dynamics_trajectory(params, grid)])
            if (gaps > 0.0).all():
                report = EventReport("crossing", False, message="concurrence stays above OWID")
            else:
                k = int(np.argmax(gaps <= 0.0))
                lo, hi = _bisect(lambda p: gap(p) > 0.0, grid[k - 1], grid[k])
                p_star = 0.5 * (lo + hi)
                report = EventReport("crossing", True, float(p_star), float(gap(p_star)))
    if caught:
        warnings.warn(
            "crossing search left the corner condition on part of the path; OWID there comes from the reduced sphere search",
            RuntimeWarning,
            stacklevel=2,
        )
    return report
