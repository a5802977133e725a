"""Brute-force measurement optimization: the ground truth for the closed forms.

The measurement acts on qubit b. A projective qubit measurement is fixed by
a Bloch direction n (projectors (I +- n.sigma)/2), and n and -n give the
same measurement, so the search runs over the upper hemisphere: a coarse
polar/azimuth grid followed by Nelder-Mead refinement from the best cell.
"""

from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np

from . import kernels
from .closed_form import min_measured_entropy_x
from .errors import ConvergenceError, DomainError
from .linalg import (
    EIGEN_CLAMP,
    I2,
    PAULIS,
    SIGMA_Y,
    DensityMatrix,
    as_density,
    eigenvalues_hermitian,
    eigh_hermitian,
    entropy_from_spectrum,
    kron,
    partial_trace_a,
)
from .optimize import hemisphere_grid, octant_grid, refine_on_sphere
from .states import validate_corner_condition

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    coarse_polar_steps: int = 90
    coarse_azimuth_steps: int = 180
    refine_iterations: int = 200
    refine_tolerance: float = 1e-12

    def __post_init__(self):
        if self.coarse_polar_steps < 8 or self.coarse_azimuth_steps < 8:
            raise ValueError("coarse grid needs at least 8 steps per angle")
        if self.refine_iterations < 1:
            raise ValueError("refine_iterations must be positive")
        if not self.refine_tolerance > 0:
            raise ValueError("refine_tolerance must be > 0")

    @property
    def step(self):
        """Initial simplex size: one polar grid spacing, in radians."""
        return 0.5 * np.pi / self.coarse_polar_steps


DEFAULT_CONFIG = OptimizerConfig()


class UnitaryParams(NamedTuple):
    t: float
    y: tuple


class OracleResult(NamedTuple):
    value: float
    direction: np.ndarray
    min_measured_entropy: float
    state_entropy: float


def as_direction(n):
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or not np.isfinite(n).all():
        raise ValueError(f"direction must be a finite 3-vector, got {n!r}")
    norm = np.linalg.norm(n)
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"direction must have unit norm, |n| = {norm:.15g}")
    return n


def direction_of_unitary(u):
    """Bloch direction z of the rotated basis V|k>, for V = t I + i y.sigma."""
    t = float(u.t)
    y1, y2, y3 = (float(v) for v in u.y)
    norm = t * t + y1 * y1 + y2 * y2 + y3 * y3
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"unitary parameters must satisfy t^2 + |y|^2 = 1, got {norm:.15g}")
    return np.array([
        2 * (-t * y2 + y1 * y3),
        2 * (t * y1 + y2 * y3),
        t * t + y3 * y3 - y1 * y1 - y2 * y2,
    ])


def projectors(n):
    n = as_direction(n)
    ns = sum(n[i] * PAULIS[i] for i in range(3))
    return (I2 + ns) / 2, (I2 - ns) / 2


def post_measurement_state(rho, n):
    rho = as_density(rho)
    n = as_direction(n)
    out = kernels.post_measurement_batch(rho.matrix, n[None])[0]
    return DensityMatrix(0.5 * (out + out.conj().T))


def measured_entropy(rho, n):
    rho = as_density(rho)
    n = as_direction(n)
    return float(kernels.measured_entropies(rho.matrix, n[None])[0])


def _canonical(n):
    n = n / np.linalg.norm(n)
    for v in n[::-1]:
        if abs(v) > 1e-15:
            return n if v > 0 else -n
    return n  # pragma: no cover


def _minimize_state_objective(kernel, rho, cfg, what):
    grid = hemisphere_grid(cfg.coarse_polar_steps, cfg.coarse_azimuth_steps)
    vals = kernel(rho, grid)
    j = int(np.argmin(vals))

    def fun(dirs, idx):
        return kernel(rho, dirs)

    dirs, fvals, conv = refine_on_sphere(fun, grid[j][None], cfg.step, cfg.refine_iterations, cfg.refine_tolerance)
    best_dir, best_val = dirs[0], float(fvals[0])
    if vals[j] <= best_val:
        best_dir, best_val = grid[j], float(vals[j])
    if not conv[0]:
        raise ConvergenceError(
            f"{what}: simplex refinement did not reach tolerance {cfg.refine_tolerance:g} "
            f"within {cfg.refine_iterations} iterations",
            best_value=best_val,
            best_direction=_canonical(best_dir),
        )
    return best_val, _canonical(best_dir)


def owid_oracle(rho, cfg=None):
    """One-way information deficit by direct minimization over measurements."""
    cfg = cfg or DEFAULT_CONFIG
    rho = as_density(rho)
    if rho.dim != 4:
        raise DomainError("owid_oracle needs a two-qubit (4x4) state")
    s_rho = entropy_from_spectrum(rho.eigenvalues)
    m, n = _minimize_state_objective(kernels.measured_entropies, rho.matrix, cfg, "owid_oracle")
    return OracleResult(max(m - s_rho, 0.0), n, m, s_rho)


def discord_oracle(rho, cfg=None):
    """One-sided quantum discord with the measurement on qubit b."""
    cfg = cfg or DEFAULT_CONFIG
    rho = as_density(rho)
    if rho.dim != 4:
        raise DomainError("discord_oracle needs a two-qubit (4x4) state")
    s_rho = entropy_from_spectrum(rho.eigenvalues)
    rho_b = partial_trace_a(rho.matrix)
    s_b = entropy_from_spectrum(eigenvalues_hermitian(0.5 * (rho_b + rho_b.conj().T)))
    cond, _ = _minimize_state_objective(kernels.conditional_entropies, rho.matrix, cfg, "discord_oracle")
    return max(s_b - s_rho + cond, 0.0)


_YY = kron(SIGMA_Y, SIGMA_Y)


def concurrence_oracle(rho):
    """Wootters concurrence from the spectrum of rho * spin-flipped rho.

    The spectrum is taken from the Hermitian matrix sqrt(rho) rho~ sqrt(rho),
    which is similar to rho rho~.
    """
    rho = as_density(rho)
    if rho.dim != 4:
        raise DomainError("concurrence needs a two-qubit (4x4) state")
    m = rho.matrix
    tilde = _YY @ m.conj() @ _YY
    w, v = eigh_hermitian(m)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    r = root @ tilde @ root
    mu = eigenvalues_hermitian(0.5 * (r + r.conj().T))
    if mu[0] < -EIGEN_CLAMP:
        raise DomainError(f"rho rho~ has negative eigenvalue {mu[0]:.3g}")
    roots = np.sqrt(np.clip(mu, 0.0, None))
    return max(2.0 * roots.max() - roots.sum(), 0.0)


def _reduced_refine(s, c, cfg):
    grid = octant_grid(cfg.coarse_polar_steps, cfg.coarse_azimuth_steps)
    idx, val = kernels.reduced_grid_min(s, c, grid)

    def fun(dirs, pid):
        return kernels.reduced_values(s[pid], c[pid], dirs)

    dirs, fvals, conv = refine_on_sphere(fun, grid[idx], cfg.step, cfg.refine_iterations, cfg.refine_tolerance)
    better = val <= fvals
    out_val = np.where(better, val, fvals)
    out_dir = np.where(better[:, None], grid[idx], dirs)
    return out_val, out_dir, conv


def reduced_minimize_batch(s, c, cfg=None):
    """Vectorized minimum over unit z of f(s z3, sqrt(sum c_i^2 z_i^2)).

    ``s`` has shape (B,), ``c`` shape (B, 3). Returns ``(values, directions,
    converged)``. The objective depends only on z_i^2 and |s z3|, so the
    coarse search covers the positive octant.
    """
    cfg = cfg or DEFAULT_CONFIG
    s = np.ascontiguousarray(s, dtype=float)
    c = np.ascontiguousarray(c, dtype=float)
    if s.size == 0:
        return np.empty(0), np.empty((0, 3)), np.empty(0, dtype=bool)
    return _reduced_refine(s, c, cfg)


def min_measured_entropy_x_reduced(p, cfg=None):
    """Minimum measured entropy of an X state by sphere search over the reduced objective."""
    cfg = cfg or DEFAULT_CONFIG
    p.check_physical()
    vals, dirs, conv = reduced_minimize_batch(np.array([p.s]), p.c[None], cfg)
    if not conv[0]:
        raise ConvergenceError(
            "min_measured_entropy_x_reduced: refinement did not converge",
            best_value=float(vals[0]),
            best_direction=dirs[0],
        )
    return float(vals[0])


@dataclass
class CornerReport:
    """Comparison of the closed-form minimum against the reduced search."""

    checked: int = 0
    max_abs_diff: float = 0.0
    tolerance: float = 1e-8
    counterexamples: List[dict] = field(default_factory=list)

    @property
    def ok(self):
        return not self.counterexamples


def verify_corner_claim(params, cfg=None, tolerance=1e-8):
    """Check that the measured entropy minimum sits at z = (0, 0, 1) under the corner condition.

    Parameters outside the corner condition are skipped. Any mismatch beyond
    ``tolerance`` is recorded with the direction the search found.
    """
    cfg = cfg or DEFAULT_CONFIG
    params = [p for p in params if validate_corner_condition(p)]
    report = CornerReport(tolerance=tolerance)
    if not params:
        return report
    s = np.array([p.s for p in params])
    c = np.array([p.c for p in params])
    vals, dirs, _ = reduced_minimize_batch(s, c, cfg)
    for p, v, d in zip(params, vals, dirs):
        closed = min_measured_entropy_x(p)
        diff = abs(closed - float(v))
        report.checked += 1
        report.max_abs_diff = max(report.max_abs_diff, diff)
        if diff > tolerance:
            report.counterexamples.append({
                "params": {"s": p.s, "c": [p.c1, p.c2, p.c3]},
                "closed_form": closed,
                "reduced_search": float(v),
                "difference": closed - float(v),
                "direction": [float(x) for x in d],
            })
    return report
