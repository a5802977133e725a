"""Two-qubit state families and their Bloch (Pauli) decomposition.

Basis order is |00>, |01>, |10>, |11> with qubit a first. The X-state
family carries its local Bloch vector (0, 0, s) on qubit b.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError
from .linalg import EIGEN_CLAMP, I2, PAULIS, DensityMatrix, kron

_SIGMA_SIGMA = [[kron(a, b) for b in PAULIS] for a in PAULIS]
_SIGMA_I = [kron(a, I2) for a in PAULIS]
_I_SIGMA = [kron(I2, b) for b in PAULIS]


@dataclass(frozen=True)
class BellDiagonalParams:
    c1: float
    c2: float
    c3: float

    @property
    def c(self):
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def labelled_spectrum(self):
        c1, c2, c3 = self.c1, self.c2, self.c3
        return {
            "lambda1": (1 - c1 - c2 - c3) / 4,
            "lambda2": (1 - c1 + c2 + c3) / 4,
            "lambda3": (1 + c1 - c2 + c3) / 4,
            "lambda4": (1 + c1 + c2 - c3) / 4,
        }

    def is_physical(self):
        return all(v >= -EIGEN_CLAMP for v in self.labelled_spectrum().values())

    def check_physical(self):
        _check_labelled(self.labelled_spectrum(), self)
        return self


@dataclass(frozen=True)
class XStateParams:
    s: float
    c1: float
    c2: float
    c3: float

    @property
    def c(self):
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def labelled_spectrum(self):
        s, c1, c2, c3 = self.s, self.c1, self.c2, self.c3
        plus = np.hypot(s, c1 + c2)
        minus = np.hypot(s, c1 - c2)
        return {
            "lambda13": (1 - c3 + plus) / 4,
            "lambda14": (1 - c3 - plus) / 4,
            "lambda15": (1 + c3 + minus) / 4,
            "lambda16": (1 + c3 - minus) / 4,
        }

    def is_physical(self):
        if not -1.0 < self.s < 1.0:
            return False
        return all(v >= -EIGEN_CLAMP for v in self.labelled_spectrum().values())

    def check_physical(self):
        if not -1.0 < self.s < 1.0:
            raise DomainError(f"s = {self.s} must lie in (-1, 1)")
        _check_labelled(self.labelled_spectrum(), self)
        return self

    @classmethod
    def from_bell(cls, p):
        return cls(0.0, p.c1, p.c2, p.c3)


def _check_labelled(spec, params):
    for name, value in spec.items():
        if value < -EIGEN_CLAMP:
            raise DomainError(f"unphysical {params}: {name} = {value:.6g} < 0")


@dataclass(frozen=True)
class BlochDecomposition:
    """rho = 1/4 (I x I + r.sigma x I + I x s.sigma + sum_ij T_ij sigma_i x sigma_j)."""

    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def reconstruct(self):
        m = np.eye(4, dtype=np.complex128)
        for i in range(3):
            m = m + self.r[i] * _SIGMA_I[i] + self.s[i] * _I_SIGMA[i]
            for j in range(3):
                m = m + self.T[i, j] * _SIGMA_SIGMA[i][j]
        return m / 4


def bell_diagonal_spectrum(p):
    return np.sort(np.array(list(p.labelled_spectrum().values())))


def x_state_spectrum(p):
    return np.sort(np.array(list(p.labelled_spectrum().values())))


def x_state_matrix(p):
    """Raw 4x4 X-state matrix without any physicality check."""
    s, c1, c2, c3 = p.s, p.c1, p.c2, p.c3
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = 1 + s + c3
    m[1, 1] = 1 - s - c3
    m[2, 2] = 1 + s - c3
    m[3, 3] = 1 - s + c3
    m[0, 3] = m[3, 0] = c1 - c2
    m[1, 2] = m[2, 1] = c1 + c2
    return m / 4


def bell_diagonal_density(p):
    p.check_physical()
    return DensityMatrix(x_state_matrix(XStateParams.from_bell(p)))


def x_state_density(p):
    p.check_physical()
    return DensityMatrix(x_state_matrix(p))


@dataclass(frozen=True)
class CornerCondition:
    """Outcome of checking |c1| < |c2| < |c3| and 0 < |s| < 1 - |c3|.

    Inside this region the measured-entropy minimum of an X state sits at
    the corner direction z = (0, 0, 1), so the X-state closed forms apply.
    """

    holds: bool
    violations: Tuple[str, ...]

    def __bool__(self):
        return self.holds


def validate_corner_condition(p, allow_boundary=False):
    """Check the parameter region where the X-state closed forms are proven.

    With ``allow_boundary`` the strict inequalities are relaxed to their
    closure (equalities and s = 0 admitted).
    """
    a1, a2, a3, s = abs(p.c1), abs(p.c2), abs(p.c3), abs(p.s)
    if allow_boundary:
        clauses = [
            ("|c1| <= |c2|", a1 <= a2),
            ("|c2| <= |c3|", a2 <= a3),
            ("|s| <= 1 - |c3|", s <= 1 - a3),
        ]
    else:
        clauses = [
            ("|c1| < |c2|", a1 < a2),
            ("|c2| < |c3|", a2 < a3),
            ("0 < |s|", 0 < s),
            ("|s| < 1 - |c3|", s < 1 - a3),
        ]
    bad = tuple(name for name, ok in clauses if not ok)
    return CornerCondition(not bad, bad)


def bloch_decompose(rho):
    m = np.asarray(rho, dtype=np.complex128)
    r = np.array([np.trace(m @ op).real for op in _SIGMA_I])
    s = np.array([np.trace(m @ op).real for op in _I_SIGMA])
    T = np.array([[np.trace(m @ _SIGMA_SIGMA[i][j]).real for j in range(3)] for i in range(3)])
    return BlochDecomposition(r, s, T)


def params_from_json(obj):
    """Parse ``{"family": "bell"|"x", "s": number?, "c": [c1, c2, c3]}``."""
    if not isinstance(obj, dict):
        raise DomainError("state parameters must be a JSON object")
    family = obj.get("family")
    c = obj.get("c")
    if not isinstance(c, (list, tuple)) or len(c) != 3:
        raise DomainError('"c" must be a list of three numbers')
    try:
        c = [float(v) for v in c]
    except (TypeError, ValueError) as exc:
        raise DomainError(f'"c" entries must be numbers: {exc}') from None
    if family == "bell":
        if float(obj.get("s", 0.0)) != 0.0:
            raise DomainError('family "bell" requires s = 0 (omit "s")')
        return BellDiagonalParams(*c)
    if family == "x":
        if "s" not in obj:
            raise DomainError('family "x" requires "s"')
        return XStateParams(float(obj["s"]), *c)
    raise DomainError(f'"family" must be "bell" or "x", got {family!r}')


def params_to_json(p):
    if isinstance(p, BellDiagonalParams):
        return {"family": "bell", "c": [p.c1, p.c2, p.c3]}
    return {"family": "x", "s": p.s, "c": [p.c1, p.c2, p.c3]}
