"""Small dense Hermitian linear algebra for one- and two-qubit operators.

All logarithms are base 2, so entropies come out in bits.
"""

import numpy as np

from . import kernels
from .errors import DomainError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_CLAMP = 1e-10

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (I2, I4, *PAULIS):
    _m.flags.writeable = False


def pauli(index):
    """Return sigma_x, sigma_y or sigma_z for ``index`` 1, 2 or 3."""
    if isinstance(index, bool) or index not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return PAULIS[index - 1].copy()


def kron(a, b):
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def hermitian_defect(m):
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


def _check_hermitian(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise DomainError("matrix has non-finite entries")
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOL:
        raise DomainError(f"matrix is not Hermitian (max |M - M^H| = {defect:.3g})")
    return m


def eigenvalues_hermitian(m):
    """Ascending real eigenvalues of a Hermitian matrix via cyclic Jacobi."""
    m = _check_hermitian(m)
    return kernels.eigvalsh_batch(m[None])[0]


def eigh_hermitian(m):
    """Eigenvalues (ascending) and unitary eigenvector matrix (columns)."""
    m = _check_hermitian(m)
    w, v, ok = kernels.jacobi_eigh(m)
    if not ok:  # pragma: no cover - Jacobi on n <= 4 always converges
        raise DomainError("Jacobi iteration did not converge")
    return w, v


def entropy_from_spectrum(eigs):
    """-sum(l log2 l) with 0 log 0 = 0; tiny negative eigenvalues are clamped."""
    eigs = np.asarray(eigs, dtype=float)
    if (eigs < -EIGEN_CLAMP).any():
        raise DomainError(f"negative eigenvalue {eigs.min():.3g} (unphysical state)")
    eigs = np.clip(eigs, 0.0, None)
    nz = eigs[eigs > 0.0]
    return float(-(nz * np.log2(nz)).sum())


class DensityMatrix:
    """Validated, read-only density matrix of one or two qubits.

    Hermitian to 1e-12, unit trace to 1e-12, eigenvalues >= -1e-10.
    """

    __slots__ = ("_m", "_eigs")

    def __init__(self, matrix):
        m = _check_hermitian(matrix)
        if m.shape not in ((2, 2), (4, 4)):
            raise DomainError(f"density matrix must be 2x2 or 4x4, got {m.shape}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"trace is {tr.real:.15g}, not 1")
        eigs = kernels.eigvalsh_batch(m[None])[0]
        if eigs[0] < -EIGEN_CLAMP:
            raise DomainError(f"negative eigenvalue {eigs[0]:.3g} (not positive semidefinite)")
        m = m.copy()
        m.flags.writeable = False
        self._m = m
        self._eigs = np.clip(eigs, 0.0, None)
        self._eigs.flags.writeable = False

    @property
    def matrix(self):
        return self._m

    @property
    def dim(self):
        return self._m.shape[0]

    @property
    def eigenvalues(self):
        return self._eigs

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._m.copy() if copy else self._m
        return self._m.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, eigenvalues={np.round(self._eigs, 6).tolist()})"


def as_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho)


def von_neumann_entropy(rho):
    """Entropy in bits of a one- or two-qubit density matrix."""
    return entropy_from_spectrum(as_density(rho).eigenvalues)


def partial_trace_a(rho):
    """Reduced state of qubit b (trace over the first qubit)."""
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    return np.einsum("abad->bd", r)


def partial_trace_b(rho):
    """Reduced state of qubit a (trace over the second qubit)."""
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", r)


def unitary_from_params(t, y):
    """V = t I + i y.sigma, a 2x2 unitary when t^2 + |y|^2 = 1."""
    y = np.asarray(y, dtype=float)
    return t * I2 + 1j * (y[0] * SIGMA_X + y[1] * SIGMA_Y + y[2] * SIGMA_Z)
