"""Independent spectral checks in a truncated harmonic-oscillator basis.

Nothing here touches the moment recurrences: energies come from diagonalizing
the Hamiltonian matrix, and perturbation coefficients from the textbook
Rayleigh-Schrödinger vector recursion in the same basis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eig_banded

from .arith import DomainError
from .series import EnergySeries, ModelSpec


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class BandedSymmetricMatrix:
    """Symmetric band matrix in LAPACK lower storage: ``bands[d, j] = A[j + d, j]``."""

    bands: np.ndarray

    @property
    def dimension(self) -> int:
        return self.bands.shape[1]

    @property
    def bandwidth(self) -> int:
        return self.bands.shape[0] - 1

    def dense(self) -> np.ndarray:
        B = self.dimension
        out = np.zeros((B, B))
        for d in range(self.bandwidth + 1):
            diag = self.bands[d, : B - d]
            out[np.arange(d, B), np.arange(B - d)] = diag
            out[np.arange(B - d), np.arange(d, B)] = diag
        return out

    def __getitem__(self, ij):
        i, j = ij
        d = abs(i - j)
        if d > self.bandwidth:
            return 0.0
        return float(self.bands[d, min(i, j)])

    @classmethod
    def from_dense(cls, a: np.ndarray, bandwidth: int) -> "BandedSymmetricMatrix":
        B = a.shape[0]
        bands = np.zeros((bandwidth + 1, B))
        for d in range(bandwidth + 1):
            bands[d, : B - d] = np.diagonal(a, -d)
        return cls(bands)

    def truncate(self, B: int) -> "BandedSymmetricMatrix":
        return BandedSymmetricMatrix(self.bands[:, :B].copy())


def banded_matmul(a: BandedSymmetricMatrix, b: BandedSymmetricMatrix) -> BandedSymmetricMatrix:
    """Product of two commuting symmetric band matrices (bandwidths add).

    Symmetry of the result relies on ``a`` and ``b`` commuting, which holds
    for powers of the same matrix.
    """
    if a.dimension != b.dimension:
        raise DomainError("dimension mismatch")
    B = a.dimension
    wa, wb = a.bandwidth, b.bandwidth
    w = wa + wb
    out = np.zeros((w + 1, B))
    # C[i + d, i] = sum_m A[i + d, m] B[m, i], with |i + d - m| <= wa and |m - i| <= wb
    for i in range(B):
        for d in range(min(w, B - 1 - i) + 1):
            r = i + d
            lo = max(0, r - wa, i - wb)
            hi = min(B - 1, r + wa, i + wb)
            s = 0.0
            for m in range(lo, hi + 1):
                s += a[r, m] * b[m, i]
            out[d, i] = s
    return BandedSymmetricMatrix(out)


def position_matrix(B: int, omega: float) -> BandedSymmetricMatrix:
    """``x = (a + a^dagger)/sqrt(2 omega)``: ``X[i, i+1] = sqrt((i+1)/(2 omega))``."""
    if B < 2:
        raise DomainError("basis size must be at least 2")
    if not omega > 0:
        raise DomainError("omega must be positive")
    bands = np.zeros((2, B))
    bands[1, : B - 1] = np.sqrt(np.arange(1, B) / (2.0 * omega))
    return BandedSymmetricMatrix(bands)


def _operator_powers(B: int, omega: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # build three states wider so every kept entry of X^2 and X^3 is exact
    X = position_matrix(B + 3, omega)
    X2 = banded_matmul(X, X)
    X3 = banded_matmul(X, X2)
    return X.truncate(B).dense(), X2.truncate(B).dense(), X3.truncate(B).dense()


def hamiltonian_matrix(spec: ModelSpec, lam: float, B: int) -> BandedSymmetricMatrix:
    """``diag((i + 1/2) omega) + lam/2 X^2 + s lam^2 X^3`` in the first ``B`` oscillator states."""
    if B < 8:
        raise DomainError("basis size must be at least 8")
    omega = float(spec.omega)
    _, X2, X3 = _operator_powers(B, omega)
    H = np.diag((np.arange(B) + 0.5) * omega) + 0.5 * lam * X2
    if spec.cubic_switch:
        H = H + lam * lam * X3
    return BandedSymmetricMatrix.from_dense(H, 3)


def lowest_eigenvalues(H: BandedSymmetricMatrix, count: int) -> np.ndarray:
    if not 1 <= count <= H.dimension:
        raise DomainError(f"count must lie in 1..{H.dimension}")
    try:
        vals = eig_banded(H.bands, lower=True, eigvals_only=True, select="i", select_range=(0, count - 1))
    except LinAlgError as exc:
        raise SolverError(str(exc)) from exc
    return np.sort(vals)


@dataclass(frozen=True)
class SpectralResult:
    basis_size: int
    eigenvalues: tuple
    plateau_delta: float
    converged: bool

    def level(self, n: int) -> float:
        return self.eigenvalues[n]


def converged_energy(spec: ModelSpec, lam: float, n: int | None = None, tol: float = 1e-9,
                     start: int = 32, limit: int = 512) -> SpectralResult:
    """Double the basis from ``start`` until level ``n`` moves by less than ``tol``.

    Each basis size is compared with half its size, so the first step already
    carries a plateau estimate.  With the cubic term switched on the potential
    is unbounded below and the value is a metastable plateau, not a bound.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if n is None:
        n = spec.n
    count = n + 1
    B = start
    prev = lowest_eigenvalues(hamiltonian_matrix(spec, lam, max(B // 2, 8)), count)[n]
    while True:
        vals = lowest_eigenvalues(hamiltonian_matrix(spec, lam, B), count)
        delta = abs(vals[n] - prev)
        if delta < tol:
            return SpectralResult(B, tuple(float(v) for v in vals), float(delta), True)
        if 2 * B > limit:
            return SpectralResult(B, tuple(float(v) for v in vals), float(delta), False)
        prev = vals[n]
        B *= 2


def rspt_coefficients(spec: ModelSpec, K: int | None = None, B: int = 80) -> EnergySeries:
    """Rayleigh-Schrödinger coefficients of ``H0 + lam W1 + lam^2 W2`` in double precision.

    ``W1 = X^2/2`` and ``W2 = s X^3``; intermediate normalization
    ``<n|psi^(k)> = 0`` for ``k >= 1``.
    """
    if K is None:
        K = spec.max_order
    n = spec.n
    if B < n + 3 * K + 10:
        raise DomainError(f"basis {B} too small for n={n}, K={K}; need {n + 3 * K + 10}")
    omega = float(spec.omega)
    _, X2, X3 = _operator_powers(B, omega)
    W1 = 0.5 * X2
    W2 = X3 if spec.cubic_switch else np.zeros_like(X3)
    h0 = (np.arange(B) + 0.5) * omega
    e0 = h0[n]
    gap = h0 - e0
    gap[n] = 1.0  # masked below

    psi = [np.zeros(B)]
    psi[0][n] = 1.0
    E = [e0]
    for k in range(1, K + 1):
        ek = W1[n] @ psi[k - 1]
        if k >= 2:
            ek += W2[n] @ psi[k - 2]
        E.append(float(ek))
        rhs = -W1 @ psi[k - 1]
        if k >= 2:
            rhs -= W2 @ psi[k - 2]
        for j in range(1, k + 1):
            rhs += E[j] * psi[k - j]
        vec = rhs / gap
        vec[n] = 0.0
        psi.append(vec)
    return EnergySeries(tuple(E), spec)
