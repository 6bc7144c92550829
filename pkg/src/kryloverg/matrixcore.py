"""Dense complex linear algebra: eigendecompositions, unitary synthesis, norms.

Conventions used throughout the library:
  * eigenvalues of Hermitian matrices are sorted ascending;
  * eigenphases of unitaries live in the half-open interval [-pi, pi);
  * a ``UnitaryMatrix`` is certified at construction and carries its residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    NonHermitianInput,
    ShapeMismatch,
    UnitarityError,
)

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
RECONSTRUCTION_RTOL = 1e-9


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-norm |A|_max."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def wrap_phases(x) -> np.ndarray:
    """Map angles into [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


def _require_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class UnitaryMatrix:
    """Square complex matrix certified unitary within tolerance."""

    matrix: np.ndarray
    unitarity_residual: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def certify_unitary(matrix, tol: float = UNITARITY_TOL) -> UnitaryMatrix:
    """Wrap ``matrix`` as a UnitaryMatrix, checking |U'U - I|_max <= tol."""
    m = np.ascontiguousarray(_require_square(matrix, "matrix"), dtype=complex)
    residual = max_abs(m.conj().T @ m - np.eye(m.shape[0]))
    if residual > tol:
        raise UnitarityError(
            f"unitarity residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )
    return UnitaryMatrix(matrix=m, unitarity_residual=residual)


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a Hermitian matrix or a unitary.

    ``values`` holds energies (kind="energy") or eigenphases in [-pi, pi)
    (kind="phase"), sorted ascending; ``eigenvectors`` columns are aligned
    with ``values``; ``spectral_variance`` is the population variance of
    ``values``.
    """

    values: np.ndarray
    eigenvectors: np.ndarray
    spectral_variance: float
    kind: str = "energy"

    @property
    def eigenvalues(self) -> np.ndarray:
        if self.kind != "energy":
            raise ValueError("spectral data holds phases, not energies")
        return self.values

    @property
    def eigenphases(self) -> np.ndarray:
        if self.kind != "phase":
            raise ValueError("spectral data holds energies, not phases")
        return self.values


def hermitian_eigendecompose(
    h,
    hermiticity_tol: float = HERMITICITY_TOL,
    reconstruction_rtol: float = RECONSTRUCTION_RTOL,
) -> SpectralData:
    """Full eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Raises NonHermitianInput if |H - H'|_max exceeds ``hermiticity_tol`` and
    ConvergenceFailure if the solver fails or the reconstruction residual
    exceeds ``reconstruction_rtol * |H|_max``.
    """
    h = _require_square(h, "H")
    if max_abs(h - h.conj().T) > hermiticity_tol:
        raise NonHermitianInput(
            f"hermiticity residual exceeds {hermiticity_tol:.1e}"
        )
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigh failed: {exc}") from exc
    scale = max(max_abs(h), 1.0)
    recon = (vectors * values) @ vectors.conj().T
    if max_abs(recon - h) > reconstruction_rtol * scale:
        raise ConvergenceFailure("eigendecomposition reconstruction residual too large")
    return SpectralData(
        values=values,
        eigenvectors=vectors,
        spectral_variance=float(np.var(values)),
        kind="energy",
    )


def unitary_from_spectral(
    spectral: SpectralData, tau: float, tol: float = UNITARITY_TOL
) -> UnitaryMatrix:
    """Synthesize exp(-i tau H) from an existing eigendecomposition of H."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    v = spectral.eigenvectors
    u = (v * np.exp(-1j * tau * spectral.values)) @ v.conj().T
    return certify_unitary(u, tol=tol)


def unitary_from_hamiltonian(h, tau: float, tol: float = UNITARITY_TOL) -> UnitaryMatrix:
    """Evolution operator exp(-i tau H) for a Hermitian generator H."""
    return unitary_from_spectral(hermitian_eigendecompose(h), tau, tol=tol)


def eigenphases_from_energies(values, tau: float) -> np.ndarray:
    """Phases of exp(-i tau H) given the energies of H, sorted in [-pi, pi)."""
    return np.sort(wrap_phases(-tau * np.asarray(values, dtype=float)))


def unitary_eigenphases(u: UnitaryMatrix) -> SpectralData:
    """Eigenphases and orthonormal eigenvectors of a certified unitary.

    Uses a complex Schur decomposition, whose basis is orthonormal by
    construction; for a unitary (normal) matrix the Schur form is diagonal
    up to roundoff, so the basis columns are eigenvectors.
    """
    try:
        t, z = scipy.linalg.schur(u.matrix, output="complex")
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"schur failed: {exc}") from exc
    phases = wrap_phases(np.angle(np.diag(t)))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    return SpectralData(
        values=phases,
        eigenvectors=z[:, order],
        spectral_variance=float(np.var(phases)),
        kind="phase",
    )


def frobenius_distance(a, b) -> float:
    """Frobenius distance sqrt(sum |A_ij - B_ij|^2)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
