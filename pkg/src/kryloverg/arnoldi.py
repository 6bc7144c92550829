"""Krylov basis of a unitary by Arnoldi iteration.

Given a unitary U and a unit vector psi0, the Krylov basis |K_0>, |K_1>, ...
is the Gram-Schmidt orthonormalization of the power sequence U^t |psi0>.
In that basis U is upper Hessenberg and fully parametrized by three
sequences: the subdiagonal b_n = <K_n|U|K_{n-1}> (real positive), the
diagonal a_n = <K_n|U|K_n>, and the first row c_n = <K_0|U|K_n>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, IllConditioned, NonUnitVector
from .matrixcore import UnitaryMatrix

UNIT_NORM_TOL = 1e-12
ALPHA_RECONSTRUCTION_TOL = 1e-7


def default_breakdown_tol(dim: int) -> float:
    """Residual threshold below which the Krylov space counts as exhausted."""
    return 1e-12 * np.sqrt(dim)


@dataclass(frozen=True)
class KrylovDecomposition:
    """Krylov basis and Hessenberg representation of a unitary.

    ``basis`` is D x M with columns |K_0> ... |K_{M-1}>; ``hessenberg`` is
    the M x M matrix of U in that basis.  ``seq_a``/``seq_c`` are complex,
    ``seq_b`` is the strictly positive subdiagonal.  ``terminated_early``
    is set when the iteration stopped on a residual below the breakdown
    tolerance before reaching the requested dimension.
    """

    basis: np.ndarray
    hessenberg: np.ndarray
    seq_a: np.ndarray
    seq_b: np.ndarray
    seq_c: np.ndarray
    terminated_early: bool
    termination_norm: float | None = None
    alpha: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def krylov_dim(self) -> int:
        return self.basis.shape[1]


def _checked_initial_vector(u: UnitaryMatrix, psi0) -> np.ndarray:
    v = np.ascontiguousarray(psi0, dtype=complex).ravel()
    if v.shape[0] != u.dim:
        raise DimensionMismatch(
            f"initial vector has length {v.shape[0]}, operator dimension is {u.dim}"
        )
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise NonUnitVector(f"initial vector norm {nrm!r} deviates from 1")
    return v


def _extract_sequences(hess: np.ndarray):
    seq_a = np.diag(hess).copy()
    seq_b = np.real(np.diag(hess, -1)).copy()
    seq_c = hess[0, :].copy()
    return seq_a, seq_b, seq_c


def arnoldi_iterate(
    u: UnitaryMatrix,
    psi0,
    max_dim: int | None = None,
    breakdown_tol: float | None = None,
) -> KrylovDecomposition:
    """Build the Krylov decomposition of (U, psi0) by Arnoldi iteration.

    Each step orthogonalizes U|K_{n-1}> against all previous basis vectors
    with two classical Gram-Schmidt passes (full reorthogonalization); the
    post-orthogonalization norm is b_n.  The iteration stops at ``max_dim``
    or when that norm drops below ``breakdown_tol``.
    """
    mat = u.matrix
    v0 = _checked_initial_vector(u, psi0)
    dim = u.dim
    if max_dim is None:
        max_dim = dim
    if not 1 <= max_dim <= dim:
        raise DimensionMismatch(f"max_dim {max_dim} outside [1, {dim}]")
    if breakdown_tol is None:
        breakdown_tol = default_breakdown_tol(dim)

    basis = np.zeros((dim, max_dim), dtype=complex)
    hess = np.zeros((max_dim, max_dim), dtype=complex)
    basis[:, 0] = v0

    m = max_dim
    terminated_early = False
    termination_norm = None
    for step in range(1, max_dim + 1):
        w = mat @ basis[:, step - 1]
        col = np.zeros(step, dtype=complex)
        for _ in range(2):  # twice is enough
            proj = basis[:, :step].conj().T @ w
            w -= basis[:, :step] @ proj
            col += proj
        hess[:step, step - 1] = col
        if step == max_dim:
            break
        residual = float(np.linalg.norm(w))
        if residual < breakdown_tol:
            m = step
            terminated_early = True
            termination_norm = residual
            break
        hess[step, step - 1] = residual
        basis[:, step] = w / residual

    basis = basis[:, :m]
    hess = hess[:m, :m]
    seq_a, seq_b, seq_c = _extract_sequences(hess)
    return KrylovDecomposition(
        basis=basis,
        hessenberg=hess,
        seq_a=seq_a,
        seq_b=seq_b,
        seq_c=seq_c,
        terminated_early=terminated_early,
        termination_norm=termination_norm,
    )


def brute_force_krylov(
    u: UnitaryMatrix,
    psi0,
    max_dim: int | None = None,
) -> KrylovDecomposition:
    """Oracle construction: explicit power sequence, then direct inner products.

    Forms |psi_t> = U^t |psi0> explicitly, orthonormalizes the sequence by
    modified Gram-Schmidt, and fills the Hessenberg matrix entry by entry as
    <K_m|U|K_n>.  Mathematically identical to :func:`arnoldi_iterate`; kept
    as an independent cross-check (practical up to a few dozen dimensions,
    where the raw power basis is still well conditioned).
    """
    mat = u.matrix
    v0 = _checked_initial_vector(u, psi0)
    dim = u.dim
    if max_dim is None:
        max_dim = dim
    if not 1 <= max_dim <= dim:
        raise DimensionMismatch(f"max_dim {max_dim} outside [1, {dim}]")
    tol = default_breakdown_tol(dim)

    powers = np.zeros((dim, max_dim), dtype=complex)
    powers[:, 0] = v0
    for t in range(1, max_dim):
        powers[:, t] = mat @ powers[:, t - 1]

    cols: list[np.ndarray] = []
    terminated_early = False
    termination_norm = None
    for t in range(max_dim):
        w = powers[:, t].copy()
        for q in cols:
            w -= np.vdot(q, w) * q
        nrm = float(np.linalg.norm(w))
        if nrm < tol:
            terminated_early = True
            termination_norm = nrm
            break
        cols.append(w / nrm)

    basis = np.column_stack(cols)
    hess = basis.conj().T @ (mat @ basis)
    seq_a, seq_b, seq_c = _extract_sequences(hess)
    return KrylovDecomposition(
        basis=basis,
        hessenberg=hess,
        seq_a=seq_a,
        seq_b=seq_b,
        seq_c=seq_c,
        terminated_early=terminated_early,
        termination_norm=termination_norm,
    )


def verify_sequence_identity(k: KrylovDecomposition) -> float:
    """Max residual of the matrix-element identity H[m,n] c_m = a_m c_n, m <= n.

    The identity holds exactly for any unitary expressed in its own Krylov
    basis; a residual <= 1e-8 certifies the decomposition.  The division-free
    form avoids amplifying near-zero c_m.
    """
    h = k.hessenberg
    a = k.seq_a
    c = k.seq_c
    m = h.shape[0]
    lhs = h * c[:, None]
    rhs = a[:, None] * c[None, :]
    upper = np.triu(np.ones((m, m), dtype=bool))
    return float(np.max(np.abs(lhs - rhs)[upper]))


def alpha_coefficients(
    k: KrylovDecomposition,
    u: UnitaryMatrix,
    psi0,
    reconstruction_tol: float = ALPHA_RECONSTRUCTION_TOL,
) -> np.ndarray:
    """Lower-triangular coefficients expanding |K_n> over the power sequence.

    Row n solves |K_n> = sum_{t<=n} alpha[n, t] U^t |psi0>.  The raw power
    basis is ill conditioned, so the reconstruction check uses a looser
    tolerance than the orthonormality checks.
    """
    v0 = _checked_initial_vector(u, psi0)
    if np.linalg.norm(k.basis[:, 0] - v0) > 1e-10:
        raise DimensionMismatch("decomposition was not built from this initial vector")
    m = k.krylov_dim
    powers = np.zeros((k.dim, m), dtype=complex)
    powers[:, 0] = v0
    for t in range(1, m):
        powers[:, t] = u.matrix @ powers[:, t - 1]

    # overlaps[n, t] = <K_n|psi_t> vanish for t < n: upper triangular system
    overlaps = k.basis.conj().T @ powers
    try:
        alpha_t = scipy.linalg.solve_triangular(overlaps, np.eye(m), lower=False)
    except scipy.linalg.LinAlgError as exc:
        raise IllConditioned(f"triangular solve failed: {exc}") from exc
    if not np.isfinite(alpha_t).all():
        raise IllConditioned("triangular solve produced non-finite coefficients")
    alpha = alpha_t.T
    recon_err = np.linalg.norm(powers @ alpha.T - k.basis, axis=0)
    if np.max(recon_err) > reconstruction_tol:
        raise IllConditioned(
            f"reconstruction residual {np.max(recon_err):.3e} exceeds "
            f"{reconstruction_tol:.1e}: power sequence numerically dependent"
        )
    return alpha


def _complex_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def decomposition_to_json(k: KrylovDecomposition, include_basis: bool = False) -> dict:
    """Serialize to the documented schema.

    Schema: ``{dim, m, terminated_early, a: [[re, im], ...], b: [...],
    c: [[re, im], ...]}`` with an optional ``basis`` key (list of columns,
    each a list of [re, im] pairs) when ``include_basis`` is set.
    """
    out = {
        "dim": int(k.dim),
        "m": int(k.krylov_dim),
        "terminated_early": bool(k.terminated_early),
        "a": _complex_pairs(k.seq_a),
        "b": [float(b) for b in k.seq_b],
        "c": _complex_pairs(k.seq_c),
    }
    if include_basis:
        out["basis"] = [_complex_pairs(k.basis[:, n]) for n in range(k.krylov_dim)]
    return out
