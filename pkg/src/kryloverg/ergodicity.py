"""Ergodicity of a unitary in its Krylov basis.

In the maximally ergodic regime the Krylov-basis unitary approaches a pure
subdiagonal shift: a_n -> 0, b_n -> 1, c_n -> 0, and Krylov-state
autocorrelations decay in a single time step.  The ergodicity measure is the
inverse of the normalized Frobenius distance to that shift matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arnoldi import KrylovDecomposition
from .chaostats import ks_sup_distance
from .errors import EmptyInput, IndexOutOfRange, NonSquareInput, OutOfRange
from .matrixcore import UnitaryMatrix


def ergodic_target(m: int) -> np.ndarray:
    """The pure-shift target matrix: ones on the first subdiagonal, else zero.

    Not unitary: its last column vanishes, so its squared Frobenius norm is
    m - 1.  A physical unitary can only approach it asymptotically.
    """
    t = np.zeros((m, m), dtype=complex)
    if m > 1:
        t[np.arange(1, m), np.arange(m - 1)] = 1.0
    return t


def erg_measure(u_k) -> tuple[float, float]:
    """(erg_inverse, erg) for a Krylov-basis unitary U_K.

    erg_inverse = |T - U_K|_F / sqrt(2 m) with T the pure-shift target;
    erg is its reciprocal.  Normalization keeps erg_inverse in (0, 1] for
    unitary U_K.
    """
    mat = np.asarray(u_k)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.size == 0:
        raise NonSquareInput(f"U_K must be square and non-empty, got shape {mat.shape}")
    m = mat.shape[0]
    erg_inverse = float(np.linalg.norm(ergodic_target(m) - mat) / np.sqrt(2.0 * m))
    erg = float(np.inf) if erg_inverse == 0.0 else 1.0 / erg_inverse
    return erg_inverse, erg


def level_uniformity(phases) -> float:
    """Twice the KS distance between the phase CDF and the uniform CDF on [-pi, pi).

    Small values certify that the spectrum covers the unit circle uniformly.
    The statistic is order-insensitive and unchanged by duplicating every
    sample in equal proportion.
    """
    p = np.sort(np.asarray(phases, dtype=float).ravel())
    if p.size == 0:
        raise EmptyInput("no phases supplied")
    if p[0] < -np.pi or p[-1] >= np.pi:
        raise OutOfRange("phases must lie in [-pi, pi)")
    uniform_cdf = (p + np.pi) / (2.0 * np.pi)
    return 2.0 * ks_sup_distance(p, uniform_cdf)


def autocorrelator(u: UnitaryMatrix, k: KrylovDecomposition, n: int, t_max: int) -> np.ndarray:
    """Autocorrelator C_t = <K_n|U^t|K_n> for t = 0..t_max.

    Computed by repeated application of U to |K_n>; U^t is never formed.
    """
    if not 0 <= n < k.krylov_dim:
        raise IndexOutOfRange(f"index {n} outside Krylov dimension {k.krylov_dim}")
    if t_max < 0:
        raise IndexOutOfRange("t_max must be non-negative")
    v = k.basis[:, n]
    out = np.zeros(t_max + 1, dtype=complex)
    out[0] = np.vdot(v, v)
    w = v.copy()
    for t in range(1, t_max + 1):
        w = u.matrix @ w
        out[t] = np.vdot(v, w)
    return out


def sequence_asymptotics(
    k: KrylovDecomposition, tail_fraction: float = 0.5
) -> tuple[float, float, float]:
    """Tail averages (mean |a_n|, mean b_n, mean |c_n|) of the Arnoldi sequences.

    In the maximally ergodic regime these approach (0, 1, 0).  The tail is
    the trailing ``tail_fraction`` of each sequence's indices.
    """
    if k.krylov_dim < 4:
        raise ValueError(f"need krylov_dim >= 4, got {k.krylov_dim}")
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")

    def tail_mean(seq: np.ndarray) -> float:
        n_tail = max(1, int(np.ceil(tail_fraction * seq.size)))
        return float(np.mean(np.abs(seq[-n_tail:])))

    return tail_mean(k.seq_a), tail_mean(k.seq_b), tail_mean(k.seq_c)


@dataclass(frozen=True)
class ErgodicityReport:
    """Per-unitary ergodicity bundle used by the sweep harness."""

    erg_inverse: float
    erg: float
    krylov_dim: int
    delta_unif: float
    tau_star: float | None = None


def ergodicity_report(
    k: KrylovDecomposition, phases, tau_star: float | None = None
) -> ErgodicityReport:
    """Assemble the ergodicity measures of a decomposition plus its spectrum."""
    erg_inverse, erg = erg_measure(k.hessenberg)
    return ErgodicityReport(
        erg_inverse=erg_inverse,
        erg=erg,
        krylov_dim=k.krylov_dim,
        delta_unif=level_uniformity(phases),
        tau_star=tau_star,
    )
