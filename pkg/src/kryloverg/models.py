"""Model families: parametric random-matrix ensemble, tilted-field Ising chain
with site-reversal parity, and its kicked (split-step) unitary.

Spin convention: computational basis index has bit i-1 (least significant =
site 1) equal to 1 for spin up, sigma_z|up> = +|up>.  "All spins down" is
index 0.  All constructions are deterministic given their seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParityWithDisorder
from .matrixcore import (
    SpectralData,
    UnitaryMatrix,
    certify_unitary,
    hermitian_eigendecompose,
)

MAX_SITES = 14  # dense-matrix budget

# single-site operators in the basis ordering (|down>, |up>), sigma_z|up> = +|up>
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class RmtParams:
    """Crossover ensemble interpolating Poisson and orthogonal statistics.

    ``lam`` is the dimension-independent transition parameter; the mixing
    coefficient is k = sqrt(2 pi lam / dim).
    """

    dim: int
    lam: float
    seed: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")

    @property
    def k(self) -> float:
        return float(np.sqrt(2.0 * np.pi * self.lam / self.dim))


@dataclass(frozen=True)
class ChainParams:
    """Tilted-field Ising chain with open boundaries.

    Longitudinal fields are h_z * delta_i with delta_i ~ Normal(1, sigma^2)
    per site; parity sectors are only defined for the clean chain.
    """

    n_sites: int
    h_z: float
    disorder_sigma: float = 0.0
    seed: int = 0
    parity_sector: str = "none"  # none | positive | negative

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.n_sites > MAX_SITES:
            raise ValueError(f"n_sites must be <= {MAX_SITES} (dense-matrix budget)")
        if self.h_z < 0:
            raise ValueError("h_z must be non-negative")
        if self.disorder_sigma < 0:
            raise ValueError("disorder_sigma must be non-negative")
        if self.parity_sector not in ("none", "positive", "negative"):
            raise ValueError(f"unknown parity sector {self.parity_sector!r}")

    @property
    def full_dim(self) -> int:
        return 2**self.n_sites


@dataclass(frozen=True)
class TrotterParams:
    chain: ChainParams
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")


def rmt_hamiltonian(p: RmtParams) -> np.ndarray:
    """(H0 + k V)/sqrt(1 + k^2): diagonal Gaussian plus orthogonal-ensemble mix.

    H0 has independent standard normal diagonal entries.  V is symmetric with
    off-diagonal standard deviation 1/sqrt(dim) and diagonal standard
    deviation sqrt(2/dim) (the standard orthogonal-ensemble ratio; recorded
    in sweep metadata since only the off-diagonal scale is canonical).
    """
    rng = np.random.default_rng(p.seed)
    h0 = np.diag(rng.standard_normal(p.dim))
    a = rng.standard_normal((p.dim, p.dim))
    v = (a + a.T) / np.sqrt(2.0 * p.dim)
    k = p.k
    return (h0 + k * v) / np.sqrt(1.0 + k * k)


def _z_values(n_sites: int) -> np.ndarray:
    """z[s, i] = +/-1: sigma_z eigenvalue of site i+1 in basis state s."""
    states = np.arange(2**n_sites)
    bits = (states[:, None] >> np.arange(n_sites)[None, :]) & 1
    return 2.0 * bits - 1.0


def disorder_profile(p: ChainParams) -> np.ndarray:
    """Per-site delta_i; all ones for the clean chain, else Normal(1, sigma^2)."""
    if p.disorder_sigma == 0.0:
        return np.ones(p.n_sites)
    rng = np.random.default_rng(p.seed)
    return 1.0 + p.disorder_sigma * rng.standard_normal(p.n_sites)


def _site_reversal(n_sites: int) -> np.ndarray:
    """Permutation s -> s with its n-bit pattern reversed (site i <-> N+1-i)."""
    dim = 2**n_sites
    rev = np.zeros(dim, dtype=np.int64)
    for s in range(dim):
        r = 0
        for i in range(n_sites):
            if s & (1 << i):
                r |= 1 << (n_sites - 1 - i)
        rev[s] = r
    return rev


def parity_sector_dim(n_sites: int, sector: str) -> int:
    """Dimension of a site-reversal parity sector."""
    full = 2**n_sites
    fixed = 2 ** ((n_sites + 1) // 2)
    if sector == "positive":
        return (full + fixed) // 2
    if sector == "negative":
        return (full - fixed) // 2
    raise ValueError(f"unknown parity sector {sector!r}")


def parity_sector_basis(n_sites: int, sector: str) -> np.ndarray:
    """Orthonormal basis of a parity sector as a (2^N, d) real matrix.

    Columns are (|s> + |rev(s)>)/sqrt(2) (or the antisymmetric combination)
    over orbit representatives s <= rev(s), plus fixed points in the
    positive sector, ordered by representative index.
    """
    dim = 2**n_sites
    rev = _site_reversal(n_sites)
    cols = []
    for s in range(dim):
        r = int(rev[s])
        if s > r:
            continue
        vec = np.zeros(dim)
        if s == r:
            if sector == "negative":
                continue
            vec[s] = 1.0
        else:
            amp = 1.0 / np.sqrt(2.0)
            vec[s] = amp
            vec[r] = amp if sector == "positive" else -amp
        cols.append(vec)
    basis = np.column_stack(cols)
    assert basis.shape[1] == parity_sector_dim(n_sites, sector)
    return basis


def parity_operator(n_sites: int) -> np.ndarray:
    """Site-reversal permutation matrix P (P^2 = I)."""
    rev = _site_reversal(n_sites)
    p = np.zeros((rev.size, rev.size))
    p[rev, np.arange(rev.size)] = 1.0
    return p


def _chain_diagonal(n_sites: int, h_z: float, delta: np.ndarray) -> np.ndarray:
    z = _z_values(n_sites)
    field = z @ (h_z * delta)
    coupling = (z[:, :-1] * z[:, 1:]).sum(axis=1) if n_sites > 1 else np.zeros(2**n_sites)
    return field - coupling


def chain_hamiltonian(p: ChainParams) -> np.ndarray:
    """Transverse field plus tilted longitudinal field plus -zz coupling.

    Built in the computational basis; real symmetric.  With a parity sector
    requested (clean chain only), returns the projected sector matrix.
    """
    if p.parity_sector != "none" and p.disorder_sigma > 0.0:
        raise ParityWithDisorder("disorder breaks site-reversal parity")
    dim = p.full_dim
    delta = disorder_profile(p)
    h = np.zeros((dim, dim))
    states = np.arange(dim)
    h[states, states] = _chain_diagonal(p.n_sites, p.h_z, delta)
    for i in range(p.n_sites):
        h[states ^ (1 << i), states] += 1.0
    if p.parity_sector != "none":
        basis = parity_sector_basis(p.n_sites, p.parity_sector)
        h = basis.T @ h @ basis
    return h


def _single_site_step(tau: float, a: float) -> np.ndarray:
    """exp(-i tau (sigma_x + a sigma_z)) in closed form."""
    omega = np.sqrt(1.0 + a * a)
    return np.cos(tau * omega) * np.eye(2) - 1j * np.sin(tau * omega) / omega * (
        SIGMA_X + a * SIGMA_Z
    )


def trotter_unitary(p: TrotterParams) -> UnitaryMatrix:
    """Split-step unitary exp(-i tau H_zz) exp(-i tau H_s).

    The coupling factor is diagonal in the computational basis; the field
    factor is a tensor product of exact single-site exponentials, so the
    product is unitary to machine precision for any step size.
    """
    chain = p.chain
    if chain.parity_sector != "none" and chain.disorder_sigma > 0.0:
        raise ParityWithDisorder("disorder breaks site-reversal parity")
    delta = disorder_profile(chain)
    z = _z_values(chain.n_sites)
    coupling = (
        (z[:, :-1] * z[:, 1:]).sum(axis=1) if chain.n_sites > 1 else np.zeros(chain.full_dim)
    )
    u_zz = np.exp(1j * p.tau * coupling)  # H_zz = -sum zz, so exp(-i tau H_zz) = exp(+i tau zz)

    u_s = np.array([[1.0 + 0.0j]])
    for i in range(chain.n_sites):  # site i+1 joins on the more significant bits
        u_s = np.kron(_single_site_step(p.tau, chain.h_z * delta[i]), u_s)

    u = u_zz[:, None] * u_s
    if chain.parity_sector != "none":
        basis = parity_sector_basis(chain.n_sites, chain.parity_sector)
        u = basis.T @ u @ basis
    return certify_unitary(u)


def interaction_eigenbasis(n_sites: int) -> np.ndarray:
    """Reference basis for eigenvector statistics: the coupling-term eigenbasis.

    The -zz coupling is diagonal in the computational product basis, so this
    is a permutation of the identity, ordered by coupling eigenvalue and then
    by bit pattern.  Ordering is deterministic across runs.
    """
    if n_sites > MAX_SITES:
        raise ValueError(f"n_sites must be <= {MAX_SITES}")
    dim = 2**n_sites
    z = _z_values(n_sites)
    eps = -(z[:, :-1] * z[:, 1:]).sum(axis=1) if n_sites > 1 else np.zeros(dim)
    order = np.lexsort((np.arange(dim), eps))
    return np.eye(dim)[:, order]


def interaction_eigenvalues(n_sites: int) -> np.ndarray:
    """Coupling eigenvalues aligned with the columns of interaction_eigenbasis."""
    z = _z_values(n_sites)
    eps = -(z[:, :-1] * z[:, 1:]).sum(axis=1) if n_sites > 1 else np.zeros(2**n_sites)
    return np.sort(eps, kind="stable")


def haar_random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized complex Gaussian vector (Haar-distributed direction)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _basis_state(index: int, chain: ChainParams) -> np.ndarray:
    full = np.zeros(chain.full_dim, dtype=complex)
    full[index] = 1.0
    if chain.parity_sector == "none":
        return full
    basis = parity_sector_basis(chain.n_sites, chain.parity_sector)
    projected = basis.T @ full
    nrm = np.linalg.norm(projected)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(
            f"basis state {index} does not lie in the {chain.parity_sector} parity sector"
        )
    return projected


def center_eigenstate(chain: ChainParams, h_val: float) -> np.ndarray:
    """Eigenvector at index floor(D/2) of the clean chain at field h_val.

    Warns if the level at the center index is (near-)degenerate, in which
    case the eigenvector is solver-dependent.
    """
    ref = ChainParams(
        n_sites=chain.n_sites,
        h_z=h_val,
        disorder_sigma=0.0,
        seed=0,
        parity_sector=chain.parity_sector,
    )
    spectral = hermitian_eigendecompose(chain_hamiltonian(ref))
    idx = spectral.values.size // 2
    span = float(spectral.values[-1] - spectral.values[0])
    gap = min(
        spectral.values[idx] - spectral.values[idx - 1] if idx > 0 else np.inf,
        spectral.values[idx + 1] - spectral.values[idx]
        if idx + 1 < spectral.values.size
        else np.inf,
    )
    if gap < 1e-10 * max(span, 1.0):
        warnings.warn(
            f"center eigenstate at index {idx} is near-degenerate (gap {gap:.2e})",
            stacklevel=2,
        )
    return spectral.eigenvectors[:, idx].astype(complex)


def initial_state(
    kind: str,
    chain: ChainParams | None = None,
    dim: int | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Canonical initial states for Krylov expansion.

    ``kind`` is one of ``all_down``, ``all_up``,
    ``center_eigenstate_hz:<field>`` (clean-chain eigenstate at the given
    longitudinal field, center of the sorted spectrum), ``random_basis``
    (uniformly drawn computational basis state, i.e. a random eigenstate of
    the decoupled limit; requires ``dim`` and ``rng``), or ``haar_random``
    (requires ``dim`` and ``rng``).
    """
    if kind == "haar_random":
        if dim is None or rng is None:
            raise ValueError("haar_random requires dim and rng")
        return haar_random_state(dim, rng)
    if kind == "random_basis":
        if dim is None or rng is None:
            raise ValueError("random_basis requires dim and rng")
        v = np.zeros(dim, dtype=complex)
        v[int(rng.integers(dim))] = 1.0
        return v
    if chain is None:
        raise ValueError(f"initial state {kind!r} requires chain parameters")
    if kind == "all_down":
        return _basis_state(0, chain)
    if kind == "all_up":
        return _basis_state(chain.full_dim - 1, chain)
    if kind.startswith("center_eigenstate_hz:"):
        h_val = float(kind.split(":", 1)[1])
        return center_eigenstate(chain, h_val)
    raise ValueError(f"unknown initial state kind {kind!r}")


def spectral_weight(u: UnitaryMatrix, psi0) -> tuple[np.ndarray, np.ndarray]:
    """Spectral weights |<phi_k|psi0>|^2 over the unitary's eigenvectors.

    Returns (phases, weights) with phases ascending in [-pi, pi).  The
    weights sum to one and their moments reproduce the survival amplitudes
    <psi0|U^t|psi0>.
    """
    from .matrixcore import unitary_eigenphases

    v = np.asarray(psi0, dtype=complex).ravel()
    spectral = unitary_eigenphases(u)
    weights = np.abs(spectral.eigenvectors.conj().T @ v) ** 2
    return spectral.values, weights


def dump_matrix(matrix: np.ndarray, path) -> None:
    """Write a square matrix as little-endian: uint64 dimension, then
    row-major complex128 entries."""
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("dump_matrix expects a square matrix")
    with open(path, "wb") as fh:
        fh.write(np.uint64(m.shape[0]).tobytes())
        fh.write(m.astype("<c16").tobytes())


def load_matrix(path) -> np.ndarray:
    """Inverse of :func:`dump_matrix`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    dim = int(np.frombuffer(raw[:8], dtype="<u8")[0])
    return np.frombuffer(raw[8:], dtype="<c16").reshape(dim, dim).copy()


def chain_spectral_data(p: ChainParams) -> SpectralData:
    """Eigendecomposition of the chain Hamiltonian (convenience wrapper)."""
    return hermitian_eigendecompose(chain_hamiltonian(p))
