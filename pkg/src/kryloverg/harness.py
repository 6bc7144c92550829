"""Parameter sweeps over the model families with disorder averaging.

A sweep walks a parameter grid, builds the model and its evolution unitary
for every (grid point, realization) pair, computes the chaos diagnostics and
the Krylov ergodicity measure, and averages across realizations.  Results
are written as one CSV per sweep plus a JSON sidecar echoing the full
configuration; outputs are byte-identical for a fixed (config, seed) at any
worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .arnoldi import arnoldi_iterate, decomposition_to_json
from .chaostats import delta_ks, r_ratio_mean
from .errors import ConfigError, DegenerateRange, ShapeMismatch
from .ergodicity import erg_measure, level_uniformity
from .matrixcore import (
    eigenphases_from_energies,
    hermitian_eigendecompose,
    unitary_eigenphases,
    unitary_from_spectral,
)
from .models import (
    ChainParams,
    RmtParams,
    TrotterParams,
    chain_hamiltonian,
    initial_state,
    interaction_eigenbasis,
    rmt_hamiltonian,
    trotter_unitary,
)

EXPERIMENTS = ("tau_scan", "rmt_lambda", "chain_hz", "trotter_hz")

CSV_HEADER = (
    "param,eta_mean,eta_sem,dks_mean,dks_sem,erginv_mean,erginv_sem,"
    "dunif_mean,dunif_sem,kdim_mean,erg_norm,dks_norm,n_ok,n_fail"
)

METRIC_KEYS = ("eta", "dks", "erginv", "erg", "dunif", "kdim")

# choices that the underlying formulas leave open; echoed into every sidecar
DESIGN_FLAGS = {
    "goe_diagonal_sigma": "sqrt(2/D)",
    "eigenphase_interval": "[-pi, pi)",
    "reorthogonalization_passes": 2,
    "breakdown_tol": "1e-12*sqrt(D)",
    "gap_ratio_window": "full spectrum",
    "unitary_phase_wrap_gap": "excluded",
    "delta_ks_pooling": "all D^2 overlaps",
    "eta_clamped": False,
    "rescale_shift": "closed-form mean(X' - eta)",
    "center_eigenstate_index": "floor(D/2)",
    "reduction_order": "sorted by (grid_index, realization)",
    "realization_seeding": "per realization, shared across grid points",
}


@dataclass(frozen=True)
class SweepConfig:
    experiment: str
    grid: tuple[float, ...]
    n_realizations: int = 1
    master_seed: int = 0
    output_path: str | None = None
    tau: float | None = None
    dim: int | None = None
    n_sites: int | None = None
    h_z: float | None = None
    disorder_sigma: float = 0.0
    parity_sector: str = "none"
    initial_state_kind: str = ""
    dump_sequences_at: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = list(self.grid)
        d["dump_sequences_at"] = list(self.dump_sequences_at)
        return d


_COMMON_KEYS = {
    "experiment",
    "grid",
    "n_realizations",
    "master_seed",
    "output_path",
}
_KEYS_BY_EXPERIMENT = {
    "rmt_lambda": _COMMON_KEYS | {"dim", "tau", "initial_state_kind"},
    "chain_hz": _COMMON_KEYS
    | {"n_sites", "tau", "disorder_sigma", "parity_sector", "initial_state_kind"},
    "trotter_hz": _COMMON_KEYS
    | {"n_sites", "tau", "disorder_sigma", "parity_sector", "initial_state_kind"},
    "tau_scan": _COMMON_KEYS
    | {
        "n_sites",
        "h_z",
        "disorder_sigma",
        "parity_sector",
        "initial_state_kind",
        "dump_sequences_at",
    },
}
_DEFAULT_INITIAL_STATE = {
    "rmt_lambda": "random_basis",
    "chain_hz": "center_eigenstate_hz:0",
    "trotter_hz": "all_up",
    "tau_scan": "all_down",
}


def validate_config(raw: dict) -> SweepConfig:
    """Validate a raw config mapping; unknown keys are rejected."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")
    allowed = _KEYS_BY_EXPERIMENT[experiment]
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    grid_raw = raw.get("grid")
    if not isinstance(grid_raw, (list, tuple)) or not grid_raw:
        raise ConfigError("grid must be a non-empty list")
    grid = tuple(float(g) for g in grid_raw)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("grid must be strictly increasing")

    n_realizations = int(raw.get("n_realizations", 1))
    if n_realizations < 1:
        raise ConfigError("n_realizations must be >= 1")
    master_seed = int(raw.get("master_seed", 0))
    if not 0 <= master_seed < 2**64:
        raise ConfigError("master_seed must be a 64-bit unsigned integer")

    initial_state_kind = str(
        raw.get("initial_state_kind", _DEFAULT_INITIAL_STATE[experiment])
    )
    parity_sector = str(raw.get("parity_sector", "none"))
    disorder_sigma = float(raw.get("disorder_sigma", 0.0))
    tau = raw.get("tau")
    dim = raw.get("dim")
    n_sites = raw.get("n_sites")
    h_z = raw.get("h_z")

    if experiment == "rmt_lambda":
        if dim is None:
            raise ConfigError("rmt_lambda requires dim")
        dim = int(dim)
        if dim < 2:
            raise ConfigError("dim must be >= 2")
        tau = float(tau) if tau is not None else 100.0
        if initial_state_kind not in ("random_basis", "haar_random"):
            raise ConfigError(
                "rmt_lambda supports random_basis or haar_random initial states"
            )
        parity_sector = "none"
    else:
        if n_sites is None:
            raise ConfigError(f"{experiment} requires n_sites")
        n_sites = int(n_sites)
        if parity_sector not in ("none", "positive", "negative"):
            raise ConfigError(f"unknown parity sector {parity_sector!r}")
        if parity_sector != "none" and disorder_sigma > 0:
            raise ConfigError("parity sectors require a clean chain (disorder_sigma = 0)")

    if experiment in ("chain_hz", "trotter_hz"):
        if tau is None:
            raise ConfigError(f"{experiment} requires tau")
        tau = float(tau)
        if tau <= 0:
            raise ConfigError("tau must be positive")

    dump_at: tuple[float, ...] = ()
    if experiment == "tau_scan":
        if h_z is None:
            raise ConfigError("tau_scan requires h_z")
        h_z = float(h_z)
        if disorder_sigma != 0.0:
            raise ConfigError("tau_scan requires disorder_sigma = 0")
        if parity_sector == "none":
            parity_sector = "positive"
        if parity_sector != "positive":
            raise ConfigError("tau_scan runs in the positive parity sector")
        if n_sites > 10:
            raise ConfigError("tau_scan supports n_sites <= 10")
        if n_realizations != 1:
            raise ConfigError("tau_scan is deterministic: n_realizations must be 1")
        dump_raw = raw.get("dump_sequences_at", [])
        if not isinstance(dump_raw, (list, tuple)):
            raise ConfigError("dump_sequences_at must be a list")
        dump_at = tuple(float(g) for g in dump_raw)
        for g in dump_at:
            if not any(abs(g - gv) <= 1e-12 * max(1.0, abs(gv)) for gv in grid):
                raise ConfigError(f"dump_sequences_at value {g} is not a grid point")

    output_path = raw.get("output_path")
    if output_path is not None:
        output_path = str(output_path)

    return SweepConfig(
        experiment=experiment,
        grid=grid,
        n_realizations=n_realizations,
        master_seed=master_seed,
        output_path=output_path,
        tau=tau,
        dim=dim,
        n_sites=n_sites,
        h_z=h_z,
        disorder_sigma=disorder_sigma,
        parity_sector=parity_sector,
        initial_state_kind=initial_state_kind,
        dump_sequences_at=dump_at,
    )


def load_config(path) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_config(json.load(fh))


def realization_seed(master_seed: int, realization: int, stream: int = 0) -> int:
    """Stable 64-bit seed for one realization; independent of how many run.

    Deliberately independent of the grid point: a realization is one draw of
    the random model (or disorder profile, or initial state) that is swept
    across the whole parameter grid, so sweep curves vary smoothly in the
    parameter instead of redrawing the ensemble at every grid point.
    """
    ss = np.random.SeedSequence((int(master_seed), int(realization), int(stream)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rescale(x, eta_ref) -> np.ndarray:
    """Map a series onto the range of eta and remove the mean offset.

    The series is scaled so its range matches eta's, then shifted by the
    offset minimizing the Euclidean distance to eta, which in closed form is
    the mean of (scaled series - eta).
    """
    xv = np.asarray(x, dtype=float).ravel()
    ev = np.asarray(eta_ref, dtype=float).ravel()
    if xv.shape != ev.shape or xv.size < 2:
        raise ShapeMismatch("rescale needs two equal-length series of size >= 2")
    x_range = float(xv.max() - xv.min())
    e_range = float(ev.max() - ev.min())
    if x_range == 0.0 or e_range == 0.0:
        raise DegenerateRange("rescale inputs must have non-zero range")
    scaled = xv * (e_range / x_range)
    return scaled - float(np.mean(scaled - ev))


def _chain_for_state(cfg: SweepConfig, seed: int = 0) -> ChainParams:
    return ChainParams(
        n_sites=cfg.n_sites,
        h_z=cfg.h_z if cfg.h_z is not None else 0.0,
        disorder_sigma=0.0,
        seed=seed,
        parity_sector=cfg.parity_sector,
    )


def prepare_shared(cfg: SweepConfig) -> dict:
    """Sweep-level precomputations shared by every realization."""
    if cfg.experiment == "rmt_lambda":
        return {}
    if cfg.experiment in ("chain_hz", "trotter_hz"):
        psi0 = initial_state(cfg.initial_state_kind, chain=_chain_for_state(cfg))
        return {"psi0": psi0}
    # tau_scan: one clean-chain decomposition reused for every time step
    params = _chain_for_state(cfg)
    spectral = hermitian_eigendecompose(chain_hamiltonian(params))
    sigma_e = float(np.sqrt(spectral.spectral_variance))
    return {
        "spectral": spectral,
        "tau_star": float(np.pi / sigma_e),
        "psi0": initial_state(cfg.initial_state_kind, chain=params),
    }


def build_point(cfg: SweepConfig, grid_idx: int, realization: int, shared: dict) -> dict:
    """Construct the unitary, initial state, and spectral data for one point."""
    g = cfg.grid[grid_idx]
    seed_model = realization_seed(cfg.master_seed, realization, 0)

    if cfg.experiment == "rmt_lambda":
        h = rmt_hamiltonian(RmtParams(dim=cfg.dim, lam=g, seed=seed_model))
        spectral = hermitian_eigendecompose(h)
        u = unitary_from_spectral(spectral, cfg.tau)
        seed_state = realization_seed(cfg.master_seed, realization, 1)
        psi0 = initial_state(
            cfg.initial_state_kind, dim=cfg.dim, rng=np.random.default_rng(seed_state)
        )
        return {
            "unitary": u,
            "psi0": psi0,
            "phases": eigenphases_from_energies(spectral.values, cfg.tau),
            "h_spectral": spectral,
            "seed": seed_model,
        }

    if cfg.experiment == "chain_hz":
        params = ChainParams(
            n_sites=cfg.n_sites,
            h_z=g,
            disorder_sigma=cfg.disorder_sigma,
            seed=seed_model,
            parity_sector=cfg.parity_sector,
        )
        spectral = hermitian_eigendecompose(chain_hamiltonian(params))
        u = unitary_from_spectral(spectral, cfg.tau)
        return {
            "unitary": u,
            "psi0": shared["psi0"],
            "phases": eigenphases_from_energies(spectral.values, cfg.tau),
            "h_spectral": spectral,
            "seed": seed_model,
        }

    if cfg.experiment == "trotter_hz":
        params = TrotterParams(
            chain=ChainParams(
                n_sites=cfg.n_sites,
                h_z=g,
                disorder_sigma=cfg.disorder_sigma,
                seed=seed_model,
                parity_sector=cfg.parity_sector,
            ),
            tau=cfg.tau,
        )
        u = trotter_unitary(params)
        spectral_u = unitary_eigenphases(u)
        return {
            "unitary": u,
            "psi0": shared["psi0"],
            "phases": spectral_u.values,
            "u_spectral": spectral_u,
            "seed": seed_model,
        }

    # tau_scan
    tau = g * shared["tau_star"]
    spectral = shared["spectral"]
    u = unitary_from_spectral(spectral, tau)
    return {
        "unitary": u,
        "psi0": shared["psi0"],
        "phases": eigenphases_from_energies(spectral.values, tau),
        "seed": seed_model,
    }


def _wants_seqdump(cfg: SweepConfig, g: float) -> bool:
    return any(abs(g - d) <= 1e-12 * max(1.0, abs(d)) for d in cfg.dump_sequences_at)


def _realization_task(
    cfg: SweepConfig, grid_idx: int, realization: int, shared: dict, dump_basis: bool
) -> dict:
    """One (grid point, realization) unit of work; exceptions become records."""
    try:
        objs = build_point(cfg, grid_idx, realization, shared)
        decomp = arnoldi_iterate(objs["unitary"], objs["psi0"])
        erginv, erg = erg_measure(decomp.hessenberg)
        dunif = level_uniformity(objs["phases"])

        eta = None
        dks = None
        if cfg.experiment in ("rmt_lambda", "chain_hz"):
            eta = r_ratio_mean(objs["h_spectral"].values).eta
        elif cfg.experiment == "trotter_hz":
            eta = r_ratio_mean(objs["u_spectral"].values).eta
        if cfg.experiment == "chain_hz" and cfg.parity_sector == "none":
            dks = delta_ks(
                objs["h_spectral"].eigenvectors,
                interaction_eigenbasis(cfg.n_sites),
                reference_basis_id="interaction_eigenbasis",
            ).delta_ks
        elif cfg.experiment == "trotter_hz" and cfg.parity_sector == "none":
            dks = delta_ks(
                objs["u_spectral"].eigenvectors,
                interaction_eigenbasis(cfg.n_sites),
                reference_basis_id="interaction_eigenbasis",
            ).delta_ks

        out = {
            "eta": eta,
            "dks": dks,
            "erginv": erginv,
            "erg": erg,
            "dunif": dunif,
            "kdim": float(decomp.krylov_dim),
            "seed": objs["seed"],
        }
        if cfg.experiment == "tau_scan" and _wants_seqdump(cfg, cfg.grid[grid_idx]):
            out["seqdump"] = decomposition_to_json(decomp, include_basis=dump_basis)
        return out
    except Exception as exc:  # fail-soft: record and continue the sweep
        return {
            "error": f"{type(exc).__name__}: {exc}",
            "seed": realization_seed(cfg.master_seed, realization, 0),
        }


@dataclass
class SweepResult:
    config: SweepConfig
    params: np.ndarray
    stats: dict[str, list]
    n_ok: list[int]
    n_fail: list[int]
    erg_norm: list | None
    dks_norm: list | None
    seeds: list[list[int]]
    exclusions: list[tuple[int, int, str]]
    extras: dict = field(default_factory=dict)


def _mean_sem(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    mean = float(np.mean(arr))
    sem = float(np.std(arr, ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, sem


def run_sweep(cfg: SweepConfig, workers: int = 1, dump_basis: bool = False) -> SweepResult:
    """Execute a sweep and reduce per-realization metrics to grid-point rows.

    Realizations are independent tasks; the reduction always runs in sorted
    (grid point, realization) order, so the output does not depend on the
    worker count.  ``workers`` is an execution option and leaves the outputs
    byte-identical.
    """
    shared = prepare_shared(cfg)
    tasks = [
        (gi, ri) for gi in range(len(cfg.grid)) for ri in range(cfg.n_realizations)
    ]
    results: dict[tuple[int, int], dict] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                (gi, ri): pool.submit(_realization_task, cfg, gi, ri, shared, dump_basis)
                for gi, ri in tasks
            }
            for key, fut in futures.items():
                results[key] = fut.result()
    else:
        for gi, ri in tasks:
            results[(gi, ri)] = _realization_task(cfg, gi, ri, shared, dump_basis)

    stats: dict[str, list] = {}
    for key in METRIC_KEYS:
        stats[f"{key}_mean"] = []
        stats[f"{key}_sem"] = []
    n_ok: list[int] = []
    n_fail: list[int] = []
    seeds: list[list[int]] = []
    exclusions: list[tuple[int, int, str]] = []
    seqdumps: list[tuple[float, dict]] = []

    for gi in range(len(cfg.grid)):
        point_rows = []
        point_seeds = []
        fails = 0
        for ri in range(cfg.n_realizations):
            rec = results[(gi, ri)]
            point_seeds.append(int(rec["seed"]))
            if "error" in rec:
                fails += 1
                exclusions.append((gi, ri, rec["error"]))
            else:
                point_rows.append(rec)
                if "seqdump" in rec:
                    seqdumps.append((cfg.grid[gi], rec["seqdump"]))
        seeds.append(point_seeds)
        n_ok.append(len(point_rows))
        n_fail.append(fails)
        for key in METRIC_KEYS:
            mean, sem = _mean_sem([r[key] for r in point_rows if r[key] is not None])
            stats[f"{key}_mean"].append(mean)
            stats[f"{key}_sem"].append(sem)

    def _rescaled(source_key: str) -> list | None:
        eta_means = stats["eta_mean"]
        src = stats[f"{source_key}_mean"]
        if any(v is None for v in eta_means) or any(v is None for v in src):
            return None
        if len(eta_means) < 2:
            return None
        try:
            return [float(v) for v in rescale(src, eta_means)]
        except DegenerateRange:
            return None

    result = SweepResult(
        config=cfg,
        params=np.asarray(cfg.grid, dtype=float),
        stats=stats,
        n_ok=n_ok,
        n_fail=n_fail,
        erg_norm=_rescaled("erg"),
        dks_norm=_rescaled("dks"),
        seeds=seeds,
        exclusions=exclusions,
    )
    if cfg.experiment == "tau_scan":
        result.extras["tau_star"] = shared["tau_star"]
        result.extras["sequence_dumps"] = seqdumps
    kdims = [v for v in stats["kdim_mean"] if v is not None]
    result.extras["krylov_dim_uniform"] = bool(kdims) and (min(kdims) == max(kdims))
    result.extras["delta_unif_flags"] = [
        float(cfg.grid[i])
        for i, v in enumerate(stats["dunif_mean"])
        if v is not None and v >= 0.1
    ]
    return result


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.17g}"


def result_to_csv_text(res: SweepResult) -> str:
    """Render the fixed-schema CSV (17 significant digits, one row per grid point)."""
    lines = [CSV_HEADER]
    for i, p in enumerate(res.params):
        cells = [
            _fmt(p),
            _fmt(res.stats["eta_mean"][i]),
            _fmt(res.stats["eta_sem"][i]),
            _fmt(res.stats["dks_mean"][i]),
            _fmt(res.stats["dks_sem"][i]),
            _fmt(res.stats["erginv_mean"][i]),
            _fmt(res.stats["erginv_sem"][i]),
            _fmt(res.stats["dunif_mean"][i]),
            _fmt(res.stats["dunif_sem"][i]),
            _fmt(res.stats["kdim_mean"][i]),
            _fmt(res.erg_norm[i] if res.erg_norm is not None else None),
            _fmt(res.dks_norm[i] if res.dks_norm is not None else None),
            str(res.n_ok[i]),
            str(res.n_fail[i]),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sidecar_dict(res: SweepResult) -> dict:
    from . import __version__

    extras = {k: v for k, v in res.extras.items() if k != "sequence_dumps"}
    return {
        "config": res.config.to_dict(),
        "library_version": __version__,
        "design_decisions": DESIGN_FLAGS,
        "per_realization_seeds": res.seeds,
        "exclusions": [list(e) for e in res.exclusions],
        "extras": extras,
    }


def write_outputs(res: SweepResult, out_dir, stem: str | None = None) -> list[Path]:
    """Write CSV, JSON sidecar, and any sequence dumps; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if stem is None:
        stem = res.config.output_path or res.config.experiment
    paths = []

    csv_path = out / f"{stem}.csv"
    csv_path.write_text(result_to_csv_text(res), encoding="utf-8")
    paths.append(csv_path)

    meta_path = out / f"{stem}.meta.json"
    meta_path.write_text(
        json.dumps(sidecar_dict(res), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    paths.append(meta_path)

    for i, (gval, dump) in enumerate(res.extras.get("sequence_dumps", [])):
        seq_path = out / f"{stem}.seq{i:02d}.json"
        payload = {"grid_value": gval, **dump}
        seq_path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        paths.append(seq_path)
    return paths
