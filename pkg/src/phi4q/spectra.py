"""Eigensolves, digitization precision, parameter sweeps, noise model and wavefunctions."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.linalg

from . import operators as ops
from .grid import BoundaryMode, HoBasisSpec, JlpGrid, grid_from_states
from .hamiltonians import (Pi2Variant, SiteTheoryParams, build_site_hamiltonian_ho,
                           build_site_hamiltonian_jlp, kinetic_operator)
from .operators import HermitianOperator

WORKERS_ENV = "PHI4Q_WORKERS"
RESIDUAL_TOL = 1e-9

# Ground and first excited energies; keys are (n_sites, lambda, mass_sq).
REFERENCE_ENERGIES: dict[tuple[int, float, float], tuple[float, float]] = {
    (1, 0.0, 1.0): (0.5, 1.5),
    (1, 32.0, 1.0): (float("0.85974269044550901935596"), float("2.94936376700996890229")),
    (1, 1.0, -4.0): (float("-22.596382373935095119775874"), float("-22.596382373935095118634895")),
    (1, 1.0, -25.0): (float("-933.966134532634985047797739"), float("-933.966134532634985047797739")),
    (2, 32.0, 1.0): (float("2.12423312343879018508120639"), float("4.14178896487443452796737080")),
}


class EigensolveError(RuntimeError):
    def __init__(self, message: str, residuals: np.ndarray):
        super().__init__(message)
        self.residuals = residuals


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    residuals: np.ndarray | None = None

    @property
    def n_retained(self) -> int:
        return 0 if self.eigenvectors is None else self.eigenvectors.shape[1]


def eigensolve(h: HermitianOperator | np.ndarray, k: int | None = None, vectors: bool = True) -> SpectralResult:
    """Lowest ``k`` eigenpairs of a dense Hermitian matrix, residual-checked."""
    m = h.matrix if isinstance(h, HermitianOperator) else np.asarray(h)
    dim = m.shape[0]
    k = dim if k is None else k
    if not 1 <= k <= dim:
        raise ValueError(f"k={k} outside 1..{dim}")
    subset = None if k == dim else [0, k - 1]
    if not vectors:
        w = scipy.linalg.eigh(m, eigvals_only=True, subset_by_index=subset, driver="evr")
        return SpectralResult(np.asarray(w))
    w, v = scipy.linalg.eigh(m, subset_by_index=subset, driver="evr")
    res = np.linalg.norm(m @ v - v * w, axis=0) / np.maximum(np.abs(w), 1.0)
    if np.any(res > RESIDUAL_TOL):
        raise EigensolveError(f"eigensolver residuals up to {res.max():.2e}", res)
    return SpectralResult(w, v, res)


def epsilon_percent(e_computed: float, e_reference: float) -> float:
    if e_reference == 0:
        raise ValueError("reference energy is zero")
    return 100.0 * abs(e_computed - e_reference) / abs(e_reference)


@dataclass(frozen=True)
class SweepRecord:
    params: dict
    level: int
    energy: float
    epsilon_percent: float

    def as_row(self) -> dict:
        return {**self.params, "level": self.level, "energy": self.energy,
                "epsilon_percent": self.epsilon_percent}


@dataclass(frozen=True)
class NoiseModel:
    """Independent Gaussian offsets of width ``sigma`` on each momentum-space diagonal entry."""

    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def offsets(self, n: int, *stream: int) -> np.ndarray:
        rng = np.random.default_rng([self.seed, n, *stream])
        return rng.normal(0.0, self.sigma, size=n)


def apply_momentum_noise(grid: JlpGrid, noise: NoiseModel,
                         variant: Pi2Variant | str = Pi2Variant.EXACT, stream: Sequence[int] = ()) -> HermitianOperator:
    """Kinetic operator whose momentum eigenvalues carry the noise offsets.

    ``sigma == 0`` returns the noiseless operator unchanged.
    """
    variant = Pi2Variant.parse(variant)
    if noise.sigma == 0:
        return kinetic_operator(grid, variant)
    k2 = {
        Pi2Variant.FINITE_DIFFERENCE: ops.k2_finite_difference,
        Pi2Variant.IMPROVED1: lambda g: ops.k2_improved(g, 1),
        Pi2Variant.IMPROVED2: lambda g: ops.k2_improved(g, 2),
        Pi2Variant.EXACT: ops.k2_exact,
    }[variant](grid)
    noisy = k2 + noise.offsets(grid.n_states, *stream)
    return ops.momentum_diagonal_to_field(grid, noisy, f"pi2_{variant.value}+noise[{noise.sigma:g}]")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: list, workers: int | None) -> list:
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order regardless of completion order
        return list(pool.map(fn, items))


def _oracle_reference(params: SiteTheoryParams, level: int, phi_max: float, n_states: int,
                      bc: BoundaryMode) -> float:
    """High-resolution self-reference: 3 more qubits and 1.5x the field range, exact kinetic term."""
    nq = max(1, math.ceil(math.log2(max(n_states, 2))))
    ns_ref = min(1 << (nq + 3), 2048)
    grid = grid_from_states(ns_ref, 1.5 * phi_max, bc)
    h = build_site_hamiltonian_jlp(grid, params, Pi2Variant.EXACT)
    return float(eigensolve(h, level + 1, vectors=False).eigenvalues[level])


def reference_energy(params: SiteTheoryParams, level: int = 0, n_sites: int = 1,
                     phi_max_hint: float = 6.0, n_states_hint: int = 64,
                     bc: BoundaryMode = BoundaryMode.TWISTED) -> float:
    """Tabulated energy where available, otherwise the self-generated oracle."""
    key = (n_sites, float(params.lam), float(params.mass_sq))
    if key in REFERENCE_ENERGIES and level < 2:
        return REFERENCE_ENERGIES[key][level]
    if params.lam == 0 and params.mass_sq > 0 and n_sites == 1:
        return math.sqrt(params.mass_sq) * (level + 0.5)
    if n_sites != 1:
        raise KeyError(f"no reference for {n_sites}-site system {key}")
    return _oracle_reference(params, level, phi_max_hint, n_states_hint, bc)


@dataclass(frozen=True)
class _JlpPoint:
    params: SiteTheoryParams
    variant: Pi2Variant
    bc: BoundaryMode
    phi_max: float
    n_states: int
    level: int
    noise: NoiseModel = field(default_factory=NoiseModel)


def _solve_jlp_point(p: _JlpPoint) -> float:
    grid = grid_from_states(p.n_states, p.phi_max, p.bc)
    pi2 = None
    if p.noise.sigma:
        pi2 = apply_momentum_noise(grid, p.noise, p.variant, stream=(int(round(p.phi_max * 1e6)),))
    h = build_site_hamiltonian_jlp(grid, p.params, p.variant, pi2=pi2)
    return float(eigensolve(h, p.level + 1, vectors=False).eigenvalues[p.level])


def sweep_jlp(lam: float, mass_sq: float, variant: Pi2Variant | str, phi_max_list: Iterable[float],
              n_states_list: Iterable[int], level: int = 0, bc: BoundaryMode | str = BoundaryMode.TWISTED,
              reference: float | None = None, noise: NoiseModel | None = None,
              workers: int | None = None) -> list[SweepRecord]:
    """Precision of one energy level over a (phi_max, n_states) grid in the field basis.

    Records come back ordered by (phi_max, n_states) as given.
    """
    params = SiteTheoryParams(mass_sq, lam)
    variant = Pi2Variant.parse(variant)
    bc = BoundaryMode.parse(bc)
    noise = noise or NoiseModel()
    phis = [float(x) for x in phi_max_list]
    states = [int(n) for n in n_states_list]
    if reference is None:
        reference = reference_energy(params, level, 1, max(phis), max(states), bc)
    points = [_JlpPoint(params, variant, bc, pm, ns, level, noise) for pm in phis for ns in states]
    energies = _map(_solve_jlp_point, points, workers)
    out = []
    for p, e in zip(points, energies):
        rec = {"basis": "jlp", "lambda": lam, "mass_sq": mass_sq, "variant": variant.value,
               "bc": bc.value, "phi_max": p.phi_max, "n_states": p.n_states,
               "sigma": noise.sigma, "seed": noise.seed}
        out.append(SweepRecord(rec, level, e, epsilon_percent(e, reference)))
    return out


@dataclass(frozen=True)
class _HoPoint:
    params: SiteTheoryParams
    omega: float
    n_states: int
    level: int
    headroom: int


def _solve_ho_point(p: _HoPoint) -> float:
    spec = HoBasisSpec(p.omega, p.n_states, p.headroom)
    h = build_site_hamiltonian_ho(spec, p.params)
    return float(eigensolve(h, p.level + 1, vectors=False).eigenvalues[p.level])


def sweep_ho(lam: float, mass_sq: float, omega_list: Iterable[float], n_states_list: Iterable[int],
             level: int = 0, reference: float | None = None, axis_scale: float = 1.0,
             headroom: int = 4, workers: int | None = None) -> list[SweepRecord]:
    """Precision over an (omega, n_states) grid in the HO basis.

    Each record carries ``extent = axis_scale * sqrt(n_states / omega)``, the
    HO counterpart of phi_max for side-by-side plots.
    """
    params = SiteTheoryParams(mass_sq, lam)
    omegas = [float(w) for w in omega_list]
    states = [int(n) for n in n_states_list]
    if reference is None:
        hint = max(math.sqrt(n / w) for w in omegas for n in states)
        reference = reference_energy(params, level, 1, min(max(hint, 4.0), 12.0), max(states))
    points = [_HoPoint(params, w, ns, level, headroom) for w in omegas for ns in states]
    energies = _map(_solve_ho_point, points, workers)
    out = []
    for p, e in zip(points, energies):
        rec = {"basis": "ho", "lambda": lam, "mass_sq": mass_sq, "omega": p.omega,
               "n_states": p.n_states, "extent": axis_scale * math.sqrt(p.n_states / p.omega)}
        out.append(SweepRecord(rec, level, e, epsilon_percent(e, reference)))
    return out


def noise_ensemble(sigma: float, seeds: Iterable[int], lam: float, mass_sq: float, phi_max: float,
                   n_states_list: Iterable[int], variant: Pi2Variant | str = Pi2Variant.EXACT,
                   level: int = 0, workers: int | None = None) -> dict[int, np.ndarray]:
    """epsilon for each seed, keyed by state count (rows follow ``seeds``)."""
    states = [int(n) for n in n_states_list]
    out = {ns: [] for ns in states}
    for seed in seeds:
        recs = sweep_jlp(lam, mass_sq, variant, [phi_max], states, level,
                         noise=NoiseModel(sigma, int(seed)), workers=workers)
        for r in recs:
            out[r.params["n_states"]].append(r.epsilon_percent)
    return {ns: np.asarray(v) for ns, v in out.items()}


def envelope(records: Iterable[SweepRecord], key: str = "n_states") -> list[tuple[int, float]]:
    """Best epsilon per value of ``key`` (minimum over the other sweep axes), sorted by key."""
    best: dict = {}
    for r in records:
        k = r.params[key]
        best[k] = min(best.get(k, math.inf), r.epsilon_percent)
    return sorted(best.items())


def fit_saturation_scaling(points: Iterable[tuple[float, float]] | Iterable[SweepRecord]) -> tuple[float, float]:
    """Least-squares fit ``log2(eps) = log2(A) - b * n_states``; returns (A, b)."""
    pts = []
    for p in points:
        if isinstance(p, SweepRecord):
            pts.append((p.params["n_states"], p.epsilon_percent))
        else:
            pts.append((float(p[0]), float(p[1])))
    if len(pts) < 4:
        raise ValueError(f"need at least 4 saturation points, got {len(pts)}")
    n, eps = np.array(pts).T
    slope, intercept = np.polyfit(n, np.log2(eps), 1)
    return float(2.0 ** intercept), float(-slope)


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def flattening_point(n_states: Sequence[int], eps: Sequence[float], tol: float = 0.1) -> int | None:
    """First state count after which each added step improves epsilon by less than ``tol``."""
    n_states = list(n_states)
    eps = list(eps)
    for i in range(len(n_states) - 1):
        tail = zip(eps[i:-1], eps[i + 1:])
        if all(nxt >= (1.0 - tol) * cur for cur, nxt in tail):
            return n_states[i]
    return None


@dataclass(frozen=True)
class Wavefunction:
    fields: np.ndarray
    field_amplitudes: np.ndarray
    momenta: np.ndarray
    momentum_amplitudes: np.ndarray


def wavefunctions(result: SpectralResult, grid: JlpGrid, level: int = 0) -> Wavefunction:
    """Field- and momentum-space amplitudes of a retained eigenvector, unit normalized."""
    if result.eigenvectors is None or level >= result.n_retained:
        raise ValueError(f"level {level} not retained")
    v = np.asarray(result.eigenvectors[:, level])
    v = v / np.linalg.norm(v)
    # fix the arbitrary phase: largest component real positive
    j = int(np.argmax(np.abs(v)))
    v = v * (abs(v[j]) / v[j])
    if np.allclose(v.imag, 0.0, atol=1e-14):
        v = v.real
    mom = ops.grid_dft(grid).matrix @ v
    mom = mom / np.linalg.norm(mom)
    return Wavefunction(grid.fields.copy(), v, grid.momenta.copy(), mom)
