"""Hamiltonian assembly: single-site theories in either basis and the nearest-neighbour lattice."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import operators as ops
from .grid import HoBasisSpec, JlpGrid
from .operators import HermitianOperator

MAX_LATTICE_DIM = 1 << 14


class Pi2Variant(enum.Enum):
    FINITE_DIFFERENCE = "fd"
    IMPROVED1 = "improved1"
    IMPROVED2 = "improved2"
    EXACT = "exact"

    @classmethod
    def parse(cls, value: "Pi2Variant | str") -> "Pi2Variant":
        if isinstance(value, cls):
            return value
        v = str(value).lower().replace("-", "_")
        aliases = {"finite_difference": "fd", "improved": "improved1"}
        return cls(aliases.get(v, v))


class SpatialBC(enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"

    @classmethod
    def parse(cls, value: "SpatialBC | str") -> "SpatialBC":
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass(frozen=True)
class SiteTheoryParams:
    """Dimensionless couplings of ``1/2 Pi^2 + 1/2 mass_sq phi^2 + lam/4! phi^4``.

    ``mass_sq < 0`` gives the double well; use :meth:`double_well` to pass ``mu``.
    """

    mass_sq: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"quartic coupling must be >= 0, got {self.lam}")

    @classmethod
    def double_well(cls, mu: float, lam: float) -> "SiteTheoryParams":
        return cls(mass_sq=-mu * mu, lam=lam)

    def potential(self, phi: np.ndarray) -> np.ndarray:
        return 0.5 * self.mass_sq * phi ** 2 + self.lam / 24.0 * phi ** 4

    @property
    def well_minima(self) -> float | None:
        """Location +-sqrt(6) mu / sqrt(lam) of the double-well minima, if any."""
        if self.mass_sq >= 0 or self.lam == 0:
            return None
        return float(np.sqrt(-6.0 * self.mass_sq / self.lam))


@dataclass(frozen=True)
class LatticeSpec:
    n_sites: int
    site: JlpGrid | HoBasisSpec
    spatial_bc: SpatialBC = SpatialBC.PERIODIC

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        object.__setattr__(self, "spatial_bc", SpatialBC.parse(self.spatial_bc))

    @property
    def site_dim(self) -> int:
        return self.site.n_states

    @property
    def dim(self) -> int:
        return self.site_dim ** self.n_sites

    def bonds(self) -> list[tuple[int, int]]:
        """Nearest-neighbour pairs, one entry per gradient coupling.

        Periodic wrap-around with two sites lists the pair twice, which is
        what the finite-difference Laplacian produces on a 2-site ring.
        """
        n = self.n_sites
        if self.spatial_bc is SpatialBC.PERIODIC:
            return [(x, (x + 1) % n) for x in range(n)]
        return [(x, x + 1) for x in range(n - 1)]


def rescale_params(m0: float, lambda0: float, a: float, d: int) -> tuple[float, float]:
    """Dimensionless lattice couplings ``(a*m0, a**(3-d) * lambda0)``."""
    if not a > 0:
        raise ValueError(f"lattice spacing must be positive, got {a}")
    if d < 0:
        raise ValueError("spatial dimension must be >= 0")
    return a * m0, a ** (3 - d) * lambda0


def kinetic_operator(grid: JlpGrid, variant: Pi2Variant | str = Pi2Variant.EXACT) -> HermitianOperator:
    variant = Pi2Variant.parse(variant)
    if variant is Pi2Variant.FINITE_DIFFERENCE:
        return ops.pi2_finite_difference(grid)
    if variant is Pi2Variant.IMPROVED1:
        return ops.pi2_improved(grid, 1)
    if variant is Pi2Variant.IMPROVED2:
        return ops.pi2_improved(grid, 2)
    return ops.pi2_exact(grid)


def build_site_hamiltonian_jlp(grid: JlpGrid, params: SiteTheoryParams,
                               pi2_variant: Pi2Variant | str = Pi2Variant.EXACT,
                               pi2: HermitianOperator | None = None) -> HermitianOperator:
    """``1/2 Pi^2 + V(phi)`` on the field grid.

    ``pi2`` overrides the kinetic matrix (used by the noise model).
    """
    kin = pi2 if pi2 is not None else kinetic_operator(grid, pi2_variant)
    m = 0.5 * kin.matrix + np.diag(params.potential(grid.fields))
    return HermitianOperator(m, f"H_jlp[{kin.label}]")


def build_site_hamiltonian_ho(spec: HoBasisSpec, params: SiteTheoryParams) -> HermitianOperator:
    """``H_basis + 1/2 (mass_sq - omega^2) phi^2 + lam/4! phi^4`` in the HO basis."""
    m = ops.ho_basis_hamiltonian(spec).matrix.copy()
    m += 0.5 * (params.mass_sq - spec.omega ** 2) * ops.ho_phi_power_op(spec, 2).matrix
    if params.lam:
        m += params.lam / 24.0 * ops.ho_phi_power_op(spec, 4).matrix
    return HermitianOperator(m, f"H_ho[w={spec.omega:g}]")


def delta_h_omega(spec: HoBasisSpec, mass_sq: float = 1.0) -> HermitianOperator:
    """Detuning piece ``1/2 (mass_sq - omega^2) phi^2`` of the HO-basis Hamiltonian."""
    m = 0.5 * (mass_sq - spec.omega ** 2) * ops.ho_phi_power_op(spec, 2).matrix
    return HermitianOperator(m, f"dH[w={spec.omega:g}]")


def _site_pieces(site, params: SiteTheoryParams, variant: Pi2Variant):
    """(site Hamiltonian without gradient terms, phi, phi^2) as dense matrices."""
    if isinstance(site, JlpGrid):
        h = build_site_hamiltonian_jlp(site, params, variant).matrix
        return h, np.diag(site.fields), np.diag(site.fields ** 2)
    h = build_site_hamiltonian_ho(site, params).matrix
    return h, ops.ho_phi_power_op(site, 1).matrix, ops.ho_phi_power_op(site, 2).matrix


def _add_on_site(h: np.ndarray, op: np.ndarray, site: int, n_sites: int, d: int) -> None:
    """In-place ``h += I (x) ... op@site ... (x) I`` without forming the Kronecker product."""
    dl = d ** site
    dr = d ** (n_sites - site - 1)
    block = np.arange(d) * dr
    for left in range(dl):
        for right in range(dr):
            idx = left * d * dr + block + right
            h[np.ix_(idx, idx)] += op


def build_lattice_hamiltonian(spec: LatticeSpec, params: SiteTheoryParams,
                              pi2_variant: Pi2Variant | str = Pi2Variant.EXACT) -> HermitianOperator:
    """Multi-site Hamiltonian with the finite-difference spatial Laplacian.

    Expanding ``-1/2 phi_x (phi_{x+1} + phi_{x-1} - 2 phi_x)`` puts ``+phi_x^2``
    on every site and ``-phi_x phi_y`` on every bond from :meth:`LatticeSpec.bonds`.
    Open chains drop the missing neighbours (field fixed to zero outside).
    """
    variant = Pi2Variant.parse(pi2_variant)
    if spec.dim > MAX_LATTICE_DIM:
        raise ValueError(f"lattice dimension {spec.dim} exceeds {MAX_LATTICE_DIM}")
    n, d = spec.n_sites, spec.site_dim
    h_site, phi, phi2 = _site_pieces(spec.site, params, variant)
    if n == 1 and spec.spatial_bc is SpatialBC.PERIODIC:
        return HermitianOperator(h_site, "H_lattice[1 site]")

    local = h_site + phi2
    diagonal = isinstance(spec.site, JlpGrid)
    h = np.zeros((spec.dim, spec.dim), dtype=np.result_type(local, phi))
    for x in range(n):
        _add_on_site(h, local, x, n, d)

    if diagonal:
        fields = np.diag(phi)
        ones = np.ones(d)
        coupling = np.zeros(spec.dim)
        for x, y in spec.bonds():
            factors = [fields if s in (x, y) else ones for s in range(n)]
            if x == y:
                factors[x] = fields ** 2
            coupling -= reduce(np.kron, factors)
        h[np.diag_indices_from(h)] += coupling
    else:
        eye = np.eye(d)
        for x, y in spec.bonds():
            factors = [phi if s in (x, y) else eye for s in range(n)]
            if x == y:
                factors[x] = phi @ phi
            h -= reduce(np.kron, factors)
    return HermitianOperator(h, f"H_lattice[{n} sites,{spec.spatial_bc.value}]")


def site_parity(site: JlpGrid | HoBasisSpec) -> np.ndarray:
    """phi -> -phi: grid reversal in the field basis, (-1)^n in the HO basis."""
    if isinstance(site, JlpGrid):
        return np.eye(site.n_states)[::-1].copy()
    return np.diag((-1.0) ** np.arange(site.n_states))


def lattice_parity(spec: LatticeSpec) -> np.ndarray:
    return reduce(np.kron, [site_parity(spec.site)] * spec.n_sites)


def site_swap(spec: LatticeSpec) -> np.ndarray:
    """Permutation exchanging the two sites of a 2-site lattice."""
    if spec.n_sites != 2:
        raise ValueError("site swap is defined for 2 sites")
    d = spec.site_dim
    perm = np.arange(d * d).reshape(d, d).T.ravel()
    return np.eye(d * d)[perm]
