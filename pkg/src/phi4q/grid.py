"""Single-site field digitization: sample points in field and conjugate-momentum space."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class BoundaryMode(enum.Enum):
    PERIODIC = "periodic"
    TWISTED = "twisted"

    @classmethod
    def parse(cls, value: "BoundaryMode | str") -> "BoundaryMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class JlpGrid:
    """Uniform field-space grid of ``n_states`` points on [-phi_max, phi_max].

    The momentum set depends on the boundary mode. Periodic momenta are
    ``-pi/delta + beta * dk`` for ``beta = 1..n_states``; twisted momenta are
    shifted by ``-dk/2`` so they sit symmetrically about zero.

    ``n_states`` need not be a power of two (sweeps scan state counts);
    circuits require ``n_states == 2**n_q``.
    """

    n_states: int
    phi_max: float
    bc: BoundaryMode = BoundaryMode.TWISTED
    fields: np.ndarray = field(init=False, repr=False, compare=False)
    momenta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_states < 2:
            raise ValueError(f"need at least 2 field states, got {self.n_states}")
        if not self.phi_max > 0:
            raise ValueError(f"phi_max must be positive, got {self.phi_max}")
        object.__setattr__(self, "bc", BoundaryMode.parse(self.bc))
        ns = self.n_states
        fields = -self.phi_max + self.delta * np.arange(ns)
        # exact pairing so that sum(fields) == 0
        fields = 0.5 * (fields - fields[::-1])
        labels = self.momentum_labels
        momenta = 2.0 * np.pi * labels / (self.delta * ns)
        fields.setflags(write=False)
        momenta.setflags(write=False)
        object.__setattr__(self, "fields", fields)
        object.__setattr__(self, "momenta", momenta)

    @property
    def delta(self) -> float:
        return 2.0 * self.phi_max / (self.n_states - 1)

    @property
    def n_q(self) -> int | None:
        """Qubit count, or None when the state count is not a power of two."""
        n = self.n_states.bit_length() - 1
        return n if 1 << n == self.n_states else None

    @property
    def momentum_spacing(self) -> float:
        return 2.0 * np.pi / (self.delta * self.n_states)

    @property
    def momentum_labels(self) -> np.ndarray:
        """Momenta in units of the spacing, ascending.

        Integers ``-n/2+1 .. n/2`` (periodic) or half-integers
        ``-(n-1)/2 .. (n-1)/2`` (twisted, for even and odd n alike).
        """
        beta = np.arange(1, self.n_states + 1, dtype=float)
        labels = beta - self.n_states / 2.0
        if self.bc is BoundaryMode.TWISTED:
            labels = labels - 0.5
        return labels

    @property
    def k_max(self) -> float:
        return float(np.max(np.abs(self.momenta)))


def build_jlp_grid(n_q: int, phi_max: float, bc: BoundaryMode | str = BoundaryMode.TWISTED) -> JlpGrid:
    """Grid with ``2**n_q`` field states."""
    if n_q < 1:
        raise ValueError(f"n_q must be >= 1, got {n_q}")
    return JlpGrid(1 << n_q, phi_max, BoundaryMode.parse(bc))


def grid_from_states(n_states: int, phi_max: float, bc: BoundaryMode | str = BoundaryMode.TWISTED) -> JlpGrid:
    return JlpGrid(int(n_states), phi_max, BoundaryMode.parse(bc))


@dataclass(frozen=True)
class SaturationEstimate:
    saturated: bool
    margin: float
    k_max: float


def ns_saturation_estimate(grid: JlpGrid, support_k: float) -> SaturationEstimate:
    """Does the grid's momentum range cover ``support_k``?

    ``support_k`` is the caller's estimate of where the target wavefunction's
    momentum-space tail turns from exponential to power law.
    """
    kmax = grid.k_max
    return SaturationEstimate(kmax >= support_k, kmax - support_k, kmax)


def min_states_for_support(phi_max: float, support_k: float,
                           bc: BoundaryMode | str = BoundaryMode.TWISTED,
                           max_states: int = 4096) -> int:
    """Smallest state count whose grid momenta reach ``support_k`` at fixed ``phi_max``."""
    for ns in range(2, max_states + 1):
        if ns_saturation_estimate(grid_from_states(ns, phi_max, bc), support_k).saturated:
            return ns
    raise ValueError(f"support_k={support_k} not reachable with <= {max_states} states")


@dataclass(frozen=True)
class HoBasisSpec:
    """Truncated harmonic-oscillator basis with frequency ``omega``.

    Operator powers are formed in ``n_states + construction_headroom`` states
    and truncated afterwards.
    """

    omega: float
    n_states: int
    construction_headroom: int = 4

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be >= 1")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.construction_headroom < 0:
            raise ValueError("construction_headroom must be >= 0")

    @property
    def n_q(self) -> int | None:
        n = self.n_states.bit_length() - 1
        return n if 1 << n == self.n_states else None

    @property
    def extent(self) -> float:
        """Field-space extent proxy sqrt(n_states / omega), the HO analogue of phi_max."""
        return math.sqrt(self.n_states / self.omega)
