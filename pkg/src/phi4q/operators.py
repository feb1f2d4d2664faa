"""Single-site operator matrices in the field basis and the harmonic-oscillator basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import HoBasisSpec, JlpGrid

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix with a provenance label.

    Real symmetric operators keep a float64 array; complex ones complex128.
    """

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if np.iscomplexobj(m) and not np.any(m.imag):
            m = m.real.copy()
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_RTOL * scale:
            raise ValueError(f"operator {self.label!r} is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix, f"{self.label}+{other.label}")

    def scaled(self, factor: float, label: str | None = None) -> "HermitianOperator":
        return HermitianOperator(factor * self.matrix, label or f"{factor:g}*{self.label}")


@dataclass(frozen=True)
class SymmetricDft:
    """Unitary with entries ``exp(2 pi i x k / n) / sqrt(n)``, row = momentum index, column = x.

    ``k`` runs over the supplied momentum labels; the default set is the
    half-integers ``-(n-1)/2 .. (n-1)/2``.
    """

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def symmetric_dft(dim: int, labels: np.ndarray | None = None) -> SymmetricDft:
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if labels is None:
        labels = np.arange(dim) - (dim - 1) / 2.0
    x = np.arange(dim)
    u = np.exp(2j * np.pi * np.outer(labels, x) / dim) / np.sqrt(dim)
    return SymmetricDft(u)


def symmetric_phase_layer(n: int) -> np.ndarray:
    """Diagonal of the phase layer that turns the standard DFT into the symmetric one."""
    ns = 1 << n
    m = ns - 1
    return np.exp(-2j * np.pi * m * np.arange(ns) / (2 * ns))


def standard_dft(dim: int) -> np.ndarray:
    x = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(x, x) / dim) / np.sqrt(dim)


def grid_dft(grid: JlpGrid) -> SymmetricDft:
    """Field-to-momentum transform whose row order matches ``grid.momenta``."""
    return symmetric_dft(grid.n_states, grid.momentum_labels)


def momentum_diagonal_to_field(grid: JlpGrid, diag: np.ndarray, label: str) -> HermitianOperator:
    """Conjugate a momentum-space diagonal back to the field basis."""
    u = grid_dft(grid).matrix
    m = u.conj().T @ (np.asarray(diag)[:, None] * u)
    m = 0.5 * (m + m.conj().T)
    # even functions of k give a real matrix up to rounding; noisy diagonals do not
    if np.max(np.abs(m.imag)) <= 1e-13 * max(1.0, np.max(np.abs(m))):
        m = m.real
    return HermitianOperator(m, label)


def field_power_op(grid: JlpGrid, p: int) -> HermitianOperator:
    if p < 1:
        raise ValueError("p must be >= 1")
    return HermitianOperator(np.diag(grid.fields ** p), f"phi^{p}")


# momentum-space eigenvalues of the kinetic operator variants

def k2_finite_difference(grid: JlpGrid) -> np.ndarray:
    s = np.sin(grid.momenta * grid.delta / 2.0)
    return 4.0 / grid.delta ** 2 * s ** 2


# coefficients of s^2, s^4, s^6 in (2 arcsin s)^2 / 4
_ARCSIN_SQ = (1.0, 1.0 / 3.0, 8.0 / 45.0)


def k2_improved(grid: JlpGrid, order: int) -> np.ndarray:
    """Finite-difference eigenvalues plus ``order`` correction terms of the sine series.

    Order 1 leaves a ``-k^6 delta^4 / 90`` remainder; order 2 cancels that
    term and leaves O(delta^6).
    """
    if order not in (1, 2):
        raise ValueError(f"unsupported improvement order {order}")
    s2 = np.sin(grid.momenta * grid.delta / 2.0) ** 2
    series = sum(c * s2 ** (j + 1) for j, c in enumerate(_ARCSIN_SQ[: order + 1]))
    return 4.0 / grid.delta ** 2 * series


def k2_exact(grid: JlpGrid) -> np.ndarray:
    return grid.momenta ** 2


def pi2_finite_difference(grid: JlpGrid) -> HermitianOperator:
    ns = grid.n_states
    d2 = grid.delta ** 2
    m = np.zeros((ns, ns))
    idx = np.arange(ns - 1)
    m[idx, idx + 1] = m[idx + 1, idx] = -1.0
    np.fill_diagonal(m, 2.0)
    # wrap-around sign follows the momentum set: +1 (antiperiodic) for
    # half-integer labels, -1 (periodic) for integer labels; the two
    # coincide with the boundary modes when the state count is even
    labels = grid.momentum_labels
    corner = -1.0 if np.all(labels == np.round(labels)) else 1.0
    if ns == 2:
        # both neighbours coincide
        m[0, 1] = m[1, 0] = -1.0 + corner
    else:
        m[0, -1] = m[-1, 0] = corner
    return HermitianOperator(m / d2, f"pi2_fd[{grid.bc.value}]")


def pi2_improved(grid: JlpGrid, order: int = 1) -> HermitianOperator:
    return momentum_diagonal_to_field(grid, k2_improved(grid, order), f"pi2_improved{order}[{grid.bc.value}]")


def pi2_exact(grid: JlpGrid) -> HermitianOperator:
    return momentum_diagonal_to_field(grid, k2_exact(grid), f"pi2_exact[{grid.bc.value}]")


# harmonic-oscillator basis

def ho_basis_hamiltonian(spec: HoBasisSpec) -> HermitianOperator:
    n = np.arange(spec.n_states)
    return HermitianOperator(np.diag(spec.omega * (n + 0.5)), f"H_basis[w={spec.omega:g}]")


def _ho_field(size: int, omega: float) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, size)), 1)
    return (a + a.T) / np.sqrt(2.0 * omega)


def ho_phi_power_op(spec: HoBasisSpec, p: int) -> HermitianOperator:
    """``phi**p`` in the HO basis, multiplied out in an enlarged space, then truncated.

    Truncating before the products drops paths that leave and re-enter the
    kept block; the enlarged construction keeps them.
    """
    if p not in (1, 2, 4):
        raise ValueError(f"p must be 1, 2 or 4, got {p}")
    if spec.construction_headroom < p // 2:
        raise ValueError(
            f"construction_headroom={spec.construction_headroom} too small for phi^{p} (need >= {p // 2})")
    size = spec.n_states + spec.construction_headroom
    big = np.linalg.matrix_power(_ho_field(size, spec.omega), p)
    return HermitianOperator(big[: spec.n_states, : spec.n_states].copy(), f"ho_phi^{p}[w={spec.omega:g}]")


def ho_pi2_op(spec: HoBasisSpec) -> HermitianOperator:
    """Pi^2 in the HO basis: 2*H_basis - omega^2 * phi^2 (truncate-last)."""
    m = 2.0 * ho_basis_hamiltonian(spec).matrix - spec.omega ** 2 * ho_phi_power_op(spec, 2).matrix
    return HermitianOperator(m, f"ho_pi2[w={spec.omega:g}]")
