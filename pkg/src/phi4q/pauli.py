"""Pauli-string decomposition of Hermitian operators and gate-count tallies.

Qubit 0 is the most significant bit of the basis index and the leftmost
factor of every tensor product.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from . import operators as ops
from .grid import BoundaryMode, HoBasisSpec, JlpGrid, build_jlp_grid
from .hamiltonians import SiteTheoryParams, build_site_hamiltonian_ho
from .operators import HermitianOperator

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_AXIS_ORDER = {"I": 0, "X": 1, "Y": 2, "Z": 3}
DROP_TOL = 1e-12


@dataclass(frozen=True)
class PauliString:
    axes: str
    coefficient: float = 1.0

    def __post_init__(self):
        axes = self.axes.upper()
        if not axes or set(axes) - set("IXYZ"):
            raise ValueError(f"invalid Pauli axes {self.axes!r}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @property
    def n_qubits(self) -> int:
        return len(self.axes)

    @property
    def weight(self) -> int:
        """Number of non-identity factors (the k of a k-body operator)."""
        return sum(a != "I" for a in self.axes)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, a in enumerate(self.axes) if a != "I")

    def matrix(self) -> np.ndarray:
        """``coefficient * P`` as a dense matrix."""
        return self.coefficient * reduce(np.kron, (PAULI_MATRICES[a] for a in self.axes))

    def to_text(self) -> str:
        return f"{self.coefficient:+.9f} {self.axes}"


def _sort_key(s: PauliString):
    return tuple(_AXIS_ORDER[a] for a in s.axes)


@dataclass(frozen=True)
class PauliSum:
    """Real linear combination of distinct Pauli strings on ``n_qubits`` qubits."""

    n_qubits: int
    terms: tuple[PauliString, ...] = field(default=())

    def __post_init__(self):
        terms = tuple(self.terms)
        if any(t.n_qubits != self.n_qubits for t in terms):
            raise ValueError(f"all strings must act on {self.n_qubits} qubits")
        if len({t.axes for t in terms}) != len(terms):
            raise ValueError("duplicate Pauli strings")
        object.__setattr__(self, "terms", tuple(sorted(terms, key=_sort_key)))

    @classmethod
    def from_dict(cls, n_qubits: int, coeffs: dict[str, float]) -> "PauliSum":
        return cls(n_qubits, tuple(PauliString(a, c) for a, c in coeffs.items()))

    def as_dict(self) -> dict[str, float]:
        return {t.axes: t.coefficient for t in self.terms}

    def coefficient(self, axes: str) -> float:
        return self.as_dict().get(axes.upper(), 0.0)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit counts differ")
        acc = Counter(self.as_dict())
        for t in other.terms:
            acc[t.axes] += t.coefficient
        return PauliSum.from_dict(self.n_qubits, {a: c for a, c in acc.items() if c != 0.0})

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum(self.n_qubits, tuple(PauliString(t.axes, factor * t.coefficient) for t in self.terms))

    def weight_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(t.weight for t in self.terms).items()))

    def to_text(self) -> str:
        return "".join(t.to_text() + "\n" for t in self.terms)

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"([+-]?\S+)\s+([IXYZ]+)", line)
            if not m:
                raise ValueError(f"cannot parse Pauli term {line!r}")
            terms.append(PauliString(m.group(2), float(m.group(1))))
        if not terms:
            raise ValueError("empty Pauli sum text has no qubit count")
        return cls(terms[0].n_qubits, tuple(terms))


def _n_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _axes_for(x: int, z: int, n: int) -> str:
    out = []
    for q in range(n):
        bit = 1 << (n - 1 - q)
        out.append("IXZY"[bool(x & bit) + 2 * bool(z & bit)])
    return "".join(out)


def pauli_coefficients(m: np.ndarray) -> np.ndarray:
    """All ``4**n`` trace projections ``Tr[P m] / 2**n``, indexed ``[z_mask, x_mask]``.

    With ``P = i**popcount(x & z) X^x Z^z`` the projection reduces to a
    Walsh-Hadamard transform of the entries ``m[c, c ^ x]``.
    """
    m = np.asarray(m)
    dim = m.shape[0]
    _n_qubits(dim)
    c = np.arange(dim)
    x = np.arange(dim)
    v = m[c[:, None], c[:, None] ^ x[None, :]]
    w = scipy.linalg.hadamard(dim) @ v / dim
    overlap = np.array([bin(i).count("1") for i in range(dim)])
    pop = overlap[np.bitwise_and.outer(c, x)]
    return (1j) ** pop * w


def decompose(h: HermitianOperator | np.ndarray, tol: float = DROP_TOL) -> PauliSum:
    """Pauli strings with nonzero trace-projection coefficients.

    Coefficients at or below ``tol * max(1, max|h|)`` are treated as rounding
    noise and dropped.
    """
    m = h.matrix if isinstance(h, HermitianOperator) else np.asarray(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = _n_qubits(m.shape[0])
    coeffs = pauli_coefficients(m)
    cut = tol * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    if np.max(np.abs(coeffs.imag)) > cut:
        raise ValueError("operator is not Hermitian: imaginary Pauli coefficients")
    zs, xs = np.nonzero(np.abs(coeffs.real) > cut)
    terms = tuple(PauliString(_axes_for(int(x), int(z), n), float(coeffs.real[z, x])) for z, x in zip(zs, xs))
    return PauliSum(n, terms)


def _masks(axes: str) -> tuple[int, int]:
    x = z = 0
    for a in axes:
        x = (x << 1) | (a in "XY")
        z = (z << 1) | (a in "ZY")
    return x, z


def reconstruct(ps: PauliSum) -> HermitianOperator:
    """``sum c P`` as a dense matrix, inverting the transform of :func:`pauli_coefficients`."""
    dim = 1 << ps.n_qubits
    coeffs = np.zeros((dim, dim), dtype=complex)
    for t in ps.terms:
        x, z = _masks(t.axes)
        coeffs[z, x] = t.coefficient
    c = np.arange(dim)
    overlap = np.array([bin(i).count("1") for i in range(dim)])
    pop = overlap[np.bitwise_and.outer(c, c)]
    v = scipy.linalg.hadamard(dim) @ (coeffs * (-1j) ** pop)
    m = np.empty((dim, dim), dtype=complex)
    m[c[:, None], c[:, None] ^ c[None, :]] = v
    return HermitianOperator(m, "pauli_sum")


def tensor_product(a: PauliSum, b: PauliSum) -> PauliSum:
    """Decomposition of ``A (x) B`` from those of ``A`` and ``B`` (weights add)."""
    terms = tuple(PauliString(s.axes + t.axes, s.coefficient * t.coefficient) for s in a for t in b)
    return PauliSum(a.n_qubits + b.n_qubits, terms)


# resource counting

def qft_one_body_count(n: int) -> int:
    """Single-qubit rotations charged to one symmetric QFT on ``n`` qubits.

    ``n`` Hadamards plus ``n - 1`` phases on each side of the controlled-phase
    network after merging rotations that act on the same qubit. The leading
    phase layer commutes through the diagonal field-space block and cancels
    against its inverse from the neighbouring step.
    """
    return 3 * n - 2 if n >= 1 else 0


def qft_cnot_count(n: int) -> int:
    """CNOTs for one QFT: two per controlled phase."""
    return 2 * math.comb(n, 2)


@dataclass(frozen=True)
class ResourceTally:
    k_body_counts: dict[int, int]
    cnot_total: int
    includes_qft: bool = False

    def count(self, k: int) -> int:
        return self.k_body_counts.get(k, 0)

    def as_row(self, max_k: int | None = None) -> dict:
        max_k = max(self.k_body_counts, default=0) if max_k is None else max_k
        row = {f"{k}-body": self.count(k) for k in range(max_k + 1)}
        row.update(qft=self.includes_qft, cnots=self.cnot_total)
        return row


def tally(sums: PauliSum | Sequence[PauliSum], includes_qft: bool = False, qft_width: int = 0,
          qft_transforms: int = 2) -> ResourceTally:
    """k-body histogram and CNOT cost of exponentiating each operator set once.

    Non-identity strings are counted once per set, so a string shared by two
    sets is paid for twice. The identity is a single global phase overall.
    With ``includes_qft``, each of ``qft_transforms`` QFTs on ``qft_width``
    qubits adds its one-body rotations and ``2 C(n, 2)`` CNOTs.
    """
    if isinstance(sums, PauliSum):
        sums = [sums]
    counts: Counter = Counter()
    has_identity = False
    for s in sums:
        for t in s.terms:
            if t.weight == 0:
                has_identity = True
            else:
                counts[t.weight] += 1
    if has_identity:
        counts[0] = 1
    cnots = sum(c * 2 * (k - 1) for k, c in counts.items() if k >= 1)
    if includes_qft:
        counts[1] += qft_transforms * qft_one_body_count(qft_width)
        cnots += qft_transforms * qft_cnot_count(qft_width)
    return ResourceTally(dict(sorted((k, v) for k, v in counts.items() if v)), int(cnots), includes_qft)


def jlp_operator_sets(grid: JlpGrid, params: SiteTheoryParams) -> tuple[PauliSum, PauliSum]:
    """(field-space potential, momentum-space 1/2 k^2) as diagonal Pauli sums."""
    potential = decompose(np.diag(params.potential(grid.fields)))
    kinetic = decompose(np.diag(0.5 * ops.k2_exact(grid)))
    return potential, kinetic


def jlp_tally(n_q: int, params: SiteTheoryParams, phi_max: float = 3.0) -> ResourceTally:
    grid = build_jlp_grid(n_q, phi_max, BoundaryMode.TWISTED)
    return tally(list(jlp_operator_sets(grid, params)), includes_qft=True, qft_width=n_q)


def ho_field_sum(n_q: int, omega: float, headroom: int = 4) -> PauliSum:
    return decompose(ops.ho_phi_power_op(HoBasisSpec(omega, 1 << n_q, headroom), 1))


def ho_tally(n_q: int, params: SiteTheoryParams, omega: float, headroom: int = 4) -> ResourceTally:
    h = build_site_hamiltonian_ho(HoBasisSpec(omega, 1 << n_q, headroom), params)
    return tally(decompose(h))


def coupling_tally(n_q: int, basis: str, omega: float = 1.3, phi_max: float = 3.0) -> ResourceTally:
    """Cost of the nearest-neighbour ``phi(x) phi(x+1)`` term on two registers."""
    if basis == "jlp":
        grid = build_jlp_grid(n_q, phi_max)
        one = decompose(np.diag(grid.fields))
    elif basis == "ho":
        one = ho_field_sum(n_q, omega)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return tally(tensor_product(one, one))


TABLE_OMEGA = 1.3  # any generic detuning gives the same operator structure


def resource_table(table: int, n_values: Iterable[int] = range(2, 7),
                   omega: float = TABLE_OMEGA) -> list[tuple[str, int, ResourceTally]]:
    """Rows (basis label, n_q, tally) of the three resource tables.

    1: free oscillator in the field basis, a tuned and a detuned HO basis.
    2: lambda = 32 single site in the field and HO bases.
    3: nearest-neighbour coupling term in both bases.
    """
    n_values = list(n_values)
    free = SiteTheoryParams(1.0, 0.0)
    quartic = SiteTheoryParams(1.0, 32.0)
    rows = []
    if table == 1:
        rows += [("jlp", n, jlp_tally(n, free)) for n in n_values]
        rows += [("ho_tuned", n, ho_tally(n, free, 1.0)) for n in n_values]
        rows += [("ho_detuned", n, ho_tally(n, free, omega)) for n in n_values]
    elif table == 2:
        rows += [("jlp", n, jlp_tally(n, quartic)) for n in n_values]
        rows += [("ho", n, ho_tally(n, quartic, omega)) for n in n_values]
    elif table == 3:
        rows += [("jlp", n, coupling_tally(n, "jlp")) for n in n_values]
        rows += [("ho", n, coupling_tally(n, "ho", omega)) for n in n_values]
    else:
        raise ValueError(f"no resource table {table}")
    return rows
