"""Gate-level circuits: multi-Pauli exponentials, the symmetric QFT and Trotter steps.

Angles of ``PR``, ``CPR``, ``RZ`` and ``GPHASE`` are in units of pi, so
``PR q t`` is ``diag(1, exp(i pi t))`` on qubit ``q``. Qubit 0 is the most
significant bit of the basis index.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import operators as ops
from .grid import BoundaryMode, JlpGrid
from .hamiltonians import SiteTheoryParams
from .pauli import PauliString, PauliSum, decompose

MAX_UNITARY_WIDTH = 6

_ARITY = {"H": 1, "S": 1, "SDG": 1, "PR": 1, "RZ": 1, "CNOT": 2, "CPR": 2, "GPHASE": 0}
_ANGLED = {"PR", "RZ", "CPR", "GPHASE"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in _ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != _ARITY[kind]:
            raise ValueError(f"{kind} takes {_ARITY[kind]} qubits, got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"{kind} control and target coincide")
        if (kind in _ANGLED) != (self.angle is not None):
            raise ValueError(f"{kind} angle mismatch")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))

    def inverse(self) -> "Gate":
        if self.kind == "S":
            return Gate("SDG", self.qubits)
        if self.kind == "SDG":
            return Gate("S", self.qubits)
        if self.angle is not None:
            return Gate(self.kind, self.qubits, -self.angle)
        return self

    def to_text(self) -> str:
        parts = [self.kind, *map(str, self.qubits)]
        if self.angle is not None:
            parts.append(repr(self.angle + 0.0))
        return " ".join(parts)

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        tok = line.split()
        kind = tok[0].upper()
        if kind not in _ARITY:
            raise ValueError(f"unknown gate in {line!r}")
        n = _ARITY[kind]
        if len(tok) != n + 1 + (kind in _ANGLED):
            raise ValueError(f"malformed gate line {line!r}")
        angle = float(tok[n + 1]) if kind in _ANGLED else None
        return cls(kind, tuple(int(t) for t in tok[1:n + 1]), angle)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be >= 0")
        gates = tuple(self.gates)
        for g in gates:
            if any(q >= self.width for q in g.qubits):
                raise ValueError(f"gate {g.to_text()!r} outside width {self.width}")
        object.__setattr__(self, "gates", gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError("circuit widths differ")
        return Circuit(self.width, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        return "".join(g.to_text() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, width: int, text: str) -> "Circuit":
        lines = [ln.strip() for ln in text.splitlines()]
        return cls(width, tuple(Gate.from_text(ln) for ln in lines if ln and not ln.startswith("#")))


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(circuit.width, tuple(g.inverse() for g in reversed(circuit.gates)))


def remap(circuit: Circuit, mapping: Sequence[int], width: int | None = None) -> Circuit:
    """Relabel qubit ``q`` as ``mapping[q]``."""
    width = circuit.width if width is None else width
    return Circuit(width, tuple(Gate(g.kind, tuple(mapping[q] for q in g.qubits), g.angle) for g in circuit.gates))


# synthesis

def synth_pauli_exp(string: PauliString, theta: float, width: int | None = None) -> Circuit:
    """``exp(i theta c P)`` for ``string = c P``.

    Basis change to Z on every non-identity qubit, CNOT parity ladder into
    the last one, a phase rotation, then everything undone. The rotation
    ``exp(i phi Z)`` is emitted as ``GPHASE(phi/pi) PR(-2 phi/pi)``. An
    all-identity string is a bare global phase.
    """
    width = string.n_qubits if width is None else width
    phi = theta * string.coefficient
    support = string.support
    if not support:
        return Circuit(width, (Gate("GPHASE", (), phi / math.pi),))
    enter: list[Gate] = []
    leave: list[Gate] = []
    for q in support:
        a = string.axes[q]
        if a == "X":
            enter.append(Gate("H", (q,)))
            leave.append(Gate("H", (q,)))
        elif a == "Y":
            enter += [Gate("SDG", (q,)), Gate("H", (q,))]
            leave += [Gate("H", (q,)), Gate("S", (q,))]
    ladder = [Gate("CNOT", (a, b)) for a, b in zip(support[:-1], support[1:])]
    core = [Gate("GPHASE", (), phi / math.pi), Gate("PR", (support[-1],), -2.0 * phi / math.pi)]
    gates = enter + ladder + core + ladder[::-1] + leave
    return Circuit(width, tuple(gates))


def pauli_sum_exp(ps: PauliSum, theta: float, reverse_qubits: bool = False) -> Circuit:
    """Product of ``exp(i theta c P)`` over the terms (exact when all terms commute)."""
    n = ps.n_qubits
    out = Circuit(n)
    for t in ps.terms:
        s = PauliString(t.axes[::-1], t.coefficient) if reverse_qubits else t
        out = out + synth_pauli_exp(s, theta, n)
    return out


def symmetric_qft_circuit(n: int, decomposed: bool = False, swaps: bool = False) -> Circuit:
    """Phase layer ``PR(-M/2**(q+1))`` on qubit ``q`` (``M = 2**n - 1``) then the textbook QFT.

    Without ``swaps`` the output register is bit-reversed: the circuit
    implements ``R F`` with ``F`` the half-integer symmetric DFT and ``R`` the
    bit-reversal permutation. ``decomposed`` writes each controlled phase as
    two CNOTs and two target rotations; the control-side half angle commutes
    back into the phase layer, since that qubit has only acted as a control
    before its own Hadamard.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    m = (1 << n) - 1
    layer = [-m / 2.0 ** (q + 1) for q in range(n)]
    body: list[Gate] = []
    for j in range(n):
        body.append(Gate("H", (j,)))
        for c in range(j + 1, n):
            theta = 1.0 / 2 ** (c - j)
            if decomposed:
                layer[c] += theta / 2.0
                body += [Gate("PR", (j,), theta / 2.0), Gate("CNOT", (c, j)),
                         Gate("PR", (j,), -theta / 2.0), Gate("CNOT", (c, j))]
            else:
                body.append(Gate("CPR", (c, j), theta))
    gates = [Gate("PR", (q,), a) for q, a in enumerate(layer)] + body
    if swaps:
        gates += _swap_network(n)
    return Circuit(n, tuple(gates))


def _swap_network(n: int) -> list[Gate]:
    out = []
    for q in range(n // 2):
        a, b = q, n - 1 - q
        out += [Gate("CNOT", (a, b)), Gate("CNOT", (b, a)), Gate("CNOT", (a, b))]
    return out


def _momentum_kinetic_sum(grid: JlpGrid) -> PauliSum:
    return decompose(np.diag(0.5 * ops.k2_exact(grid)))


def _field_potential_sum(grid: JlpGrid, params: SiteTheoryParams) -> PauliSum:
    return decompose(np.diag(params.potential(grid.fields)))


def trotter_step_jlp(grid: JlpGrid, params: SiteTheoryParams, dt: float,
                     decomposed_qft: bool = False, swap_network: bool = False) -> Circuit:
    """One first-order step: field-space phases, QFT, momentum-space phases, inverse QFT.

    The unitary is ``exp(-i dt Pi^2/2) exp(-i dt V(phi))`` with the exact
    kinetic term. The momentum-space block acts on the bit-reversed register
    left by the swap-free QFT; ``swap_network`` instead inserts explicit swaps
    and uses natural ordering (same unitary, more CNOTs).
    """
    n = grid.n_q
    if n is None:
        raise ValueError(f"state count {grid.n_states} is not a power of two")
    if grid.bc is not BoundaryMode.TWISTED:
        raise ValueError("the symmetric QFT realizes the twisted (half-integer) momentum set")
    qft = symmetric_qft_circuit(n, decomposed_qft, swaps=swap_network)
    field_block = pauli_sum_exp(_field_potential_sum(grid, params), -dt)
    mom_block = pauli_sum_exp(_momentum_kinetic_sum(grid), -dt, reverse_qubits=not swap_network)
    return field_block + qft + mom_block + inverse(qft)


# simulation

_ONE_QUBIT = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
}


def _apply(state: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to a state stored as an ``(2,)*width`` tensor (axis q = qubit q)."""
    k = g.kind
    if k == "GPHASE":
        return state * np.exp(1j * math.pi * g.angle)
    if k in _ONE_QUBIT:
        q = g.qubits[0]
        return np.moveaxis(np.tensordot(_ONE_QUBIT[k], state, axes=([1], [q])), 0, q)
    if k == "PR":
        q = g.qubits[0]
        idx = [slice(None)] * state.ndim
        idx[q] = 1
        state = state.copy()
        state[tuple(idx)] *= np.exp(1j * math.pi * g.angle)
        return state
    if k == "RZ":
        q = g.qubits[0]
        phase = np.exp(0.5j * math.pi * g.angle)
        idx0 = [slice(None)] * state.ndim
        idx1 = [slice(None)] * state.ndim
        idx0[q], idx1[q] = 0, 1
        state = state.copy()
        state[tuple(idx0)] *= phase.conjugate()
        state[tuple(idx1)] *= phase
        return state
    c, t = g.qubits
    idx = [slice(None)] * state.ndim
    idx[c] = 1
    state = state.copy()
    sub = state[tuple(idx)]
    # after fixing the control axis, axes above it shift down by one
    tt = t - (t > c)
    if k == "CNOT":
        state[tuple(idx)] = np.flip(sub, axis=tt)
    else:  # CPR
        sidx = [slice(None)] * sub.ndim
        sidx[tt] = 1
        sub = sub.copy()
        sub[tuple(sidx)] *= np.exp(1j * math.pi * g.angle)
        state[tuple(idx)] = sub
    return state


def simulate_statevector(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    dim = 1 << circuit.width
    if state.shape[0] != dim:
        raise ValueError(f"state dimension {state.shape[0]} != 2**{circuit.width}")
    batch = state.shape[1:]
    psi = state.reshape((2,) * circuit.width + batch)
    for g in circuit.gates:
        psi = _apply(psi, g)
    return psi.reshape((dim,) + batch)


def circuit_unitary(circuit: Circuit, max_width: int = MAX_UNITARY_WIDTH) -> np.ndarray:
    if circuit.width > max_width:
        raise ValueError(f"width {circuit.width} exceeds {max_width}")
    return simulate_statevector(circuit, np.eye(1 << circuit.width, dtype=complex))


def bit_reversal(n: int) -> np.ndarray:
    """Permutation matrix reversing the order of ``n`` index bits."""
    dim = 1 << n
    rev = [int(format(i, f"0{n}b")[::-1], 2) for i in range(dim)] if n else [0]
    return np.eye(dim)[rev]


@dataclass(frozen=True)
class GateCounts:
    cnot: int = 0
    hadamard: int = 0
    phase: int = 0
    s: int = 0
    global_phase: int = 0

    @property
    def single_qubit(self) -> int:
        return self.hadamard + self.phase + self.s


def count_gates(circuit: Circuit) -> GateCounts:
    """Gate totals; a controlled phase counts as two CNOTs and two rotations."""
    c = Counter(g.kind for g in circuit.gates)
    return GateCounts(
        cnot=c["CNOT"] + 2 * c["CPR"],
        hadamard=c["H"],
        phase=c["PR"] + c["RZ"] + 2 * c["CPR"],
        s=c["S"] + c["SDG"],
        global_phase=c["GPHASE"],
    )


def trotter_evolve(grid: JlpGrid, params: SiteTheoryParams, t: float, steps: int,
                   state: np.ndarray) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    step = trotter_step_jlp(grid, params, t / steps)
    for _ in range(steps):
        state = simulate_statevector(step, state)
    return state


def state_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between unit vectors after removing the relative global phase."""
    return float(math.sqrt(max(0.0, 2.0 - 2.0 * abs(np.vdot(a, b)))))
