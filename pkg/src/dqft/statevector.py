"""Dense statevector engine with the minimal gate set for a distributed inverse QFT.

Bit-ordering convention, used package-wide: qubit 0 is the MOST significant
bit of a basis-state index.  For a register of Q qubits, basis index i
assigns bit ``(i >> (Q - 1 - q)) & 1`` to qubit q, and the bitstring of
index i read left to right lists qubits 0..Q-1.

Every stochastic operation takes a ``numpy.random.Generator`` explicitly,
so whole runs replay bit-exactly from a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT2_INV = 1.0 / np.sqrt(2.0)

ONE_QUBIT_KINDS = ("h", "x", "z", "p")
TWO_QUBIT_KINDS = ("cp", "cnot")


@dataclass(frozen=True)
class Gate:
    """A single gate: kind, operand qubits, and phase angle for p/cp.

    Hashable so gate lists can be compared as multisets.
    """

    kind: str
    qubits: tuple[int, ...]
    phi: float = 0.0

    @staticmethod
    def h(q: int) -> "Gate":
        return Gate("h", (q,))

    @staticmethod
    def x(q: int) -> "Gate":
        return Gate("x", (q,))

    @staticmethod
    def z(q: int) -> "Gate":
        return Gate("z", (q,))

    @staticmethod
    def p(phi: float, q: int) -> "Gate":
        return Gate("p", (q,), phi)

    @staticmethod
    def cp(phi: float, qa: int, qb: int) -> "Gate":
        return Gate("cp", (qa, qb), phi)

    @staticmethod
    def cnot(control: int, target: int) -> "Gate":
        return Gate("cnot", (control, target))


class StateVector:
    """2^Q double-precision complex amplitudes, gates applied in place."""

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise ValueError(f"need at least one qubit, got {num_qubits}")
        self.num_qubits = num_qubits
        self.amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        self.amps[0] = 1.0

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        """Wrap an existing amplitude array (must be unit-norm, length 2^Q)."""
        arr = np.asarray(amps, dtype=np.complex128)
        n = arr.size
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"amplitude count must be a power of two >= 2, got {n}")
        if abs(np.vdot(arr, arr).real - 1.0) > 1e-9:
            raise ValueError("amplitudes are not normalized")
        sv = cls.__new__(cls)
        sv.num_qubits = n.bit_length() - 1
        sv.amps = arr.copy()
        return sv

    def copy(self) -> "StateVector":
        sv = StateVector.__new__(StateVector)
        sv.num_qubits = self.num_qubits
        sv.amps = self.amps.copy()
        return sv

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    # -- views -------------------------------------------------------------

    def _one_axis(self, q: int):
        # axis 0: qubits before q, axis 1: qubit q, axis 2: qubits after q
        return self.amps.reshape(1 << q, 2, -1)

    def _two_axes(self, qa: int, qb: int):
        a, b = (qa, qb) if qa < qb else (qb, qa)
        return self.amps.reshape(1 << a, 2, 1 << (b - a - 1), 2, -1), qa < qb

    def _check_operands(self, gate: Gate) -> None:
        expected = 1 if gate.kind in ONE_QUBIT_KINDS else 2
        if gate.kind not in ONE_QUBIT_KINDS and gate.kind not in TWO_QUBIT_KINDS:
            raise ValueError(f"unknown gate kind {gate.kind!r}")
        if len(gate.qubits) != expected:
            raise ValueError(f"{gate.kind} takes {expected} operand(s), got {gate.qubits}")
        for q in gate.qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit {q} out of range for {self.num_qubits}-qubit state")
        if expected == 2 and gate.qubits[0] == gate.qubits[1]:
            raise ValueError(f"duplicate operands on two-qubit gate: {gate.qubits}")

    # -- gates -------------------------------------------------------------

    def apply_gate(self, gate: Gate) -> "StateVector":
        self._check_operands(gate)
        if gate.kind == "h":
            v = self._one_axis(gate.qubits[0])
            a = v[:, 0, :].copy()
            b = v[:, 1, :]
            v[:, 0, :] = (a + b) * SQRT2_INV
            v[:, 1, :] = (a - b) * SQRT2_INV
        elif gate.kind == "x":
            v = self._one_axis(gate.qubits[0])
            tmp = v[:, 0, :].copy()
            v[:, 0, :] = v[:, 1, :]
            v[:, 1, :] = tmp
        elif gate.kind == "z":
            v = self._one_axis(gate.qubits[0])
            v[:, 1, :] *= -1.0
        elif gate.kind == "p":
            v = self._one_axis(gate.qubits[0])
            v[:, 1, :] *= np.exp(1j * gate.phi)
        elif gate.kind == "cp":
            v, _ = self._two_axes(*gate.qubits)
            v[:, 1, :, 1, :] *= np.exp(1j * gate.phi)
        elif gate.kind == "cnot":
            v, control_first = self._two_axes(*gate.qubits)
            if control_first:
                tmp = v[:, 1, :, 0, :].copy()
                v[:, 1, :, 0, :] = v[:, 1, :, 1, :]
                v[:, 1, :, 1, :] = tmp
            else:
                tmp = v[:, 0, :, 1, :].copy()
                v[:, 0, :, 1, :] = v[:, 1, :, 1, :]
                v[:, 1, :, 1, :] = tmp
        return self

    def apply_gates(self, gates) -> "StateVector":
        for g in gates:
            self.apply_gate(g)
        return self

    # -- measurement -------------------------------------------------------

    def measure(self, qubit: int, rng: np.random.Generator) -> int:
        """Projectively measure one qubit; collapses and renormalizes in place."""
        if not 0 <= qubit < self.num_qubits:
            raise ValueError(f"qubit {qubit} out of range")
        v = self._one_axis(qubit)
        p0 = float(np.sum(np.abs(v[:, 0, :]) ** 2))
        p1 = float(np.sum(np.abs(v[:, 1, :]) ** 2))
        if p0 < 1e-12 and p1 < 1e-12:
            raise ValueError(f"corrupt state: both outcome probabilities vanish on qubit {qubit}")
        if rng.random() < p0:
            v[:, 1, :] = 0.0
            self.amps /= np.sqrt(p0)
            return 0
        v[:, 0, :] = 0.0
        self.amps /= np.sqrt(p1)
        return 1

    def reset(self, qubit: int, rng: np.random.Generator) -> "StateVector":
        """Measure then flip to leave the qubit deterministically in |0>."""
        if self.measure(qubit, rng) == 1:
            self.apply_gate(Gate.x(qubit))
        return self

    # -- readout -----------------------------------------------------------

    def probabilities(self, qubits) -> np.ndarray:
        """Marginal |amplitude|^2 distribution over the listed qubits.

        Entry b of the result is the probability of the bitstring whose
        bit at position p is the outcome of qubits[p].
        """
        qubits = list(qubits)
        if not qubits:
            raise ValueError("empty qubit list")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubits in {qubits}")
        probs = (np.abs(self.amps) ** 2).reshape((2,) * self.num_qubits)
        drop = tuple(q for q in range(self.num_qubits) if q not in qubits)
        if drop:
            probs = probs.sum(axis=drop)
        # summing leaves surviving axes in global order; permute to listed order
        rank = np.argsort(np.argsort(qubits))
        if list(rank) != list(range(len(qubits))):
            probs = np.transpose(probs, axes=rank)
        return probs.reshape(-1)

    def sample_counts(self, qubits, shots: int, rng: np.random.Generator) -> dict[str, int]:
        """Histogram of measured bitstrings over the listed qubits.

        Sampling from the marginal distribution; the state is not collapsed.
        """
        qubits = list(qubits)
        if not qubits:
            raise ValueError("empty qubit list")
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        probs = self.probabilities(qubits)
        probs = probs / probs.sum()
        drawn = rng.choice(probs.size, size=shots, p=probs)
        width = len(qubits)
        counts: dict[str, int] = {}
        for idx, c in zip(*np.unique(drawn, return_counts=True)):
            counts[format(int(idx), f"0{width}b")] = int(c)
        return counts


def equal_up_to_global_phase(a, b, tol: float = 1e-10) -> bool:
    """True iff a == c*b element-wise within tol for some unit-modulus c.

    c is fixed from the largest-magnitude amplitude of b, which avoids
    dividing by a near-zero entry.  Teleportation branches randomize the
    global phase, so plain array comparison is too strict.
    """
    va = a.amps if isinstance(a, StateVector) else np.asarray(a, dtype=np.complex128)
    vb = b.amps if isinstance(b, StateVector) else np.asarray(b, dtype=np.complex128)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    i = int(np.argmax(np.abs(vb)))
    c = va[i] / vb[i]
    mag = abs(c)
    c = c / mag if mag > 0 else 1.0
    return bool(np.max(np.abs(va - c * vb)) <= tol)
