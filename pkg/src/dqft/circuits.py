"""Fourier-state preparation, swap-free inverse QFT, and the k-node schedule.

The bit-order reversal that normally ends an inverse QFT is pushed into
classical postprocessing of the measured bitstrings (rev_postprocess), so
every circuit here is swap-free.  Phase-angle fractions are reduced mod 1
in exact rational arithmetic before conversion to radians; multiplying a
float theta by a large power of two and reducing in floating point would
otherwise cost ~2^e ulps of phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fabric import PartitionPlan
from .statevector import Gate, StateVector

TWO_PI = 2.0 * math.pi


def phase_turns(theta: float, exponent: int) -> float:
    """theta * 2^exponent mod 1, computed exactly on the float's rational value."""
    return float((Fraction(theta) * (1 << exponent)) % 1)


def inv_qft_angle(d: int) -> float:
    """Inverse-QFT gradient angle -2*pi/2^d; shared so gate lists compare exactly."""
    return -TWO_PI / (1 << d)


# -- Fourier state preparation ----------------------------------------------


def fourier_prep_gates(qubits, theta: float) -> list[Gate]:
    """H plus phase gate per listed qubit, encoding phase theta.

    The last listed qubit carries e^{2*pi*i*theta}, the one before it
    theta*2, and so on doubling toward the first.  For theta = v/2^n and
    the full register in global order this is exactly the Fourier
    transform of basis state |v>.  All gates are single-qubit, so each
    node can prepare its own slice locally.
    """
    qubits = list(qubits)
    L = len(qubits)
    gates = []
    for p, q in enumerate(qubits):
        gates.append(Gate.h(q))
        gates.append(Gate.p(TWO_PI * phase_turns(theta, L - 1 - p), q))
    return gates


def fourier_prep(state: StateVector, qubits, theta: float) -> StateVector:
    return state.apply_gates(fourier_prep_gates(qubits, theta))


# -- swap-free inverse QFT ----------------------------------------------------


def inverse_qft_gates(qubits) -> list[Gate]:
    """Swap-free inverse QFT over the listed qubits.

    For each qubit j in list order: controlled phases CP(-2*pi/2^(j-l+1))
    against every earlier qubit l, then H on j.  Greedy layering of this
    order runs in 2m-1 layers for m qubits.
    """
    qubits = list(qubits)
    gates = []
    for j in range(len(qubits)):
        for l in range(j):
            gates.append(Gate.cp(inv_qft_angle(j - l + 1), qubits[l], qubits[j]))
        gates.append(Gate.h(qubits[j]))
    return gates


def inverse_qft_local(state: StateVector, qubits) -> StateVector:
    return state.apply_gates(inverse_qft_gates(qubits))


def count_layers(gates) -> int:
    """Greedy (ASAP) layer count of a gate list: gates sharing a qubit serialize."""
    last: dict[int, int] = {}
    depth = 0
    for g in gates:
        layer = 1 + max((last.get(q, -1) for q in g.qubits), default=-1)
        for q in g.qubits:
            last[q] = layer
        depth = max(depth, layer + 1)
    return depth


# -- classical postprocessing --------------------------------------------------


def rev_postprocess(raw_bits: str) -> int:
    """Value encoded by a measured bitstring: reverse the bits, read as binary."""
    if not raw_bits:
        raise ValueError("empty bitstring")
    return int(raw_bits[::-1], 2)


def bit_reverse(i: int, n: int) -> int:
    return int(format(i, f"0{n}b")[::-1], 2)


@dataclass(frozen=True)
class MeasuredOutcome:
    """Raw measured bits plus the value they encode after bit reversal."""

    raw_bits: str
    value: int

    @staticmethod
    def from_raw(raw_bits: str) -> "MeasuredOutcome":
        return MeasuredOutcome(raw_bits, rev_postprocess(raw_bits))


# -- distributed schedule -------------------------------------------------------


@dataclass(frozen=True)
class LocalInverseQFT:
    node: int
    slot: int


@dataclass(frozen=True)
class GradientBlock:
    """All controlled-phase gradients from one node's qubits onto one later node.

    gates holds (control local index, target local index, phi) triples;
    every control qubit costs one teleportation session toward target_node,
    regardless of how many targets it touches.
    """

    control_node: int
    target_node: int
    slot: int
    gates: tuple[tuple[int, int, float], ...]


@dataclass(frozen=True)
class DistributedSchedule:
    plan: PartitionPlan
    blocks: tuple
    num_slots: int

    def blocks_by_slot(self):
        for s in range(self.num_slots):
            group = [b for b in self.blocks if b.slot == s]
            if group:
                yield s, group


def build_schedule(plan: PartitionPlan) -> DistributedSchedule:
    """Recursive k-node decomposition of the swap-free inverse QFT.

    Local inverse QFT of node i lands in slot 2i; the gradient block from
    node i onto node t in slot i+t.  Within any slot all blocks touch
    disjoint nodes, so the schedule runs in 2k-1 slots, and flattened with
    direct gates it reproduces exactly the monolithic gate multiset.
    """
    blocks = []
    offs = plan.offsets
    for i in range(plan.k):
        blocks.append(LocalInverseQFT(node=i, slot=2 * i))
        for t in range(i + 1, plan.k):
            triples = []
            for c_loc in range(plan.sizes[i]):
                for t_loc in range(plan.sizes[t]):
                    d = (offs[t] + t_loc) - (offs[i] + c_loc) + 1
                    triples.append((c_loc, t_loc, inv_qft_angle(d)))
            blocks.append(GradientBlock(control_node=i, target_node=t,
                                        slot=i + t, gates=tuple(triples)))
    blocks.sort(key=lambda b: (b.slot, isinstance(b, GradientBlock),
                               getattr(b, "control_node", getattr(b, "node", 0)),
                               getattr(b, "target_node", 0)))
    return DistributedSchedule(plan=plan, blocks=tuple(blocks), num_slots=2 * plan.k - 1)


def flatten_schedule(schedule: DistributedSchedule) -> list[Gate]:
    """The schedule as a monolithic gate list, telegates replaced by direct CP."""
    plan = schedule.plan
    gates: list[Gate] = []
    for _, group in schedule.blocks_by_slot():
        for block in group:
            if isinstance(block, LocalInverseQFT):
                gates.extend(inverse_qft_gates(plan.node_qubits(block.node)))
            else:
                c_off = plan.offsets[block.control_node]
                t_off = plan.offsets[block.target_node]
                for c_loc, t_loc, phi in block.gates:
                    gates.append(Gate.cp(phi, c_off + c_loc, t_off + t_loc))
    return gates
