"""Simulated multi-node fabric: partitioned qubits, EPR source, classical channels.

All k nodes share one global statevector, but every gate must pass a
locality check: operands may only span a single node.  Cross-node effects
happen exclusively through EPR pairs (prepared by the fabric) and classical
messages (delivered on a discrete tick clock).  The fabric owns all
resource counters for a run.

Global qubit layout: the n logical qubits come first, contiguous per node
in node order; the k communication qubits occupy the highest global
indices (one per node, reused sequentially between teleportation sessions).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .statevector import Gate, StateVector

COMM_SLOT = -1  # local_index sentinel marking a node's communication qubit


class CrossNodeGateError(Exception):
    """A gate tried to span two nodes without teleportation."""


class CommSlotBusyError(Exception):
    """A node's communication qubit is still reserved by a live cat session."""


@dataclass(frozen=True)
class QubitAddr:
    """A qubit named by (node, local index); COMM_SLOT addresses the comm qubit."""

    node: int
    local_index: int

    @staticmethod
    def comm(node: int) -> "QubitAddr":
        return QubitAddr(node, COMM_SLOT)

    @property
    def is_comm(self) -> bool:
        return self.local_index == COMM_SLOT


@dataclass(frozen=True)
class PartitionPlan:
    """Assignment of n logical qubits to k nodes, plus comm-qubit slots."""

    n: int
    k: int
    sizes: tuple[int, ...]

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for m in self.sizes:
            out.append(acc)
            acc += m
        return tuple(out)

    @property
    def comm_slots(self) -> tuple[int, ...]:
        return tuple(self.n + b for b in range(self.k))

    def node_qubits(self, node: int) -> range:
        off = self.offsets[node]
        return range(off, off + self.sizes[node])

    def global_index(self, addr: QubitAddr) -> int:
        if not 0 <= addr.node < self.k:
            raise ValueError(f"node {addr.node} out of range for k={self.k}")
        if addr.is_comm:
            return self.n + addr.node
        if not 0 <= addr.local_index < self.sizes[addr.node]:
            raise ValueError(f"local index {addr.local_index} out of range on node {addr.node}")
        return self.offsets[addr.node] + addr.local_index

    def addr_of(self, global_index: int) -> QubitAddr:
        if global_index >= self.n:
            node = global_index - self.n
            if node >= self.k:
                raise ValueError(f"global index {global_index} out of range")
            return QubitAddr.comm(node)
        node = 0
        while global_index >= self.offsets[node] + self.sizes[node]:
            node += 1
        return QubitAddr(node, global_index - self.offsets[node])


def make_partition(n: int, k: int) -> PartitionPlan:
    """Evenly partitioned, remainder appended to the last node."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if k > n:
        raise ValueError(f"k exceeds n: cannot place {k} nodes on {n} qubits")
    m = n // k
    sizes = [m] * k
    sizes[-1] += n - m * k
    return PartitionPlan(n=n, k=k, sizes=tuple(sizes))


def check_locality(plan: PartitionPlan, addrs) -> None:
    """Raise CrossNodeGateError unless all operands live on one node."""
    nodes = {a.node for a in addrs}
    if len(nodes) > 1:
        raise CrossNodeGateError(f"gate spans nodes {sorted(nodes)}: operands {list(addrs)}")


@dataclass(frozen=True)
class ClassicalMessage:
    src: int
    dst: int
    tag: str
    payload: int
    tick: int  # earliest tick at which the message is deliverable


@dataclass
class FabricCounters:
    epr_created: int = 0
    classical_messages: int = 0
    midcircuit_measurements: int = 0
    current_tick: int = 0


class Fabric:
    """k nodes over one shared statevector, with counters and a tick clock.

    with_comm=False builds an n-qubit state with no communication slots
    (teleportation-free modes); allocate_epr is then unavailable.
    """

    def __init__(self, plan: PartitionPlan, with_comm: bool = True, latency: int = 1):
        self.plan = plan
        self.with_comm = with_comm
        self.latency = latency
        self.state = StateVector(plan.n + plan.k if with_comm else plan.n)
        self.counters = FabricCounters()
        self._comm_busy = [False] * plan.k
        self._queues: dict[tuple[int, int], deque[ClassicalMessage]] = {}
        self._epr_serial = 0

    # -- gates and measurements --------------------------------------------

    def apply(self, kind: str, addrs, phi: float = 0.0) -> None:
        """Apply a node-local gate; raises CrossNodeGateError otherwise."""
        addrs = tuple(addrs)
        check_locality(self.plan, addrs)
        self.state.apply_gate(Gate(kind, tuple(self.plan.global_index(a) for a in addrs), phi))

    def measure(self, addr: QubitAddr, rng: np.random.Generator) -> int:
        self.counters.midcircuit_measurements += 1
        return self.state.measure(self.plan.global_index(addr), rng)

    def reset(self, addr: QubitAddr, rng: np.random.Generator) -> None:
        # resets are not counted as protocol measurements
        self.state.reset(self.plan.global_index(addr), rng)

    # -- EPR source ----------------------------------------------------------

    def allocate_epr(self, node_a: int, node_b: int, rng: np.random.Generator):
        """Prepare (|00>+|11>)/sqrt(2) on the two nodes' comm qubits.

        Entanglement distribution is the fabric's own privilege: it is the
        only place a two-node operation touches the state directly.
        """
        if not self.with_comm:
            raise CommSlotBusyError("fabric built without communication qubits")
        if node_a == node_b:
            raise ValueError("EPR endpoints must be distinct nodes")
        for node in (node_a, node_b):
            if self._comm_busy[node]:
                raise CommSlotBusyError(f"comm slot of node {node} is busy")
        ga = self.plan.global_index(QubitAddr.comm(node_a))
        gb = self.plan.global_index(QubitAddr.comm(node_b))
        self.state.reset(ga, rng)
        self.state.reset(gb, rng)
        self.state.apply_gate(Gate.h(ga))
        self.state.apply_gate(Gate.cnot(ga, gb))
        self._comm_busy[node_a] = True
        self._comm_busy[node_b] = True
        self.counters.epr_created += 1
        self._epr_serial += 1
        return QubitAddr.comm(node_a), QubitAddr.comm(node_b), self._epr_serial

    def release_comm(self, node: int) -> None:
        self._comm_busy[node] = False

    def comm_busy(self, node: int) -> bool:
        return self._comm_busy[node]

    # -- classical messaging and clock ---------------------------------------

    def send_classical(self, src: int, dst: int, tag: str, payload: int) -> ClassicalMessage:
        if src == dst:
            raise ValueError("classical message must cross nodes (src == dst)")
        msg = ClassicalMessage(src, dst, tag, payload, self.counters.current_tick + self.latency)
        self._queues.setdefault((src, dst), deque()).append(msg)
        self.counters.classical_messages += 1
        return msg

    def advance_clock(self, ticks: int) -> None:
        if ticks < 0:
            raise ValueError("clock only advances")
        self.counters.current_tick += ticks

    def receive(self, src: int, dst: int) -> ClassicalMessage:
        """Pop the oldest deliverable message on the (src, dst) channel."""
        q = self._queues.get((src, dst))
        if not q or q[0].tick > self.counters.current_tick:
            raise RuntimeError(f"no deliverable message on channel {src}->{dst}")
        return q.popleft()

    def receive_all(self, dst: int) -> list[ClassicalMessage]:
        """Pop every message deliverable to dst, in per-channel order."""
        out = []
        for (src, d), q in sorted(self._queues.items()):
            if d != dst:
                continue
            while q and q[0].tick <= self.counters.current_tick:
                out.append(q.popleft())
        return out

    # -- readout ---------------------------------------------------------------

    def logical_state(self) -> StateVector:
        """The n logical qubits as a standalone state; comm qubits must be |0>.

        Comm qubits sit at the lowest-significance index bits, so with all
        of them in |0> the logical amplitudes are a stride-2^k slice.
        """
        if not self.with_comm:
            return self.state.copy()
        k = self.plan.k
        block = self.state.amps.reshape(1 << self.plan.n, 1 << k)
        rest = float(np.sum(np.abs(block[:, 1:]) ** 2))
        if rest > 1e-9:
            raise RuntimeError(f"comm qubits not disentangled: residual weight {rest:.3e}")
        return StateVector.from_amplitudes(block[:, 0])
