"""End-to-end benchmark runs: telegate, monolithic reference, semiclassical.

Every run prepares a Fourier state with phase theta, undoes it with the
swap-free inverse QFT, and reads out values through the classical bit
reversal.  The telegate path executes the circuit once (teleportation
outcomes never change the logical state) and samples shot counts from the
final state; the semiclassical path measures early, so it executes one
dynamic circuit per shot.  Resource counters always cover one circuit
execution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import (TWO_PI, GradientBlock, LocalInverseQFT, bit_reverse,
                       build_schedule, fourier_prep, fourier_prep_gates,
                       inverse_qft_gates, inverse_qft_local, rev_postprocess)
from .fabric import Fabric, PartitionPlan, QubitAddr
from .metrics import RunMetrics, classical_fidelity, measure_run, state_bytes
from .statevector import SQRT2_INV, StateVector
from .telegate import apply_remote_controlled, cat_disentangle, cat_entangle

MODES = ("telegate", "semiclassical")


@dataclass
class RunResult:
    counts: dict[int, int]
    metrics: RunMetrics
    state: StateVector | None = None


def _validate(theta: float, shots: int) -> None:
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")


# -- exact output distributions ------------------------------------------------


def exact_value_distribution(state: StateVector) -> dict[int, float]:
    """Exact post-REV value distribution of a pre-measurement logical state."""
    n = state.num_qubits
    probs = np.abs(state.amps) ** 2
    return {bit_reverse(i, n): float(probs[i]) for i in range(probs.size)}


def monolithic_exact_distribution(n: int, theta: float) -> dict[int, float]:
    state = StateVector(n)
    fourier_prep(state, range(n), theta)
    inverse_qft_local(state, range(n))
    return exact_value_distribution(state)


def semiclassical_exact_distribution(n: int, theta: float) -> dict[int, float]:
    """Exact value distribution of the measure-early mode by branch enumeration.

    Walks every measurement branch with its probability, collapsing the
    measured qubit out of the array at each step, so the whole tree costs
    O(n * 2^n).  Zero-probability branches are pruned, so exactly
    representable phases yield a single entry.
    """
    state = StateVector(n)
    fourier_prep(state, range(n), theta)
    out: dict[int, float] = {}

    def recurse(amps: np.ndarray, bits: list[int], prob: float) -> None:
        j = len(bits)
        if j == n:
            raw = "".join(map(str, bits))
            v = rev_postprocess(raw)
            out[v] = out.get(v, 0.0) + prob
            return
        turns = sum(b / (1 << (j - l + 1)) for l, b in enumerate(bits))
        v2 = amps.reshape(2, -1)
        top = v2[0]
        bot = v2[1] * np.exp(-1j * TWO_PI * turns)
        branch0 = (top + bot) * SQRT2_INV
        branch1 = (top - bot) * SQRT2_INV
        p0 = float(np.sum(np.abs(branch0) ** 2))
        p1 = float(np.sum(np.abs(branch1) ** 2))
        if p0 > 1e-30:
            recurse(branch0 / np.sqrt(p0), bits + [0], prob * p0)
        if p1 > 1e-30:
            recurse(branch1 / np.sqrt(p1), bits + [1], prob * p1)

    recurse(state.amps, [], 1.0)
    return out


# -- telegate execution ----------------------------------------------------------


def _apply_local_gates(fabric: Fabric, gates) -> None:
    plan = fabric.plan
    for g in gates:
        fabric.apply(g.kind, tuple(plan.addr_of(q) for q in g.qubits), g.phi)


def _run_gradient_block(fabric: Fabric, block: GradientBlock,
                        rng: np.random.Generator) -> None:
    # one cat session per control qubit covers all its targets on this node
    handle = None
    current = None
    for c_loc, t_loc, phi in block.gates:
        if c_loc != current:
            if handle is not None:
                cat_disentangle(fabric, handle, rng)
            handle = cat_entangle(fabric, QubitAddr(block.control_node, c_loc),
                                  block.target_node, rng)
            current = c_loc
        apply_remote_controlled(fabric, handle, phi,
                                QubitAddr(block.target_node, t_loc))
    if handle is not None:
        cat_disentangle(fabric, handle, rng)


def _execute_schedule(fabric: Fabric, schedule, rng: np.random.Generator) -> int:
    """Run all blocks slot by slot; returns the number of slots executed."""
    slots = 0
    for _, group in schedule.blocks_by_slot():
        for block in group:
            if isinstance(block, LocalInverseQFT):
                _apply_local_gates(
                    fabric, inverse_qft_gates(fabric.plan.node_qubits(block.node)))
            else:
                _run_gradient_block(fabric, block, rng)
        fabric.advance_clock(1)
        slots += 1
    return slots


def _counts_from_raw(raw_counts: dict[str, int]) -> dict[int, int]:
    # bit reversal is a bijection on raw strings, so no keys collide
    return {rev_postprocess(raw): c for raw, c in raw_counts.items()}


def run_distributed(plan: PartitionPlan, theta: float, mode: str = "telegate",
                    shots: int = 100, seed: int = 0, latency: int = 1,
                    return_state: bool = False,
                    reference: dict[int, float] | None = None) -> RunResult:
    """Distributed inverse-QFT run over the plan's k nodes.

    reference, when given, is the monolithic exact value distribution for
    (n, theta); otherwise it is recomputed here for the fidelity metric.
    """
    if mode == "semiclassical":
        return run_semiclassical(plan, theta, shots=shots, seed=seed,
                                 latency=latency, reference=reference)
    if mode != "telegate":
        raise ValueError(f"unknown mode {mode!r}")
    _validate(theta, shots)
    rng = np.random.default_rng(seed)
    fabric = Fabric(plan, with_comm=True, latency=latency)
    schedule = build_schedule(plan)
    result: dict = {}

    def work():
        _apply_local_gates(fabric, fourier_prep_gates(range(plan.n), theta))
        slots = _execute_schedule(fabric, schedule, rng)
        raw_counts = fabric.state.sample_counts(range(plan.n), shots, rng)
        result["counts"] = _counts_from_raw(raw_counts)
        state = fabric.logical_state()
        result["state"] = state
        ref = reference if reference is not None else monolithic_exact_distribution(plan.n, theta)
        fidelity = classical_fidelity(exact_value_distribution(state), ref)
        return dict(peak_state_bytes=state_bytes(fabric.state.num_qubits),
                    epr_count=fabric.counters.epr_created,
                    classical_msg_count=fabric.counters.classical_messages,
                    midcircuit_measurements=fabric.counters.midcircuit_measurements,
                    block_slots=slots,
                    shots=shots,
                    fidelity_vs_reference=fidelity)

    metrics = measure_run(work)
    return RunResult(counts=result["counts"], metrics=metrics,
                     state=result["state"] if return_state else None)


def run_monolithic_reference(n: int, theta: float, shots: int = 100,
                             seed: int = 0) -> RunResult:
    """Single-register reference: same pipeline, no fabric, no teleportation."""
    _validate(theta, shots)
    rng = np.random.default_rng(seed)
    result: dict = {}

    def work():
        state = StateVector(n)
        fourier_prep(state, range(n), theta)
        inverse_qft_local(state, range(n))
        raw_counts = state.sample_counts(range(n), shots, rng)
        result["counts"] = _counts_from_raw(raw_counts)
        result["state"] = state
        dist = exact_value_distribution(state)
        return dict(peak_state_bytes=state_bytes(n),
                    epr_count=0, classical_msg_count=0,
                    midcircuit_measurements=0, block_slots=1,
                    shots=shots,
                    fidelity_vs_reference=classical_fidelity(dist, dist))

    metrics = measure_run(work)
    return RunResult(counts=result["counts"], metrics=metrics, state=result["state"])


# -- semiclassical (teleportation-free) mode ---------------------------------------


def _semiclassical_once(fabric: Fabric, theta: float,
                        rng: np.random.Generator) -> str:
    """One dynamic-circuit execution; returns the raw measured bitstring."""
    plan = fabric.plan
    n = plan.n
    _apply_local_gates(fabric, fourier_prep_gates(range(n), theta))
    known: list[dict[int, int]] = [{} for _ in range(plan.k)]
    bits: list[int] = []
    for j in range(n):
        addr = plan.addr_of(j)
        node = addr.node
        for msg in fabric.receive_all(node):
            known[node][int(msg.tag.split(":")[1])] = msg.payload
        turns = sum(b / (1 << (j - l + 1)) for l, b in known[node].items() if l < j)
        if turns:
            fabric.apply("p", (addr,), -TWO_PI * turns)
        fabric.apply("h", (addr,))
        bit = fabric.measure(addr, rng)
        known[node][j] = bit
        bits.append(bit)
        for later in range(node + 1, plan.k):
            fabric.send_classical(node, later, f"m:{j}", bit)
        fabric.advance_clock(fabric.latency)
    return "".join(map(str, bits))


def run_semiclassical(plan: PartitionPlan, theta: float, shots: int = 100,
                      seed: int = 0, latency: int = 1,
                      reference: dict[int, float] | None = None) -> RunResult:
    """Teleportation-free run: early measurement plus classical feed-forward.

    Each shot is a genuine dynamic-circuit execution; no EPR pairs and no
    communication qubits are used, so the state holds only n qubits.
    Reported counters cover one execution (they are identical across shots).
    """
    _validate(theta, shots)
    rng = np.random.default_rng(seed)
    counts: dict[int, int] = {}
    result: dict = {}

    def work():
        counters = None
        for _ in range(shots):
            fabric = Fabric(plan, with_comm=False, latency=latency)
            raw = _semiclassical_once(fabric, theta, rng)
            value = rev_postprocess(raw)
            counts[value] = counts.get(value, 0) + 1
            if counters is None:
                counters = fabric.counters
        ref = reference if reference is not None else monolithic_exact_distribution(plan.n, theta)
        fidelity = classical_fidelity(semiclassical_exact_distribution(plan.n, theta), ref)
        return dict(peak_state_bytes=state_bytes(plan.n),
                    epr_count=counters.epr_created,
                    classical_msg_count=counters.classical_messages,
                    midcircuit_measurements=counters.midcircuit_measurements,
                    block_slots=0,
                    shots=shots,
                    fidelity_vs_reference=fidelity)

    metrics = measure_run(work)
    return RunResult(counts=counts, metrics=metrics, state=None)
