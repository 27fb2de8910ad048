"""Self-verification checks: structural oracle, branch exhaustion, equivalence.

Each check returns (name, passed, detail) so the CLI can print a pass/fail
table and the test suite can assert on the same code paths.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .circuits import build_schedule, flatten_schedule, fourier_prep, inverse_qft_gates
from .fabric import Fabric, QubitAddr, make_partition
from .metrics import epr_budget
from .runner import run_distributed, run_monolithic_reference
from .statevector import Gate, StateVector, equal_up_to_global_phase
from .telegate import apply_remote_controlled, cat_disentangle, cat_entangle

EQUIV_QUBITS = (4, 6, 8, 10, 12)
EQUIV_NODES = (1, 2, 4, 8)
EQUIV_THETAS = (0.0, 1 / 3, 2 / 3)


class ScriptedRng:
    """Stand-in generator whose random() pops scripted values, then yields 0.0.

    Lets a test force each measurement branch of the telegate protocol:
    0.0 forces outcome 0, a value near 1 forces outcome 1.
    """

    def __init__(self, values):
        self._values = list(values)

    def random(self) -> float:
        return self._values.pop(0) if self._values else 0.0


def check_gate_multiset(max_n: int = 12, max_k: int = 8):
    """Flattened schedule must equal the monolithic swap-free inverse QFT."""
    tried = 0
    for n in range(2, max_n + 1):
        for k in range(1, min(n, max_k) + 1):
            plan = make_partition(n, k)
            flat = Counter(flatten_schedule(build_schedule(plan)))
            mono = Counter(inverse_qft_gates(range(n)))
            if flat != mono:
                return ("gate-multiset", False, f"mismatch at n={n}, k={k}")
            tried += 1
    return ("gate-multiset", True, f"{tried} plans, flattened == monolithic")


def telegate_branch_states(phis=(np.pi / 4,)):
    """Run the 3-qubit telegate once per forced branch pair; returns the states.

    Qubit layout: node 0 holds the control, node 1 holds two targets.
    The scripted draw order is: 2 comm resets, the entangle measurement,
    1 comm reset, the disentangle measurement, 1 comm reset.
    """
    plan = make_partition(3, 2)  # sizes (1, 2): control on node 0
    states = {}
    for b_ent in (0, 1):
        for b_dis in (0, 1):
            force = [0.0, 0.0, 0.999999999 if b_ent else 0.0,
                     0.0, 0.999999999 if b_dis else 0.0, 0.0]
            rng = ScriptedRng(force)
            fabric = Fabric(plan, with_comm=True)
            _prepare_generic(fabric.state, plan)
            handle = cat_entangle(fabric, QubitAddr(0, 0), 1, rng)
            for t_loc, phi in enumerate(phis):
                apply_remote_controlled(fabric, handle, phi, QubitAddr(1, t_loc))
            cat_disentangle(fabric, handle, rng)
            states[(b_ent, b_dis)] = fabric.logical_state()
    return states


def _prepare_generic(state: StateVector, plan) -> None:
    # a product state with both protocol measurement branches populated
    for q in range(plan.n):
        state.apply_gate(Gate.h(q))
        state.apply_gate(Gate.p(0.3 + 0.4 * q, q))


def check_telegate_branches(tol: float = 1e-10):
    """All 4 forced measurement branches must match the direct-gate circuit."""
    phis = (np.pi / 4, -np.pi / 3)
    plan = make_partition(3, 2)
    direct = StateVector(3)
    _prepare_generic(direct, plan)
    for t_loc, phi in enumerate(phis):
        direct.apply_gate(Gate.cp(phi, 0, 1 + t_loc))
    for branch, state in telegate_branch_states(phis).items():
        if not equal_up_to_global_phase(state, direct, tol):
            return ("telegate-branches", False, f"branch {branch} deviates from direct gates")
    return ("telegate-branches", True, "4 measurement branches match direct CP circuit")


def equivalence_grid(qubits=EQUIV_QUBITS, nodes=EQUIV_NODES, thetas=EQUIV_THETAS):
    for n in qubits:
        for k in nodes:
            if k > n:
                continue
            for theta in thetas:
                yield n, k, theta


def check_state_equivalence(seeds=(0,), tol: float = 1e-8):
    """Distributed telegate state == monolithic reference, up to global phase."""
    checked = 0
    for n, k, theta in equivalence_grid():
        mono = run_monolithic_reference(n, theta, shots=1, seed=0).state
        for seed in seeds:
            res = run_distributed(make_partition(n, k), theta, shots=1,
                                  seed=seed, return_state=True)
            if not equal_up_to_global_phase(res.state, mono, tol):
                return ("distributed-equals-monolithic", False,
                        f"state mismatch at n={n}, k={k}, theta={theta}, seed={seed}")
            checked += 1
    return ("distributed-equals-monolithic", True, f"{checked} runs within {tol}")


def check_epr_formula():
    """Runtime EPR counter must equal the grouped budget on every plan."""
    for n, k, theta in equivalence_grid(thetas=(1 / 3,)):
        plan = make_partition(n, k)
        res = run_distributed(plan, theta, shots=1, seed=0)
        want = epr_budget(plan)
        if res.metrics.epr_count != want:
            return ("epr-formula", False,
                    f"n={n}, k={k}: counted {res.metrics.epr_count}, formula {want}")
        if res.metrics.classical_msg_count != 2 * want:
            return ("epr-formula", False,
                    f"n={n}, k={k}: messages {res.metrics.classical_msg_count} != 2*EPR")
    return ("epr-formula", True, "counter == sum(m_i * (k - i)) and messages == 2*EPR")


def run_all():
    return [
        check_gate_multiset(),
        check_telegate_branches(),
        check_state_equivalence(),
        check_epr_formula(),
    ]
