"""Cat-entangler / cat-disentangler gate teleportation.

A control qubit on node A is extended onto node B's communication qubit
through one EPR pair.  Any number of controlled-phase gates can then run
locally on B against that "cat" copy, and a final disentangler returns the
control to exactly the state it would have after direct gate application.
Cost per session: 1 EPR pair, 2 classical messages, 2 mid-circuit
measurements, independent of how many gates ran under the session.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fabric import Fabric, QubitAddr


class ProtocolError(Exception):
    """Telegate session used out of order (double disentangle, wrong node, ...)."""


@dataclass
class CatHandle:
    """A live teleported-control session."""

    control: QubitAddr
    remote_cat: QubitAddr
    epr_id: int
    entangled: bool = True


def cat_entangle(fabric: Fabric, control: QubitAddr, target_node: int,
                 rng: np.random.Generator) -> CatHandle:
    """Extend `control` onto target_node's comm qubit via one EPR pair.

    Protocol: share an EPR, CNOT the control into the local half, measure
    it, send the outcome, and apply a conditional X on the remote half.
    Afterward the remote cat qubit is perfectly correlated with the control.
    """
    if control.is_comm:
        raise ProtocolError("control must be a logical qubit")
    if control.node == target_node:
        raise ProtocolError(f"control already lives on node {target_node}")
    src = control.node
    epr_a, epr_b, epr_id = fabric.allocate_epr(src, target_node, rng)
    fabric.apply("cnot", (control, epr_a))
    bit = fabric.measure(epr_a, rng)
    # sender's half is done: reset frees the slot within the same session
    fabric.reset(epr_a, rng)
    fabric.release_comm(src)
    fabric.send_classical(src, target_node, "cat_entangle", bit)
    fabric.advance_clock(fabric.latency)
    msg = fabric.receive(src, target_node)
    if msg.payload == 1:
        fabric.apply("x", (epr_b,))
    return CatHandle(control=control, remote_cat=epr_b, epr_id=epr_id)


def apply_remote_controlled(fabric: Fabric, handle: CatHandle, phi: float,
                            target: QubitAddr) -> None:
    """CP(phi) between the session's cat qubit and a local target on node B."""
    if not handle.entangled:
        raise ProtocolError("session already disentangled")
    if target.node != handle.remote_cat.node or target.is_comm:
        raise ProtocolError(f"target {target} is not a logical qubit on node {handle.remote_cat.node}")
    fabric.apply("cp", (handle.remote_cat, target), phi)


def cat_disentangle(fabric: Fabric, handle: CatHandle, rng: np.random.Generator) -> None:
    """Close the session, restoring coherence on the control qubit.

    Protocol: H and measure the cat qubit, send the outcome back, and apply
    a conditional Z on the control.  The comm slot is reset and freed.
    """
    if not handle.entangled:
        raise ProtocolError("session already disentangled")
    b_node = handle.remote_cat.node
    a_node = handle.control.node
    fabric.apply("h", (handle.remote_cat,))
    bit = fabric.measure(handle.remote_cat, rng)
    fabric.reset(handle.remote_cat, rng)
    fabric.send_classical(b_node, a_node, "cat_disentangle", bit)
    fabric.advance_clock(fabric.latency)
    msg = fabric.receive(b_node, a_node)
    if msg.payload == 1:
        fabric.apply("z", (handle.control,))
    fabric.release_comm(b_node)
    handle.entangled = False
