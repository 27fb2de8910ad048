"""Tour of the statevector engine: gates, measurement, sampling.

Convention used everywhere in this package: qubit 0 is the MOST significant
bit of a basis index, so the amplitude array of |10> has its 1 at index 2.
"""

import numpy as np

from dqft import Gate, StateVector, equal_up_to_global_phase

rng = np.random.default_rng(7)

# A Bell pair from two gates.
sv = StateVector(2)
sv.apply_gate(Gate.h(0))
sv.apply_gate(Gate.cnot(0, 1))
print("Bell state amplitudes:", np.round(sv.amps, 6))

# Measuring one half collapses the other: outcomes always agree.
pairs = []
for seed in range(8):
    bell = StateVector(2).apply_gate(Gate.h(0)).apply_gate(Gate.cnot(0, 1))
    r = np.random.default_rng(seed)
    pairs.append((bell.measure(0, r), bell.measure(1, r)))
print("correlated measurement pairs:", pairs)

# Sampling never collapses the state; it draws from the |amplitude|^2 law.
sv = StateVector(3).apply_gate(Gate.h(0)).apply_gate(Gate.h(2))
counts = sv.sample_counts([0, 1, 2], shots=1000, rng=rng)
print("counts over 1000 shots:", dict(sorted(counts.items())))

# Phase gates are invisible to sampling but not to interference.
plus = StateVector(1).apply_gate(Gate.h(0))
rotated = plus.copy().apply_gate(Gate.p(np.pi / 3, 0))
print("same sampling law despite the phase:",
      np.allclose(plus.probabilities([0]), rotated.probabilities([0])))
rotated.apply_gate(Gate.h(0))
print("after interfering, the phase shows up:", np.round(rotated.probabilities([0]), 4))

# Global phase is unobservable; the comparison helper knows that.
shifted = plus.copy()
shifted.amps *= np.exp(1j * 0.9)
print("equal up to global phase:", equal_up_to_global_phase(plus, shifted, 1e-10))
