"""Teleportation-free execution: measure early, feed the bits forward.

In the inverse QFT every controlled phase is controlled by a qubit that is
about to be measured anyway.  Measuring it first and replacing the
controlled gates with classically conditioned single-qubit phases removes
quantum communication entirely: zero EPR pairs, no communication qubits,
and the exact same output law.  Cross-node condition bits travel as
classical messages on the fabric clock.
"""

from dqft import (make_partition, run_distributed, run_semiclassical,
                  semiclassical_exact_distribution)
from dqft.runner import exact_value_distribution

n, k, theta = 8, 4, 1 / 3
plan = make_partition(n, k)

semi = run_semiclassical(plan, theta, shots=200, seed=5)
tele = run_distributed(plan, theta, shots=200, seed=5, return_state=True)

print(f"semiclassical: EPRs = {semi.metrics.epr_count}, "
      f"messages/execution = {semi.metrics.classical_msg_count}, "
      f"peak bytes = {semi.metrics.peak_state_bytes}")
print(f"telegate:      EPRs = {tele.metrics.epr_count}, "
      f"messages/execution = {tele.metrics.classical_msg_count}, "
      f"peak bytes = {tele.metrics.peak_state_bytes}")

# Both modes sample the same distribution.
exact_semi = semiclassical_exact_distribution(n, theta)
exact_tele = exact_value_distribution(tele.state)
tv = 0.5 * sum(abs(exact_semi.get(v, 0.0) - exact_tele.get(v, 0.0))
               for v in set(exact_semi) | set(exact_tele))
print(f"total variation between the two exact distributions: {tv:.2e}")

top_semi = sorted(semi.counts.items(), key=lambda kv: -kv[1])[:3]
top_tele = sorted(tele.counts.items(), key=lambda kv: -kv[1])[:3]
print("top sampled outcomes, semiclassical:", top_semi)
print("top sampled outcomes, telegate:     ", top_tele)
