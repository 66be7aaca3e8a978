"""Two practical questions about a solved gate.

1. How much calibration error does it tolerate?  Sweep each knob over a
   +-1% window and watch the success probability.
2. Is it a CNOT?  Up to one phase gate on the control and a basis
   rotation pair on the target, yes, exactly.
"""

import numpy as np

from iongate import (ResonanceIntegers, cnot_equivalence, ideal_gate,
                     realized_gate, robustness_sweep, solve_gate)

sol = solve_gate(1, ResonanceIntegers(1, 2, 1), 2.0, 1.8)

for knob in ("eta1", "eta2", "omega_tau"):
    sweep = robustness_sweep(sol, parameter=knob, rel_span=0.01, n_points=5)
    row = "  ".join(f"{p:.5f}" for p in sweep.probabilities)
    print(f"{knob:10s} -1%..+1%:  {row}")

# the gate matrix itself, from a solution family without bus leak
clean = solve_gate(1, ResonanceIntegers(1, 1, 0), 1.8, 0.7)
phi2 = 0.4
gate = realized_gate(clean, phi2=phi2)
print(f"\nrealized gate vs ideal, max deviation: "
      f"{np.abs(gate - ideal_gate(phi2)).max():.2e}")

eq = cnot_equivalence(phi2)
print(f"CNOT decomposition residual: {eq.residual:.2e}")
print(f"best SINGLE target rotation residual: {eq.single_rotation_residual:.4f}"
      " (one rotation alone cannot absorb the -i)")
print("\ncontrol phase gate:")
print(np.round(eq.q1_phase, 6))
print("target pre / post rotations:")
print(np.round(eq.q2_pre, 6))
print(np.round(eq.q2_post, 6))
