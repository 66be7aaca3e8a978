"""Turn the gate into an EPR pair generator.

Sequence: a quarter-period carrier pulse on ion 1 splits |g,g> into a
superposition, then the two-pulse gate maps the |e,g> branch onto |e,e>.
With matched phases the result is (|gg> - |ee>)/sqrt(2).

This only works at a solution whose block dynamics actually returns the
bus: the (1,1,0) family at eta2 = sqrt(1/2) does, the published (1,2,1)
point does not (prepare_entangled raises BusEntangledError there in
exact mode).
"""

import numpy as np

from iongate import (BusEntangledError, EntanglementRecipe, ResonanceIntegers,
                     bell_recipe, carrier_rate, concurrence, epr_fidelity,
                     prepare_entangled, solve_gate)

clean = solve_gate(1, ResonanceIntegers(1, 1, 0), 1.8, 0.7)
print(f"clean solution: eta1={clean.eta1:.6f} eta2={clean.eta2:.6f} "
      f"(= sqrt(1/2) = {np.sqrt(0.5):.6f}), area={clean.omega_tau:.4f}")

for which in ("psi_minus", "psi_plus"):
    pair = prepare_entangled(bell_recipe(clean, which))
    amps = np.round(pair.spin_amplitudes, 6)
    print(f"{which:9s}: amplitudes {amps}, "
          f"fidelity {epr_fidelity(pair.spin_amplitudes, which):.6f}, "
          f"concurrence {concurrence(pair.spin_amplitudes):.6f}")

# partial carrier rotations trace out the |sin(2a)| concurrence curve
rate = carrier_rate(clean)
print("\ncarrier area a    concurrence    |sin 2a|")
for ang in np.linspace(0.1, 1.5, 8):
    recipe = EntanglementRecipe(t1=ang / rate, phi1=0.0, phi2=0.0, gate=clean)
    pair = prepare_entangled(recipe)
    c = concurrence(pair.spin_amplitudes)
    print(f"   {ang:7.4f}       {c:.6f}      {abs(np.sin(2 * ang)):.6f}")

# the leaky point is rejected rather than silently reported as perfect
leaky = solve_gate(1, ResonanceIntegers(1, 2, 1), 2.0, 1.8)
try:
    prepare_entangled(bell_recipe(leaky), mode="exact")
except BusEntangledError as exc:
    print(f"\npublished point, exact mode: {exc}")
