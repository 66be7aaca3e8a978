"""Audit the tabulated block coefficients against the eigensystem ones.

Writes the full regime-by-regime deviation report to
demo-out/legacy-discrepancy.md and prints the headline numbers.
"""

from pathlib import Path

from iongate import (PulsePair, compute_coefficients, legacy_discrepancy_table,
                     unitarity_defect, write_discrepancy_report)

out = Path("demo-out")
out.mkdir(exist_ok=True)

# a generic off-resonance point: the tabulated branch is visibly non-unitary
pulses = PulsePair(omega1=1.0, omega2=1.0, eta1=2.184029, eta2=1.732051,
                   phi1=0.0, phi2=0.0, k1=1)
for t in (7.77, 56.318566):
    for mode in ("legacy", "exact"):
        c = compute_coefficients(pulses, 0, t, mode=mode)
        d = unitarity_defect(c.e_coeffs, c.f_coeffs)
        print(f"t={t:10.5f}  {mode:6s}  unitarity defect {d:.2e}")

data = legacy_discrepancy_table(n_samples=2000)
print("\nmax |legacy - exact| per regime (E1, E2, ..., F4):")
for label, dev in data["deviations"].items():
    print(f"  {label:26s} " + " ".join(f"{v:7.1e}" for v in dev))

path = out / "legacy-discrepancy.md"
write_discrepancy_report(path)
print(f"\nfull report written to {path}")
