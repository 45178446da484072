"""Time-domain cross-validation of the spectral verdicts.

The lattice simulator knows nothing about dispersion determinants: it just
integrates the field equation with a symplectic scheme.  Perturbing the
discrete stationary wave and watching the distance to its phase orbit either
stays bounded (stable side of the parameter plane) or grows at the rate of
the real eigenvalue computed by the root pipeline.  Conservation of energy
and charge along the way is the evidence that what grows is physics, not
integrator error.
"""

import math

import numpy as np

from kgdelta import ModelParams, PowerLaw, accepted_roots, stability_verdict
from kgdelta.lattice import DefectLattice, Grid

# --- stable side: kappa < omega^2 --------------------------------------
p = ModelParams(1.0, 0.6, 0.1)
sim = DefectLattice(PowerLaw(1.0, 0.1), p, Grid.for_run(p, horizon=40.0))
print(f"stable run at (omega, kappa) = (0.6, 0.1): verdict {stability_verdict(p).value}")
rep = sim.run_experiment(epsilon=1e-3, horizon=40.0, seed=0, record_every=10)
print(f"  initial distance {rep.orbital_distance[0]:.3e}, "
      f"max {np.max(rep.orbital_distance):.3e} over t <= 40")
print(f"  energy drift {rep.energy_drift:.2e}, charge drift {rep.charge_drift:.2e}\n")

# --- unstable side: rest wave with a hardening coupling ----------------
p = ModelParams(1.0, 0.0, 1.0)
sim = DefectLattice(PowerLaw(2.0, 1.0), p, Grid.for_run(p, horizon=20.0))
predicted = max(z.real for z in accepted_roots(p) if z.real > 0)
print(f"unstable run at (0, 1): verdict {stability_verdict(p).value}, "
      f"predicted rate {predicted:.6f}")
rep = sim.run_experiment(epsilon=1e-6, horizon=20.0, seed=0, record_every=5)
print(f"  fitted exponential rate {rep.fitted_rate:.4f} "
      f"({100 * abs(rep.fitted_rate - predicted) / predicted:.2f}% off)")
if rep.aborted:
    print(f"  blow-up guard stopped the run at t = {rep.times[-1]:.2f} "
          "(the nonlinearity saturates nothing here)")

# --- the distance series around the linear-growth window ---------------
mask = (rep.orbital_distance > 1e-5) & (rep.orbital_distance < 0.05)
ts, ds = rep.times[mask], rep.orbital_distance[mask]
print("\n  log-distance samples in the fit window:")
for i in range(0, len(ts), max(1, len(ts) // 8)):
    print(f"    t = {ts[i]:6.3f}  log10(dist) = {math.log10(ds[i]):7.3f}")

# --- exactly critical: polynomial, not exponential ----------------------
p = ModelParams(1.0, 0.5, 0.25)
sim = DefectLattice(PowerLaw(1.0, 0.25), p, Grid.for_run(p, horizon=40.0))
rep = sim.run_experiment(epsilon=1e-6, horizon=40.0, seed=0, record_every=20)
print(f"\ncritical run at (0.5, 0.25): verdict {stability_verdict(p).value}")
print(f"  fitted rate: {rep.fitted_rate} (no exponential fit at criticality)")
growth = rep.orbital_distance[-1] / rep.orbital_distance[0]
print(f"  distance grew by x{growth:.1f} over t <= 40 "
      "(slow secular growth from the length-4 Jordan chain)")
