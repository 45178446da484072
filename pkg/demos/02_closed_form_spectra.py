"""Closed-form spectra of the linearization building blocks.

Perturbations of a pinned wave are governed, after separating real
components, by a scalar defect operator L, a 2x2 block H, and the full
non-self-adjoint generator A.  All three have closed-form spectra; this
script prints them side by side while the effective exponent kappa sweeps
through the interesting thresholds (-1/2, 0, omega^2/m^2).
"""

from kgdelta import (
    ModelParams,
    c_pm,
    lambda_pm,
    scalar_eigenvalue,
    sigma_H,
    sigma_L,
    sigma_ess_A,
    stability_verdict,
    zero_jordan_structure,
)

m, omega = 1.0, 0.5
print(f"m = {m}, omega = {omega}; band edges c-( = {c_pm(ModelParams(m, omega))[0]:.4f}),"
      f" c+( = {c_pm(ModelParams(m, omega))[1]:.4f})\n")

header = f"{'kappa':>7} {'L level':>10} {'H pair':>22} {'jordan':>7} {'verdict':>9}"
print(header)
for kappa in (-0.8, -0.5, -0.2, 0.0, 0.1, 0.25, 0.5, 1.0, 2.0):
    p = ModelParams(m, omega, kappa)
    lvl = scalar_eigenvalue(p)
    pair = lambda_pm(p)
    jb = zero_jordan_structure(p)
    lvl_s = f"{lvl:10.4f}" if lvl is not None else f"{'none':>10}"
    pair_s = f"({pair[0]:8.4f}, {pair[1]:8.4f})" if pair is not None else f"{'none':>22}"
    print(f"{kappa:7.2f} {lvl_s} {pair_s} {jb.geometric}/{jb.algebraic:<5} "
          f"{stability_verdict(p).value:>9}")

print("""
Notes:
* the scalar level disappears into the continuum at kappa = -1/2;
* zero enters the point spectrum of H exactly at kappa = 0;
* the Jordan chain at zero lengthens to 4 on the curve kappa = omega^2/m^2,
  where the verdict flips from stable to unstable.
""")

p = ModelParams(m, omega, 0.25)
ess_l, _ = sigma_L(p)
ess_h, pt_h = sigma_H(p)
ess_a = sigma_ess_A(p)
print("essential spectra at the critical point kappa = 0.25:")
print("  scalar operator :", ess_l.intervals)
print("  2x2 block       :", ess_h.intervals, "point:", [f"{z:.4g}" for z in pt_h.values()])
print("  full generator  : imaginary parts", ess_a.intervals)
print("  thresholds      :", ess_a.thresholds)
