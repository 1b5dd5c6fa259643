"""Closed-form building blocks: the homogeneous-pipe creep field, the
linearized compliance, and the interface jump formulas.

Run:  python3 demos/baseline_and_jumps.py
"""

import numpy as np

import weldcreep as wc

cfg = wc.two_material_config(r_i=1.0, r_o=2.0, H=8.0, h=0.5, p=1.0, n=3.0, s=0.1)

# --- the unperturbed field -------------------------------------------------
coef = wc.baseline_coefficients(cfg)
print("homogeneous-pipe coefficients:")
print(f"  a = {coef.a:.6f}, a_r = {coef.a_r:.6f}, "
      f"a_theta = {coef.a_theta:.6f}, a_z = {coef.a_z:.6f}")

radii = np.linspace(cfg.r_i, cfg.r_o, 6)
sig = wc.baseline_stress(cfg, radii)
print("\n  r      sigma_r   sigma_theta  sigma_z")
for r, s in zip(radii, sig):
    print(f"  {r:4.2f}  {s[0]:+9.5f}  {s[1]:+9.5f}  {s[2]:+9.5f}")
print("  (the radial stress runs from -p at the bore to 0 at the outside)")

# --- the compliance linearized about that field ----------------------------
cm = wc.compliance_at(cfg, 1.5)
eig = np.sort(np.linalg.eigvalsh(cm.matrix))
print(f"\ncompliance at r = 1.5: prefactor {cm.prefactor:.6f}, "
      f"eigenvalues / prefactor = {np.round(eig / cm.prefactor, 12)}")
print("  (the zero mode is the hydrostatic direction: the linearized "
      "material is incompressible)")

# --- what a unit prefactor step at an interface does -----------------------
print("\ninterface jumps carried by the first-order correction "
      "(per unit prefactor step):")
print("  r      [u_r]       [sigma_r]   [sigma_theta]")
for r in (1.2, 1.5, 1.8):
    jr, jt = wc.stress_jump(cfg, r)
    ju = wc.displacement_jump(cfg, r)
    print(f"  {r:4.2f}  {ju:+9.5f}  {jr:+9.5f}  {jt:+9.5f}")

qr, qt = wc.stress_jump_from_compliance(cfg, 1.5)
jr, jt = wc.stress_jump(cfg, 1.5)
print(f"\ncross-check through the compliance 2x2 solve at r = 1.5: "
      f"({qr:+.12f}, {qt:+.12f})")
print(f"closed form:                                          "
      f"({jr:+.12f}, {jt:+.12f})")
