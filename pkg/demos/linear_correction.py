"""Series (Ritz) solution of the linear correction problem for the
reference two-material pipe, with the interface-jump convergence study.

Run:  python3 demos/linear_correction.py          (about half a minute)
"""

import numpy as np

import weldcreep as wc
from weldcreep.stressfn import enumerate_basis, grid_for_basis

cfg = wc.two_material_config(r_i=1.0, r_o=2.0, H=8.0, h=0.5, p=1.0, n=3.0, s=0.1)

print("jump of the radial correction stress at the interface, r = 1.5:")
print("  modes   series jump   closed form   relative gap")
closed = wc.stress_jump(cfg, 1.5)[0]
for n_modes in (5, 10, 25):
    basis = enumerate_basis(cfg, n_modes, n_modes)
    grid = grid_for_basis(cfg, n_modes)
    sol = wc.solve_linear_correction(cfg, basis, grid)
    got = sol.jump(1.5, 0.5)[0, 0]
    print(f"  {n_modes:4d}    {got:+.5f}      {closed:+.5f}      "
          f"{abs(got - closed) / closed:8.2e}")
    if n_modes == 25:
        correction = sol

z = np.linspace(0.0, cfg.H, 801)
prof = correction.profile(1.5, z)
print("\ncorrection profiles along r = 1.5 (peaks):")
for comp, name in enumerate(("sigma_r", "sigma_theta", "sigma_z", "sigma_rz")):
    k = np.argmax(np.abs(prof[:, comp]))
    print(f"  max |{name:11s}| = {abs(prof[k, comp]):.4f} at z = {z[k]:.3f}")

print("\nfirst-order total field at s = 0.1, inner wall (pressure check):")
total = wc.first_order_field(cfg, correction, 0.1, np.array([cfg.r_i]), z[:5])
print(f"  sigma_r(r_i, z) = {total[0, :, 0]}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), sharex=True)
    for ax, comp, name in zip(axes, (0, 1, 3),
                              ("radial", "hoop", "shear")):
        ax.plot(z, prof[:, comp])
        ax.axvline(0.5, color="k", lw=0.5, ls=":")
        ax.set_xlabel("z")
        ax.set_title(f"{name} correction, r = 1.5")
    fig.tight_layout()
    fig.savefig("demos/linear_correction.png", dpi=120)
    print("\nwrote demos/linear_correction.png")
except ImportError:
    pass
