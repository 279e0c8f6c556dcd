"""Plot (or tabulate) the four reward landscapes over the rate plane.

The odd-power polynomial rises with both rates; the quadratic peaks at the
requirement point; exponential and proximity reward the femto rate but pull
the macro-user rate toward its requirement.

Run:  python3 demos/03_reward_surfaces.py [--plot out.png]
"""

import sys

import numpy as np

from qdpa import RewardKind, RewardSpec, reward_surface

G0 = 2.0 ** 4 - 1.0
GK = 2.0 ** 0.5 - 1.0

r0_grid = np.linspace(0.0, 8.0, 81)
rk_grid = np.linspace(0.0, 4.0, 41)

surfaces = {}
for kind in RewardKind:
    spec = RewardSpec(kind=kind)
    surfaces[kind.value] = reward_surface(spec, G0, GK, r0_grid, rk_grid,
                                          fbs_mue_dist_m=15.0)

for name, surf in surfaces.items():
    i, j = np.unravel_index(np.argmax(surf), surf.shape)
    print(f"{name:12s} max {surf.max():9.2f} at (r0={r0_grid[i]:.1f}, "
          f"rk={rk_grid[j]:.1f}); value at requirements "
          f"{surf[40, 5]:.2f}")  # r0=4.0, rk=0.5

if "--plot" in sys.argv:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = sys.argv[sys.argv.index("--plot") + 1]
    fig, axes = plt.subplots(2, 2, figsize=(10, 8), constrained_layout=True)
    for ax, (name, surf) in zip(axes.flat, surfaces.items()):
        im = ax.contourf(rk_grid, r0_grid, surf, levels=30)
        ax.plot(0.5, 4.0, "r+", markersize=12)
        ax.set_title(name)
        ax.set_xlabel("FUE rate (b/s/Hz)")
        ax.set_ylabel("MUE rate (b/s/Hz)")
        fig.colorbar(im, ax=ax)
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")
