"""Walk through the channel model: pathloss rows, link gains, SINR and rate.

Run:  python3 demos/01_pathloss_and_sinr.py
"""

import numpy as np

from qdpa import (LinkKind, NoiseModel, build_scenario, ScenarioConfig,
                  gain_linear, pathloss_db, rate, sinr_all)

# The four link models at a few representative distances. The indoor rows
# add 0.7 dB per meter, so femto links die off quickly with distance.
print("pathloss (dB) by link kind:")
for kind in LinkKind:
    row = [pathloss_db(kind, d) for d in (5.0, 10.0, 50.0, 350.0)]
    print(f"  {kind.value:24s} " + "  ".join(f"{x:7.2f}" for x in row))

# dB to linear gain and back
pl = pathloss_db(LinkKind.MBS_TO_MUE, 350.0)
print(f"\nmacro link at the cell edge: {pl:.3f} dB -> gain {gain_linear(pl):.3e}")

noise = NoiseModel()
print(f"thermal noise over {noise.bandwidth_hz/1e3:.0f} kHz: {noise.power_watts:.3e} W")

# SINRs in the default scenario with everyone at 10 mW
sc = build_scenario(ScenarioConfig(seed=0), 10)
p = np.full(10, 0.010)
gamma = sinr_all(sc.config.mbs_power_w, p, sc.channel, sc.config.noise_w)
print(f"\nMUE SINR with ten 10 mW femtocells: {gamma[0]:.2f} "
      f"(rate {rate(float(gamma[0])):.2f} b/s/Hz, requirement 4.0)")
print("FUE rates:", np.round(rate(gamma[1:]), 2))
