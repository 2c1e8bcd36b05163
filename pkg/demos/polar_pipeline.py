"""End-to-end classical transmission: 16-point constellation, heterodyne
detection, multilevel polar codes, successive-cancellation decoding.

A 4x4 product constellation carries 4 bits per mode (Gray-labeled, two
per quadrature).  Each bit level gets its own polar code; the shared rate
budget is 70% of the estimated heterodyne mutual information, allocated
to the globally most reliable synthetic channels.  A smaller blocklength
than the production default keeps this demo under a minute.
"""

import numpy as np

import thermalcomm as tc
from thermalcomm.polar import estimate_level_mi

p = tc.channel_params(0.8, 0.0, 7.0)
ch = tc.induced_channel(p, tc.make_constellation("equilattice", 4))
n = 256

rng = np.random.default_rng(1234)
level_mi = [estimate_level_mi(ch, lv, 20_000, rng) for lv in range(ch.levels)]
mi = float(sum(level_mi))
print(f"heterodyne MI estimate: {mi:.4f} bits/mode "
      f"(levels: {', '.join(f'{v:.3f}' for v in level_mi)})")
print(f"Holevo capacity at this budget: {tc.capacity_C(p):.4f} bits/mode "
      f"-- heterodyne costs real rate\n")

codes = tc.construct_multilevel(ch, n, 0.7 * mi, mc_budget=2_000, seed=7)
for lv, code in enumerate(codes):
    print(f"level {lv}: rate {code.rate:.3f} "
          f"({len(code.info_set)}/{n} info bits)")

report = tc.simulate(ch, codes, trials=200, seed=42)
print(f"\nFER {report['fer']:.3f} over {report['trials']} frames at "
      f"{report['sum_rate_bits_per_mode']:.3f} bits/mode")
print(f"per-level BER: {', '.join(f'{b:.4f}' for b in report['level_ber'])}")
print(f"throughput {report['throughput_bits_per_mode']:.3f} bits/mode")
