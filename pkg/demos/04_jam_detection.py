"""
Spotting a jammed sensor
========================

Every 16 ticks the malfunction unit compares the two filtered channels of
a corner.  A jam shows up as high variance on one channel only; the
corner then trusts the other one until a clean frame comes back.
"""

from pathlib import Path

import numpy as np

from algas3.scenario import load_config, run_scenario

here = Path(__file__).parent
trace = run_scenario(load_config(here / "lidar_jam.ini"))

# corner 0, one line per completed frame; the first frame covers the
# filter warm-up, which both channels share
print(" tick  verdict            mad    var_r    var_l  priority")
for rec in trace:
    o = rec.output.corners[0]
    if o.verdict is None:
        continue
    s = o.verdict.stats
    print("%5d  %-16s %5d %8d %8d  %s" % (o.tick, o.verdict.code.name, s.mad,
                                          s.var_radar, s.var_lidar, o.priority.name))

# while radar is preferred the fused distance is just the radar reading
fused = trace.corner_series(0, "fused")
radar = trace.corner_series(0, "radar_filtered")
lidar = trace.corner_series(0, "lidar_filtered")
window = slice(96, 160)
print("fused - radar over ticks 96..159:", np.unique(fused[window] - radar[window]).tolist())
print("lidar spread over the same ticks:", lidar[window].min(), "..", lidar[window].max())
