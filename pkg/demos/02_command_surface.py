"""
The fuzzy command surface
=========================

Sweep the shipped rulebase over a coarse radar x lidar grid and print the
descent command at each point.  Negative numbers descend, positive climb.
"""

import numpy as np

from algas3 import fru
from algas3.fls import command_surface, fls_step
from algas3.numerics import CrispSample

rb = fru.default_table().rulebase
print(len(rb), "rules over", rb.radar.labels, "x", rb.lidar.labels)

radar = np.arange(0, 2048, 256)
lidar = np.arange(0, 1024, 128)
cmds, failsafe = command_surface(rb, radar_values=radar, lidar_values=lidar)

print("radar\\lidar" + "".join("%6d" % v for v in lidar))
for r, row in zip(radar, cmds):
    print("%11d" % r + "".join("%6d" % c for c in row))
print("fail-safe cells:", int(failsafe.sum()))

# the sweep agrees with one-at-a-time evaluation
r, v = 1000, 500
print("single step at (%d, %d):" % (r, v),
      fls_step(CrispSample(r, 11), CrispSample(v, 10), rb).value)
print("surface at the same point:",
      command_surface(rb, radar_values=[r], lidar_values=[v])[0][0, 0])

# whole universes at once, about 2M points
full, mask = command_surface(rb)
print("full sweep:", full.shape, "range", full.min(), "..", full.max())
