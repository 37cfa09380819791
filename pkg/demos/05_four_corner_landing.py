"""
Four corners, one landing
=========================

Run the whole processor: four corners in lock step, their results framed
onto the inter-corner link, and the two diagonal pairs cross-checked.
"""

from pathlib import Path

import numpy as np

from algas3.scenario import load_config, run_scenario

here = Path(__file__).parent

# closed loop: the averaged corner commands drive the altitude
trace = run_scenario(load_config(here / "landing.ini"), parallel=True)
alt = trace.altitudes()
touchdown = int(np.argmax(alt == 0))
print("start %d, touchdown at tick %d" % (alt[0], touchdown))
for t in range(0, touchdown + 1, 4):
    cmds = [o.command for o in trace[t].output.corners]
    print("%4d  alt %4d  commands %s" % (t, alt[t], cmds))

# a tilted frame: corner 2 reads 60 long, so pair 0-2 disagrees
trace = run_scenario(load_config(here / "tilt.ini"))
last = trace[-1].output
for p in last.pairs:
    print("pair %s  delta %3d  alarm %s" % (p.label, p.delta, p.alarm))
print("alarmed ticks:", sum(r.output.pair_alarm for r in trace), "of", len(trace))

# the trace also goes to CSV, one row per tick
csv = trace.to_csv().splitlines()
print(csv[0][:60], "...")
