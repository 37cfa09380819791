"""
Smoothing a noisy descent with the moving-average filter
=========================================================

A radar altimeter reading of a linear descent, with uniform noise,
run through the 15-tap filter in both of its modes.
"""

import numpy as np

from algas3.fir import FirFilter
from algas3.scenario import half_width

rng = np.random.default_rng(2024)
t = np.arange(460)
truth = np.maximum(2000 - 4 * t, 0)

a = half_width(96)  # uniform noise with std close to 96 counts
noisy = np.clip(truth + rng.integers(-a, a + 1, t.size), 0, 2047)

functional = FirFilter(11)
timed = FirFilter(11, mode="timed")
y = np.array(functional.run(noisy))
y_timed = np.array(timed.run(noisy))

# the timed chain is the functional one shifted by its latency
lag = timed.latency
print("latency:", lag, "ticks")
print("timed == delayed functional:", np.array_equal(y_timed[lag:], y[:-lag]))

# the average lags a ramp by 7 samples, so compare against the delayed truth
steady = slice(15, 440)
err_in = noisy[steady] - truth[steady]
err_out = y[steady] - truth[steady.start - 7:steady.stop - 7]
print("rms in : %.1f" % np.sqrt(np.mean(err_in ** 2)))
print("rms out: %.1f" % np.sqrt(np.mean(err_out ** 2)))

# a few samples around the middle of the run
for k in range(200, 206):
    print(k, truth[k], noisy[k], y[k])
