"""
Flight rules: parse, print, evaluate
====================================

The shipped rule file holds the FLS rulebase and two flight rules.  Here
we read it, print it back, and evaluate the flight rules by hand.
"""

from algas3 import fru

text = fru.default_rules_text()
tree = fru.parse(text)
print(len(tree.decls), "declarations,", len(tree.fls_rules), "FLS rules,",
      len(tree.rules), "flight rules")

# printing is a fixed point: parse(print(x)) prints the same
printed = fru.pretty_print(tree)
print(printed.splitlines()[-1])
print("round trip stable:", fru.pretty_print(fru.parse(printed)) == printed)

table = fru.default_table()
FULL = 32768  # 1.0 in Q1.15

# beacon weak and moving away, outside landing: speed rules get half weight
beacon = {("Region-Beacon-Signal", "Weak"): FULL,
          ("Direction", "Away-From-Region-Beacon"): 24000}
d = fru.evaluate(table, set(), beacon)
print("fired:", d.fired, "signals:", sorted(d.signals))
print("gate weights:", [g.weight for g in d.gates])

# every noise input above one half while landing: go to hover
noisy = {(name, "Very Noisy"): FULL
         for name in ("Optical-Sensor", "uWave-Sensor", "UWB-Sensor")}
d = fru.evaluate(table, {"Landing-Mode"}, noisy)
print("fired:", d.fired, "enter:", d.mode_request, "stop:", sorted(d.mode_stops),
      "enable:", sorted(d.enables))

# one input just under the threshold and nothing happens
noisy[("UWB-Sensor", "Very Noisy")] = fru.DEFAULT_THRESHOLD - 1
print("below threshold:", fru.evaluate(table, {"Landing-Mode"}, noisy).empty)

# a typo is reported with a position and a suggestion
_, diags = fru.check_rules(text + "IF (Landing-Mod) THEN (signal Sensor-Error).\n")
for diag in diags:
    print(diag.format("typo.rules"))
