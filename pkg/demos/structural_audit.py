"""Classify vertices, list structural violations and run the discharging ledger.

Run: python demos/structural_audit.py
"""

from flexcolor.graph import Graph
from flexcolor.structure import audit_counterexample, classify, detect_violations, discharge

# the 3-regular prism has mad 3 < 11/3, so it cannot be a minimal counterexample
prism = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
print("classes:", classify(prism).vertices)
for v in detect_violations(prism).violations[:3]:
    print(f"{v.kind}: {v.description}")
led = discharge(prism)
print("final charges:", [str(c) for c in led.final], "total", led.total)
rep = audit_counterexample(prism)
print("in scope:", rep.applies, "findings:", rep.findings())
