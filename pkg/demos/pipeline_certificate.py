"""Peel a sparse graph, verify the colouring distribution exactly and round-trip the certificate.

Run: python demos/pipeline_certificate.py
"""

import json
import random

from flexcolor import pipeline as pl
from flexcolor.graph import Graph

# a 6-cycle with two chords: mad 8/3
g = Graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3), (1, 4)])
lists = pl.random_lists(g.n, 4, 6, random.Random(2024))
pipe = pl.build_pipeline(g, lists, 4, "lp-first", seed=2024)
for step in pipe.trace.steps:
    print(f"peel {step.peeled} by {step.method}, alpha {step.alpha}")
report = pl.verify_pipeline(pipe, "exact")
print("epsilon target", pipe.trace.epsilon, "measured min FIX", report.min_fix, "passed", report.passed)

cert = json.loads(pl.dumps(pl.certificate(pipe, report)))
print("certificate problems:", pl.check_certificate(cert) or "none")
cert["lists"][0] = cert["lists"][0][:3]
print("after tampering:", pl.check_certificate(cert))
