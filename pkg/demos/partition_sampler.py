"""Exact FIX and FORB probabilities of the partition sampler on a ten-cycle with petals.

Run: python demos/partition_sampler.py
"""

from flexcolor.instances import far_neighbor_cycle
from flexcolor.partition import (is_strong_part, is_weak_part, match_part_pattern, coarse_partition_bound,
                                 partition_bound, partition_sampler, square_labeling)
from flexcolor.sampling import fix_forb_stats

inst = far_neighbor_cycle()
p = inst.partition()
for i, part in enumerate(p.parts):
    verdict = is_weak_part(p, i) if i == inst.weak_index else is_strong_part(p, i)
    print(f"part {part}: {'weak' if i == inst.weak_index else 'strong'} {verdict.holds} ({match_part_pattern(p, i)})")

lab = square_labeling(p, 4, 4)
lists = [set(range(x)) for x in inst.ell]
dist = partition_sampler(p, lists, inst.weak_index, lab).distribution()
st = fix_forb_stats(dist, [sorted(l) for l in lists])
print(f"{len(dist)} colourings in the support")
print("min FIX  =", st.min_fix, "at", st.fix_at)
print("min FORB =", st.min_forb, "at", st.forb_at)
print("guaranteed with", lab.universe, "labels:", partition_bound(4, lab.universe))
print("coarse bound with (bd)^4 labels:", coarse_partition_bound(4, 4))
