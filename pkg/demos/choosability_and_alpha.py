"""K4 is 4-choosable but not 3-choosable, and single vertices are reducible.

Run: python demos/choosability_and_alpha.py
"""

from flexcolor.assignment import ell, format_lists
from flexcolor.choosability import is_f_choosable
from flexcolor.graph import Graph, complete_graph, max_average_degree
from flexcolor.reducibility import find_weakly_reducible, optimal_alpha

k4 = complete_graph(4)
print("mad(K4) =", max_average_degree(k4).value)
for k in (3, 4):
    res = is_f_choosable(k4, (k,) * 4)
    print(f"{k}-choosable: {res.choosable}")
    if not res.choosable:
        print(format_lists(res.bad_lists), end="")

# a triangle with a pendant path: any vertex of degree at most 2 is reducible alone
g = Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
w = find_weakly_reducible(g, 4)
print("smallest weakly reducible subgraph:", w.vertices, "list sizes", w.ell)
h, _ = g.induced(w.vertices)
res = optimal_alpha(h, ell(g, w.vertices, 4), 4)
print("optimal alpha:", res.value, f"(over {res.assignments} assignments up to renaming)")
