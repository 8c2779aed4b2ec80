import random

from hypothesis import strategies as st

from flexcolor.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=7, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, keep in zip(pairs, mask) if keep]
    if connected:
        edges += [(v - 1, v) for v in range(1, n) if not any(e == (v - 1, v) for e in edges)]
    return Graph(n, edges)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_connected(rng: random.Random, n: int, p: float) -> Graph:
    """Random spanning tree plus independent extra edges."""
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    return Graph(n, sorted(edges))
