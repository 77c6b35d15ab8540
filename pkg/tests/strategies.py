import random

from hypothesis import strategies as st

from sandtorsor.generate import random_ribbon_graph


@st.composite
def ribbon_graphs(draw, max_vertices=4, max_edges=6):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_ribbon_graph(random.Random(seed), max_vertices, max_edges)
