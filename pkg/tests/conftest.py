from __future__ import annotations

import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nicer_ears.ears import Ear, EarDecomposition, open_ear_decomposition
from nicer_ears.generators import random_2ec, random_2vc
from nicer_ears.graph import Multigraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CATALOG_SEED = 20240611


def from_nx(G) -> Multigraph:
    nodes = sorted(G.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    return Multigraph(len(nodes), tuple(sorted(tuple(sorted((idx[u], idx[v]))) for u, v in G.edges())))


@lru_cache(maxsize=None)
def atlas_graphs(lo: int = 3, hi: int = 7) -> tuple[Multigraph, ...]:
    """Every connected simple graph with lo <= n <= hi, up to isomorphism."""
    return tuple(
        from_nx(G) for G in nx.graph_atlas_g() if lo <= G.number_of_nodes() <= hi and nx.is_connected(G)
    )


@lru_cache(maxsize=None)
def random_catalog(count: int = 300, max_n: int = 8, seed: int = CATALOG_SEED) -> tuple[Multigraph, ...]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(3, max_n)
        out.append(random_2ec(n, rng.randint(0, n), rng))
    return tuple(out)


def catalog() -> tuple[Multigraph, ...]:
    return atlas_graphs() + random_catalog()


@st.composite
def graphs_2vc(draw, min_n: int = 3, max_n: int = 8, simple: bool = False):
    n = draw(st.integers(min_n, max_n))
    extra = draw(st.integers(0, n))
    return random_2vc(n, extra, draw(st.randoms(use_true_random=False)), simple=simple)


@st.composite
def graphs_2ec(draw, min_n: int = 3, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    extra = draw(st.integers(0, n))
    return random_2ec(n, extra, draw(st.randoms(use_true_random=False)))


@st.composite
def graphs_with_T(draw, family=graphs_2ec, min_n: int = 3, max_n: int = 8):
    g = draw(family(min_n, max_n))
    T = draw(st.sets(st.integers(0, g.n - 1)))
    T = set(T)
    if len(T) % 2:
        T ^= {0}
    return g, frozenset(T)


@pytest.fixture
def c4() -> Multigraph:
    return Multigraph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))


@pytest.fixture
def k4() -> Multigraph:
    return Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture
def bowtie() -> Multigraph:
    return Multigraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)))


@st.composite
def graphs_connected(draw, min_n: int = 2, max_n: int = 8):
    """Random spanning tree plus extra (possibly parallel) edges; bridges allowed."""
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges += draw(st.lists(st.sampled_from(pairs), max_size=n)) if pairs else []
    order = draw(st.permutations(range(len(edges))))
    return Multigraph(n, tuple(edges[i] for i in order))


def nontrivial_part(g: Multigraph) -> tuple[Multigraph, EarDecomposition]:
    """Subgraph formed by the nontrivial ears of an open decomposition, with its ears."""
    d = open_ear_decomposition(g)
    ears = [d.ears[i] for i in d.nontrivial()]
    view = g.view(edge_ids=sorted(e for ear in ears for e in ear.edges), vertices=range(g.n))
    local = view.local_edges()
    lears = tuple(Ear(ear.vertices, tuple(local[e] for e in ear.edges)) for ear in ears)
    return view.graph, EarDecomposition(view.graph, lears, d.root)
