import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coxtwist.diagram import INF, CoxeterDiagram, components

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LABELS = (2, 3, 4, 5, INF)


def diagram(names, edges):
    """Build a diagram from a space-separated name string and ``(s, t, m)`` triples."""
    return CoxeterDiagram.from_edges(names.split() if isinstance(names, str) else names, edges)


def dynkin(names, edges):
    """Dynkin-style input: pairs that are not listed commute (order 2) instead of being infinite."""
    names = names.split() if isinstance(names, str) else list(names)
    listed = {frozenset((s, t)) for s, t, _ in edges}
    rest = [(s, t, 2) for i, s in enumerate(names) for t in names[i + 1:]
            if frozenset((s, t)) not in listed]
    return CoxeterDiagram.from_edges(names, list(edges) + rest)


def random_connected(rng, rank, p_inf=0.2, labels=LABELS[:-1]):
    """A random connected diagram; each pair is infinite with probability ``p_inf``,
    otherwise drawn uniformly from ``labels``."""
    names = [f"s{i}" for i in range(rank)]
    while True:
        edges = []
        for i in range(rank):
            for j in range(i + 1, rank):
                if rng.random() >= p_inf:
                    edges.append((names[i], names[j], rng.choice(labels)))
        D = CoxeterDiagram.from_edges(names, edges)
        if len(components(D, D.full)) == 1:
            return D


def random_corpus(count, max_rank=7, seed=20240901):
    """Reproducible corpus; alternates dense and sparse diagrams so that plenty
    of them have separating subsets and twists."""
    rng = random.Random(seed)
    return [random_connected(rng, rng.randint(2, max_rank), 0.2 if k % 2 else 0.6)
            for k in range(count)]


def commuting_corpus(count, seed=7):
    """Sparse diagrams weighted towards commuting pairs.  The uniform corpus
    almost never has type(II) blocks; this one has them in about one case in ten."""
    rng = random.Random(seed)
    return [random_connected(rng, rng.randint(3, 7), 0.5, (2, 2, 2, 3, 4, 5))
            for _ in range(count)]


@st.composite
def diagrams(draw, min_rank=1, max_rank=6, labels=LABELS, connected=False):
    rank = draw(st.integers(min_rank, max_rank))
    names = [f"s{i}" for i in range(rank)]
    edges = []
    for i in range(rank):
        for j in range(i + 1, rank):
            m = draw(st.sampled_from(labels))
            if m != INF:
                edges.append((names[i], names[j], m))
    D = CoxeterDiagram.from_edges(names, edges)
    if connected:
        from hypothesis import assume
        assume(len(components(D, D.full)) == 1)
    return D


@pytest.fixture
def tmp_json(tmp_path):
    def write(D, name="d.json", note=None):
        from coxtwist.diagram import dump_diagram
        p = tmp_path / name
        p.write_text(dump_diagram(D, note))
        return str(p)
    return write
