import numpy as np
import pytest

from fairuse.corpus import build_graph
from fairuse.graph import (
    CaseNode,
    CourtNode,
    FactorPassage,
    KnowledgeGraph,
    OpinionNode,
)
from fairuse.synthetic import make_corpus


def simple_graph() -> KnowledgeGraph:
    """Three-tier court chain and three cases: A cites B and C, C cites B."""
    g = KnowledgeGraph()
    g.add_node(CourtNode("scotus", "Supreme Court"))
    g.add_node(CourtNode("ca9", "Ninth Circuit", appeals_to="scotus"))
    g.add_node(CourtNode("cand", "N.D. Cal.", appeals_to="ca9"))
    for case_id, court in (("A", "cand"), ("B", "scotus"), ("C", "ca9")):
        g.add_node(CaseNode(case_id, f"{case_id} v. {case_id}co", 2000, court))
        g.add_node(OpinionNode(f"{case_id}-op", case_id, "majority", f"Opinion of {case_id}."))
        g.add_node(
            FactorPassage(f"{case_id}-purpose", f"{case_id}-op", "Purpose", f"Purpose of {case_id}.")
        )
    g.add_citation("A", "B")
    g.add_citation("A", "C")
    g.add_citation("C", "B")
    return g


@pytest.fixture
def graph_abc() -> KnowledgeGraph:
    return simple_graph().freeze()


@pytest.fixture(scope="session")
def fixture_records_10() -> list[dict]:
    return make_corpus(n_cases=10, seed=7, n_landmarks=2)


@pytest.fixture(scope="session")
def fixture_graph_10(fixture_records_10):
    graph, report = build_graph(list(fixture_records_10))
    assert report.ok, report.schema_violations + report.parse_errors
    return graph


@pytest.fixture(scope="session")
def landmark_records() -> list[dict]:
    return make_corpus(n_cases=50, seed=13, n_landmarks=2)


@pytest.fixture(scope="session")
def landmark_graph(landmark_records):
    graph, report = build_graph(list(landmark_records))
    assert report.ok, report.schema_violations + report.parse_errors
    return graph


def pagerank_linear_solve(n: int, edges: set[tuple[int, int]], damping: float = 0.85) -> np.ndarray:
    """Dense stationary solution of the damped walk: (I - d P) x = (1-d)/n 1.

    P is the column-stochastic transition matrix with dangling columns
    spread uniformly. Independent of the power-iteration implementation.
    """
    out_deg = np.zeros(n)
    for src, _ in edges:
        out_deg[src] += 1
    P = np.zeros((n, n))
    for src, dst in edges:
        P[dst, src] = 1.0 / out_deg[src]
    for col in range(n):
        if out_deg[col] == 0:
            P[:, col] = 1.0 / n
    b = np.full(n, (1.0 - damping) / n)
    return np.linalg.solve(np.eye(n) - damping * P, b)


def random_digraph(rng: np.random.Generator, n: int, p: float = 0.2) -> set[tuple[int, int]]:
    """Random simple digraph; leaves room for dangling and isolated nodes."""
    edges = set()
    for src in range(n):
        for dst in range(n):
            if src != dst and rng.random() < p:
                edges.add((src, dst))
    return edges
