"""Reference instances: a worked example pair, the star/cycle family with its
closed-form dual, and seeded synthetic datasets."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .graph import LabeledGraph, build_graph, random_graph, star_cycle_instance
from .model import IlpModel

__all__ = [
    "worked_example_pair",
    "star_cycle_instance",
    "star_cycle_dual",
    "perturb",
    "synthetic_dataset",
]


def worked_example_pair() -> tuple[LabeledGraph, LabeledGraph]:
    """Star on five nodes vs. a four-node graph; unit-cost GED 5.

    G is a star centered at an ``A`` node with leaves ``B, B, A, A``.  H has
    nodes ``A, A, B, B`` and every edge but the ``A-A`` one.  An optimal
    path deletes a leaf and its edge, relabels the center, and inserts two
    edges.
    """
    g = build_graph(5, ["A", "B", "B", "A", "A"], [(0, 1), (0, 2), (0, 3), (0, 4)], name="example_G")
    h = build_graph(4, ["A", "A", "B", "B"], [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], name="example_H")
    return g, h


def star_cycle_dual(model: IlpModel) -> list[Fraction]:
    """Closed-form dual for a FORI model of ``S_n`` vs ``C_n`` (unit costs).

    The star center gets price 6 on its assignment row, every other G node
    price 2; every node/arc row of the center gets 2; all other prices are
    zero.  Its objective is ``2n - 5``.
    """
    center = 0
    prices = []
    for row in model.rows:
        tag = row.tag
        if tag[0] == "assign_g":
            prices.append(Fraction(6 if tag[1] == center else 2))
        elif tag[0] == "node_arc" and tag[1] == center:
            prices.append(Fraction(2))
        else:
            prices.append(Fraction(0))
    return prices


def perturb(g: LabeledGraph, rng: np.random.Generator, edits: int,
            node_alphabet=("A", "B", "C"), edge_alphabet=("-", "="), name: str = "") -> LabeledGraph:
    """Apply ``edits`` random relabel / edge insert / edge delete operations."""
    labels = list(g.node_labels)
    edges = dict(zip(g.edges, g.edge_labels))
    n = len(labels)
    for _ in range(edits):
        op = int(rng.integers(4))
        if op == 0 and n:
            labels[int(rng.integers(n))] = node_alphabet[int(rng.integers(len(node_alphabet)))]
        elif op == 1 and edges:
            keys = sorted(edges)
            e = keys[int(rng.integers(len(keys)))]
            edges[e] = edge_alphabet[int(rng.integers(len(edge_alphabet)))]
        elif op == 2 and edges:
            keys = sorted(edges)
            del edges[keys[int(rng.integers(len(keys)))]]
        elif n >= 2:
            i, j = sorted(int(v) for v in rng.choice(n, size=2, replace=False))
            edges.setdefault((i, j), edge_alphabet[int(rng.integers(len(edge_alphabet)))])
    keys = sorted(edges)
    return build_graph(n, labels, keys, [edges[k] for k in keys],
                       (node_alphabet, edge_alphabet), name=name)


def synthetic_dataset(seed: int = 0, size: int = 30, n_queries: int = 3, n_min: int = 3,
                      n_max: int = 6, families: int = 5, node_alphabet=("A", "B", "C"),
                      edge_alphabet=("-", "=")):
    """Seeded dataset of small graphs in a few families, plus query graphs.

    Each family has a random base graph; members and queries are random
    perturbations of a base, so distances to a query spread over a useful
    range of thresholds.  Returns ``(dataset, queries)`` where ``dataset``
    is a list of ``(id, graph)`` pairs.
    """
    rng = np.random.default_rng(seed)
    bases = []
    for f in range(families):
        n = int(rng.integers(n_min, n_max + 1))
        m = int(rng.integers(n - 1, min(n * (n - 1) // 2, 2 * n) + 1))
        bases.append(random_graph(rng, n, m, node_alphabet, edge_alphabet, name=f"base{f}"))
    dataset = []
    for t in range(size):
        gid = f"g{t:03d}"
        base = bases[t % families]
        dataset.append((gid, perturb(base, rng, int(rng.integers(0, 5)), node_alphabet,
                                     edge_alphabet, name=gid)))
    queries = []
    for t in range(n_queries):
        base = bases[int(rng.integers(families))]
        queries.append(perturb(base, rng, int(rng.integers(0, 3)), node_alphabet, edge_alphabet,
                               name=f"q{t}"))
    return dataset, queries
