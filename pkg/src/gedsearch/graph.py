"""Labeled graph data model.

Graphs are simple, undirected and immutable.  Node ids are dense integers
``0..n-1``; whatever identifiers the caller (or a dataset file) used are kept
in :attr:`LabeledGraph.original_ids` for reporting.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "SelfLoop",
    "DuplicateEdge",
    "UnknownLabel",
    "DanglingEndpoint",
    "UnknownNode",
    "InvalidSize",
    "LabeledGraph",
    "BranchStructure",
    "OrientedArcSet",
    "build_graph",
    "branch_structure",
    "orient",
    "star_cycle_instance",
    "random_graph",
]


class GraphError(ValueError):
    """Base class for invalid graph constructions."""


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class UnknownLabel(GraphError):
    pass


class DanglingEndpoint(GraphError):
    pass


class UnknownNode(GraphError, KeyError):
    pass


class InvalidSize(GraphError):
    pass


def _label_key(label: Any) -> tuple:
    # total order over heterogeneous label values (str, int, tuples with None)
    return (type(label).__name__, repr(label))


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Simple undirected labeled graph.

    Attributes
    ----------
    node_labels : tuple
        ``node_labels[v]`` is the label of node ``v``.
    edges : tuple of (int, int)
        Canonical edges ``(i, j)`` with ``i < j``, sorted lexicographically.
    edge_labels : tuple
        Labels parallel to ``edges``.
    alphabet_v, alphabet_e : frozenset
        Declared node and edge label alphabets.
    original_ids : tuple
        Caller-side identifier of each dense node id.
    name : str
        Optional graph identifier (file stem, dataset id, ...).
    node_attrs, edge_attrs : tuple of dict, optional
        Opaque attributes carried through from the source file.
    """

    node_labels: tuple
    edges: tuple
    edge_labels: tuple
    alphabet_v: frozenset
    alphabet_e: frozenset
    original_ids: tuple = ()
    name: str = ""
    node_attrs: tuple = ()
    edge_attrs: tuple = ()
    _adj: tuple = field(default=(), repr=False, compare=False)
    _edge_index: Mapping = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.node_labels)
        adj: list[list[int]] = [[] for _ in range(n)]
        index = {}
        for e, (i, j) in enumerate(self.edges):
            adj[i].append(j)
            adj[j].append(i)
            index[(i, j)] = e
            index[(j, i)] = e
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_edge_index", index)
        if not self.original_ids:
            object.__setattr__(self, "original_ids", tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.node_labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple:
        """Neighborhood of ``v``, sorted."""
        self._check_node(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self._adj[v])

    def incident_edges(self, v: int) -> list[int]:
        """Indices (into :attr:`edges`) of the edges incident to ``v``."""
        self._check_node(v)
        return [self._edge_index[(v, u)] for u in self._adj[v]]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_index

    def edge_id(self, u: int, v: int) -> int:
        return self._edge_index[(u, v)]

    def edge_label(self, u: int, v: int) -> Any:
        try:
            return self.edge_labels[self._edge_index[(u, v)]]
        except KeyError:
            raise KeyError(f"no edge {{{u}, {v}}}") from None

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=int)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def _check_node(self, v) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise UnknownNode(f"node {v!r} not in graph with {self.n} nodes")

    def same_structure(self, other: "LabeledGraph") -> bool:
        """Equality of labels and edges, ignoring side tables and names."""
        return (
            self.node_labels == other.node_labels
            and self.edges == other.edges
            and self.edge_labels == other.edge_labels
        )

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.same_structure(other)
            and self.alphabet_v == other.alphabet_v
            and self.alphabet_e == other.alphabet_e
        )

    def __hash__(self):
        return hash((self.node_labels, self.edges, self.edge_labels))

    def __repr__(self):
        name = f" {self.name!r}" if self.name else ""
        return f"<LabeledGraph{name} n={self.n} m={self.m}>"


@dataclass(frozen=True)
class BranchStructure:
    """Vertex label plus the multiset of its incident edge labels."""

    center_label: Any
    incident_edge_labels: tuple

    @property
    def multiset(self) -> Counter:
        return Counter(self.incident_edge_labels)

    def __len__(self):
        return len(self.incident_edge_labels)


@dataclass(frozen=True)
class OrientedArcSet:
    """``g_arcs`` orients every edge of G as ``(i, j)``, ``i < j``;
    ``h_arcs`` contains both orientations of every edge of H."""

    g_arcs: tuple
    h_arcs: tuple


def build_graph(
    nodes: Sequence[Hashable] | int,
    node_labels: Mapping | Sequence,
    edges: Iterable[tuple] = (),
    edge_labels: Mapping | Sequence | None = None,
    alphabets: tuple[Iterable, Iterable] | None = None,
    *,
    default_edge_label: Any = "-",
    name: str = "",
    node_attrs: Sequence[dict] | None = None,
    edge_attrs: Sequence[dict] | None = None,
) -> LabeledGraph:
    """Validate and build a :class:`LabeledGraph`.

    ``nodes`` is either a node count or a sequence of caller-side node ids,
    which are mapped to dense ids in order.  ``node_labels`` and
    ``edge_labels`` may be mappings (keyed by caller id / by edge tuple) or
    sequences parallel to ``nodes`` / ``edges``.  When ``alphabets`` is
    omitted, they are collected from the labels that occur.
    """
    if isinstance(nodes, (int, np.integer)):
        nodes = list(range(int(nodes)))
    else:
        nodes = list(nodes)
    dense = {}
    for pos, v in enumerate(nodes):
        if v in dense:
            raise GraphError(f"node id {v!r} listed twice")
        dense[v] = pos

    if isinstance(node_labels, Mapping):
        try:
            nl = tuple(node_labels[v] for v in nodes)
        except KeyError as err:
            raise UnknownLabel(f"node {err.args[0]!r} has no label") from None
    else:
        nl = tuple(node_labels)
        if len(nl) != len(nodes):
            raise GraphError("node_labels must be parallel to nodes")

    edges = [tuple(e) for e in edges]
    if edge_labels is None:
        el = [default_edge_label] * len(edges)
    elif isinstance(edge_labels, Mapping):
        el = []
        for e in edges:
            if e in edge_labels:
                el.append(edge_labels[e])
            elif (e[1], e[0]) in edge_labels:
                el.append(edge_labels[(e[1], e[0])])
            else:
                raise UnknownLabel(f"edge {e!r} has no label")
    else:
        el = list(edge_labels)
        if len(el) != len(edges):
            raise GraphError("edge_labels must be parallel to edges")

    canon: dict[tuple[int, int], int] = {}
    for pos, (u, v) in enumerate(edges):
        if u not in dense or v not in dense:
            missing = u if u not in dense else v
            raise DanglingEndpoint(f"edge ({u!r}, {v!r}) references unknown node {missing!r}")
        a, b = dense[u], dense[v]
        if a == b:
            raise SelfLoop(f"self-loop at node {u!r}")
        key = (a, b) if a < b else (b, a)
        if key in canon:
            raise DuplicateEdge(f"edge {{{u!r}, {v!r}}} given twice")
        canon[key] = pos

    if alphabets is None:
        alpha_v, alpha_e = frozenset(nl), frozenset(el)
    else:
        alpha_v, alpha_e = frozenset(alphabets[0]), frozenset(alphabets[1])
        for lab in nl:
            if lab not in alpha_v:
                raise UnknownLabel(f"node label {lab!r} not in node alphabet")
        for lab in el:
            if lab not in alpha_e:
                raise UnknownLabel(f"edge label {lab!r} not in edge alphabet")

    order = sorted(canon)
    if edge_attrs is not None:
        edge_attrs = tuple(dict(edge_attrs[canon[k]]) for k in order)
    return LabeledGraph(
        node_labels=nl,
        edges=tuple(order),
        edge_labels=tuple(el[canon[k]] for k in order),
        alphabet_v=alpha_v,
        alphabet_e=alpha_e,
        original_ids=tuple(nodes),
        name=name,
        node_attrs=tuple(dict(a) for a in node_attrs) if node_attrs is not None else (),
        edge_attrs=edge_attrs or (),
    )


def branch_structure(g: LabeledGraph, v: int) -> BranchStructure:
    """Branch structure of ``v``: its label and its incident edge labels."""
    g._check_node(v)
    labels = sorted((g.edge_labels[e] for e in g.incident_edges(v)), key=_label_key)
    return BranchStructure(g.node_labels[v], tuple(labels))


def orient(g: LabeledGraph, h: LabeledGraph) -> OrientedArcSet:
    g_arcs = tuple(g.edges)
    h_arcs = tuple(sorted([(k, l) for k, l in h.edges] + [(l, k) for k, l in h.edges]))
    return OrientedArcSet(g_arcs, h_arcs)


def star_cycle_instance(n: int, node_label: Any = "v", edge_label: Any = "e"):
    """Unlabeled star ``S_n`` (center 0) and cycle ``C_n`` on ``n`` nodes."""
    if n < 3:
        raise InvalidSize(f"star/cycle family needs n >= 3, got {n}")
    labels = [node_label] * n
    star = build_graph(n, labels, [(0, i) for i in range(1, n)],
                       default_edge_label=edge_label, name=f"S{n}")
    cycle = build_graph(n, labels, [(i, (i + 1) % n) for i in range(n)],
                        default_edge_label=edge_label, name=f"C{n}")
    return star, cycle


def random_graph(
    rng: np.random.Generator,
    n: int,
    m: int | None = None,
    node_alphabet: Sequence = ("A", "B"),
    edge_alphabet: Sequence = ("-",),
    name: str = "",
) -> LabeledGraph:
    """Random simple graph with ``n`` nodes and (at most) ``m`` edges.

    Labels are drawn uniformly; the declared alphabets are the full
    ``node_alphabet``/``edge_alphabet`` so that graphs drawn with the same
    alphabets are comparable.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if m is None:
        m = int(rng.integers(0, len(pairs) + 1))
    m = min(m, len(pairs))
    chosen = sorted(rng.choice(len(pairs), size=m, replace=False).tolist()) if m else []
    edges = [pairs[c] for c in chosen]
    nl = [node_alphabet[int(rng.integers(len(node_alphabet)))] for _ in range(n)]
    el = [edge_alphabet[int(rng.integers(len(edge_alphabet)))] for _ in edges]
    return build_graph(n, nl, edges, el, (node_alphabet, edge_alphabet), name=name)
