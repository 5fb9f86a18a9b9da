"""Edit-cost models.

Every model works internally in integer *ticks*: a real cost ``x`` is stored
as ``x * scale``.  All constants of the shipped non-uniform models are
multiples of 0.025, so ``scale = 40`` makes them exact integers; unit costs
use ``scale = 1``.  The ``*_ticks`` methods are what the solvers consume; the
plain methods return real costs for display and tests.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

__all__ = [
    "CostModel",
    "ConstantCosts",
    "ProteinCosts",
    "MissingPayload",
    "MatrixShape",
    "unit_costs",
    "aids_muta_costs",
    "protein_costs",
    "get_cost_model",
    "levenshtein",
    "lsape_small",
    "TAU_MULTIPLIERS",
]

#: dataset-specific threshold multipliers (average node+edge substitution cost)
TAU_MULTIPLIERS = {"unit": 1.0, "aids-muta": 3.575, "protein": 8.375}


class MissingPayload(ValueError):
    """A protein label lacks its structured (type, sequence) payload."""


class MatrixShape(ValueError):
    pass


class CostModel:
    """Node/edge edit costs.

    Subclasses provide ``name``, ``scale`` and the six ``*_ticks`` methods.
    """

    is_unit = False

    def node_subst_ticks(self, a, b) -> int:
        raise NotImplementedError

    def node_del_ticks(self, a) -> int:
        raise NotImplementedError

    def node_ins_ticks(self, b) -> int:
        raise NotImplementedError

    def edge_subst_ticks(self, a, b) -> int:
        raise NotImplementedError

    def edge_del_ticks(self, a) -> int:
        raise NotImplementedError

    def edge_ins_ticks(self, b) -> int:
        raise NotImplementedError

    # real-valued views
    def node_subst(self, a, b) -> float:
        return self.node_subst_ticks(a, b) / self.scale

    def node_del(self, a) -> float:
        return self.node_del_ticks(a) / self.scale

    def node_ins(self, b) -> float:
        return self.node_ins_ticks(b) / self.scale

    def edge_subst(self, a, b) -> float:
        return self.edge_subst_ticks(a, b) / self.scale

    def edge_del(self, a) -> float:
        return self.edge_del_ticks(a) / self.scale

    def edge_ins(self, b) -> float:
        return self.edge_ins_ticks(b) / self.scale

    def to_ticks(self, value) -> Fraction:
        """Exact tick count of a real cost given as int, float or str."""
        if isinstance(value, float):
            value = repr(value)
        return Fraction(value) * self.scale

    def to_real(self, ticks) -> float:
        return float(Fraction(ticks) / self.scale) if isinstance(ticks, Fraction) else ticks / self.scale

    def __repr__(self):
        return f"<CostModel {self.name} scale={self.scale}>"


@dataclass(frozen=True, repr=False)
class ConstantCosts(CostModel):
    """Costs depending only on whether two labels are equal.

    All values are integer ticks.
    """

    name: str
    scale: int
    node_sub: int
    node_del_: int
    node_ins_: int
    edge_sub: int
    edge_del_: int
    edge_ins_: int

    @property
    def is_unit(self) -> bool:
        return self.scale == 1 and (self.node_sub, self.node_del_, self.node_ins_,
                                    self.edge_sub, self.edge_del_, self.edge_ins_) == (1,) * 6

    def node_subst_ticks(self, a, b):
        return 0 if a == b else self.node_sub

    def node_del_ticks(self, a):
        return self.node_del_

    def node_ins_ticks(self, b):
        return self.node_ins_

    def edge_subst_ticks(self, a, b):
        return 0 if a == b else self.edge_sub

    def edge_del_ticks(self, a):
        return self.edge_del_

    def edge_ins_ticks(self, b):
        return self.edge_ins_


def unit_costs() -> ConstantCosts:
    return ConstantCosts("unit", 1, 1, 1, 1, 1, 1, 1)


def aids_muta_costs() -> ConstantCosts:
    """Non-uniform molecule costs: node 5.5 / 2.75, edge 1.65 / 0.825."""
    return ConstantCosts("aids-muta", 40, 220, 110, 110, 66, 33, 33)


def levenshtein(s1: str, s2: str) -> int:
    """Unit-cost string edit distance (two-row dynamic program)."""
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    prev = list(range(len(s2) + 1))
    for i, a in enumerate(s1, 1):
        cur = [i]
        for j, b in enumerate(s2, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a != b)))
        prev = cur
    return prev[-1]


def lsape_small(C: Sequence[Sequence]) -> Any:
    """Optimal error-correcting assignment cost by exhaustive enumeration.

    ``C`` has shape ``(p+1, q+1)``: ``C[r][s]`` substitutes row ``r`` by
    column ``s``, ``C[r][q]`` deletes row ``r`` and ``C[p][s]`` inserts
    column ``s``.  ``C[p][q]`` is ignored.
    """
    rows = [list(r) for r in C]
    if not rows or any(len(r) != len(rows[0]) for r in rows) or len(rows[0]) == 0:
        raise MatrixShape("LSAPE matrix must be a non-empty rectangle")
    p, q = len(rows) - 1, len(rows[0]) - 1
    best = None
    # each row picks a distinct column or deletion (None)
    for choice in itertools.product([None, *range(q)], repeat=p):
        used = [s for s in choice if s is not None]
        if len(used) != len(set(used)):
            continue
        cost = sum(rows[r][q] if s is None else rows[r][s] for r, s in enumerate(choice))
        cost += sum(rows[p][s] for s in range(q) if s not in used)
        if best is None or cost < best:
            best = cost
    return best


def _edge_types(beta) -> list:
    if not isinstance(beta, tuple) or len(beta) != 2:
        raise MissingPayload(f"protein edge label must be (t1, t2), got {beta!r}")
    t1, t2 = beta
    return [t1] if t2 is None else [t1, t2]


@dataclass(frozen=True, repr=False)
class ProteinCosts(CostModel):
    """Protein costs.

    Node labels are ``(type, sequence)``; edge labels are ``(t1, t2)`` with
    ``t2`` possibly ``None``.
    """

    name: str = "protein"
    scale: int = 40
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    NODE_TYPE_MISMATCH = 660  # 16.5
    NODE_PER_LD = 30  # 0.75
    NODE_INDEL = 330  # 8.25
    EDGE_FACTOR = 10  # 0.25

    def node_subst_ticks(self, a, b):
        if not (isinstance(a, tuple) and len(a) == 2 and isinstance(b, tuple) and len(b) == 2):
            raise MissingPayload(f"protein node label must be (type, sequence): {a!r}, {b!r}")
        if a[0] != b[0]:
            return self.NODE_TYPE_MISMATCH
        key = (a[1], b[1])
        if key not in self._cache:
            self._cache[key] = levenshtein(a[1], b[1])
        return self.NODE_PER_LD * self._cache[key]

    def node_del_ticks(self, a):
        return self.NODE_INDEL

    def node_ins_ticks(self, b):
        return self.NODE_INDEL

    def edge_subst_ticks(self, a, b):
        ta, tb = _edge_types(a), _edge_types(b)
        matrix = [[2 * (x != y) for y in tb] + [1] for x in ta]
        matrix.append([1] * len(tb) + [0])
        return self.EDGE_FACTOR * lsape_small(matrix)

    def edge_del_ticks(self, a):
        return self.EDGE_FACTOR * len(_edge_types(a))

    def edge_ins_ticks(self, b):
        return self.EDGE_FACTOR * len(_edge_types(b))


def protein_costs() -> ProteinCosts:
    return ProteinCosts()


_MODELS = {"unit": unit_costs, "aids-muta": aids_muta_costs, "protein": protein_costs}


def get_cost_model(name) -> CostModel:
    """Look up a cost model by name (``unit``, ``aids-muta``, ``protein``)."""
    if isinstance(name, CostModel):
        return name
    try:
        return _MODELS[name]()
    except KeyError:
        raise ValueError(f"unknown cost model {name!r}; choose from {sorted(_MODELS)}") from None
