"""
Graph Data Models

Pydantic models for weighted directed graphs and their edits.
"""

from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Subset of the vertex range 0..n-1.
VertexSet = FrozenSet[int]

Edge = Tuple[int, int]


class WeightedDigraph(BaseModel):
    """
    Directed graph on vertices 0..n-1 with edge weights in (0, 1].

    The stored pair (j, i) carries p_ji: row j's product includes factor i.
    With ``implicit_self_loops`` every vertex also carries (j, j) with weight 1
    unless an explicit self-edge overrides it.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    edges: Dict[Edge, float] = Field(default_factory=dict)
    implicit_self_loops: bool = True

    @model_validator(mode="after")
    def _check_edges(self) -> "WeightedDigraph":
        for (j, i), p in self.edges.items():
            if not (0 <= j < self.n and 0 <= i < self.n):
                raise ValueError(f"edge ({j}, {i}) outside vertex range 0..{self.n - 1}")
            if not (0.0 < p <= 1.0):
                raise ValueError(f"weight {p} on edge ({j}, {i}) outside (0, 1]")
        return self

    def weight(self, j: int, i: int) -> Optional[float]:
        """Effective weight p_ji, honouring implicit self-loops; None if absent."""
        if (j, i) in self.edges:
            return self.edges[(j, i)]
        if j == i and self.implicit_self_loops:
            return 1.0
        return None

    def has_edge(self, j: int, i: int) -> bool:
        """True if (j, i) is stored explicitly."""
        return (j, i) in self.edges

    def sorted_edges(self) -> List[Tuple[int, int, float]]:
        """Explicit edges as (j, i, p), ascending by (j, i)."""
        return [(j, i, self.edges[(j, i)]) for (j, i) in sorted(self.edges)]

    def non_self_edges(self) -> List[Edge]:
        """Explicit edges with j != i, ascending."""
        return sorted(e for e in self.edges if e[0] != e[1])

    def out_neighbors(self, j: int) -> List[int]:
        """Factors i in row j's product, self-loop included, ascending."""
        return [i for i in range(self.n) if self.weight(j, i) is not None]


class EditKind(str, Enum):
    """Single-edge graph edits."""

    ADD = "add-edge"
    REMOVE = "remove-edge"
    PERTURB = "perturb-weight"


class GraphEdit(BaseModel):
    """An add, remove or weight-perturbation edit on edge (j, i)."""

    model_config = ConfigDict(frozen=True)

    kind: EditKind
    j: int
    i: int
    p: Optional[float] = None
    delta: Optional[float] = None

    @classmethod
    def add(cls, j: int, i: int, p: float) -> "GraphEdit":
        return cls(kind=EditKind.ADD, j=j, i=i, p=p)

    @classmethod
    def remove(cls, j: int, i: int) -> "GraphEdit":
        return cls(kind=EditKind.REMOVE, j=j, i=i)

    @classmethod
    def perturb(cls, j: int, i: int, delta: float) -> "GraphEdit":
        return cls(kind=EditKind.PERTURB, j=j, i=i, delta=delta)


class GraphKind(str, Enum):
    """Synthetic graph families."""

    NULL = "null"
    COMPLETE = "complete"
    STAR_OUT = "star_out"
    STAR_IN = "star_in"
    CHAIN = "chain"
    POSET_CHAIN = "poset_chain"
    CYCLE = "cycle"
    GRID2D = "grid2d"
    WATTS_STROGATZ = "watts_strogatz"
    RANDOM_SPARSE = "random_sparse"
    BUCKYBALL = "buckyball"


class Orientation(str, Enum):
    """Watts-Strogatz edge orientation."""

    UNDIRECTED = "undirected"
    UPPER = "upper"


class GraphDocument(BaseModel):
    """Wire form of a graph: 0-based vertices, edges as [j, i, p]."""

    n: int = Field(ge=1)
    implicit_self_loops: bool = True
    edges: List[Tuple[int, int, float]] = Field(default_factory=list)
