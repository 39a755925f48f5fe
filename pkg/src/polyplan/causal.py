"""Causal-graph construction and classification.

The causal graph of an instance has the state variables as vertices and
an edge x -> y whenever some operator writing y reads x. For unary
operators on binary variables the read set of an operator is its prevail
set (the implicit pre-condition only touches the written variable), so
the edge rule reduces to: x in prv, y = post_var.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import PlanningInstance, VariableId
from .errors import StructuralError


@dataclass(frozen=True)
class CausalGraph:
    vertices: tuple[VariableId, ...]
    edges: frozenset[tuple[VariableId, VariableId]]


@dataclass
class GraphReport:
    """Classification of a causal graph.

    is_polytree means the directed graph is acyclic and its underlying
    undirected multigraph is acyclic too; a pair of antiparallel edges
    x -> y, y -> x therefore already disqualifies a graph. When the
    graph is not a polytree, undirected_cycle_witness lists the vertices
    of one offending undirected cycle.
    """

    is_dag: bool
    is_polytree: bool
    max_indegree: int
    indegree_of: dict[VariableId, int]
    undirected_cycle_witness: Optional[tuple[VariableId, ...]]


def build_causal_graph(inst: PlanningInstance) -> CausalGraph:
    edges = set()
    for op in inst.operators:
        for var in op.prv:
            edges.add((var, op.post_var))
    return CausalGraph(inst.variables, frozenset(edges))


def indegree(g: CausalGraph, v: VariableId) -> int:
    if v not in g.vertices:
        raise StructuralError(f"vertex {v.name!r} is not in the graph")
    return sum(1 for _, dst in g.edges if dst == v)


def _sorted_edges(g: CausalGraph) -> list[tuple[VariableId, VariableId]]:
    return sorted(g.edges, key=lambda e: (e[0].index, e[1].index))


def _is_dag(g: CausalGraph) -> bool:
    # Kahn's algorithm; leftovers mean a directed cycle.
    indeg = {v: 0 for v in g.vertices}
    succs: dict[VariableId, list[VariableId]] = {v: [] for v in g.vertices}
    for src, dst in _sorted_edges(g):
        indeg[dst] += 1
        succs[src].append(dst)
    queue = deque(v for v in g.vertices if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in succs[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(g.vertices)


def _undirected_cycle(g: CausalGraph) -> Optional[tuple[VariableId, ...]]:
    """Find an undirected cycle by union-find over the collapsed edges.

    Directed edges are deduplicated, but x -> y and y -> x stay distinct
    inputs, so an antiparallel pair joins an already-connected component
    and is reported as the 2-cycle (x, y).
    """
    parent = {v: v for v in g.vertices}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    forest: dict[VariableId, list[VariableId]] = {v: [] for v in g.vertices}
    for src, dst in _sorted_edges(g):
        a, b = find(src), find(dst)
        if a == b:
            # Close the cycle: path src -> dst through the forest so far.
            prev = {src: None}
            queue = deque([src])
            while queue:
                v = queue.popleft()
                if v == dst:
                    break
                for w in forest[v]:
                    if w not in prev:
                        prev[w] = v
                        queue.append(w)
            path = [dst]
            while path[-1] != src:
                path.append(prev[path[-1]])
            return tuple(reversed(path))
        parent[a] = b
        forest[src].append(dst)
        forest[dst].append(src)
    return None


def classify(g: CausalGraph) -> GraphReport:
    indegrees = {v: 0 for v in g.vertices}
    for _, dst in g.edges:
        indegrees[dst] += 1
    witness = _undirected_cycle(g)
    is_dag = _is_dag(g)
    return GraphReport(
        is_dag=is_dag,
        is_polytree=is_dag and witness is None,
        max_indegree=max(indegrees.values(), default=0),
        indegree_of=indegrees,
        undirected_cycle_witness=witness,
    )


def to_dot(g: CausalGraph, name: str = "causal_graph") -> str:
    """Render the graph as a DOT digraph; isolated vertices appear as nodes."""
    touched = {v for edge in g.edges for v in edge}
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        if v not in touched:
            lines.append(f'  "{v.name}";')
    for src, dst in _sorted_edges(g):
        lines.append(f'  "{src.name}" -> "{dst.name}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
