"""Loop classes, maximal loop classes and the essential class."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import networkx as nx

from .errors import DepthExceeded, MultipleEssentialClasses, NoEssentialClass
from .net import Omega, symbolic


@dataclass(frozen=True)
class Component:
    id: int
    members: tuple
    loop: bool
    essential: bool

    @property
    def maximal(self) -> bool:
        # a loop class is maximal iff it is a whole strongly connected component
        return self.loop

    @property
    def kind(self) -> str:
        return "loop" if self.loop else "transient"


@dataclass
class ClassGraph:
    omega: Omega
    components: list
    component_of: list
    condensation: nx.DiGraph

    @property
    def essential(self) -> Component:
        return next(c for c in self.components if c.essential)

    def loop_classes(self, include_essential: bool = True) -> list:
        return [c for c in self.components if c.loop and (include_essential or not c.essential)]

    def component_containing(self, vid: int) -> Component:
        return self.components[self.component_of[vid]]

    def edges_within(self, comp: Component) -> list:
        """(parent, child position, child, matrix) for edges inside ``comp``."""
        members = set(comp.members)
        return [(vid, pos, cid, ch.matrix)
                for vid in comp.members
                for pos, (cid, ch) in enumerate(self.omega.edges[vid])
                if cid in members]

    def steps_to_essential(self) -> dict:
        """Shortest number of edges from each vertex into the essential class."""
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.omega)))
        for vid, row in enumerate(self.omega.edges):
            g.add_edges_from((cid, vid) for cid, _ in row)
        g.add_node("E")
        g.add_edges_from(("E", v) for v in self.essential.members)
        dist = nx.single_source_shortest_path_length(g, "E")
        return {v: d - 1 for v, d in dist.items() if v != "E"}

    def format(self) -> str:
        lines = []
        for c in self.components:
            members = ",".join(str(v + 1) for v in c.members)
            lines.append(f"{c.id}  kind={c.kind}  maximal={str(c.maximal).lower()}  "
                         f"essential={str(c.essential).lower()}  members=[{members}]")
        return "\n".join(lines) + "\n"


def build(omega: Omega) -> ClassGraph:
    """Condense the reduced-vector graph into its strongly connected parts."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(omega)))
    for vid, row in enumerate(omega.edges):
        g.add_edges_from((vid, cid) for cid, _ in row)
    sccs = sorted((sorted(c) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    component_of = [0] * len(omega)
    for i, members in enumerate(sccs):
        for v in members:
            component_of[v] = i
    cond = nx.DiGraph()
    cond.add_nodes_from(range(len(sccs)))
    for u, v in g.edges:
        if component_of[u] != component_of[v]:
            cond.add_edge(component_of[u], component_of[v])
    comps = []
    for i, members in enumerate(sccs):
        loop = len(members) > 1 or g.has_edge(members[0], members[0])
        essential = loop and cond.out_degree(i) == 0
        comps.append(Component(i, tuple(members), loop, essential))
    n_ess = sum(c.essential for c in comps)
    if n_ess == 0:
        raise NoEssentialClass("no child-closed loop class found")
    if n_ess > 1:
        raise MultipleEssentialClasses(f"{n_ess} child-closed loop classes found")
    return ClassGraph(omega, comps, component_of, cond)


@dataclass(frozen=True)
class Membership:
    """Where one symbolic representation of x ends up."""

    path: object
    component: Component

    @property
    def essential(self) -> bool:
        return self.component.essential


def classify(graph: ClassGraph, x, max_depth: Optional[int] = None) -> list:
    """Component reached by the tail of each representation of x.

    Exact when the walk detects a period; otherwise the component of the
    deepest vertex is reported, provided it is a loop class.
    """
    if max_depth is None:
        max_depth = 4 * len(graph.omega)
    out = []
    for p in symbolic(graph.omega, x, max_depth):
        tail = p.ids[p.cycle_start] if p.is_periodic else p.ids[-1]
        comp = graph.component_containing(tail)
        if not comp.loop:
            raise DepthExceeded(f"tail of x = {x} not in a loop class after {max_depth} levels")
        out.append(Membership(p, comp))
    return out
