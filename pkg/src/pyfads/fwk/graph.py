from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CycleError, DuplicateProducer, DuplicateTaskId, MissingProducer, TypeMismatch
from .task import Task

SOURCE = "<source>"


@dataclass
class DataflowGraph:
    """Validated wiring between tasks.

    ``edges`` holds ``(producer_id, consumer_id, key)`` triples; collections
    injected by the event source have no producer task and create no edge.
    """

    tasks: dict[str, Task]
    edges: list[tuple[str, str, str]]
    sources: dict[str, str]
    producers: dict[str, str] = field(default_factory=dict)

    def successors(self, task_id):
        return sorted({c for p, c, _ in self.edges if p == task_id})

    def predecessors(self, task_id):
        return sorted({p for p, c, _ in self.edges if c == task_id})


def build_graph(tasks, sources) -> DataflowGraph:
    """Wire ``tasks`` together by matching output keys to input keys.

    ``sources`` is either a list of collection keys or a mapping key -> type
    tag; untyped sources accept any consumer type tag.
    """
    by_id: dict[str, Task] = {}
    for t in tasks:
        if t.id in by_id:
            raise DuplicateTaskId(t.id)
        by_id[t.id] = t

    source_types = dict(sources) if isinstance(sources, dict) else {k: None for k in sources}
    producers: dict[str, str] = {}
    out_types: dict[str, str | None] = {}
    for key, tag in source_types.items():
        producers[key] = SOURCE
        out_types[key] = tag
    for t in by_id.values():
        for port in t.outputs:
            if port.name in producers:
                raise DuplicateProducer(port.name, producers[port.name], t.id)
            producers[port.name] = t.id
            out_types[port.name] = port.type_tag

    edges = []
    for t in by_id.values():
        for port in t.inputs:
            prod = producers.get(port.name)
            if prod is None:
                raise MissingProducer(port.name, t.id)
            tag = out_types[port.name]
            if tag is not None and tag != port.type_tag:
                raise TypeMismatch(port.name, tag, port.type_tag, t.id)
            if prod != SOURCE:
                edges.append((prod, t.id, port.name))

    cycle = _find_cycle(by_id, edges)
    if cycle:
        raise CycleError(cycle)
    return DataflowGraph(by_id, edges, source_types, producers)


def _find_cycle(by_id, edges):
    adj: dict[str, list[str]] = {k: [] for k in by_id}
    for p, c, _ in edges:
        adj[p].append(c)
    for k in adj:
        adj[k].sort()
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(adj, WHITE)
    for root in sorted(adj):
        if color[root] != WHITE:
            continue
        # iterative DFS; path mirrors the grey nodes
        path = [root]
        iters = [iter(adj[root])]
        color[root] = GREY
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                iters.pop()
            elif color[nxt] == GREY:
                return path[path.index(nxt):] + [nxt]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                iters.append(iter(adj[nxt]))
    return None


def topo_schedule(graph: DataflowGraph) -> list[list[str]]:
    """Group tasks into ready sets.

    A task lands in set ``k`` when its latest producer sits in set ``k-1``;
    ids inside a set are sorted.
    """
    preds = {k: set() for k in graph.tasks}
    for p, c, _ in graph.edges:
        preds[c].add(p)
    level: dict[str, int] = {}
    remaining = set(graph.tasks)
    levels = []
    while remaining:
        ready = sorted(t for t in remaining if preds[t].issubset(level))
        for t in ready:
            level[t] = len(levels)
        remaining.difference_update(ready)
        levels.append(ready)
    return levels
