"""K shortest loopless paths through the word graph (Yen's deviation search).

Weights are non-negative, so plain Dijkstra serves as the core shortest
path routine.  All ties break on the lexicographic node-ordinal sequence
of the path, which makes the result independent of hash ordering.
"""

from __future__ import annotations

import heapq

from ..errors import NoPath
from .wordgraph import WordGraph, weighted_adjacency

Adjacency = dict[int, list[tuple[int, float]]]


def _dijkstra(
    adj: Adjacency,
    source: int,
    target: int,
    banned_nodes: frozenset[int],
    banned_edges: frozenset[tuple[int, int]],
) -> tuple[float, list[int]] | None:
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (source,))]
    best_seen: dict[int, float] = {}
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        if node == target:
            return cost, list(path)
        if best_seen.get(node, float("inf")) < cost:
            continue
        for succ, w in adj.get(node, ()):
            if succ in banned_nodes or succ in path or (node, succ) in banned_edges:
                continue
            nxt = cost + w
            if nxt < best_seen.get(succ, float("inf")):
                best_seen[succ] = nxt
                heapq.heappush(heap, (nxt, path + (succ,)))
    return None


def k_shortest_paths(graph: WordGraph, k: int) -> list[tuple[float, list[int]]]:
    """Up to k loopless START..END paths by total edge weight, ascending.

    Fewer come back when the graph has fewer simple paths.  Paths are
    node-ordinal lists including the terminals.
    """
    if k < 1:
        return []
    adj = weighted_adjacency(graph)
    source, target = graph.start.ordinal, graph.end.ordinal
    first = _dijkstra(adj, source, target, frozenset(), frozenset())
    if first is None:
        raise NoPath("word graph has no START..END path")

    found: list[tuple[float, list[int]]] = [first]
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen = {tuple(first[1])}

    while len(found) < k:
        _, last_path = found[-1]
        for spur_i in range(len(last_path) - 1):
            root = last_path[: spur_i + 1]
            banned_edges = set()
            for _, p in found:
                if len(p) > spur_i and p[: spur_i + 1] == list(root):
                    banned_edges.add((p[spur_i], p[spur_i + 1]))
            banned_nodes = frozenset(root[:-1])
            spur = _dijkstra(
                adj, root[-1], target, banned_nodes, frozenset(banned_edges)
            )
            if spur is None:
                continue
            total_path = tuple(list(root[:-1]) + spur[1])
            if total_path in seen:
                continue
            root_cost = 0.0
            ok = True
            for a, b in zip(root, root[1:]):
                w = next((wt for (n, wt) in adj.get(a, ()) if n == b), None)
                if w is None:
                    ok = False
                    break
                root_cost += w
            if not ok:
                continue
            seen.add(total_path)
            heapq.heappush(candidates, (root_cost + spur[0], total_path))
        if not candidates:
            break
        cost, path = heapq.heappop(candidates)
        found.append((cost, list(path)))
    return found
