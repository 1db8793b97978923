"""Hopcroft-Karp maximum bipartite matching with a Hall-violator extractor."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Mapping, Sequence, TypeVar

L = TypeVar("L", bound=Hashable)
R = TypeVar("R", bound=Hashable)

_INF = float("inf")


def hopcroft_karp(adj: Mapping[L, Sequence[R]]) -> dict[L, R]:
    """Maximum matching of a bipartite graph given as left vertex -> right neighbours.

    Neighbour lists are scanned in the given order, so results are deterministic.
    """
    left = list(adj)
    match_l: dict = {}
    match_r: dict = {}
    dist: dict = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if u in match_l:
                dist[u] = _INF
            else:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u) -> bool:
        for v in adj[u]:
            w = match_r.get(v)
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in left:
            if u not in match_l:
                dfs(u)
    return match_l


def hall_violator(adj: Mapping[L, Sequence[R]], matching: Mapping[L, R]) -> set:
    """Left vertices reachable by alternating paths from unmatched left vertices.

    When the matching is maximum and not left-perfect, this set ``X`` has
    ``|N(X)| < |X|``.
    """
    match_r = {v: u for u, v in matching.items()}
    seen = {u for u in adj if u not in matching}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            w = match_r.get(v)
            if w is not None and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen
