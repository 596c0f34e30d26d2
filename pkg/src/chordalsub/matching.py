"""Hopcroft-Karp maximum bipartite matching on adjacency lists.

Left vertices are 0..nl-1, right vertices 0..nr-1; `adj[u]` lists the
right neighbors of left vertex u.  Deterministic for a fixed adjacency
order (no sets, no hashing of vertices).
"""

from collections import deque

INF = float("inf")


def hopcroft_karp(adj: list[list[int]], nr: int) -> tuple[int, list[int], list[int]]:
    """Return (matching size, match_left, match_right); -1 marks unmatched."""
    nl = len(adj)
    match_l = [-1] * nl
    match_r = [-1] * nr
    dist = [INF] * nl

    def bfs() -> bool:
        queue = deque()
        for u in range(nl):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] is INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    size = 0
    while bfs():
        for u in range(nl):
            if match_l[u] == -1 and dfs(u):
                size += 1
    return size, match_l, match_r
