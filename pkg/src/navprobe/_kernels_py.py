"""Pure-Python shortest-path kernels over a CSR adjacency.

Reference implementation for ``_kernels.pyx``; both must return identical
results.  Node indices are assigned in sorted node-id order, so choosing the
smallest index among tied successors yields the lexicographically smallest
node-id sequence.
"""
from __future__ import annotations

import heapq
import math
from array import array

TIE_RTOL = 1e-9


def distances_from(indptr, indices, weights, source: int) -> array:
    n = len(indptr) - 1
    dist = array("d", [math.inf]) * n
    dist[source] = 0.0
    done = bytearray(n)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def lex_path(indptr, indices, weights, dist_to_goal, start: int, goal: int):
    """Walk from ``start`` along tight edges, smallest index first.

    ``dist_to_goal`` must come from ``distances_from(..., goal)``.  Returns
    the node-index list, or ``None`` when ``goal`` is unreachable.
    """
    if math.isinf(dist_to_goal[start]):
        return None
    path = [start]
    u = start
    while u != goal:
        du = dist_to_goal[u]
        tol = TIE_RTOL * max(1.0, du)
        nxt = -1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            dv = dist_to_goal[v]
            if dv < du and dv + weights[k] <= du + tol:
                nxt = v
                break
        if nxt < 0:  # pragma: no cover - unreachable for positive weights
            raise RuntimeError("no tight edge found while reconstructing path")
        path.append(nxt)
        u = nxt
    return path
