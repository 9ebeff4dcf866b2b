# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shortest-path kernels; same contract as ``_kernels_py``."""
from array import array

from libc.math cimport INFINITY, isinf
from libc.stdlib cimport free, malloc

TIE_RTOL = 1e-9

cdef struct Item:
    double key
    Py_ssize_t node


cdef inline bint _less(Item a, Item b) nogil:
    return a.key < b.key or (a.key == b.key and a.node < b.node)


cdef void _push(Item* heap, Py_ssize_t* size, Item item) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(item, heap[parent]):
            heap[i] = heap[parent]
            i = parent
        else:
            break
    heap[i] = item


cdef Item _pop(Item* heap, Py_ssize_t* size) nogil:
    cdef Item top = heap[0]
    cdef Item last
    cdef Py_ssize_t i = 0, child, n
    size[0] -= 1
    n = size[0]
    if n > 0:
        last = heap[n]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and _less(heap[child + 1], heap[child]):
                child += 1
            if _less(heap[child], last):
                heap[i] = heap[child]
                i = child
            else:
                break
        heap[i] = last
    return top


def distances_from(const long long[:] indptr, const long long[:] indices,
                   const double[:] weights, Py_ssize_t source):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m = indices.shape[0]
    dist_arr = array("d", [INFINITY]) * n
    cdef double[:] dist = dist_arr
    cdef unsigned char* done = <unsigned char*> malloc(n + 1)
    # lazy deletion: at most one push per relaxed edge plus the source
    cdef Item* heap = <Item*> malloc((m + 1) * sizeof(Item))
    cdef Py_ssize_t size = 0, k, u, v
    cdef double d, nd
    cdef Item it
    if done == NULL or heap == NULL:
        free(done)
        free(heap)
        raise MemoryError()
    try:
        with nogil:
            for k in range(n):
                done[k] = 0
            dist[source] = 0.0
            it.key = 0.0
            it.node = source
            _push(heap, &size, it)
            while size > 0:
                it = _pop(heap, &size)
                u = it.node
                if done[u]:
                    continue
                done[u] = 1
                d = it.key
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    nd = d + weights[k]
                    if nd < dist[v]:
                        dist[v] = nd
                        it.key = nd
                        it.node = v
                        _push(heap, &size, it)
    finally:
        free(done)
        free(heap)
    return dist_arr


def lex_path(const long long[:] indptr, const long long[:] indices,
             const double[:] weights, const double[:] dist_to_goal,
             Py_ssize_t start, Py_ssize_t goal):
    cdef Py_ssize_t u = start, v, k, nxt
    cdef double du, dv, tol
    if isinf(dist_to_goal[start]):
        return None
    path = [start]
    while u != goal:
        du = dist_to_goal[u]
        tol = TIE_RTOL * (du if du > 1.0 else 1.0)
        nxt = -1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            dv = dist_to_goal[v]
            if dv < du and dv + weights[k] <= du + tol:
                nxt = v
                break
        if nxt < 0:
            raise RuntimeError("no tight edge found while reconstructing path")
        path.append(nxt)
        u = nxt
    return path
