"""Single-threaded reference algorithms.

These are the baselines the benchmark speedups are computed against and
the exactness oracles for the test suite, so they are deliberately plain
Python: queue BFS, iterative Tarjan SCC, iterative Hopcroft-Tarjan BCC
with an edge stack, and binary-heap Dijkstra.  All DFS-based code uses
explicit stacks; million-vertex chains must not hit the recursion limit.
"""

import heapq

import numpy as np

from .results import (
    UNREACHED,
    BccLabels,
    DistanceArray,
    SccLabels,
    WeightedDistanceArray,
)


def _csr_lists(g):
    return g.offsets.tolist(), g.targets.tolist()


def bfs_queue(g, source):
    """Textbook FIFO breadth-first search; exact hop distances."""
    n = g.n
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range for n={n}")
    off, tgt = _csr_lists(g)
    dist = [UNREACHED] * n
    dist[source] = 0
    queue = [source]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for e in range(off[u], off[u + 1]):
            v = tgt[e]
            if dist[v] == UNREACHED:
                dist[v] = du
                queue.append(v)
    return DistanceArray(np.array(dist, dtype=np.int64), source)


def scc_tarjan(g):
    """Iterative Tarjan strongly-connected components."""
    n = g.n
    off, tgt = _csr_lists(g)
    UNVISITED = -1
    index = [UNVISITED] * n
    low = [0] * n
    on_stack = bytearray(n)
    scc_stack = []
    label = [0] * n
    counter = 0
    next_index = 0

    # frame: vertex, pointer into its edge range
    frame_v = []
    frame_e = []
    for root in range(n):
        if index[root] != UNVISITED:
            continue
        frame_v.append(root)
        frame_e.append(off[root])
        index[root] = low[root] = next_index
        next_index += 1
        scc_stack.append(root)
        on_stack[root] = 1
        while frame_v:
            v = frame_v[-1]
            e = frame_e[-1]
            if e < off[v + 1]:
                frame_e[-1] = e + 1
                w = tgt[e]
                if index[w] == UNVISITED:
                    index[w] = low[w] = next_index
                    next_index += 1
                    scc_stack.append(w)
                    on_stack[w] = 1
                    frame_v.append(w)
                    frame_e.append(off[w])
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                frame_v.pop()
                frame_e.pop()
                if low[v] == index[v]:
                    while True:
                        w = scc_stack.pop()
                        on_stack[w] = 0
                        label[w] = counter
                        if w == v:
                            break
                    counter += 1
                elif frame_v:
                    u = frame_v[-1]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return SccLabels(np.array(label, dtype=np.int64))


def _twin_edges(g):
    """twin[e] = index of the reverse directed edge (symmetric simple graph)."""
    counts = np.diff(g.offsets)
    src = np.repeat(np.arange(g.n, dtype=np.int64), counts)
    dst = g.targets.astype(np.int64)
    fwd = np.lexsort((dst, src))
    rev = np.lexsort((src, dst))
    twin = np.empty(g.m, dtype=np.int64)
    twin[fwd] = rev
    return twin


def bcc_hopcroft_tarjan(g):
    """Iterative Hopcroft-Tarjan biconnectivity with an explicit edge stack.

    Returns per-edge component labels (both directions of an undirected
    edge share a label) and articulation flags.  Requires a symmetric
    simple graph.
    """
    n = g.n
    if not g.is_symmetric():
        raise ValueError("biconnectivity requires a symmetric graph")
    off, tgt = _csr_lists(g)
    twin = _twin_edges(g).tolist()

    disc = [-1] * n
    low = [0] * n
    edge_label = [-1] * g.m
    articulation = bytearray(n)
    timer = 0
    comp_count = 0

    frame_v = []
    frame_e = []
    frame_pe = []  # directed edge id used to enter the vertex, -1 for roots
    estack = []

    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        frame_v.append(root)
        frame_e.append(off[root])
        frame_pe.append(-1)
        root_children = 0
        while frame_v:
            v = frame_v[-1]
            e = frame_e[-1]
            if e < off[v + 1]:
                frame_e[-1] = e + 1
                pe = frame_pe[-1]
                if pe != -1 and e == twin[pe]:
                    continue  # do not traverse the entering edge backwards
                w = tgt[e]
                if disc[w] == -1:
                    if v == root:
                        root_children += 1
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append(e)
                    frame_v.append(w)
                    frame_e.append(off[w])
                    frame_pe.append(e)
                elif disc[w] < disc[v]:
                    estack.append(e)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                frame_v.pop()
                frame_e.pop()
                pe = frame_pe.pop()
                if pe == -1:
                    break
                u = frame_v[-1]  # parent of v
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    # edges above pe on the stack form one component
                    if u != root:
                        articulation[u] = 1
                    while True:
                        ee = estack.pop()
                        edge_label[ee] = comp_count
                        edge_label[twin[ee]] = comp_count
                        if ee == pe:
                            break
                    comp_count += 1
        if root_children >= 2:
            articulation[root] = 1
    return BccLabels(
        articulation=np.frombuffer(bytes(articulation), dtype=np.uint8).astype(bool),
        bcc_count=comp_count,
        edge_label=np.array(edge_label, dtype=np.int64),
    )


def sssp_dijkstra(g, source):
    """Binary-heap Dijkstra with lazy deletion; exact for non-negative weights."""
    n = g.n
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range for n={n}")
    if g.weights is None:
        raise ValueError("weighted graph required")
    if g.m and float(g.weights.min()) < 0:
        raise ValueError("negative edge weight")
    off, tgt = _csr_lists(g)
    wts = g.weights.tolist()
    inf = float("inf")
    dist = [inf] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for e in range(off[u], off[u + 1]):
            v = tgt[e]
            nd = d + wts[e]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return WeightedDistanceArray(np.array(dist, dtype=np.float64), source)
