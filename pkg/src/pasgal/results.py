"""Output containers shared by the parallel algorithms and their oracles."""

import numpy as np

#: sentinel for vertices unreachable from the source (hop distances)
UNREACHED = -1


class DistanceArray:
    """Exact hop distances from a source; UNREACHED (-1) where unreachable."""

    __slots__ = ("dist", "source", "rounds")

    def __init__(self, dist, source, rounds=0):
        self.dist = np.asarray(dist, dtype=np.int64)
        self.source = int(source)
        self.rounds = int(rounds)


class WeightedDistanceArray:
    """Exact shortest-path distances; +inf where unreachable."""

    __slots__ = ("dist", "source", "rounds")

    def __init__(self, dist, source, rounds=0):
        self.dist = np.asarray(dist, dtype=np.float64)
        self.source = int(source)
        self.rounds = int(rounds)


class SccLabels:
    """Per-vertex strongly-connected-component ids (partition semantics)."""

    __slots__ = ("label", "rounds")

    def __init__(self, label, rounds=0):
        self.label = np.asarray(label, dtype=np.int64)
        self.rounds = int(rounds)

    @property
    def component_count(self):
        return int(np.unique(self.label).shape[0])


class BccLabels:
    """Per-edge biconnected-component ids plus articulation flags.

    Two storage modes share one interface: oracles provide the per-directed-
    edge label array directly; the parallel pipeline provides per-vertex
    skeleton components (``comp``) plus tree parents, from which edge labels
    are derived on demand (keeping the result O(n) sized).
    """

    __slots__ = ("articulation", "bcc_count", "_edge_label", "_comp", "_parent",
                 "_first")

    def __init__(self, articulation, bcc_count, edge_label=None,
                 comp=None, parent=None, first=None):
        self.articulation = np.asarray(articulation, dtype=bool)
        self.bcc_count = int(bcc_count)
        self._edge_label = edge_label
        self._comp = comp
        self._parent = parent
        self._first = first
        if edge_label is None and (comp is None or parent is None or first is None):
            raise ValueError("need either edge labels or comp+parent+first")

    @property
    def articulation_count(self):
        return int(self.articulation.sum())

    def edge_labels(self, g):
        """Label of every directed edge of ``g`` (both directions equal)."""
        if self._edge_label is not None:
            return self._edge_label
        comp, parent, first = self._comp, self._parent, self._first
        counts = np.diff(g.offsets)
        src = np.repeat(np.arange(g.n, dtype=np.int64), counts)
        dst = g.targets.astype(np.int64)
        # tree edge (p,c): component of c; non-tree edge: component of the
        # endpoint with larger preorder rank (both agree for cross pairs)
        lab = np.where(parent[dst] == src, comp[dst],
                       np.where(parent[src] == dst, comp[src], -1))
        rest = lab == -1
        if rest.any():
            a, b = src[rest], dst[rest]
            lab[rest] = np.where(first[a] > first[b], comp[a], comp[b])
        return lab


def canonical_relabel(labels):
    """Renumber labels by first occurrence so partitions compare as arrays."""
    labels = np.asarray(labels)
    if labels.shape[0] == 0:
        return labels.astype(np.int64)
    uniq, first_idx, inverse = np.unique(labels, return_index=True,
                                         return_inverse=True)
    rank = np.empty(uniq.shape[0], dtype=np.int64)
    rank[np.argsort(first_idx, kind="stable")] = np.arange(uniq.shape[0])
    return rank[inverse.reshape(-1)]


def canonical_edge_partition(g, bcc):
    """Canonical (u<v)-ordered undirected edge labels for comparison."""
    lab = bcc.edge_labels(g)
    counts = np.diff(g.offsets)
    src = np.repeat(np.arange(g.n, dtype=np.int64), counts)
    dst = g.targets.astype(np.int64)
    keep = src < dst
    key = src[keep] * g.n + dst[keep]
    order = np.argsort(key, kind="stable")
    return canonical_relabel(lab[keep][order])
