"""CSR graph representation, file I/O, transformations and generators.

Graphs are immutable after construction: the underlying numpy arrays are
marked read-only and may be shared freely across threads.  Two on-disk
formats are supported:

* ``.adj`` -- whitespace-separated text: a header token
  (``AdjacencyGraph`` / ``WeightedAdjacencyGraph``), then ``n``, ``m``,
  ``n`` offsets, ``m`` targets and, when weighted, ``m`` weights.
  The file stores ``n`` offsets; the final ``offsets[n] = m`` entry is
  synthesized on load.
* ``.bin`` / ``.wbin`` -- little-endian binary: ``u64 n``, ``u64 m``,
  ``u64 size`` (= ``24 + (n+1)*8 + m*4``), ``(n+1) x u64`` offsets,
  ``m x u32`` targets, and for ``.wbin`` a trailing ``m x f32`` weight
  block.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np
from numba import njit, prange

ADJ_HEADER = b"AdjacencyGraph"
WADJ_HEADER = b"WeightedAdjacencyGraph"
_BIN_HEADER_BYTES = 24


class GraphFormatError(ValueError):
    """Raised for malformed graph files; carries the offending position."""

    def __init__(self, message, path=None, line=None, byte=None):
        pos = []
        if path is not None:
            pos.append(str(path))
        if line is not None:
            pos.append(f"line {line}")
        if byte is not None:
            pos.append(f"byte {byte}")
        suffix = f" ({', '.join(pos)})" if pos else ""
        super().__init__(message + suffix)
        self.path = path
        self.line = line
        self.byte = byte


def _freeze(a):
    a.setflags(write=False)
    return a


class Graph:
    """Immutable directed graph in compressed-sparse-row form.

    Attributes:
        offsets: int64 array of length n+1, non-decreasing, offsets[n] == m.
        targets: uint32 (or int64 when n >= 2**32) array of length m.
        weights: optional float64 array of length m, all >= 0.
        transpose: optional Graph over the reversed edges.
    """

    __slots__ = ("offsets", "targets", "weights", "transpose")

    def __init__(self, offsets, targets, weights=None, transpose=None, _validate=True):
        self.offsets = _freeze(np.ascontiguousarray(offsets, dtype=np.int64))
        tgt = np.ascontiguousarray(targets)
        if tgt.dtype != np.uint32 and tgt.dtype != np.int64:
            tgt = tgt.astype(np.uint32 if self.n < 2**32 else np.int64)
        self.targets = _freeze(tgt)
        self.weights = None
        if weights is not None:
            self.weights = _freeze(np.ascontiguousarray(weights, dtype=np.float64))
        self.transpose = transpose
        if _validate:
            self._validate()

    @property
    def n(self):
        return self.offsets.shape[0] - 1

    @property
    def m(self):
        return self.targets.shape[0]

    def _validate(self):
        off, tgt = self.offsets, self.targets
        if off.shape[0] < 1 or off[0] != 0:
            raise ValueError("offsets must start at 0")
        if off[-1] != tgt.shape[0]:
            raise ValueError(f"offsets[n]={off[-1]} != m={tgt.shape[0]}")
        if off.shape[0] > 1 and np.any(np.diff(off) < 0):
            raise ValueError("offsets must be non-decreasing")
        if tgt.shape[0] and (self.n == 0 or int(tgt.max()) >= self.n):
            raise ValueError("edge target out of range")
        if self.weights is not None:
            if self.weights.shape[0] != tgt.shape[0]:
                raise ValueError("weight count does not match edge count")
            if self.weights.shape[0] and float(self.weights.min()) < 0:
                raise ValueError("negative edge weight")
        if self.transpose is not None:
            t = self.transpose
            if t.n != self.n or t.m != self.m:
                raise ValueError("transpose shape mismatch")
            if not _same_edge_multiset(t, self, reverse=True):
                raise ValueError("transpose edge set does not mirror forward edges")

    def neighbors(self, v):
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def out_degree(self, v):
        return int(self.offsets[v + 1] - self.offsets[v])

    def with_transpose(self):
        """Return this graph with a transpose view attached (built if absent)."""
        if self.transpose is not None:
            return self
        t = transpose(self)
        return Graph(self.offsets, self.targets, self.weights, transpose=t,
                     _validate=False)

    def is_symmetric(self):
        """True iff the edge multiset is closed under reversal."""
        return _same_edge_multiset(self, self, reverse=True)

    def __repr__(self):
        w = ", weighted" if self.weights is not None else ""
        return f"Graph(n={self.n}, m={self.m}{w})"


@dataclass
class GraphStats:
    """Sampled eccentricity statistics; the bound never exceeds the diameter."""

    n: int
    m: int
    diameter_lower_bound: int
    sample_count: int


def _edge_sources(g):
    counts = np.diff(g.offsets)
    return np.repeat(np.arange(g.n, dtype=np.int64), counts)


def _same_edge_multiset(a, b, reverse=False):
    if a.m != b.m or a.n != b.n:
        return False
    if a.m == 0:
        return True
    sa, ta = _edge_sources(a), a.targets.astype(np.int64)
    sb, tb = _edge_sources(b), b.targets.astype(np.int64)
    if reverse:
        sb, tb = tb, sb
    ka = np.sort(sa * a.n + ta, kind="stable")
    kb = np.sort(sb * a.n + tb, kind="stable")
    return bool(np.array_equal(ka, kb))


def graphs_equal(a, b):
    """Structural equality: identical CSR arrays and weights."""
    if a.n != b.n or a.m != b.m:
        return False
    if not np.array_equal(a.offsets, b.offsets):
        return False
    if not np.array_equal(a.targets, b.targets):
        return False
    if (a.weights is None) != (b.weights is None):
        return False
    if a.weights is not None and not np.array_equal(a.weights, b.weights):
        return False
    return True


def from_edges(n, src, dst, weights=None, sort=True):
    """Build a Graph from parallel edge arrays (canonically row-sorted)."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape:
        raise ValueError("src/dst length mismatch")
    if src.shape[0]:
        if src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n:
            raise ValueError("edge endpoint out of range")
    if sort and src.shape[0]:
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)[order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    if src.shape[0]:
        np.add.at(offsets, src + 1, 1)
    offsets = np.cumsum(offsets)
    return Graph(offsets, dst, weights)


# ---------------------------------------------------------------------------
# text format (.adj)
# ---------------------------------------------------------------------------

def _token_position(data, token_index):
    """Line (1-based) and byte offset of the token at token_index."""
    count = -1
    in_tok = False
    line = 1
    for i, ch in enumerate(data):
        ws = ch in (0x20, 0x09, 0x0A, 0x0D, 0x0B, 0x0C)
        if ws:
            in_tok = False
            if ch == 0x0A:
                line += 1
        elif not in_tok:
            in_tok = True
            count += 1
            if count == token_index:
                return line, i
    return line, len(data)


def _parse_int_block(tokens, start, count, data, path, what):
    block = tokens[start:start + count]
    try:
        return np.array(block, dtype=np.int64) if count else np.empty(0, np.int64)
    except (ValueError, OverflowError):
        for i, t in enumerate(block):
            try:
                int(t)
            except ValueError:
                line, byte = _token_position(data, start + i)
                raise GraphFormatError(
                    f"invalid {what} token {t[:32]!r}", path, line, byte) from None
        raise


def _parse_float_block(tokens, start, count, data, path, what):
    block = tokens[start:start + count]
    try:
        return np.array(block, dtype=np.float64) if count else np.empty(0, np.float64)
    except ValueError:
        for i, t in enumerate(block):
            try:
                float(t)
            except ValueError:
                line, byte = _token_position(data, start + i)
                raise GraphFormatError(
                    f"invalid {what} token {t[:32]!r}", path, line, byte) from None
        raise


def load_adj(path, weighted=None):
    """Load a text adjacency-graph file.

    ``weighted=None`` detects the variant from the header; passing a bool
    enforces it.
    """
    path = Path(path)
    data = path.read_bytes()
    tokens = data.split()
    if not tokens:
        raise GraphFormatError("empty file, missing header", path, 1, 0)
    header = tokens[0]
    if header not in (ADJ_HEADER, WADJ_HEADER):
        raise GraphFormatError(
            f"malformed header {header[:40]!r}", path, 1, 0)
    has_w = header == WADJ_HEADER
    if weighted is not None and weighted != has_w:
        raise GraphFormatError(
            f"header {header.decode()} does not match weighted={weighted}",
            path, 1, 0)
    if len(tokens) < 3:
        raise GraphFormatError("missing vertex/edge counts", path,
                               *_token_position(data, len(tokens)))
    counts = _parse_int_block(tokens, 1, 2, data, path, "count")
    n, m = int(counts[0]), int(counts[1])
    if n < 0 or m < 0:
        raise GraphFormatError(f"negative counts n={n} m={m}", path,
                               *_token_position(data, 1))
    expected = 3 + n + m + (m if has_w else 0)
    if len(tokens) != expected:
        raise GraphFormatError(
            f"token count mismatch: expected {expected}, found {len(tokens)}",
            path, *_token_position(data, min(len(tokens), expected)))

    offsets = _parse_int_block(tokens, 3, n, data, path, "offset")
    if n:
        if offsets[0] != 0:
            raise GraphFormatError("first offset must be 0", path,
                                   *_token_position(data, 3))
        bad = np.flatnonzero((offsets < 0) | (offsets > m))
        if bad.size == 0 and n > 1:
            bad = np.flatnonzero(np.diff(offsets) < 0) + 1
        if bad.size:
            i = int(bad[0])
            raise GraphFormatError(
                f"offset out of range at index {i}: {int(offsets[i])}",
                path, *_token_position(data, 3 + i))
    full_offsets = np.empty(n + 1, dtype=np.int64)
    full_offsets[:n] = offsets
    full_offsets[n] = m

    targets = _parse_int_block(tokens, 3 + n, m, data, path, "target")
    if m:
        bad = np.flatnonzero((targets < 0) | (targets >= n))
        if bad.size:
            i = int(bad[0])
            raise GraphFormatError(
                f"target out of range at edge {i}: {int(targets[i])} >= n={n}",
                path, *_token_position(data, 3 + n + i))

    weights_arr = None
    if has_w:
        weights_arr = _parse_float_block(tokens, 3 + n + m, m, data, path, "weight")
        bad = np.flatnonzero(~(weights_arr >= 0))
        if bad.size:
            i = int(bad[0])
            raise GraphFormatError(
                f"negative or invalid weight at edge {i}", path,
                *_token_position(data, 3 + n + m + i))
    return Graph(full_offsets, targets, weights_arr)


def save_adj(g, path):
    """Write the canonical text serialization of ``g``."""
    path = Path(path)
    chunks = [WADJ_HEADER if g.weights is not None else ADJ_HEADER]
    chunks.append(str(g.n).encode())
    chunks.append(str(g.m).encode())
    if g.n:
        chunks.append(b"\n".join(str(int(o)).encode() for o in g.offsets[:-1]))
    if g.m:
        chunks.append(b"\n".join(str(int(t)).encode() for t in g.targets))
    if g.weights is not None and g.m:
        chunks.append(b"\n".join(repr(float(w)).encode() for w in g.weights))
    path.write_bytes(b"\n".join(chunks) + b"\n")


# ---------------------------------------------------------------------------
# binary format (.bin / .wbin)
# ---------------------------------------------------------------------------

def load_bin(path):
    """Load a binary graph file; ``.wbin`` paths carry a weight block."""
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _BIN_HEADER_BYTES:
        raise GraphFormatError(
            f"truncated file: {len(data)} bytes, need >= {_BIN_HEADER_BYTES}",
            path, byte=len(data))
    n, m, size_field = struct.unpack_from("<QQQ", data, 0)
    if n >= 2**32:
        raise GraphFormatError(f"vertex count {n} exceeds 32-bit target format",
                               path, byte=0)
    base = _BIN_HEADER_BYTES + (n + 1) * 8 + m * 4
    if size_field != base:
        raise GraphFormatError(
            f"size-field mismatch: header says {size_field}, layout needs {base}",
            path, byte=16)
    weighted = path.suffix == ".wbin"
    need = base + (m * 4 if weighted else 0)
    if len(data) < need:
        raise GraphFormatError(
            f"truncated file: {len(data)} bytes, need {need}", path,
            byte=len(data))
    offsets = np.frombuffer(data, dtype="<u8", count=n + 1,
                            offset=_BIN_HEADER_BYTES).astype(np.int64)
    if offsets[0] != 0 or offsets[-1] != m:
        raise GraphFormatError(
            f"offset block invalid: first={int(offsets[0])} last={int(offsets[-1])} m={m}",
            path, byte=_BIN_HEADER_BYTES)
    if n and np.any(np.diff(offsets) < 0):
        i = int(np.flatnonzero(np.diff(offsets) < 0)[0]) + 1
        raise GraphFormatError(f"offsets decrease at index {i}", path,
                               byte=_BIN_HEADER_BYTES + i * 8)
    targets = np.frombuffer(data, dtype="<u4", count=m,
                            offset=_BIN_HEADER_BYTES + (n + 1) * 8).astype(np.uint32)
    if m:
        bad = np.flatnonzero(targets >= n)
        if bad.size:
            i = int(bad[0])
            raise GraphFormatError(
                f"target out of range at edge {i}: {int(targets[i])} >= n={n}",
                path, byte=_BIN_HEADER_BYTES + (n + 1) * 8 + i * 4)
    weights = None
    if weighted:
        weights = np.frombuffer(data, dtype="<f4", count=m,
                                offset=base).astype(np.float64)
        if m and float(weights.min()) < 0:
            i = int(np.flatnonzero(weights < 0)[0])
            raise GraphFormatError(f"negative weight at edge {i}", path,
                                   byte=base + i * 4)
    return Graph(offsets, targets, weights)


def save_bin(g, path):
    """Write the binary serialization; weighted graphs require a .wbin path."""
    path = Path(path)
    if g.n >= 2**32:
        raise ValueError("binary format stores 32-bit targets; graph too large")
    weighted = path.suffix == ".wbin"
    if (g.weights is not None) != weighted:
        raise ValueError("weighted graphs save to .wbin, unweighted to .bin")
    size_field = _BIN_HEADER_BYTES + (g.n + 1) * 8 + g.m * 4
    with open(path, "wb") as f:
        f.write(struct.pack("<QQQ", g.n, g.m, size_field))
        f.write(g.offsets.astype("<u8").tobytes())
        f.write(g.targets.astype("<u4").tobytes())
        if weighted:
            f.write(g.weights.astype("<f4").tobytes())


def load_graph(path, weighted=None):
    """Dispatch on extension: .adj -> load_adj, .bin/.wbin -> load_bin."""
    p = Path(path)
    if p.suffix == ".adj":
        return load_adj(p, weighted)
    if p.suffix in (".bin", ".wbin"):
        return load_bin(p)
    raise GraphFormatError(f"unknown graph extension {p.suffix!r}", p)


# ---------------------------------------------------------------------------
# transformations
# ---------------------------------------------------------------------------

@njit(cache=True)
def _transpose_scatter(offsets, targets, t_offsets, t_targets, t_perm):
    n = offsets.shape[0] - 1
    cursor = t_offsets[:-1].copy()
    for u in range(n):
        for e in range(offsets[u], offsets[u + 1]):
            v = targets[e]
            k = cursor[v]
            t_targets[k] = u
            t_perm[k] = e
            cursor[v] = k + 1


def transpose(g):
    """Reverse every edge; adjacency lists come out sorted by target."""
    t_offsets = np.zeros(g.n + 1, dtype=np.int64)
    if g.m:
        np.add.at(t_offsets, g.targets.astype(np.int64) + 1, 1)
    t_offsets = np.cumsum(t_offsets)
    t_targets = np.empty(g.m, dtype=g.targets.dtype)
    t_perm = np.empty(g.m, dtype=np.int64)
    if g.m:
        _transpose_scatter(g.offsets, g.targets, t_offsets, t_targets, t_perm)
    t_weights = g.weights[t_perm] if g.weights is not None else None
    return Graph(t_offsets, t_targets, t_weights, _validate=False)


def symmetrize(g):
    """Close the edge set under reversal, dropping self-loops and duplicates.

    Output adjacency lists are sorted and duplicate-free.  For weighted
    inputs each surviving undirected edge keeps the minimum weight seen in
    either direction.
    """
    if g.m == 0:
        return Graph(g.offsets, np.empty(0, dtype=g.targets.dtype),
                     np.empty(0, np.float64) if g.weights is not None else None,
                     _validate=False)
    src = _edge_sources(g)
    dst = g.targets.astype(np.int64)
    both_src = np.concatenate([src, dst])
    both_dst = np.concatenate([dst, src])
    keep = both_src != both_dst
    both_src, both_dst = both_src[keep], both_dst[keep]
    weights = None
    if g.weights is not None:
        w2 = np.concatenate([g.weights, g.weights])[keep]
        order = np.lexsort((w2, both_dst, both_src))
        both_src, both_dst, w2 = both_src[order], both_dst[order], w2[order]
        key = both_src * g.n + both_dst
        first = np.ones(key.shape[0], dtype=bool)
        first[1:] = key[1:] != key[:-1]
        both_src, both_dst, weights = both_src[first], both_dst[first], w2[first]
    else:
        key = np.unique(both_src * g.n + both_dst)
        both_src, both_dst = key // g.n, key % g.n
    return from_edges(g.n, both_src, both_dst, weights, sort=weights is not None)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def gen_grid(rows, cols, seed=0):
    """4-neighbor lattice with both edge directions; n = rows*cols."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    n = rows * cols
    m = 2 * (rows * (cols - 1) + cols * (rows - 1))
    if n >= 2**63 or m >= 2**63:
        raise OverflowError("grid too large")
    idx = np.arange(n, dtype=np.int64).reshape(rows, cols)
    srcs, dsts = [], []
    if cols > 1:
        srcs += [idx[:, :-1].ravel(), idx[:, 1:].ravel()]
        dsts += [idx[:, 1:].ravel(), idx[:, :-1].ravel()]
    if rows > 1:
        srcs += [idx[:-1, :].ravel(), idx[1:, :].ravel()]
        dsts += [idx[1:, :].ravel(), idx[:-1, :].ravel()]
    if not srcs:
        return Graph(np.zeros(n + 1, dtype=np.int64), np.empty(0, np.uint32))
    g = from_edges(n, np.concatenate(srcs), np.concatenate(dsts))
    assert g.m == m
    return g


def gen_random(n, avg_degree, seed=0, directed=True):
    """Uniform random multigraph with mean out-degree ``avg_degree``.

    Deterministic for a fixed seed.  Self-loops are discarded, so the
    realized degree is marginally below the target on tiny graphs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    if directed:
        m = int(round(n * avg_degree))
        src = rng.integers(0, n, size=m, dtype=np.int64)
        dst = rng.integers(0, n, size=m, dtype=np.int64)
    else:
        half = int(round(n * avg_degree / 2))
        u = rng.integers(0, n, size=half, dtype=np.int64)
        v = rng.integers(0, n, size=half, dtype=np.int64)
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
    keep = src != dst
    return from_edges(n, src[keep], dst[keep])


def gen_weights(g, lo=1.0, hi=100.0, seed=0):
    """Attach uniform random weights in [lo, hi); symmetric edges get equal
    weights when the graph is symmetric."""
    rng = np.random.default_rng(seed)
    src = _edge_sources(g).astype(np.uint64)
    dst = g.targets.astype(np.uint64)
    # hash-derived weight per undirected pair keeps (u,v) and (v,u) equal
    a = np.minimum(src, dst)
    b = np.maximum(src, dst)
    salt = np.uint64(rng.integers(0, 2**62))
    mix = a * np.uint64(0x9E3779B97F4A7C15) ^ b * np.uint64(0xC2B2AE3D27D4EB4F) ^ salt
    mix ^= mix >> np.uint64(31)
    mix *= np.uint64(0xBF58476D1CE4E5B9)
    frac = (mix >> np.uint64(11)).astype(np.float64) / float(2**53)
    w = lo + frac * (hi - lo)
    return Graph(g.offsets, g.targets, w, _validate=False)


# ---------------------------------------------------------------------------
# diameter estimation
# ---------------------------------------------------------------------------

@njit(cache=True)
def _bfs_ecc(offsets, targets, source, dist, queue):
    dist[:] = -1
    dist[source] = 0
    queue[0] = source
    head, tail = 0, 1
    ecc = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if du > ecc:
            ecc = du
        for e in range(offsets[u], offsets[u + 1]):
            v = targets[e]
            if dist[v] == -1:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
    return ecc


@njit(parallel=True, cache=True)
def _sampled_ecc(offsets, targets, sources, groups):
    n = offsets.shape[0] - 1
    out = np.zeros(groups, dtype=np.int64)
    per = (sources.shape[0] + groups - 1) // groups
    for gidx in prange(groups):
        dist = np.empty(n, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        best = 0
        for k in range(gidx * per, min((gidx + 1) * per, sources.shape[0])):
            ecc = _bfs_ecc(offsets, targets, sources[k], dist, queue)
            if ecc > best:
                best = ecc
        out[gidx] = best
    return out


def estimate_diameter(g, samples=1000, seed=0):
    """Lower-bound the diameter by the max eccentricity of sampled sources."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if g.n == 0 or g.m == 0:
        return GraphStats(g.n, g.m, 0, samples)
    rng = np.random.default_rng(seed)
    sources = rng.integers(0, g.n, size=samples, dtype=np.int64)
    groups = min(samples, max(1, numba.get_num_threads() * 2))
    best = int(_sampled_ecc(g.offsets, g.targets, sources, groups).max())
    return GraphStats(g.n, g.m, best, samples)
