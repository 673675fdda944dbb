"""Undirected binary networks and block-level sufficient statistics.

A network is stored as the strictly upper triangular part of its adjacency
matrix: an edge set over dyads (i, j) with i < j, plus derived structures
(a flat dyad bitset for O(1) lookups and a CSR adjacency for iteration).
Vertex indices are 0-based internally; file I/O is 1-based or labeled.
"""

from __future__ import annotations

import re

import numpy as np


class NetworkFormatError(ValueError):
    """Raised when an input file violates the network format contract."""


def pair_order(i, j):
    """Return the canonical (min, max) ordering of a dyad or block pair."""
    return (i, j) if i <= j else (j, i)


class Network:
    """Immutable simple undirected binary network.

    Parameters
    ----------
    n_vertices : int
        Number of vertices I.
    edges : array-like of shape (E, 2)
        Dyads with 0-based endpoints; normalized to i < j and deduplicated.
    labels : sequence of str, optional
        Vertex labels; round-trip through file I/O when present.
    """

    def __init__(self, n_vertices, edges, labels=None):
        if n_vertices < 1:
            raise ValueError("network needs at least one vertex")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if (edges < 0).any() or (edges >= n_vertices).any():
                raise ValueError("edge endpoint out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            edges = np.unique(np.column_stack([lo, hi]), axis=0)
        self.n_vertices = int(n_vertices)
        self.edges = edges
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n_vertices:
            raise ValueError("label count must match vertex count")

        I = self.n_vertices
        self._dyad_bits = np.zeros(I * (I - 1) // 2, dtype=bool)
        if edges.size:
            self._dyad_bits[self.dyad_index(edges[:, 0], edges[:, 1])] = True
        # symmetric CSR adjacency
        deg = np.zeros(I, dtype=np.int64)
        if edges.size:
            np.add.at(deg, edges[:, 0], 1)
            np.add.at(deg, edges[:, 1], 1)
        self.indptr = np.zeros(I + 1, dtype=np.int64)
        np.cumsum(deg, out=self.indptr[1:])
        self.indices = np.empty(int(self.indptr[-1]), dtype=np.int64)
        fill = self.indptr[:-1].copy()
        for a, b in edges:
            self.indices[fill[a]] = b
            fill[a] += 1
            self.indices[fill[b]] = a
            fill[b] += 1
        for i in range(I):
            self.indices[self.indptr[i]:self.indptr[i + 1]].sort()
        self.degrees = deg

    @property
    def n_edges(self):
        return self.edges.shape[0]

    @property
    def n_dyads(self):
        I = self.n_vertices
        return I * (I - 1) // 2

    @property
    def density(self):
        return self.n_edges / self.n_dyads if self.n_dyads else 0.0

    def dyad_index(self, i, j):
        """Flat upper-triangle slot of dyad (i, j), i != j, in either order."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        lo = np.minimum(i, j)
        hi = np.maximum(i, j)
        I = self.n_vertices
        return lo * (2 * I - lo - 1) // 2 + (hi - lo - 1)

    def has_edge(self, i, j):
        if i == j:
            return False
        return bool(self._dyad_bits[self.dyad_index(i, j)])

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def dense(self, dtype=np.int8):
        """Full symmetric adjacency matrix with zero diagonal."""
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=dtype)
        if self.edges.size:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a


class BlockStats:
    """Edge and dyad counts aggregated over block pairs.

    ``S`` and ``N`` are stored as full symmetric (K, K) matrices whose
    diagonal holds within-block counts; only the upper triangle is
    meaningful as a set of unordered pairs.  Empty blocks are legal
    (all-zero rows).
    """

    def __init__(self, n_blocks, S, block_sizes):
        self.n_blocks = int(n_blocks)
        self.S = np.asarray(S, dtype=np.int64)
        self.block_sizes = np.asarray(block_sizes, dtype=np.int64)

    @property
    def N(self):
        """Dyad counts per block pair, derived from block sizes."""
        nk = self.block_sizes
        N = np.outer(nk, nk)
        np.fill_diagonal(N, nk * (nk - 1) // 2)
        return N

    def copy(self):
        return BlockStats(self.n_blocks, self.S.copy(), self.block_sizes.copy())

    def s(self, k, l):
        return int(self.S[k, l])

    def n(self, k, l):
        if k == l:
            nk = self.block_sizes[k]
            return int(nk * (nk - 1) // 2)
        return int(self.block_sizes[k] * self.block_sizes[l])

    def total_edges(self):
        return int(np.triu(self.S).sum())

    def __eq__(self, other):
        return (
            isinstance(other, BlockStats)
            and self.n_blocks == other.n_blocks
            and np.array_equal(np.triu(self.S), np.triu(other.S))
            and np.array_equal(self.block_sizes, other.block_sizes)
        )


def check_assignment(xi, n_vertices, n_blocks):
    xi = np.asarray(xi, dtype=np.int64)
    if xi.shape != (n_vertices,):
        raise ValueError(f"assignment length {xi.shape} != vertex count {n_vertices}")
    if xi.size and ((xi < 0).any() or (xi >= n_blocks).any()):
        bad = int(np.where((xi < 0) | (xi >= n_blocks))[0][0])
        raise ValueError(f"assignment out of range at vertex {bad}: {xi[bad]}")
    return xi


def block_stats(net, xi, n_blocks):
    """Compute BlockStats for assignment ``xi`` over ``{0..K-1}``."""
    xi = check_assignment(xi, net.n_vertices, n_blocks)
    sizes = np.bincount(xi, minlength=n_blocks).astype(np.int64)
    S = np.zeros((n_blocks, n_blocks), dtype=np.int64)
    if net.edges.size:
        a = xi[net.edges[:, 0]]
        b = xi[net.edges[:, 1]]
        np.add.at(S, (np.minimum(a, b), np.maximum(a, b)), 1)
    S = S + np.triu(S, 1).T
    return BlockStats(n_blocks, S, sizes)


def apply_move(stats, net, xi, vertex, new_block):
    """In-place single-vertex relabeling update of ``stats`` and ``xi``.

    Caller guarantees ``stats`` is consistent with (net, xi); only rows and
    columns touching the old and new block change.
    """
    old = int(xi[vertex])
    new = int(new_block)
    if new < 0 or new >= stats.n_blocks:
        raise ValueError(f"block {new} out of range")
    if old == new:
        return stats
    S = stats.S
    for j in net.neighbors(vertex):
        l = int(xi[j])
        S[old, l] -= 1
        if l != old:
            S[l, old] -= 1
        S[new, l] += 1
        if l != new:
            S[l, new] += 1
    stats.block_sizes[old] -= 1
    stats.block_sizes[new] += 1
    xi[vertex] = new
    return stats


def delta_stats(stats, net, xi, vertex, new_block):
    """Functional variant of :func:`apply_move`; inputs are left untouched."""
    out = stats.copy()
    xi2 = np.array(xi, dtype=np.int64, copy=True)
    apply_move(out, net, xi2, vertex, new_block)
    return out


def _tokenize(path):
    rows = []
    comments = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if "#" in line:
                comments.append(line.split("#", 1)[1].strip())
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            rows.append((lineno, body.split()))
    return rows, comments


def _declared_vertex_count(comments):
    # "# vertices: N" comments let edge lists carry isolated trailing vertices
    for c in comments:
        m = re.match(r"vertices:\s*(\d+)$", c)
        if m:
            return int(m.group(1))
    return 0


def _parse_edge_list(path):
    rows, comments = _tokenize(path)
    declared = _declared_vertex_count(comments)
    toks = [t for _, row in rows for t in row]
    for lineno, row in rows:
        if len(row) != 2:
            raise NetworkFormatError(
                f"{path}:{lineno}: expected two endpoints, got {len(row)}")

    def as_pos_int(t):
        try:
            v = int(t)
        except ValueError:
            return None
        return v if v >= 1 else None

    numeric = all(as_pos_int(t) is not None for t in toks)
    if numeric:
        pairs = []
        max_id = 0
        for lineno, (a, b) in rows:
            ia, ib = int(a), int(b)
            if ia == ib:
                raise NetworkFormatError(f"{path}:{lineno}: self-loop on vertex {ia}")
            pairs.append((ia - 1, ib - 1))
            max_id = max(max_id, ia, ib)
        return max(max_id, declared), pairs, None

    index = {}
    pairs = []
    for lineno, (a, b) in rows:
        if a == b:
            raise NetworkFormatError(f"{path}:{lineno}: self-loop on vertex {a!r}")
        for t in (a, b):
            if t not in index:
                index[t] = len(index)
        pairs.append((index[a], index[b]))
    labels = [None] * len(index)
    for t, i in index.items():
        labels[i] = t
    return len(index), pairs, labels


def _parse_dense(path):
    rows, _ = _tokenize(path)
    if not rows:
        raise NetworkFormatError(f"{path}: empty adjacency matrix")
    mat = []
    for lineno, row in rows:
        vals = []
        for t in row:
            if t not in ("0", "1"):
                raise NetworkFormatError(
                    f"{path}:{lineno}: non-binary entry {t!r}")
            vals.append(int(t))
        mat.append(vals)
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise NetworkFormatError(f"{path}: adjacency matrix is not square")
    a = np.array(mat, dtype=np.int8)
    if np.diag(a).any():
        bad = int(np.flatnonzero(np.diag(a))[0]) + 1
        raise NetworkFormatError(f"{path}: nonzero diagonal at vertex {bad}")
    if not np.array_equal(a, a.T):
        raise NetworkFormatError(f"{path}: adjacency matrix is not symmetric")
    i, j = np.nonzero(np.triu(a, 1))
    return n, list(zip(i.tolist(), j.tolist())), None


def load_network(path, fmt="edge-list"):
    """Load a network from an edge list or dense 0/1 adjacency file.

    Edge lists are whitespace-separated endpoint pairs with ``#`` comments;
    integer endpoints are 1-based ids, anything else is treated as labels
    mapped in first-appearance order.
    """
    if fmt in ("edge-list", "edgelist"):
        n, pairs, labels = _parse_edge_list(path)
    elif fmt in ("dense", "dense-adjacency"):
        n, pairs, labels = _parse_dense(path)
    else:
        raise ValueError(f"unknown network format {fmt!r}")
    return Network(n, np.array(pairs, dtype=np.int64).reshape(-1, 2), labels)


def save_network(net, path):
    """Write an edge list (1-based ids, or labels when present)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# vertices: {net.n_vertices}\n")
        for i, j in net.edges:
            if net.labels is not None:
                fh.write(f"{net.labels[i]}\t{net.labels[j]}\n")
            else:
                fh.write(f"{i + 1}\t{j + 1}\n")
