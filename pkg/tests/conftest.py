"""Shared builders for the test suite: random graphs, exhaustive enumeration,
and dense Hamiltonians built independently of the package's operators."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from qmcstream.graph import EdgeStream, WeightedEdge, WeightedGraph
from qmcstream.rng import substream

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def random_graph(rng, n, p=0.4, weights=(1,)):
    """Erdos-Renyi style graph; weights drawn uniformly from `weights`."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                w = Fraction(int(weights[int(rng.integers(0, len(weights)))]))
                edges.append(WeightedEdge(u, v, w))
    return WeightedGraph(n, edges)


def random_connected_graph(rng, n, extra_p=0.3, weights=(1,)):
    """Random spanning tree plus extra edges; always connected."""
    edges = {}
    order = list(rng.permutation(n))
    for i in range(1, n):
        u = order[i]
        v = order[int(rng.integers(0, i))]
        pair = (min(u, v), max(u, v))
        edges[pair] = Fraction(int(weights[int(rng.integers(0, len(weights)))]))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_p:
                edges[(u, v)] = Fraction(int(weights[int(rng.integers(0, len(weights)))]))
    return WeightedGraph(n, [WeightedEdge(u, v, w) for (u, v), w in sorted(edges.items())])


def random_stream(rng, n, max_edges, weights=(1,)):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    k = int(rng.integers(1, min(max_edges, len(pairs)) + 1))
    edges = tuple(
        WeightedEdge(u, v, Fraction(int(weights[int(rng.integers(0, len(weights)))])))
        for u, v in pairs[:k]
    )
    return EdgeStream(n, edges)


def _mask_connected(mask, pairs, n):
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(pairs):
        if (mask >> i) & 1:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def connected_graphs_iso_free(n):
    """One representative per isomorphism class of connected graphs on n vertices."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = len(pairs)
    pair_index = {p: i for i, p in enumerate(pairs)}
    maps = np.array(
        [
            [pair_index[tuple(sorted((perm[u], perm[v])))] for (u, v) in pairs]
            for perm in itertools.permutations(range(n))
        ]
    )
    masks = np.arange(1 << m, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(m)) & 1).astype(np.int64)
    pow2 = (np.int64(1) << np.arange(m)).astype(np.int64)
    canon = masks.copy()
    for pm in maps:
        canon = np.minimum(canon, bits[:, pm] @ pow2)
    out = []
    for mask in masks[canon == masks]:
        mask = int(mask)
        if mask and _mask_connected(mask, pairs, n):
            edges = [WeightedEdge(u, v) for i, (u, v) in enumerate(pairs) if (mask >> i) & 1]
            out.append(WeightedGraph(n, edges))
    return out


def dense_qmc_hamiltonian(g: WeightedGraph) -> np.ndarray:
    """Q = sum_e w_e (I - XX - YY - ZZ)/4 built by explicit Kronecker products.

    Deliberately independent of the package's matrix-free operator: qubit i of
    the oracle convention is bit i of the index, so qubit 0 is the LAST
    Kronecker factor.
    """
    verts = g.non_isolated()
    qubit = {u: i for i, u in enumerate(verts)}
    q = len(verts)
    dim = 1 << q
    h = np.zeros((dim, dim), dtype=complex)
    for e in g.edges:
        for term, sign in (("I", 1), ("X", -1), ("Y", -1), ("Z", -1)):
            factors = ["I"] * q
            if term != "I":
                factors[qubit[e.u]] = term
                factors[qubit[e.v]] = term
            acc = np.eye(1, dtype=complex)
            for f in reversed(range(q)):
                acc = np.kron(acc, PAULI[factors[f]])
            h += sign * float(e.w) / 4 * acc
    return h


def fresh_rng(*path):
    return substream(0xC0FFEE, *path)
