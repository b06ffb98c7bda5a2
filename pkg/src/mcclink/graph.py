"""Undirected social graph and mutual-clustering-coefficient scores.

The graph is immutable after construction.  Adjacency is kept as sorted
neighbour-index lists, so mutual-friend sets come from an O(deg) sorted
intersection and every operation iterates deterministically.

For a connected pair (u, v) with m mutual friends and l edges among
them, the mutual clustering coefficient is 2*l / (m*(m-1)), defined as
0 when m < 2.  One record is emitted per undirected edge, in canonical
order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import numpy as np

from mcclink import backend
from mcclink.errors import InputError

NodeId = Hashable


@dataclass(frozen=True)
class MccRecord:
    """Per-edge mutual-neighbourhood summary."""

    u: NodeId
    v: NodeId
    m_uv: int
    l_uv: int
    mcc: float


class SocialGraph:
    """Undirected friendship graph with a ground-truth fake flag per node.

    ``nodes`` fixes the canonical node ordering.  Edges are deduplicated;
    reversed duplicates collapse to one undirected edge.  The fake flags
    are only ever used for labeling, never as a model feature.
    """

    def __init__(
        self,
        nodes: Iterable[NodeId],
        edges: Iterable[tuple[NodeId, NodeId]],
        fake: Iterable[NodeId] | Mapping[NodeId, bool] | None = None,
    ):
        self._ids = tuple(nodes)
        self._index = {node: i for i, node in enumerate(self._ids)}
        if len(self._index) != len(self._ids):
            seen = set()
            for node in self._ids:
                if node in seen:
                    raise InputError(f"duplicate node id {node!r}")
                seen.add(node)
        if isinstance(fake, Mapping):
            fake_set = {node for node, flag in fake.items() if flag}
        else:
            fake_set = set(fake) if fake is not None else set()
        for node in fake_set:
            if node not in self._index:
                raise InputError(f"fake flag for unknown node id {node!r}")
        self._fake = tuple(node in fake_set for node in self._ids)

        pair_set = set()
        for u, v in edges:
            iu = self._require(u)
            iv = self._require(v)
            if iu == iv:
                raise InputError(f"self-loop on node {u!r}")
            pair_set.add((iu, iv) if iu < iv else (iv, iu))
        self._edge_pairs = tuple(sorted(pair_set))

        adj: list[list[int]] = [[] for _ in self._ids]
        for iu, iv in self._edge_pairs:
            adj[iu].append(iv)
            adj[iv].append(iu)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._adj_sets = tuple(frozenset(a) for a in self._adj)

    def _require(self, node: NodeId) -> int:
        idx = self._index.get(node)
        if idx is None:
            raise InputError(f"unknown node id {node!r}")
        return idx

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return self._ids

    @property
    def node_count(self) -> int:
        return len(self._ids)

    @property
    def edge_count(self) -> int:
        return len(self._edge_pairs)

    @property
    def edges(self) -> tuple[tuple[NodeId, NodeId], ...]:
        """Edges as id pairs, canonical (lower index first) order."""
        return tuple(
            (self._ids[iu], self._ids[iv]) for iu, iv in self._edge_pairs
        )

    def has_node(self, node: NodeId) -> bool:
        return node in self._index

    def __contains__(self, node: NodeId) -> bool:
        return node in self._index

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        iu = self._require(u)
        iv = self._require(v)
        return iv in self._adj_sets[iu]

    def degree(self, node: NodeId) -> int:
        return len(self._adj[self._require(node)])

    def neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        return tuple(self._ids[i] for i in self._adj[self._require(node)])

    def is_fake(self, node: NodeId) -> bool:
        return self._fake[self._require(node)]

    @property
    def fake_nodes(self) -> tuple[NodeId, ...]:
        return tuple(n for n, f in zip(self._ids, self._fake) if f)

    # index-level views used by the kernels and the feature builder
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(len(self._ids) + 1, dtype=np.int64)
        for i, neigh in enumerate(self._adj):
            indptr[i + 1] = indptr[i] + len(neigh)
        indices = np.fromiter(
            (j for neigh in self._adj for j in neigh),
            dtype=np.int64,
            count=int(indptr[-1]),
        )
        return indptr, indices

    def _edge_index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self._edge_pairs:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy()
        arr = np.asarray(self._edge_pairs, dtype=np.int64)
        return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def _intersect_sorted(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


def mutual_friends(g: SocialGraph, u: NodeId, v: NodeId) -> set[NodeId]:
    """Common neighbours of u and v, excluding u and v themselves."""
    iu = g._require(u)
    iv = g._require(v)
    if iu == iv:
        raise InputError(f"mutual friends of {u!r} with itself are undefined")
    common = _intersect_sorted(g._adj[iu], g._adj[iv])
    return {g.nodes[i] for i in common if i != iu and i != iv}


def count_links_among(g: SocialGraph, s: Iterable[NodeId]) -> int:
    """Number of graph edges with both endpoints in ``s``, each unordered
    pair counted once."""
    idx = sorted({g._require(node) for node in s})
    links = 0
    for p, a in enumerate(idx):
        neigh = g._adj_sets[a]
        for b in idx[p + 1 :]:
            if b in neigh:
                links += 1
    return links


def clustering_coefficient(g: SocialGraph, v: NodeId) -> float:
    """Fraction of a node's neighbour pairs that are themselves linked;
    0.0 for degree below two."""
    k = g.degree(v)
    if k < 2:
        return 0.0
    l_v = count_links_among(g, g.neighbors(v))
    return 2.0 * l_v / (k * (k - 1))


def mutual_clustering_coefficient(g: SocialGraph, u: NodeId, v: NodeId) -> MccRecord:
    """MCC for one connected pair; requires the edge (u, v) to exist."""
    if not g.has_edge(u, v):
        raise InputError(f"no edge between {u!r} and {v!r}")
    iu = g._require(u)
    iv = g._require(v)
    if iu > iv:
        u, v = v, u
    mutual = mutual_friends(g, u, v)
    m = len(mutual)
    l = count_links_among(g, mutual)
    mcc = 2.0 * l / (m * (m - 1)) if m >= 2 else 0.0
    return MccRecord(u=u, v=v, m_uv=m, l_uv=l, mcc=mcc)


def mcc_all(g: SocialGraph) -> list[MccRecord]:
    """MccRecord for every edge, canonical (u, v) order, one per edge."""
    indptr, indices = g._csr()
    eu, ev = g._edge_index_arrays()
    m_arr, l_arr = backend.mcc_counts(indptr, indices, eu, ev)
    records = []
    ids = g.nodes
    for t in range(len(eu)):
        m = int(m_arr[t])
        l = int(l_arr[t])
        mcc = 2.0 * l / (m * (m - 1)) if m >= 2 else 0.0
        records.append(
            MccRecord(u=ids[int(eu[t])], v=ids[int(ev[t])], m_uv=m, l_uv=l, mcc=mcc)
        )
    return records


def load_edge_csv(path) -> list[tuple[str, str]]:
    """Read an edge list: header ``u,v``, one undirected edge per row."""
    edges = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["u", "v"]:
            raise InputError(f"{path}: expected header 'u,v'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise InputError(f"{path}:{lineno}: expected two columns")
            edges.append((row[0].strip(), row[1].strip()))
    return edges


def load_node_csv(path) -> tuple[list[str], set[str]]:
    """Read nodes: header ``id,is_fake`` with is_fake in {0,1}.

    Returns the ids in file order (the canonical ordering) and the set
    of fake ids.
    """
    ids: list[str] = []
    fakes: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["id", "is_fake"]:
            raise InputError(f"{path}: expected header 'id,is_fake'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise InputError(f"{path}:{lineno}: expected two columns")
            node = row[0].strip()
            flag = row[1].strip()
            if flag not in ("0", "1"):
                raise InputError(f"{path}:{lineno}: is_fake must be 0 or 1")
            ids.append(node)
            if flag == "1":
                fakes.add(node)
    return ids, fakes


def load_graph(edges_path, nodes_path) -> SocialGraph:
    ids, fakes = load_node_csv(nodes_path)
    return SocialGraph(ids, load_edge_csv(edges_path), fake=fakes)


def save_edge_csv(g: SocialGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["u", "v"])
        for u, v in g.edges:
            writer.writerow([u, v])


def save_node_csv(g: SocialGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "is_fake"])
        for node in g.nodes:
            writer.writerow([node, 1 if g.is_fake(node) else 0])
