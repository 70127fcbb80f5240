"""All-pairs distances and geodesic queries.

Visibility and positionability both reduce to questions about the
*interval* of a pair: the vertices ``w`` with ``d(u,w) + d(w,v) = d(u,v)``,
i.e. the vertices lying on at least one u,v-geodesic.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import EnumerationLimitError
from .graph_core import SierpinskiGraph, VertexSet, iter_bits

DEFAULT_PATH_LIMIT = 10_000
_BFS_CHUNK = 512


def _bool_to_mask(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _column_masks(hit: np.ndarray) -> list[int]:
    packed = np.packbits(hit, axis=0, bitorder="little")
    return [int.from_bytes(packed[:, j].tobytes(), "little") for j in range(hit.shape[1])]


def _as_mask(X: VertexSet | int) -> int:
    return X if isinstance(X, int) else X.mask


def all_pairs_distances(g: SierpinskiGraph) -> np.ndarray:
    """BFS distance matrix (uint16), computed in chunks of sources."""
    rows, cols = [], []
    for u, nbrs in enumerate(g.adjacency):
        rows.extend([u] * len(nbrs))
        cols.extend(nbrs)
    adj = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(g.order, g.order))
    out = np.empty((g.order, g.order), dtype=np.uint16)
    for start in range(0, g.order, _BFS_CHUNK):
        idx = np.arange(start, min(start + _BFS_CHUNK, g.order))
        block = shortest_path(adj, method="D", unweighted=True, directed=False, indices=idx)
        out[start:start + len(idx)] = block.astype(np.uint16)
    return out


class GeodesicOracle:
    """Distance matrix of a graph plus lazily cached per-pair geodesic data."""

    def __init__(self, graph: SierpinskiGraph, dist: np.ndarray, path_limit: int = DEFAULT_PATH_LIMIT):
        self.graph = graph
        self.dist = dist
        self.path_limit = path_limit
        self._n = graph.order
        self._interval: dict[int, int] = {}
        self._interiors: dict[int, tuple[int, ...] | None] = {}
        self._through: dict[int, int] = {}
        self._dags: dict[int, list[list[int]]] = {}

    def distance(self, u: int, v: int) -> int:
        return int(self.dist[u, v])

    def interval_mask(self, u: int, v: int) -> int:
        """Closed interval I(u,v) as a bitmask (includes u and v)."""
        key = u * self._n + v if u <= v else v * self._n + u
        m = self._interval.get(key)
        if m is None:
            du = self.dist[u].astype(np.int32)
            dv = self.dist[v].astype(np.int32)
            m = _bool_to_mask(du + dv == int(self.dist[u, v]))
            self._interval[key] = m
        return m

    def interior_mask(self, u: int, v: int) -> int:
        return self.interval_mask(u, v) & ~(1 << u) & ~(1 << v)

    def predecessors(self, u: int, w: int) -> list[int]:
        """Neighbours of w one step closer to u."""
        dw = self.dist[u, w]
        return [x for x in self.graph.adjacency[w] if self.dist[u, x] + 1 == dw]

    def geodesic_dag(self, u: int) -> list[list[int]]:
        dag = self._dags.get(u)
        if dag is None:
            dag = [self.predecessors(u, w) for w in range(self.graph.order)]
            self._dags[u] = dag
        return dag

    def count_geodesics(self, u: int, v: int) -> int:
        """Number of u,v-geodesics, by dynamic programming over the interval."""
        if u == v:
            return 1
        inside = self.interval_mask(u, v)
        layer = sorted(iter_bits(inside), key=lambda w: self.dist[u, w])
        count = {u: 1}
        for w in layer[1:]:
            count[w] = sum(count[x] for x in self.predecessors(u, w) if inside >> x & 1)
        return count[v]

    def enumerate_geodesics(self, u: int, v: int, limit: int | None = None) -> list[list[int]]:
        """All u,v-geodesics as vertex lists, sorted; raises past ``limit`` paths."""
        limit = self.path_limit if limit is None else limit
        inside = self.interval_mask(u, v)
        paths: list[list[int]] = []

        def extend(w: int, tail: list[int]) -> None:
            if w == u:
                paths.append([u] + tail[::-1])
                if len(paths) > limit:
                    raise EnumerationLimitError(f"more than {limit} geodesics between {u} and {v}")
                return
            tail.append(w)
            for x in self.predecessors(u, w):
                if inside >> x & 1:
                    extend(x, tail)
            tail.pop()

        extend(v, [])
        paths.sort()
        return paths

    def geodesic_interiors(self, u: int, v: int) -> tuple[int, ...] | None:
        """Interior bitmask of every u,v-geodesic, or None when there are too many to list."""
        key = u * self._n + v if u <= v else v * self._n + u
        try:
            return self._interiors[key]
        except KeyError:
            pass
        try:
            paths = self.enumerate_geodesics(u, v)
        except EnumerationLimitError:
            out = None
        else:
            ends = (1 << u) | (1 << v)
            out = tuple(sorted({sum(1 << w for w in path) & ~ends for path in paths}))
        self._interiors[key] = out
        return out

    def through_mask(self, a: int, b: int) -> int:
        """Vertices c != a such that a lies on some c,b-geodesic."""
        key = a * self._n + b
        m = self._through.get(key)
        if m is None:
            col_a = self.dist[:, a].astype(np.int32)
            col_b = self.dist[:, b].astype(np.int32)
            m = _bool_to_mask(col_a + int(self.dist[a, b]) == col_b) & ~(1 << a)
            self._through[key] = m
        return m

    # dense tables for small graphs; T[a][b] matches the per-pair methods
    def through_table(self) -> list[list[int]]:
        tab = getattr(self, "_through_tab", None)
        if tab is None:
            D = self.dist.astype(np.int32)
            tab = []
            for a in range(self._n):
                hit = (D[:, a][:, None] + D[a][None, :]) == D
                hit[a, :] = False
                tab.append(_column_masks(hit))
            self._through_tab = tab
        return tab

    def interior_table(self) -> list[list[int]]:
        tab = getattr(self, "_interior_tab", None)
        if tab is None:
            D = self.dist.astype(np.int32)
            tab = []
            for u in range(self._n):
                # column v: w with d(u,w) + d(w,v) = d(u,v)
                hit = (D[u][:, None] + D) == D[u][None, :]
                hit[u, :] = False
                row = _column_masks(hit)
                tab.append([m & ~(1 << v) for v, m in enumerate(row)])
            self._interior_tab = tab
        return tab

    def interiors_table(self) -> list[list[tuple[int, ...] | None]]:
        tab = getattr(self, "_interiors_tab", None)
        if tab is None:
            n = self._n
            tab = [[()] * n for _ in range(n)]
            for u in range(n):
                for v in range(u + 1, n):
                    tab[u][v] = tab[v][u] = self.geodesic_interiors(u, v)
            self._interiors_tab = tab
        return tab

    def exists_geodesic_avoiding(self, u: int, v: int, blocked: VertexSet | int) -> bool:
        """True iff some u,v-geodesic has no interior vertex in ``blocked``.

        Layered search from u through the interval, so the cost does not
        depend on how many geodesics there are.
        """
        if u == v:
            return True
        allowed = self.interval_mask(u, v) & ~(_as_mask(blocked) & ~(1 << u) & ~(1 << v))
        d = int(self.dist[u, v])
        row = self.dist[u]
        adj = self.graph.adjacency
        frontier = {u}
        for step in range(1, d + 1):
            nxt = set()
            for w in frontier:
                for x in adj[w]:
                    if allowed >> x & 1 and row[x] == step:
                        nxt.add(x)
            if not nxt:
                return False
            frontier = nxt
        return v in frontier

    def some_blocker_on_any_geodesic(self, u: int, v: int, X: VertexSet | int) -> bool:
        """True iff some x in X other than u, v lies on a u,v-geodesic."""
        duv = self.dist[u, v]
        du, dv = self.dist[u], self.dist[v]
        for x in iter_bits(_as_mask(X)):
            if x != u and x != v and int(du[x]) + int(dv[x]) == duv:
                return True
        return False

    # fast mask forms used by the checkers and solvers
    def visible(self, u: int, v: int, xmask: int) -> bool:
        key = u * self._n + v if u <= v else v * self._n + u
        interiors = self._interiors.get(key, False)
        if interiors is False:
            interiors = self.geodesic_interiors(u, v)
        if interiors is None:
            return self.exists_geodesic_avoiding(u, v, xmask)
        for m in interiors:
            if not m & xmask:
                return True
        return False

    def positionable(self, u: int, v: int, xmask: int) -> bool:
        return not self.interior_mask(u, v) & xmask

    def to_csv(self) -> str:
        return "\n".join(",".join(str(int(x)) for x in row) for row in self.dist) + "\n"


def build_oracle(g: SierpinskiGraph, path_limit: int = DEFAULT_PATH_LIMIT) -> GeodesicOracle:
    return GeodesicOracle(g, all_pairs_distances(g), path_limit)
