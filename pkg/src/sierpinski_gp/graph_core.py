"""Sierpiński graphs S_p^n built directly from the digit-word adjacency rule.

Vertices are words ``i_1 ... i_n`` over ``{0, ..., p-1}``.  Each word is
encoded as its base-``p`` value with the most significant digit first, so
numeric order equals lexicographic word order and the vertices sharing a
prefix form one contiguous id range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from .errors import ParameterError, SizeLimitError

if TYPE_CHECKING:
    from .metric import GeodesicOracle

DEFAULT_MAX_VERTICES = 3**9


def encode(digits: Sequence[int], p: int) -> int:
    vid = 0
    for d in digits:
        vid = vid * p + d
    return vid


def decode(vid: int, p: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for t in range(n - 1, -1, -1):
        vid, out[t] = divmod(vid, p)
    return tuple(out)


def format_vertex(vid: int, p: int, n: int) -> str:
    """Digit-string label of a vertex; dot-separated when p > 10."""
    digits = decode(vid, p, n)
    if p <= 10:
        return "".join(str(d) for d in digits)
    return ".".join(str(d) for d in digits)


def parse_vertex(text: str, p: int, n: int) -> int:
    text = text.strip()
    if p > 10 or "." in text:
        parts = text.split(".")
    else:
        parts = list(text)
    if len(parts) != n:
        raise ParameterError(f"vertex {text!r} must have {n} digits")
    try:
        digits = [int(x) for x in parts]
    except ValueError:
        raise ParameterError(f"vertex {text!r} is not a digit word") from None
    if any(not 0 <= d < p for d in digits):
        raise ParameterError(f"vertex {text!r} has a digit outside [0, {p - 1}]")
    return encode(digits, p)


@dataclass(frozen=True)
class Vertex:
    digits: tuple[int, ...]
    p: int

    @property
    def id(self) -> int:
        return encode(self.digits, self.p)

    @classmethod
    def from_id(cls, vid: int, p: int, n: int) -> Vertex:
        return cls(decode(vid, p, n), p)

    def __str__(self) -> str:
        return format_vertex(self.id, self.p, len(self.digits))


class VertexSet:
    """Immutable vertex subset of a graph on ``order`` vertices, stored as a bitmask."""

    __slots__ = ("mask", "order", "_len")

    def __init__(self, mask: int, order: int):
        if mask < 0 or mask >> order:
            raise ParameterError("mask has bits outside the vertex range")
        self.mask = mask
        self.order = order
        self._len = mask.bit_count()

    @classmethod
    def from_ids(cls, ids: Iterable[int], order: int) -> VertexSet:
        mask = 0
        for v in ids:
            if not 0 <= v < order:
                raise ParameterError(f"vertex id {v} out of range")
            mask |= 1 << v
        return cls(mask, order)

    @classmethod
    def empty(cls, order: int) -> VertexSet:
        return cls(0, order)

    @classmethod
    def full(cls, order: int) -> VertexSet:
        return cls((1 << order) - 1, order)

    def __len__(self) -> int:
        return self._len

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.order and bool(self.mask >> v & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def ids(self) -> list[int]:
        return list(iter_bits(self.mask))

    def _coerce(self, other: VertexSet) -> int:
        if other.order != self.order:
            raise ParameterError("vertex sets belong to graphs of different order")
        return other.mask

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.mask | self._coerce(other), self.order)

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.mask & self._coerce(other), self.order)

    def __sub__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.mask & ~self._coerce(other), self.order)

    def issubset(self, other: VertexSet) -> bool:
        return self.mask & ~self._coerce(other) == 0

    def __le__(self, other: VertexSet) -> bool:
        return self.issubset(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.mask == other.mask and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.mask, self.order))

    def __repr__(self) -> str:
        return f"VertexSet({self.ids()!r}, order={self.order})"


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class SierpinskiGraph:
    p: int
    n: int
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.adjacency)

    @cached_property
    def size(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in nbrs) for nbrs in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for w in nbrs:
                if u < w:
                    yield u, w

    def label(self, v: int) -> str:
        return format_vertex(v, self.p, self.n)

    def parse(self, text: str) -> int:
        return parse_vertex(text, self.p, self.n)

    def vertex_set(self, ids: Iterable[int]) -> VertexSet:
        return VertexSet.from_ids(ids, self.order)

    def parse_set(self, words: Iterable[str]) -> VertexSet:
        return self.vertex_set(self.parse(w) for w in words)

    def format_set(self, vs: VertexSet | Iterable[int]) -> list[str]:
        return [self.label(v) for v in sorted(vs)]

    def extreme_vertex(self, i: int) -> int:
        return encode([i] * self.n, self.p)


def _check_params(p: int, n: int, max_vertices: int | None) -> None:
    if not isinstance(p, int) or p < 3:
        raise ParameterError(f"p must be an integer >= 3, got {p!r}")
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be an integer >= 1, got {n!r}")
    if max_vertices is not None and p**n > max_vertices:
        raise SizeLimitError(f"S_{p}^{n} has {p**n} vertices, above the limit of {max_vertices}")


def build_graph(p: int, n: int, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> SierpinskiGraph:
    """Build S_p^n.

    Two words ``i`` and ``j`` are adjacent when for some position ``h`` they
    agree before ``h``, differ at ``h``, and after ``h`` every digit of ``i``
    equals ``j_h`` while every digit of ``j`` equals ``i_h``.  For ``h < n``
    the suffix of ``i`` must therefore be constant and ``j`` is determined;
    for ``h = n`` any other last digit works.
    """
    _check_params(p, n, max_vertices)
    order = p**n
    adjacency: list[tuple[int, ...]] = []
    for vid in range(order):
        digits = decode(vid, p, n)
        nbrs = []
        for h in range(n):
            suffix = digits[h + 1:]
            if suffix:
                c = suffix[0]
                if any(d != c for d in suffix) or c == digits[h]:
                    continue
                targets = (c,)
            else:
                targets = tuple(d for d in range(p) if d != digits[h])
            for jh in targets:
                other = digits[:h] + (jh,) + (digits[h],) * (n - h - 1)
                nbrs.append(encode(other, p))
        adjacency.append(tuple(sorted(nbrs)))
    return SierpinskiGraph(p, n, tuple(adjacency))


def _parse_prefix(g: SierpinskiGraph, prefix: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(prefix, str):
        parts = prefix.split(".") if "." in prefix else list(prefix)
        try:
            digits = tuple(int(x) for x in parts if x != "")
        except ValueError:
            raise ParameterError(f"malformed prefix {prefix!r}") from None
    else:
        digits = tuple(prefix)
    if len(digits) > g.n - 1 and digits:
        raise ParameterError(f"prefix {prefix!r} must be shorter than n={g.n}")
    if any(not 0 <= d < g.p for d in digits):
        raise ParameterError(f"prefix {prefix!r} has a digit outside [0, {g.p - 1}]")
    return digits


def prefix_range(g: SierpinskiGraph, prefix: str | Sequence[int]) -> range:
    digits = _parse_prefix(g, prefix)
    k = g.n - len(digits)
    start = encode(digits, g.p) * g.p**k
    return range(start, start + g.p**k)


def subgraph_vertices(g: SierpinskiGraph, prefix: str | Sequence[int]) -> VertexSet:
    """Vertex set of the copy of S_p^k whose words start with ``prefix``."""
    r = prefix_range(g, prefix)
    mask = ((1 << len(r)) - 1) << r.start
    return VertexSet(mask, g.order)


def prefix_blocks(g: SierpinskiGraph, k: int) -> list[int]:
    """Masks of all p^(n-k) copies of S_p^k, in id order."""
    width = g.p**k
    base = (1 << width) - 1
    return [base << (width * s) for s in range(g.p ** (g.n - k))]


def simplicial_vertices(g: SierpinskiGraph) -> VertexSet:
    masks = g.neighbor_masks
    out = 0
    for v, nbrs in enumerate(g.adjacency):
        # every other neighbour of v must be adjacent to a
        if all(masks[v] & ~(1 << a) & ~masks[a] == 0 for a in nbrs):
            out |= 1 << v
    return VertexSet(out, g.order)


def complement(g: SierpinskiGraph, X: VertexSet) -> VertexSet:
    return VertexSet(((1 << g.order) - 1) & ~X.mask, g.order)


def is_convex(g: SierpinskiGraph, oracle: GeodesicOracle, H: VertexSet) -> bool:
    """True iff no vertex outside H lies on a geodesic between two vertices of H."""
    outside = ((1 << g.order) - 1) & ~H.mask
    if not outside:
        return True
    ids = H.ids()
    for a, u in enumerate(ids):
        for v in ids[a + 1:]:
            if oracle.interior_mask(u, v) & outside:
                return False
    return True


def to_edgelist(g: SierpinskiGraph) -> str:
    """One edge per line as two vertex words, e.g. ``00 01``."""
    return "".join(f"{g.label(u)} {g.label(v)}\n" for u, v in g.edges())


def to_dot(g: SierpinskiGraph) -> str:
    lines = [f"graph S_{g.p}_{g.n} {{"]
    for v in range(g.order):
        lines.append(f'  "{g.label(v)}";')
    for u, v in g.edges():
        lines.append(f'  "{g.label(u)}" -- "{g.label(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> list[tuple[str, str]]:
    """Inverse of :func:`to_edgelist`; blank lines and ``#`` comments are skipped."""
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        a, b = line.split()
        edges.append((a, b))
    return edges
