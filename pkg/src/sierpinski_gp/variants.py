"""Mutual-visibility and general-position set predicates.

Every variant is a pair family plus a pair predicate.  The family is drawn
from X (the candidate set) and its complement C:

    plain  X x X
    outer  X x X  and  X x C
    dual   X x X  and  C x C
    total  every pair of vertices

The predicate is *visibility* (some geodesic avoids X) for the MV variants
and *positionability* (every geodesic avoids X) for the GP variants; in both
cases the pair's own endpoints never count as blockers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .graph_core import VertexSet, iter_bits, simplicial_vertices
from .metric import GeodesicOracle


class Variant(str, Enum):
    MV = "mv"
    MV_OUTER = "mv_outer"
    MV_DUAL = "mv_dual"
    MV_TOTAL = "mv_total"
    GP = "gp"
    GP_OUTER = "gp_outer"
    GP_DUAL = "gp_dual"
    GP_TOTAL = "gp_total"

    @property
    def is_gp(self) -> bool:
        return self.value.startswith("gp")

    @property
    def kind(self) -> str:
        """One of 'plain', 'outer', 'dual', 'total'."""
        _, _, tail = self.value.partition("_")
        return tail or "plain"

    @property
    def base(self) -> Variant:
        return Variant.GP if self.is_gp else Variant.MV

    @property
    def hereditary(self) -> bool:
        # outer/dual grow their complement-side pair family when X shrinks
        return self.kind in ("plain", "total")

    @property
    def symbol(self) -> str:
        stem = "gp" if self.is_gp else "mu"
        return stem if self.kind == "plain" else f"{stem}_{self.kind[0]}"

    @classmethod
    def parse(cls, text: str) -> Variant:
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise ValueError(f"unknown variant {text!r} (expected one of: {names})") from None


@dataclass(frozen=True)
class Witness:
    """A pair of the variant's family that fails its predicate.

    For positionability, ``blockers`` holds the vertices of X lying strictly
    inside some u,v-geodesic.  For visibility, ``geodesics`` lists every
    u,v-geodesic, each of which meets X in its interior.
    """

    pair: tuple[int, int]
    mode: str
    blockers: tuple[int, ...] = ()
    geodesics: tuple[tuple[int, ...], ...] = field(default=())

    def replay(self, oracle: GeodesicOracle, X: VertexSet) -> bool:
        """True when the recorded failure is reproduced against ``oracle``."""
        u, v = self.pair
        if self.mode == "positionability":
            return oracle.some_blocker_on_any_geodesic(u, v, X)
        return not oracle.exists_geodesic_avoiding(u, v, X)

    def describe(self, label) -> str:
        u, v = self.pair
        head = f"{label(u)} and {label(v)} are not X-{'positionable' if self.mode == 'positionability' else 'visible'}"
        if self.mode == "positionability":
            return head + ": " + ", ".join(label(b) for b in self.blockers) + " on a geodesic"
        paths = "; ".join(",".join(label(w) for w in path) for path in self.geodesics)
        return head + f": every geodesic is blocked ({paths})"


def _pairs_within(ids: list[int]) -> Iterator[tuple[int, int]]:
    for a, u in enumerate(ids):
        for v in ids[a + 1:]:
            yield u, v


def pair_family(oracle: GeodesicOracle, variant: Variant, X: VertexSet) -> Iterator[tuple[int, int]]:
    """Pairs constrained by ``variant``: base pairs within X first, then the extension.

    Within each block pairs come in lexicographic (min id, max id) order.
    """
    xs = X.ids()
    yield from _pairs_within(xs)
    kind = variant.kind
    if kind == "plain":
        return
    order = oracle.graph.order
    cs = [v for v in range(order) if not X.mask >> v & 1]
    if kind == "outer":
        ext = sorted((min(a, b), max(a, b)) for a in xs for b in cs)
        yield from ext
    elif kind == "dual":
        yield from _pairs_within(cs)
    else:
        for u in range(order):
            for v in range(u + 1, order):
                if not (X.mask >> u & 1 and X.mask >> v & 1):
                    yield u, v


def is_visible_pair(oracle: GeodesicOracle, X: VertexSet, u: int, v: int) -> bool:
    return oracle.exists_geodesic_avoiding(u, v, X)


def is_positionable_pair(oracle: GeodesicOracle, X: VertexSet, u: int, v: int) -> bool:
    return not oracle.some_blocker_on_any_geodesic(u, v, X)


def _pair_ok(oracle: GeodesicOracle, variant: Variant, xmask: int, u: int, v: int) -> bool:
    if variant.is_gp:
        return oracle.positionable(u, v, xmask)
    return oracle.visible(u, v, xmask)


def _first_failure_definition(oracle: GeodesicOracle, variant: Variant, X: VertexSet) -> tuple[int, int] | None:
    xmask = X.mask
    for u, v in pair_family(oracle, variant, X):
        if not _pair_ok(oracle, variant, xmask, u, v):
            return u, v
    return None


def distance_two_pairs(oracle: GeodesicOracle) -> list[tuple[int, int]]:
    cached = getattr(oracle, "_d2_pairs", None)
    if cached is None:
        adj = oracle.graph.adjacency
        seen = set()
        for m in range(oracle.graph.order):
            for a in adj[m]:
                for b in adj[m]:
                    if a < b and oracle.dist[a, b] == 2:
                        seen.add((a, b))
        cached = sorted(seen)
        oracle._d2_pairs = cached
    return cached


def _simplicial_mask(oracle: GeodesicOracle) -> int:
    cached = getattr(oracle, "_simplicial", None)
    if cached is None:
        cached = simplicial_vertices(oracle.graph).mask
        oracle._simplicial = cached
    return cached


def _first_failure_shortcut(oracle: GeodesicOracle, variant: Variant, X: VertexSet) -> tuple[int, int] | None:
    xmask = X.mask
    if variant is Variant.MV_TOTAL:
        # total visibility is decided by the pairs at distance two
        for u, v in distance_two_pairs(oracle):
            if not oracle.visible(u, v, xmask):
                return u, v
        return None
    if variant is Variant.GP_TOTAL:
        # total general position sets are exactly the sets of simplicial vertices
        bad = xmask & ~_simplicial_mask(oracle)
        if not bad:
            return None
        x = (bad & -bad).bit_length() - 1
        nbrs = oracle.graph.adjacency[x]
        masks = oracle.graph.neighbor_masks
        for a in nbrs:
            for b in nbrs:
                if a < b and not masks[a] >> b & 1:
                    return a, b
        raise AssertionError("non-simplicial vertex without a non-adjacent neighbour pair")
    if variant is Variant.GP_DUAL:
        # a gp set is dual iff its complement is convex
        bad = _first_failure_definition(oracle, Variant.GP, X)
        if bad is not None:
            return bad
        outside = ((1 << oracle.graph.order) - 1) & ~xmask
        cs = list(iter_bits(outside))
        for u, v in _pairs_within(cs):
            if oracle.interior_mask(u, v) & xmask:
                return u, v
        return None
    return _first_failure_definition(oracle, variant, X)


def _make_witness(oracle: GeodesicOracle, variant: Variant, X: VertexSet, pair: tuple[int, int]) -> Witness:
    u, v = pair
    if variant.is_gp:
        blockers = tuple(iter_bits(oracle.interior_mask(u, v) & X.mask))
        return Witness(pair, "positionability", blockers=blockers)
    paths = tuple(tuple(path) for path in oracle.enumerate_geodesics(u, v))
    return Witness(pair, "visibility", geodesics=paths)


def check_set(oracle: GeodesicOracle, variant: Variant, X: VertexSet, *, shortcuts: bool = True) -> bool:
    """Decide whether X is a ``variant`` set.

    With ``shortcuts`` the total-MV test looks only at distance-two pairs,
    the total-GP test is containment in the simplicial vertices, and the
    dual-GP test is "gp set with convex complement".  Without it every pair
    of the family is tested.
    """
    variant = Variant(variant)
    if shortcuts:
        return _first_failure_shortcut(oracle, variant, X) is None
    return _first_failure_definition(oracle, variant, X) is None


def witness_failure(oracle: GeodesicOracle, variant: Variant, X: VertexSet, *, shortcuts: bool = True) -> Witness | None:
    variant = Variant(variant)
    find = _first_failure_shortcut if shortcuts else _first_failure_definition
    pair = find(oracle, variant, X)
    if pair is None:
        return None
    return _make_witness(oracle, variant, X, pair)
