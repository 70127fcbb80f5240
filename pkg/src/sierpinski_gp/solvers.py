"""Exact maximisation and enumeration of extremal sets for the eight variants.

The search engine lives in :mod:`._search`.  Its upper bound at a node is
the included vertices plus the still-available ones, capped block by block
by the base optimum of the convex prefix copies S_p^k.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .graph_core import SierpinskiGraph, VertexSet, build_graph, decode, encode, is_convex, prefix_blocks
from .metric import GeodesicOracle, build_oracle
from ._search import Search as _Search
from .variants import Variant, check_set, simplicial_vertices

DEFAULT_BUDGET = 300.0
STRATEGIES = ("auto", "branch_and_bound", "descending")


@dataclass
class SolverOptions:
    budget_seconds: float | None = DEFAULT_BUDGET
    symmetry: bool = False
    strategy: str = "auto"
    lower_bound: str = "greedy"  # 'greedy', 'construction' or 'none'
    shortcuts: bool = True
    block_bound: bool = True
    block_cap_max_order: int = 27
    workers: int = 1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.lower_bound not in ("greedy", "construction", "none"):
            raise ValueError("lower_bound must be 'greedy', 'construction' or 'none'")


@dataclass
class SolverReport:
    variant: Variant
    p: int
    n: int
    optimum: int
    sets: list[VertexSet]
    count: int | None = None
    optimal: bool = True
    complete: bool = True
    stats: dict = field(default_factory=dict)
    orbits: list[tuple[VertexSet, int]] | None = None

    @property
    def budget_exceeded(self) -> bool:
        return not (self.optimal and self.complete)

    def to_dict(self, g: SierpinskiGraph, timing: bool = True) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats.pop("seconds", None)
        out = {
            "schema": 1,
            "variant": self.variant.value,
            "p": self.p,
            "n": self.n,
            "optimum": self.optimum,
            "count": self.count,
            "optimal": self.optimal,
            "complete": self.complete,
            "budget_exceeded": self.budget_exceeded,
            "sets": [g.format_set(s) for s in self.sets],
            "stats": stats,
        }
        if self.orbits is not None:
            out["orbits"] = [{"representative": g.format_set(rep), "size": size} for rep, size in self.orbits]
        return out


def branching_order(g: SierpinskiGraph) -> list[int]:
    return sorted(range(g.order), key=lambda v: (g.degree(v), v))


_CAP_CACHE: dict[tuple[int, int, Variant], int] = {}
_CONVEX_CACHE: dict[tuple[int, int, int], bool] = {}


def _base_cap(p: int, k: int, base: Variant) -> int:
    key = (p, k, base)
    if key not in _CAP_CACHE:
        g = build_graph(p, k)
        rep = max_set(g, build_oracle(g), base, SolverOptions(budget_seconds=None))
        _CAP_CACHE[key] = rep.optimum
    return _CAP_CACHE[key]


def _blocks_convex(g: SierpinskiGraph, oracle: GeodesicOracle, k: int) -> bool:
    key = (g.p, g.n, k)
    if key not in _CONVEX_CACHE:
        _CONVEX_CACHE[key] = all(is_convex(g, oracle, VertexSet(b, g.order)) for b in prefix_blocks(g, k))
    return _CONVEX_CACHE[key]


def _block_structure(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant, opts: SolverOptions):
    if not opts.block_bound or g.n < 3:
        return None
    levels = []
    for k in range(2, g.n):
        if g.p**k > opts.block_cap_max_order:
            break
        if not _blocks_convex(g, oracle, k):
            break
        levels.append(k)
    if not levels:
        return None
    out = []
    for idx, k in enumerate(levels):
        cap = _base_cap(g.p, k, variant.base)
        out.append((prefix_blocks(g, k) if idx == 0 else None, cap))
    return out


# public operations

def greedy_lower_bound(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant) -> VertexSet:
    """Insert vertices in branching order while the set stays valid."""
    variant = Variant(variant)
    X = VertexSet.empty(g.order)
    for v in branching_order(g):
        trial = VertexSet(X.mask | 1 << v, g.order)
        if check_set(oracle, variant, trial):
            X = trial
    return X


def _seed(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant, opts: SolverOptions) -> VertexSet:
    if opts.lower_bound == "none":
        return VertexSet.empty(g.order)
    if opts.lower_bound == "construction":
        from .constructions import best_construction
        seed = best_construction(g, oracle, variant)
        if seed is not None:
            return seed
    return greedy_lower_bound(g, oracle, variant)


def _deadline(opts: SolverOptions, start: float) -> float | None:
    return None if opts.budget_seconds is None else start + opts.budget_seconds


def _run(oracle, variant, order, *, mode, best, deadline, blocks, shortcuts, workers=1) -> _Search:
    if workers > 1 and mode in ("max", "enum"):
        return _run_parallel(oracle, variant, order, mode=mode, best=best, deadline=deadline, blocks=blocks,
                             shortcuts=shortcuts, workers=workers)
    s = _Search(oracle, variant, order, mode=mode, best=best, deadline=deadline, blocks=blocks, shortcuts=shortcuts)
    s.run()
    return s


def _subtree_job(args):
    p, n, variant, order, mode, best, deadline, blocks, shortcuts, forced = args
    g = build_graph(p, n)
    s = _Search(build_oracle(g), variant, order, mode=mode, best=best, deadline=deadline, blocks=blocks,
                shortcuts=shortcuts, forced=forced)
    s.run()
    return s.best, s.found, s.nodes, s.timed_out


def _run_parallel(oracle, variant, order, *, mode, best, deadline, blocks, shortcuts, workers) -> _Search:
    """Split on the first few branching decisions; each worker searches one subtree.

    Workers do not share improvements of the bound, so each subtree is
    searched against the initial lower bound and the results are merged.
    """
    depth = min(len(order), max(1, math.ceil(math.log2(workers)) + 2))
    g = oracle.graph
    jobs = [(g.p, g.n, variant, order, mode, best, deadline, blocks, shortcuts, forced)
            for forced in itertools.product((True, False), repeat=depth)]
    merged = _Search(oracle, variant, order, mode=mode, best=best, deadline=deadline, blocks=blocks,
                     shortcuts=shortcuts)
    results = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for res in ex.map(_subtree_job, jobs):
            results.append(res)
    for b, found, nodes, timed_out in results:
        merged.nodes += nodes
        merged.timed_out |= timed_out
        if not found:
            continue
        if b > merged.best or (b == merged.best and not merged.found):
            merged.best = b
            merged.found = list(found)
        elif b == merged.best and mode == "enum":
            merged.found.extend(found)
    return merged


def _gp_total_direct(g: SierpinskiGraph, oracle: GeodesicOracle, start: float) -> SolverReport:
    # total general position sets are exactly the subsets of S(G)
    S = simplicial_vertices(g)
    return SolverReport(Variant.GP_TOTAL, g.p, g.n, len(S), [S], count=1,
                        stats={"nodes": 0, "seconds": time.monotonic() - start, "bounds": ["simplicial"]})


def _finish(report: SolverReport, g: SierpinskiGraph, opts: SolverOptions) -> SolverReport:
    report.sets.sort(key=lambda s: s.ids())
    if opts.symmetry and report.count is not None:
        report.orbits = orbit_count(g, report.sets)
    return report


def _descending(g, oracle, variant, opts, start, enumerate_all) -> SolverReport:
    """Cardinality-descending scan for the non-hereditary variants.

    All base-predicate sets of size k are listed and the full variant is
    checked on each, for k from the base optimum downwards.
    """
    deadline = _deadline(opts, start)
    order = branching_order(g)
    blocks = _block_structure(g, oracle, variant, opts)
    seed = _seed(g, oracle, variant, opts)
    nodes = 0
    base = _run(oracle, variant.base, order, mode="max", best=0, deadline=deadline, blocks=blocks,
                shortcuts=opts.shortcuts)
    nodes += base.nodes
    if base.timed_out:
        return SolverReport(variant, g.p, g.n, len(seed), [seed], optimal=False, complete=False,
                            stats={"nodes": nodes, "seconds": time.monotonic() - start, "strategy": "descending"})
    for k in range(base.best, len(seed) - 1, -1):
        s = _Search(oracle, variant.base, order, mode="exact", best=k, deadline=deadline, blocks=blocks,
                    shortcuts=opts.shortcuts)
        s.run()
        nodes += s.nodes
        if s.timed_out:
            return SolverReport(variant, g.p, g.n, len(seed), [seed], optimal=False, complete=False,
                                stats={"nodes": nodes, "seconds": time.monotonic() - start,
                                       "strategy": "descending"})
        hits = [VertexSet(m, g.order) for m in s.found if check_set(oracle, variant, VertexSet(m, g.order))]
        if hits:
            if not enumerate_all:
                hits = [min(hits, key=lambda h: h.ids())]
            return SolverReport(variant, g.p, g.n, k, hits, count=len(hits) if enumerate_all else None,
                                stats={"nodes": nodes, "seconds": time.monotonic() - start,
                                       "strategy": "descending"})
    raise AssertionError("seed set is valid, so some size must succeed")


def _stats(search_nodes: int, start: float, blocks, seed_size: int, strategy: str) -> dict:
    bounds = ["forbidden-vertices"]
    if blocks:
        bounds.append("prefix-blocks:" + ",".join(str(cap) for _, cap in blocks))
    return {"nodes": search_nodes, "seconds": round(time.monotonic() - start, 6), "bounds": bounds,
            "lower_bound": seed_size, "strategy": strategy}


def max_set(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant,
            options: SolverOptions | None = None) -> SolverReport:
    """Exact optimum of ``variant`` with the lexicographically smallest maximum set.

    On budget exhaustion the report carries the best set found and
    ``optimal=False``; its optimum is then only a lower bound.
    """
    opts = options or SolverOptions()
    variant = Variant(variant)
    start = time.monotonic()
    if variant is Variant.GP_TOTAL and opts.shortcuts:
        return _gp_total_direct(g, oracle, start)
    if opts.strategy == "descending" and not variant.hereditary:
        return _finish(_descending(g, oracle, variant, opts, start, False), g, opts)
    deadline = _deadline(opts, start)
    seed = _seed(g, oracle, variant, opts)
    blocks = _block_structure(g, oracle, variant, opts)
    order = branching_order(g)
    s = _run(oracle, variant, order, mode="max", best=len(seed), deadline=deadline, blocks=blocks,
             shortcuts=opts.shortcuts, workers=opts.workers)
    nodes = s.nodes
    if s.timed_out:
        best = VertexSet(s.found[0], g.order) if s.found else seed
        return SolverReport(variant, g.p, g.n, len(best), [best], optimal=False,
                            stats=_stats(nodes, start, blocks, len(seed), "branch_and_bound"))
    optimum = s.best
    # lexicographically smallest optimum set: include-first in id order
    lex = _Search(oracle, variant, list(range(g.order)), mode="first", best=optimum, deadline=deadline,
                  blocks=blocks, shortcuts=opts.shortcuts)
    lex.run()
    nodes += lex.nodes
    if lex.found:
        best = VertexSet(lex.found[0], g.order)
    else:
        best = VertexSet(s.found[0], g.order) if s.found else seed
    stats = _stats(nodes, start, blocks, len(seed), "branch_and_bound")
    stats["lex_smallest"] = bool(lex.found)
    report = SolverReport(variant, g.p, g.n, optimum, [best], stats=stats)
    return _finish(report, g, opts)


def enumerate_max_sets(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant,
                       options: SolverOptions | None = None) -> SolverReport:
    """All maximum ``variant`` sets, label-distinct, with their count."""
    opts = options or SolverOptions()
    variant = Variant(variant)
    start = time.monotonic()
    if variant is Variant.GP_TOTAL and opts.shortcuts:
        return _finish(_gp_total_direct(g, oracle, start), g, opts)
    if opts.strategy == "descending" and not variant.hereditary:
        return _finish(_descending(g, oracle, variant, opts, start, True), g, opts)
    deadline = _deadline(opts, start)
    seed = _seed(g, oracle, variant, opts)
    blocks = _block_structure(g, oracle, variant, opts)
    s = _run(oracle, variant, branching_order(g), mode="enum", best=len(seed), deadline=deadline, blocks=blocks,
             shortcuts=opts.shortcuts, workers=opts.workers)
    stats = _stats(s.nodes, start, blocks, len(seed), "branch_and_bound")
    if s.timed_out:
        sets = [VertexSet(m, g.order) for m in s.found] or [seed]
        report = SolverReport(variant, g.p, g.n, max(s.best, len(seed)), sets, count=None, optimal=False,
                              complete=False, stats=stats)
        return _finish(report, g, opts)
    sets = sorted({VertexSet(m, g.order) for m in s.found}, key=lambda x: x.ids())
    report = SolverReport(variant, g.p, g.n, s.best, sets, count=len(sets), stats=stats)
    return _finish(report, g, opts)


# symmetry

def digit_permutation_map(g: SierpinskiGraph, perm: Iterable[int]) -> list[int]:
    perm = tuple(perm)
    return [encode([perm[d] for d in decode(v, g.p, g.n)], g.p) for v in range(g.order)]


def apply_map(vmap: list[int], X: VertexSet) -> VertexSet:
    return VertexSet(sum(1 << vmap[v] for v in X), X.order)


def orbit_count(g: SierpinskiGraph, sets: list[VertexSet]) -> list[tuple[VertexSet, int]]:
    """Split ``sets`` into orbits under relabelling of digits.

    Returns (representative, orbit size within ``sets``) pairs; the
    representative is the lexicographically smallest member present.
    """
    maps = [digit_permutation_map(g, perm) for perm in itertools.permutations(range(g.p))]
    remaining = set(sets)
    out = []
    for X in sorted(sets, key=lambda s: s.ids()):
        if X not in remaining:
            continue
        orbit = {apply_map(m, X) for m in maps}
        members = orbit & remaining
        remaining -= members
        out.append((X, len(members)))
    return out
