"""Branch-and-bound engine shared by every variant.

Vertices are decided one at a time, in a fixed order, as in (member of X)
or out (member of the complement).  A pair of the variant's family whose
endpoints are both decided must stay visible (positionable) for the rest of
the branch.  Blockers only accumulate along a branch, so

* a decided pair that is already broken kills the branch, and
* a vertex whose inclusion would break a decided pair is *forbidden*.

Neither rule assumes that subsets of valid sets are valid, so the same
engine is exact for the outer and dual variants.

For a visibility pair the forbidden contribution is the intersection of the
interiors of its still-open geodesics; pairs with several open geodesics are
kept in a side list because later inclusions can shrink that list.  For a
positionability pair it is simply the interval interior.
"""

from __future__ import annotations

import sys
import threading
import time

from .graph_core import iter_bits
from .metric import GeodesicOracle
from .variants import Variant, distance_two_pairs

TABLE_LIMIT = 243
DEEP_ORDER = 700
DEEP_STACK = 512 * 1024 * 1024


class OutOfTime(Exception):
    pass


class _Found(Exception):
    pass


class _Lazy:
    """Two-level indexable view over a pair function, for graphs too large to tabulate."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __getitem__(self, a):
        return _LazyRow(self.fn, a)


class _LazyRow:
    __slots__ = ("fn", "a")

    def __init__(self, fn, a):
        self.fn = fn
        self.a = a

    def __getitem__(self, b):
        return self.fn(self.a, b)


class Search:
    """One exhaustive in/out search over a fixed vertex order.

    ``mode``:
      'max'    keep the first set strictly larger than ``best``, raising ``best``
      'enum'   collect every set of the largest size reached (never below ``best``)
      'first'  stop at the first set of size ``best``
      'exact'  collect the valid sets of size exactly ``best``

    ``blocks`` is a list of (masks or None, cap) per prefix-block level,
    finest first; only the finest level carries masks, coarser levels group
    ``p`` consecutive children.
    """

    def __init__(self, oracle: GeodesicOracle, variant: Variant, order: list[int], *, mode: str, best: int,
                 deadline: float | None = None, blocks=None, shortcuts: bool = True, forced: tuple[bool, ...] = ()):
        self.o = oracle
        self.variant = variant
        self.gp = variant.is_gp
        self.kind = variant.kind
        self.order = order
        self.mode = mode
        self.best = best
        self.found: list[int] = []
        self.deadline = deadline
        self.forced = forced
        self.nodes = 0
        self.timed_out = False
        self.p = oracle.graph.p
        self.block_masks = blocks[0][0] if blocks else None
        self.block_caps = [cap for _, cap in blocks] if blocks else []

        small = oracle.graph.order <= TABLE_LIMIT
        self.TH = oracle.through_table() if small else _Lazy(oracle.through_mask)
        if self.gp:
            self.IV = oracle.interior_table() if small else _Lazy(oracle.interior_mask)
        else:
            self.GI = oracle.interiors_table() if small else _Lazy(oracle.geodesic_interiors)

        size = len(order)
        self.suffix = [0] * (size + 1)
        for pos in range(size - 1, -1, -1):
            self.suffix[pos] = self.suffix[pos + 1] | 1 << order[pos]
        self.root_F = 0
        self.root_multi: list[tuple[int, ...]] = []
        if self.kind == "total":
            self._init_total(shortcuts)

    # pair primitives
    def _pair(self, u: int, v: int, xmask: int):
        """(ok, forbidden contribution, open interiors when several remain)."""
        if self.gp:
            im = self.IV[u][v]
            return (not im & xmask), im, None
        interiors = self.GI[u][v]
        if interiors is None:
            raise RuntimeError("too many geodesics for the mask-based search")
        open_ = [m for m in interiors if not m & xmask]
        if not open_:
            return False, 0, None
        if len(open_) == 1:
            return True, open_[0], None
        contrib = open_[0]
        for m in open_[1:]:
            contrib &= m
        return True, contrib, tuple(open_)

    def _ok(self, u: int, v: int, xmask: int) -> bool:
        if self.gp:
            return not self.IV[u][v] & xmask
        for m in self.GI[u][v]:
            if not m & xmask:
                return True
        return False

    def _init_total(self, shortcuts: bool) -> None:
        order = self.o.graph.order
        if shortcuts and not self.gp:
            # distance-two pairs decide total visibility
            pairs = distance_two_pairs(self.o)
        else:
            pairs = ((u, v) for u in range(order) for v in range(u + 1, order))
        F = 0
        multi = []
        for u, v in pairs:
            _, contrib, many = self._pair(u, v, 0)
            F |= contrib
            if many:
                multi.append(many)
        self.root_F = F
        self.root_multi = multi

    def bound(self, mask: int) -> int:
        if self.block_masks is None:
            return mask.bit_count()
        p = self.p
        caps = self.block_caps
        cap = caps[0]
        counts = [min((mask & b).bit_count(), cap) for b in self.block_masks]
        for cap in caps[1:]:
            counts = [min(sum(counts[i:i + p]), cap) for i in range(0, len(counts), p)]
        return sum(counts)

    def run(self) -> None:
        if len(self.order) > DEEP_ORDER:
            # the recursion is two frames per vertex: give it a roomier C stack
            old = threading.stack_size(DEEP_STACK)
            try:
                worker = threading.Thread(target=self._run)
                worker.start()
                worker.join()
            finally:
                threading.stack_size(old)
            if self._error is not None:
                raise self._error
        else:
            self._run()

    def _run(self) -> None:
        self._error = None
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 3 * len(self.order) + 1000))
        try:
            self._rec(0, 0, 0, (), (), self.root_F, self.root_multi, 0)
        except OutOfTime:
            self.timed_out = True
        except _Found:
            pass
        except BaseException as exc:  # surfaced by run() when on a worker thread
            self._error = exc
            if threading.current_thread() is threading.main_thread():
                raise
        finally:
            sys.setrecursionlimit(limit)

    def _record(self, IN: int, size: int) -> None:
        mode = self.mode
        if mode == "max":
            if size > self.best:
                self.best = size
                self.found = [IN]
        elif mode == "enum":
            if size > self.best:
                self.best = size
                self.found = [IN]
            elif size == self.best:
                self.found.append(IN)
        elif mode == "first":
            if size >= self.best:
                self.found = [IN]
                raise _Found
        elif size == self.best:
            self.found.append(IN)

    def _close(self, pos: int, IN: int, ins, outs, size: int) -> None:
        """Exclude every remaining vertex, then record IN if the family still holds."""
        kind = self.kind
        if kind == "outer" or kind == "dual":
            rest = list(iter_bits(self.suffix[pos] & ~IN))
            ok = self._ok
            if kind == "outer":
                for r in rest:
                    for u in ins:
                        if not ok(r, u, IN):
                            return
            else:
                for a, r in enumerate(rest):
                    for o in outs:
                        if not ok(r, o, IN):
                            return
                    for r2 in rest[a + 1:]:
                        if not ok(r, r2, IN):
                            return
        self._record(IN, size)

    def _rec(self, pos: int, IN: int, OUT: int, ins, outs, F: int, multi, size: int) -> None:
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise OutOfTime
        order = self.order
        avail = self.suffix[pos] & ~F & ~IN
        mode = self.mode
        if mode == "exact" and size == self.best:
            self._close(pos, IN, ins, outs, size)
            return
        ub = self.bound(IN | avail)
        if ub <= self.best if mode == "max" else ub < self.best:
            return
        forced = self.forced
        if pos < len(forced):
            v = order[pos]
            if forced[pos]:
                if avail >> v & 1:
                    self._include(pos, v, IN, OUT, ins, outs, F, multi, size)
            else:
                self._exclude(pos, v, IN, OUT, ins, outs, F, multi, size)
            return
        if not avail:
            self._close(pos, IN, ins, outs, size)
            return
        if self.kind == "plain" or self.kind == "total":
            # exclusion adds no constraint for these kinds: jump to the next candidate
            while not avail >> order[pos] & 1:
                pos += 1
        v = order[pos]
        if avail >> v & 1:
            self._include(pos, v, IN, OUT, ins, outs, F, multi, size)
        self._exclude(pos, v, IN, OUT, ins, outs, F, multi, size)

    def _include(self, pos: int, v: int, IN: int, OUT: int, ins, outs, F: int, multi, size: int) -> None:
        kind = self.kind
        IN2 = IN | 1 << v
        F2 = F
        new_multi = []
        # pairs with several open geodesics may lose some to v
        for entry in multi:
            if any(m >> v & 1 for m in entry):
                open_ = [m for m in entry if not m >> v & 1]
                contrib = open_[0]
                for m in open_[1:]:
                    contrib &= m
                F2 |= contrib
                if len(open_) > 1:
                    new_multi.append(tuple(open_))
            else:
                new_multi.append(entry)
        if kind != "total":
            partners = ins + outs if kind == "outer" else ins
            pair = self._pair
            for u in partners:
                ok, contrib, many = pair(v, u, IN)
                if not ok:
                    return
                F2 |= contrib
                if many:
                    new_multi.append(many)
            cand = self.suffix[pos + 1] & ~F2 & ~IN2
            if cand:
                F2 |= self._incompatible(cand, v, IN2, ins, partners)
        self._rec(pos + 1, IN2, OUT, ins + (v,), outs, F2, new_multi, size + 1)

    def _incompatible(self, cand: int, v: int, IN2: int, ins, partners) -> int:
        """Candidates that can no longer join once v is in.

        Only pairs (c, u) with v on a c,u-geodesic, and the new pair (c, v)
        when a member lies on a c,v-geodesic, can have changed.
        """
        TH = self.TH
        Tv = TH[v]
        hit = 0
        for u in partners:
            hit |= Tv[u]
        for u in ins:
            hit |= TH[u][v]
        hit &= cand
        if not hit or self.gp:
            return hit
        GI = self.GI
        bad = 0
        for c in iter_bits(hit):
            row = GI[c]
            for u in (v,) + tuple(partners):
                for m in row[u]:
                    if not m & IN2:
                        break
                else:
                    bad |= 1 << c
                    break
        return bad

    def _exclude(self, pos: int, v: int, IN: int, OUT: int, ins, outs, F: int, multi, size: int) -> None:
        kind = self.kind
        F2 = F
        new_multi = multi
        if kind == "outer" or kind == "dual":
            partners = ins if kind == "outer" else outs
            extra = []
            for u in partners:
                ok, contrib, many = self._pair(v, u, IN)
                if not ok:
                    return
                F2 |= contrib
                if many:
                    extra.append(many)
            if extra:
                new_multi = list(multi) + extra
            if kind == "outer":
                # later candidates must see the new outsider
                cand = self.suffix[pos + 1] & ~F2 & ~IN
                TH = self.TH
                hit = 0
                for u in ins:
                    hit |= TH[u][v]
                hit &= cand
                if self.gp:
                    F2 |= hit
                else:
                    for c in iter_bits(hit):
                        if not self._ok(c, v, IN):
                            F2 |= 1 << c
            outs = outs + (v,)
        self._rec(pos + 1, IN, OUT | 1 << v, ins, outs, F2, new_multi, size)
