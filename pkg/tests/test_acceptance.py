"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Every comparison is exact integer equality.  Expected values are written
out here by hand rather than read from the formula table, so the table is
checked too.  Lines are collected by the ``acceptance_log`` fixture and
shown in the pytest terminal summary.
"""

from __future__ import annotations

import random
import time

import pytest

import oracles
from sierpinski_gp import ConstructionError, SolverOptions, Variant, VertexSet, check_set, enumerate_max_sets, max_set
from sierpinski_gp.constructions import (
    diagonal_set,
    instance,
    mu_set_s3n,
    mu_set_sp2,
    mud_sets_s3n,
    mud_sets_sp2,
    outer_gp_x,
    outer_gp_y,
)
from sierpinski_gp.graph_core import decode, prefix_blocks

ALL = list(Variant)
NO_BUDGET = SolverOptions(budget_seconds=None)


_SOLVES: dict = {}


def solve(p: int, n: int, variant: Variant, enumerate_all: bool):
    """(report, seconds), cached so later criteria reuse earlier solves.

    A cached enumeration also answers a plain maximum query.
    """
    key = (p, n, variant)
    if (key, True) in _SOLVES:
        return _SOLVES[key, True]
    if not enumerate_all and (key, False) in _SOLVES:
        return _SOLVES[key, False]
    g, o = instance(p, n)
    start = time.monotonic()
    rep = (enumerate_max_sets if enumerate_all else max_set)(g, o, variant, NO_BUDGET)
    _SOLVES[key, enumerate_all] = rep, time.monotonic() - start
    return _SOLVES[key, enumerate_all]


def _finish(log, number: int, title: str, failures: list[str], notes: list[str] = ()):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number} [{title}]: {status}"
    if failures:
        line += " -- " + "; ".join(failures)
    if notes:
        line += " | " + "; ".join(notes)
    log.append(line)
    print(line)
    assert not failures, line


# 1. S_p^2

SP2_BASE = {3: (4, 3), 4: (6, 10), 5: (9, 10)}


def test_criterion_1_sp2_table(acceptance_log):
    failures = []
    for p in (3, 4, 5):
        g, _ = instance(p, 2)
        expected = {Variant.MV: SP2_BASE[p], Variant.GP: SP2_BASE[p], Variant.MV_DUAL: (p, p + 1),
                    Variant.GP_DUAL: (p, 1)}
        for var in (Variant.MV_TOTAL, Variant.MV_OUTER, Variant.GP_TOTAL, Variant.GP_OUTER):
            expected[var] = (p, 1)
        diag = diagonal_set(p, 2, validate=False)
        for var, want in expected.items():
            rep, secs = solve(p, 2, var, True)
            got = (rep.optimum, rep.count)
            if got != want:
                failures.append(f"S_{p}^2 {var.value}: got {got}, want {want}")
            if secs >= 10:
                failures.append(f"S_{p}^2 {var.value}: {secs:.1f}s >= 10s")
            if var.kind in ("total", "outer") and rep.sets != [diag]:
                failures.append(f"S_{p}^2 {var.value}: unique set is not the diagonal")
    _finish(acceptance_log, 1, "S_p^2 values and counts, p=3,4,5", failures)


# 2. S_3^3 and S_3^4

def test_criterion_2_s3n_small_cases(acceptance_log):
    failures, notes = [], []
    base = {3: 6, 4: 12}
    for n in (3, 4):
        limit = 60 if n == 3 else 300
        for var in (Variant.MV, Variant.GP):
            rep, secs = solve(3, n, var, var is Variant.MV and n == 4)
            if rep.optimum != base[n]:
                failures.append(f"{var.value}(S_3^{n}) = {rep.optimum}, want {base[n]}")
            if secs >= limit:
                failures.append(f"{var.value}(S_3^{n}) took {secs:.0f}s >= {limit}s")
        for var, want in ((Variant.MV_TOTAL, (3, 1)), (Variant.MV_DUAL, (3, 4)), (Variant.GP_TOTAL, (3, 1)),
                          (Variant.GP_DUAL, (3, 1))):
            rep, secs = solve(3, n, var, True)
            if (rep.optimum, rep.count) != want:
                failures.append(f"{var.value}(S_3^{n}): got {(rep.optimum, rep.count)}, want {want}")
            if secs >= limit:
                failures.append(f"{var.value}(S_3^{n}) took {secs:.0f}s")
    # every mu-set of S_3^4 meets each copy iS_3^3 in exactly 3^(n-3) + 1 = 4 vertices
    rep, secs = solve(3, 4, Variant.MV, True)
    g, _ = instance(3, 4)
    blocks = prefix_blocks(g, 3)
    bad = [X for X in rep.sets if any((X.mask & b).bit_count() != 4 for b in blocks)]
    if bad or not rep.sets:
        failures.append(f"{len(bad)} mu-sets of S_3^4 violate the 4-per-copy structure")
    notes.append(f"{len(rep.sets)} mu-sets of S_3^4 checked, enumeration {secs:.0f}s")
    _finish(acceptance_log, 2, "S_3^3 and S_3^4", failures, notes)


# 3. constructions

def test_criterion_3_constructions(acceptance_log):
    failures, notes = [], []

    def attempt(name, make, want_sizes):
        try:
            sets = make()
        except ConstructionError as exc:
            failures.append(f"{name}: {exc}")
            return
        sizes = [len(s) for s in sets]
        if sizes != want_sizes:
            failures.append(f"{name}: sizes {sizes}, want {want_sizes}")

    for p in (3, 4, 5, 6, 7):
        attempt(f"mu_set_sp2({p})", lambda: [mu_set_sp2(p)], [(p + 1) ** 2 // 4 if p % 2 else p * (p + 2) // 4])
        attempt(f"mud_sets_sp2({p})", lambda: mud_sets_sp2(p), [p] * (p + 1))
    for p, n in ((3, 1), (3, 2), (3, 5), (4, 3), (5, 2)):
        attempt(f"diagonal_set({p},{n})", lambda: [diagonal_set(p, n)], [p])
    for n in (3, 4, 5, 6):
        attempt(f"mu_set_s3n({n})", lambda: [mu_set_s3n(n)], [3 ** (n - 2) + 3])
        attempt(f"mud_sets_s3n({n})", lambda: mud_sets_s3n(n), [3, 3, 3, 3])
    for n in range(3, 8):
        attempt(f"outer_gp_sets_s3n({n}).X", lambda: [outer_gp_x(n)], [n])
        if n >= 4:
            attempt(f"outer_gp_sets_s3n({n}).Y", lambda: [outer_gp_y(n)], [2 * n - 7])
    # n = 5, 6: the solver's reported lower bound, within its budget
    for n in (5, 6):
        g, o = instance(3, n)
        for var in (Variant.MV, Variant.GP):
            rep = max_set(g, o, var, SolverOptions(budget_seconds=60, lower_bound="construction"))
            X = rep.sets[0]
            if rep.optimum < 3 ** (n - 2) + 3 or not check_set(o, var, X, shortcuts=False):
                failures.append(f"{var.value}(S_3^{n}) solver lower bound {rep.optimum} < {3 ** (n - 2) + 3}")
            notes.append(f"{var.value}(S_3^{n}) >= {rep.optimum} ({'optimal' if rep.optimal else 'budget'})")
    _finish(acceptance_log, 3, "constructions validate", failures, notes)


# 4. outer numbers of S_3^3 (new data)

def test_criterion_4_outer_s33(acceptance_log):
    failures, notes = [], []
    for var in (Variant.MV_OUTER, Variant.GP_OUTER):
        rep, _ = solve(3, 3, var, True)
        if not rep.optimal or rep.optimum < 3:
            failures.append(f"{var.value}(S_3^3) = {rep.optimum} (optimal={rep.optimal}), want exact and >= 3")
        notes.append(f"DERIVED {var.symbol}(S_3^3) = {rep.optimum}, count {rep.count}")
    _finish(acceptance_log, 4, "outer numbers of S_3^3", failures, notes)


# 5. property suites

def _random_valid(o, var, order, rng):
    """A random maximal set of a hereditary variant: add vertices in random order while valid."""
    X = VertexSet.empty(order)
    for v in rng.sample(range(order), order):
        trial = VertexSet(X.mask | 1 << v, order)
        if check_set(o, var, trial):
            X = trial
    return X


def _suite_geodesic_counts():
    for p, n in ((3, 1), (3, 2), (3, 3), (3, 4), (4, 2), (5, 2)):
        _, o = instance(p, n)
        N = p**n
        for u in range(N):
            for v in range(u + 1, N):
                c = o.count_geodesics(u, v)
                if not 1 <= c <= 2:
                    return f"S_{p}^{n}: {c} geodesics between {u} and {v}"
    return None


SHORTCUT = (Variant.MV_TOTAL, Variant.GP_TOTAL, Variant.GP_DUAL)


def _suite_shortcuts_exhaustive():
    _, o = instance(3, 2)
    for mask in range(1 << 9):
        X = VertexSet(mask, 9)
        for var in SHORTCUT:
            if check_set(o, var, X) != check_set(o, var, X, shortcuts=False):
                return f"S_3^2 {var.value} disagrees on {X.ids()}"
    return None


def _suite_shortcuts_random(p, n, samples=100_000):
    _, o = instance(p, n)
    N = p**n
    rng = random.Random(p * 100 + n)
    for i in range(samples):
        # alternate uniform sizes with small sets, where valid sets live
        k = rng.randrange(N + 1) if i % 2 else rng.randrange(6)
        X = VertexSet.from_ids(rng.sample(range(N), k), N)
        for var in SHORTCUT:
            if check_set(o, var, X) != check_set(o, var, X, shortcuts=False):
                return f"S_{p}^{n} {var.value} disagrees on {X.ids()}"
    return None


HEREDITARY = (Variant.MV, Variant.GP, Variant.MV_TOTAL, Variant.GP_TOTAL)


def _suite_heredity(p, n, pairs=10_000):
    _, o = instance(p, n)
    N = p**n
    rng = random.Random(7 * p + n)
    pool = {var: [_random_valid(o, var, N, rng) for _ in range(50)] for var in HEREDITARY}
    for i in range(pairs):
        var = HEREDITARY[i % 4]
        X = rng.choice(pool[var])
        sub = VertexSet(X.mask & rng.getrandbits(N), N)
        if not check_set(o, var, X) or not check_set(o, var, sub):
            return f"S_{p}^{n} {var.value}: subset {sub.ids()} of {X.ids()} fails"
    return None


def _suite_convex_restriction(n):
    g, o = instance(3, n)
    rng = random.Random(n)
    if n == 3:
        sets = list(solve(3, 3, Variant.MV, True)[0].sets)
    else:
        sets = [_random_valid(o, Variant.MV, g.order, rng) for _ in range(150)]
    for k in range(1, n):
        sub_g, sub_o = instance(3, k)
        for idx, block in enumerate(prefix_blocks(g, k)):
            offset = idx * sub_g.order
            for X in sets:
                inner = VertexSet.from_ids([v - offset for v in X if block >> v & 1], sub_g.order)
                if not check_set(sub_o, Variant.MV, inner):
                    return f"S_3^{n}: restriction of {X.ids()} to block {idx} at level {k} is not a mu-set"
    return None


SOLVED = [(3, 2), (4, 2), (5, 2), (3, 3), (3, 4)]


def _suite_tau_lower_bound():
    # s(G) = p is a lower bound for every variant whose optimum is not s(G) by definition
    for p, n in SOLVED:
        for var in ALL:
            if var is Variant.GP_TOTAL:
                continue
            rep, _ = solve(p, n, var, False)
            if not rep.optimal or rep.optimum < p:
                return f"{var.value}(S_{p}^{n}) = {rep.optimum} < s(G) = {p}"
    return None


def _suite_full_scan():
    g, o = instance(3, 2)
    for var in ALL:
        best, ref = oracles.full_scan(3, 2, var.value)
        rep = enumerate_max_sets(g, o, var)
        got = sorted(sorted(decode(v, 3, 2) for v in X) for X in rep.sets)
        if rep.optimum != best or got != sorted(sorted(s) for s in ref):
            return f"S_3^2 {var.value}: solver ({rep.optimum}, {rep.count}) vs scan ({best}, {len(ref)})"
        if max_set(g, o, var).optimum != best:
            return f"S_3^2 {var.value}: max_set disagrees with scan"
    return None


def test_criterion_5_property_suites(acceptance_log):
    suites = [
        ("geodesic count <= 2", _suite_geodesic_counts),
        ("shortcuts exhaustive S_3^2", _suite_shortcuts_exhaustive),
        ("shortcuts 1e5 S_3^3", lambda: _suite_shortcuts_random(3, 3)),
        ("shortcuts 1e5 S_4^2", lambda: _suite_shortcuts_random(4, 2)),
        ("heredity 1e4 S_3^3", lambda: _suite_heredity(3, 3)),
        ("heredity 1e4 S_4^2", lambda: _suite_heredity(4, 2)),
        ("convex restriction S_3^3", lambda: _suite_convex_restriction(3)),
        ("convex restriction S_3^4", lambda: _suite_convex_restriction(4)),
        ("tau >= s(G)", _suite_tau_lower_bound),
        ("2^9 full scan", _suite_full_scan),
    ]
    failures, notes = [], []
    for name, run in suites:
        start = time.monotonic()
        problem = run()
        secs = time.monotonic() - start
        if problem:
            failures.append(f"{name}: {problem}")
        if secs >= 60:
            failures.append(f"{name}: {secs:.0f}s >= 60s")
        notes.append(f"{name} {secs:.1f}s")
    _finish(acceptance_log, 5, "property suites", failures, notes)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
