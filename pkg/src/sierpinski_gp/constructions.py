"""Closed-form values and explicit extremal sets for S_p^2 and S_3^n.

Each construction is checked against the definition-based checker before it
is returned; a failing construction raises :class:`ConstructionError`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable

from .errors import ConstructionError, ParameterError
from .graph_core import SierpinskiGraph, VertexSet, build_graph, encode
from .metric import GeodesicOracle, build_oracle
from .variants import Variant, check_set, witness_failure


@dataclass(frozen=True)
class FormulaEntry:
    variant: Variant
    applies: Callable[[int, int], bool]
    value: Callable[[int, int], int]
    count: Callable[[int, int], int | None]
    source: str
    domain: str


def _mu_sp2(p: int, n: int) -> int:
    return (p + 1) ** 2 // 4 if p % 2 else p * (p + 2) // 4


def _mu_sp2_count(p: int, n: int) -> int:
    return comb(p, (p + 1) // 2) if p % 2 else comb(p + 1, (p + 2) // 2)


def _mu_s3n(p: int, n: int) -> int:
    return 3 ** (n - 2) + 3


def _n2(p: int, n: int) -> bool:
    return n == 2


def _one(p: int, n: int) -> int:
    return 1


def _p(p: int, n: int) -> int:
    return p


def _three(p: int, n: int) -> int:
    return 3


def _unknown(p: int, n: int) -> None:
    return None


FORMULAS: list[FormulaEntry] = [
    FormulaEntry(Variant.MV, _n2, _mu_sp2, _mu_sp2_count, "mu(S_p^2) theorem", "n = 2"),
    FormulaEntry(Variant.GP, _n2, _mu_sp2, _mu_sp2_count, "gp(S_p^2) corollary", "n = 2"),
    FormulaEntry(Variant.MV, lambda p, n: p == 3 and n >= 3, _mu_s3n, _unknown, "mu(S_3^n) theorem", "p = 3, n >= 3"),
    FormulaEntry(Variant.GP, lambda p, n: p == 3 and n >= 3, _mu_s3n, _unknown, "gp(S_3^n) corollary",
                 "p = 3, n >= 3"),
    FormulaEntry(Variant.MV_DUAL, _n2, _p, lambda p, n: p + 1, "mu_d(S_p^2) theorem", "n = 2"),
    FormulaEntry(Variant.GP_DUAL, _n2, _p, _one, "gp_d(S_p^2) corollary", "n = 2"),
    FormulaEntry(Variant.MV_TOTAL, _n2, _p, _one, "S_p^2 total/outer theorem", "n = 2"),
    FormulaEntry(Variant.MV_OUTER, _n2, _p, _one, "S_p^2 total/outer theorem", "n = 2"),
    FormulaEntry(Variant.GP_TOTAL, _n2, _p, _one, "S_p^2 total/outer theorem", "n = 2"),
    FormulaEntry(Variant.GP_OUTER, _n2, _p, _one, "S_p^2 total/outer theorem", "n = 2"),
    FormulaEntry(Variant.MV_TOTAL, lambda p, n: p == 3, _three, _one, "mu_t(S_3^n) theorem", "p = 3, n >= 1"),
    # K_3 has a single maximum dual set (all of it), so the count of four starts at n = 2
    FormulaEntry(Variant.MV_DUAL, lambda p, n: p == 3 and n >= 2, _three, lambda p, n: 4, "mu_d(S_3^n) theorem",
                 "p = 3, n >= 2"),
    FormulaEntry(Variant.MV_DUAL, lambda p, n: p == 3 and n == 1, _three, _unknown, "mu_d(S_3^n) theorem",
                 "p = 3, n = 1"),
    FormulaEntry(Variant.GP_TOTAL, lambda p, n: p == 3, _three, _one, "gp_t(S_3^n) corollary", "p = 3, n >= 1"),
    FormulaEntry(Variant.GP_DUAL, lambda p, n: p == 3, _three, _one, "gp_d(S_3^n) corollary", "p = 3, n >= 1"),
]


def formula_entries(variant: Variant, p: int, n: int) -> list[FormulaEntry]:
    variant = Variant(variant)
    return [e for e in FORMULAS if e.variant is variant and e.applies(p, n)]


def formula_value(variant: Variant, p: int, n: int) -> tuple[int, int | None] | None:
    """Known (value, count) for ``variant`` on S_p^n, or None when no closed form covers it.

    Where several statements cover the same instance they agree on the
    value; a stated count wins over an unknown one.
    """
    if p < 3 or n < 1:
        raise ParameterError("need p >= 3 and n >= 1")
    entries = formula_entries(variant, p, n)
    if not entries:
        return None
    values = {e.value(p, n) for e in entries}
    if len(values) != 1:
        raise AssertionError(f"inconsistent formula table at {variant.value}, p={p}, n={n}")
    counts = {e.count(p, n) for e in entries} - {None}
    if len(counts) > 1:
        raise AssertionError(f"inconsistent counts at {variant.value}, p={p}, n={n}")
    return values.pop(), (counts.pop() if counts else None)


def outer_lower_bound(n: int) -> int:
    """Lower bound on the outer numbers of S_3^n, n >= 3, from the explicit sets."""
    return max(n, 2 * n - 7)


# explicit sets

@lru_cache(maxsize=16)
def instance(p: int, n: int) -> tuple[SierpinskiGraph, GeodesicOracle]:
    g = build_graph(p, n)
    return g, build_oracle(g)


def _word(p: int, digits) -> int:
    return encode(list(digits), p)


def _validated(p: int, n: int, ids, variants: tuple[Variant, ...], name: str, validate: bool) -> VertexSet:
    order = p**n
    X = VertexSet.from_ids(ids, order)
    if validate:
        g, oracle = instance(p, n)
        for var in variants:
            w = witness_failure(oracle, var, X, shortcuts=False)
            if w is not None:
                raise ConstructionError(f"{name} on S_{p}^{n} is not a {var.value} set: {w.describe(g.label)}")
    return X


def mu_set_sp2(p: int, validate: bool = True) -> VertexSet:
    """{ii, ij : i < h <= j} with h = ceil(p/2)."""
    if p < 3:
        raise ParameterError("p must be >= 3")
    h = (p + 1) // 2 if p % 2 else p // 2
    ids = [_word(p, (i, i)) for i in range(h)] + [_word(p, (i, j)) for i in range(h) for j in range(h, p)]
    return _validated(p, 2, ids, (Variant.MV, Variant.GP), "mu_set_sp2", validate)


def mud_sets_sp2(p: int, validate: bool = True) -> list[VertexSet]:
    """The p sets V(iS_p^1) followed by the diagonal {ii}."""
    if p < 3:
        raise ParameterError("p must be >= 3")
    out = [_validated(p, 2, [_word(p, (i, j)) for j in range(p)], (Variant.MV_DUAL,), "mud_sets_sp2", validate)
           for i in range(p)]
    out.append(diagonal_set(p, 2, validate=validate))
    return out


def diagonal_set(p: int, n: int, validate: bool = True) -> VertexSet:
    """The extreme vertices i^n."""
    if p < 3 or n < 1:
        raise ParameterError("need p >= 3 and n >= 1")
    ids = [_word(p, (i,) * n) for i in range(p)]
    return _validated(p, n, ids, tuple(Variant), "diagonal_set", validate)


def mu_set_s3n(n: int, validate: bool = True) -> VertexSet:
    """{s012, s120, s201 : s in [3]_0^(n-3)} together with the extreme vertices."""
    if n < 3:
        raise ParameterError("mu_set_s3n needs n >= 3")
    ids = [_word(3, (i,) * n) for i in range(3)]
    for s in itertools.product(range(3), repeat=n - 3):
        for tail in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            ids.append(_word(3, s + tail))
    return _validated(3, n, ids, (Variant.MV, Variant.GP), "mu_set_s3n", validate)


def iji_set_s33(validate: bool = True) -> VertexSet:
    """{iji : i != j} in S_3^3."""
    ids = [_word(3, (i, j, i)) for i in range(3) for j in range(3) if i != j]
    return _validated(3, 3, ids, (Variant.MV,), "iji_set_s33", validate)


def mud_sets_s3n(n: int, validate: bool = True) -> list[VertexSet]:
    """{i^n, i^(n-1)j, i^(n-1)k} for each i, then {0^n, 1^n, 2^n}."""
    if n < 3:
        raise ParameterError("mud_sets_s3n needs n >= 3")
    out = []
    for i in range(3):
        ids = [_word(3, (i,) * (n - 1) + (j,)) for j in range(3)]
        out.append(_validated(3, n, ids, (Variant.MV_DUAL,), "mud_sets_s3n", validate))
    out.append(diagonal_set(3, n, validate=validate))
    return out


def outer_gp_x(n: int, validate: bool = True) -> VertexSet:
    """{0^k 1 2^(n-k-1) : 0 <= k < n}, of size n.

    Not outer general position for any n: 0^(n-1) 1 lies on the unique
    geodesic from 0^n to 0^(n-2) 1 2, so validation raises.
    """
    if n < 3:
        raise ParameterError("outer_gp_x needs n >= 3")
    ids = [_word(3, (0,) * k + (1,) + (2,) * (n - k - 1)) for k in range(n)]
    return _validated(3, n, ids, (Variant.GP_OUTER,), "outer_gp_x", validate)


def outer_gp_y_ids(n: int, literal: bool = False) -> list[int]:
    """Words of {0^n} and {i 0 0 0^k i j^(n-k-4)}, i, j in {1, 2}, 0 <= k < n-4.

    Only i != j is taken by default (2n - 7 words); ``literal`` also takes
    i == j (4n - 15 words). Checked up to n = 7, the default reading
    validates only for n = 4, 5 and the literal one only for n = 4.
    """
    if n < 4:
        raise ParameterError("outer_gp_y needs n >= 4")
    ids = {_word(3, (0,) * n)}
    for i in (1, 2):
        for j in (1, 2):
            if i == j and not literal:
                continue
            for k in range(n - 4):
                ids.add(_word(3, (i, 0, 0) + (0,) * k + (i,) + (j,) * (n - k - 4)))
    return sorted(ids)


def outer_gp_y(n: int, validate: bool = True, literal: bool = False) -> VertexSet:
    return _validated(3, n, outer_gp_y_ids(n, literal), (Variant.GP_OUTER,), "outer_gp_y", validate)


def outer_gp_sets_s3n(n: int, validate: bool = True, literal: bool = False) -> tuple[VertexSet, VertexSet | None]:
    """The two outer general position families (X, Y); Y is None for n = 3."""
    X = outer_gp_x(n, validate)
    if n < 4:
        return X, None
    return X, outer_gp_y(n, validate, literal)


def best_construction(g: SierpinskiGraph, oracle: GeodesicOracle, variant: Variant) -> VertexSet | None:
    """Largest explicit set known for (variant, g) that passes the checker, if any."""
    p, n = g.p, g.n
    candidates: list[VertexSet] = [diagonal_set(p, n, validate=False)]
    if variant.base is variant:
        if n == 2:
            candidates.append(mu_set_sp2(p, validate=False))
        if p == 3 and n >= 3:
            candidates.append(mu_set_s3n(n, validate=False))
    if variant.kind == "outer" and p == 3 and n >= 3:
        candidates.append(outer_gp_x(n, validate=False))
        if n >= 4:
            candidates.append(VertexSet.from_ids(outer_gp_y_ids(n), g.order))
    if variant.kind == "dual" and n == 2:
        candidates.extend(mud_sets_sp2(p, validate=False))
    candidates.sort(key=len, reverse=True)
    for X in candidates:
        if check_set(oracle, variant, X):
            return X
    return None


def formula_table(ps, ns) -> list[dict]:
    rows = []
    for p in ps:
        for n in ns:
            for var in Variant:
                known = formula_value(var, p, n)
                entries = formula_entries(var, p, n)
                row = {"p": p, "n": n, "variant": var.value, "value": None, "count": None, "source": None}
                if known is not None:
                    row["value"], row["count"] = known
                    row["source"] = "; ".join(e.source for e in entries)
                elif var.kind == "outer" and p == 3 and n >= 3:
                    row["lower_bound"] = outer_lower_bound(n)
                    row["source"] = "explicit outer general position sets"
                rows.append(row)
    return rows
