"""Exact and heuristic maximization of the count of edges outside
monochromatic pattern copies, over all k-colorings of K_n.

The exact search is exhaustive and only feasible for tiny instances:
two colors are handled by enumerating red graphs up to isomorphism and
discarding one of each complementary pair, three colors by walking color
vectors whose color names appear in first-use order.  The heuristic is
steepest-ascent single-edge recoloring restarted from the explicit
constructions and then from random colorings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .canon import canonical_code, enumerate_graphs
from .errors import InvalidInputError, RefusalError, ResourceLimitError
from .graphs import SimpleGraph, edge_index, edge_pairs
from .monoscan import EdgeColoring, _copy_through
from .patterns import BipartitePattern
from .turan import TuranCache, _greedy_lower_bound, ex_exact
from .constructions import (
    extremal_two_coloring,
    pentagon_three_coloring,
    permuted_overlay_coloring,
)

__all__ = [
    "SearchReport",
    "f_exact",
    "f_heuristic",
    "verify_extremal_characterization",
    "EXACT_CEILINGS",
]

# Largest n the exhaustive search accepts, per color count.  Both limits
# are a compromise between coverage and runtime (two colors at n=9 means
# 274668 host graphs, three colors at n=5 means 9842 color vectors).
EXACT_CEILINGS = {2: 9, 3: 5}


def _graph_nim(g: SimpleGraph, pattern: BipartitePattern) -> int:
    """Edges of g that no pattern copy inside g passes through.

    Edges of a found copy are remembered so later scans skip them; an
    edge covered by some copy can never be counted.
    """
    rows = list(g.adj)
    covered = set()
    pedges = list(pattern.graph.edges())
    nim = 0
    for u, v in g.edges():
        if (u, v) in covered:
            continue
        img = _copy_through(rows, pattern, u, v, want_map=True)
        if img is None:
            nim += 1
        else:
            for a, b in pedges:
                x, y = img[a], img[b]
                covered.add((x, y) if x < y else (y, x))
    return nim


def _class_counts(coloring: EdgeColoring, pattern: BipartitePattern) -> list[int]:
    return [_graph_nim(coloring.class_graph(c), pattern)
            for c in range(1, coloring.k + 1)]


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a maximization run.

    `value` is the best count found and, in exact mode, the true maximum;
    `colorings` then lists every optimum up to vertex relabeling and color
    renaming.  `nodes` counts colorings whose score was evaluated.
    """

    n: int
    k: int
    pattern_name: str
    value: int
    colorings: tuple[EdgeColoring, ...]
    mode: str
    nodes: int
    optima_complete: bool
    seed: Optional[int] = None
    budget: Optional[int] = None

    def recount(self, pattern: BipartitePattern) -> list[int]:
        """Recompute the score of every retained coloring from scratch."""
        return [sum(_class_counts(c, pattern)) for c in self.colorings]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "pattern": self.pattern_name,
            "value": self.value,
            "mode": self.mode,
            "nodes": self.nodes,
            "optima_complete": self.optima_complete,
            "seed": self.seed,
            "budget": self.budget,
            "colorings": [list(c.colors) for c in self.colorings],
        }


def _coloring_key(coloring: EdgeColoring) -> tuple[int, ...]:
    """Smallest color vector over all vertex relabelings and color renames.

    Color minimization for a fixed vertex order is just first-use
    renaming, so only the n! vertex orders are tried.  Fine for n <= 6.
    """
    n = coloring.n
    m = n * (n - 1) // 2
    colors = coloring.colors
    pairs = edge_pairs(n)
    best = None
    for vp in permutations(range(n)):
        arr = [0] * m
        for i, (u, v) in enumerate(pairs):
            a, b = vp[u], vp[v]
            if a > b:
                a, b = b, a
            arr[edge_index(n, a, b)] = colors[i]
        ren: dict[int, int] = {}
        out = []
        for c in arr:
            if c not in ren:
                ren[c] = len(ren) + 1
            out.append(ren[c])
        t = tuple(out)
        if best is None or t < best:
            best = t
    return best


def _exact_two_color(n: int, pattern: BipartitePattern):
    """Score one host graph per complementary pair {R, complement(R)}.

    Swapping the two colors never changes which edges avoid monochromatic
    copies, so the pair member with fewer edges (canonical code breaking
    ties) stands for both.
    """
    best = -1
    optima: list[EdgeColoring] = []
    nodes = 0
    for g in enumerate_graphs(n, ceiling=max(n, 10)):
        comp = g.complement()
        if comp.num_edges < g.num_edges:
            continue
        if comp.num_edges == g.num_edges and canonical_code(comp) < canonical_code(g):
            continue
        nodes += 1
        score = _graph_nim(g, pattern) + _graph_nim(comp, pattern)
        if score > best:
            best = score
            optima = [EdgeColoring.from_graph(g, k=2)]
        elif score == best:
            optima.append(EdgeColoring.from_graph(g, k=2))
    return best, optima, nodes


def _exact_three_color(n: int, pattern: BipartitePattern):
    m = n * (n - 1) // 2
    best = -1
    raw: list[tuple[int, ...]] = []
    nodes = 0
    vec = [0] * m

    def rec(i: int, used: int):
        nonlocal best, nodes, raw
        if i == m:
            nodes += 1
            coloring = EdgeColoring(n, 3, vec)
            score = sum(_class_counts(coloring, pattern))
            if score > best:
                best = score
                raw = [tuple(vec)]
            elif score == best:
                raw.append(tuple(vec))
            return
        for c in range(1, min(3, used + 1) + 1):
            vec[i] = c
            rec(i + 1, max(used, c))

    if m == 0:
        return 0, [EdgeColoring(n, 3, [])], 1
    rec(0, 0)

    seen = set()
    optima = []
    for v in raw:
        coloring = EdgeColoring(n, 3, list(v))
        key = _coloring_key(coloring)
        if key not in seen:
            seen.add(key)
            optima.append(coloring)
    return best, optima, nodes


def f_exact(n: int, pattern: BipartitePattern, k: int = 2, *,
            ceiling: Optional[int] = None) -> SearchReport:
    """True maximum over all k-colorings, with every optimum retained.

    Only k=2 and k=3 have exhaustive drivers, and each has a hard size
    ceiling (see EXACT_CEILINGS; `ceiling` overrides it at the caller's
    risk).  Anything larger is refused rather than approximated.
    """
    if n < 1:
        raise InvalidInputError("invalid-size", f"n={n}")
    if k < 2:
        raise InvalidInputError("invalid-color-count", f"k={k}, need k >= 2")
    if pattern.num_edges == 0:
        raise InvalidInputError("pattern-has-no-edges", pattern.name)
    limit = ceiling if ceiling is not None else EXACT_CEILINGS.get(k)
    if limit is None:
        raise ResourceLimitError(
            "search-ceiling", f"no exhaustive driver for k={k}"
        )
    if n > limit:
        raise ResourceLimitError(
            "search-ceiling", f"n={n} exceeds the k={k} ceiling {limit}"
        )
    if k == 2:
        value, optima, nodes = _exact_two_color(n, pattern)
    else:
        value, optima, nodes = _exact_three_color(n, pattern)
    return SearchReport(
        n=n, k=k, pattern_name=pattern.name, value=value,
        colorings=tuple(optima), mode="exact", nodes=nodes,
        optima_complete=True,
    )


def _seed_colorings(n: int, pattern: BipartitePattern, k: int, seed: int,
                    cache: Optional[TuranCache]):
    """Start states: explicit constructions first, then random colorings.

    Construction seeds that need an exact extremal value fall back to a
    greedy pattern-free graph when that value is out of reach, so the
    stream never raises.
    """
    fallback = None

    def greedy_graph():
        nonlocal fallback
        if fallback is None:
            rec = _greedy_lower_bound(n, pattern, pattern.graph_code.hex(),
                                      seed=seed)
            fallback = rec.witness_graphs()[0]
        return fallback

    if k == 2:
        try:
            yield extremal_two_coloring(n, pattern, cache=cache)
        except RefusalError:
            yield EdgeColoring.from_graph(greedy_graph(), k=2)
    else:
        try:
            yield permuted_overlay_coloring(n, pattern, k, seed=seed,
                                            cache=cache)[0]
        except RefusalError:
            yield EdgeColoring.from_graph(greedy_graph(), k=k)
        if k == 3 and n >= 5:
            yield pentagon_three_coloring(n)

    rng = random.Random(seed)
    while True:
        yield EdgeColoring.random(n, k, seed=rng.randrange(2 ** 32))


def f_heuristic(n: int, pattern: BipartitePattern, k: int = 2, *,
                budget: int = 2000, seed: int = 0,
                cache: Optional[TuranCache] = None) -> SearchReport:
    """Best count reachable by steepest-ascent edge recoloring.

    Each unit of `budget` pays for scoring one coloring (a seed or a
    single-edge recolor of the current state).  Within a sweep the move
    with the largest gain wins, earliest edge index and then smallest
    color breaking ties; a sweep with no gain triggers a restart from the
    next seed.  Runs with the same arguments produce the same report.
    """
    if n < 1:
        raise InvalidInputError("invalid-size", f"n={n}")
    if k < 2:
        raise InvalidInputError("invalid-color-count", f"k={k}, need k >= 2")
    if budget < 1:
        raise InvalidInputError("invalid-budget", f"budget={budget}, need >= 1")
    if pattern.num_edges == 0:
        raise InvalidInputError("pattern-has-no-edges", pattern.name)

    pairs = edge_pairs(n)
    m = len(pairs)
    evals = 0
    best_score = -1
    best_coloring: Optional[EdgeColoring] = None
    seeds = _seed_colorings(n, pattern, k, seed, cache)

    while evals < budget:
        cur = next(seeds).copy()
        counts = _class_counts(cur, pattern)
        total = sum(counts)
        evals += 1
        if total > best_score:
            best_score, best_coloring = total, cur.copy()

        improving = True
        while improving and evals < budget:
            improving = False
            move = None  # (gain, edge index, color, new counts for the two classes)
            for i, (u, v) in enumerate(pairs):
                old = cur.color_of(u, v)
                for c in range(1, k + 1):
                    if c == old:
                        continue
                    if evals >= budget:
                        break
                    cur.set_color(u, v, c)
                    a = _graph_nim(cur.class_graph(old), pattern)
                    b = _graph_nim(cur.class_graph(c), pattern)
                    cur.set_color(u, v, old)
                    evals += 1
                    gain = (a + b) - (counts[old - 1] + counts[c - 1])
                    if gain > 0 and (move is None or gain > move[0]):
                        move = (gain, i, c, a, b)
                else:
                    continue
                break
            if move is not None:
                gain, i, c, a, b = move
                u, v = pairs[i]
                old = cur.color_of(u, v)
                cur.set_color(u, v, c)
                counts[old - 1] = a
                counts[c - 1] = b
                total += gain
                if total > best_score:
                    best_score, best_coloring = total, cur.copy()
                improving = True

    if m == 0 and best_coloring is None:
        best_coloring = EdgeColoring(n, k, [])
        best_score = 0

    return SearchReport(
        n=n, k=k, pattern_name=pattern.name, value=best_score,
        colorings=(best_coloring,), mode="heuristic", nodes=evals,
        optima_complete=False, seed=seed, budget=budget,
    )


def verify_extremal_characterization(coloring: EdgeColoring,
                                     pattern: BipartitePattern, *,
                                     cache: Optional[TuranCache] = None) -> bool:
    """Whether some color class is pattern-free with the extremal edge count.

    Colorings of this shape realize the two-color lower bound; the check
    needs the exact extremal value and refuses without it.
    """
    from .monoscan import is_h_free

    rec = ex_exact(coloring.n, pattern, cache=cache)
    if not rec.exact:
        raise RefusalError(
            "non-exact extremal record",
            f"ex({coloring.n}, {pattern.name}) is not known exactly",
        )
    for c in range(1, coloring.k + 1):
        g = coloring.class_graph(c)
        if g.num_edges == rec.value and is_h_free(g, pattern):
            return True
    return False
