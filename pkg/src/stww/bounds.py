"""Twin-width upper bounds: greedy sequences, exact search, subdivided cliques."""

from __future__ import annotations

from itertools import combinations

from .sequence import ContractionSequence
from .trigraph import NEG, POS, RED, SignedTrigraph


def _require_sides(graph: SignedTrigraph, what: str) -> None:
    for v in graph.vertices():
        if graph.side(v) is None:
            raise ValueError(f"{what} needs every vertex on a side; {v} has none")


def _candidate_pairs(graph: SignedTrigraph, bipartite: bool) -> list[tuple[int, int]]:
    if not bipartite:
        return list(combinations(graph.vertices(), 2))
    return [
        (u, v)
        for u, v in combinations(graph.vertices(), 2)
        if graph.side(u) == graph.side(v)
    ]


def _contraction_score(
    graph: SignedTrigraph, u: int, v: int, by_red_desc: list[int], total_red: int
) -> tuple[int, int]:
    """(max red degree, red edge count) of the graph after contracting u,v.

    Evaluated locally: only the merged vertex and the old neighbors of u and
    v change degree, so the maximum elsewhere is read off a precomputed
    degree-descending vertex order.
    """
    nbrs_u = graph.neighbors(u)
    nbrs_v = graph.neighbors(v)
    merged_red = 0
    affected_max = 0
    affected = {u, v}
    for x in set(nbrs_u) | set(nbrs_v):
        if x == u or x == v:
            continue
        ku = nbrs_u.get(x)
        kv = nbrs_v.get(x)
        red = not ((ku == POS and kv == POS) or (ku == NEG and kv == NEG))
        if red:
            merged_red += 1
        degree = (
            graph.red_degree(x)
            + (1 if red else 0)
            - (1 if ku == RED else 0)
            - (1 if kv == RED else 0)
        )
        affected_max = max(affected_max, degree)
        affected.add(x)
    outside_max = 0
    for x in by_red_desc:
        if x not in affected:
            outside_max = graph.red_degree(x)
            break
    new_total = (
        total_red
        - graph.red_degree(u)
        - graph.red_degree(v)
        + (1 if graph.edge(u, v) == RED else 0)
        + merged_red
    )
    return max(merged_red, affected_max, outside_max), new_total


def greedy_sequence(
    graph: SignedTrigraph, bipartite: bool = False, tie_break: str = "smallest"
) -> ContractionSequence:
    """Full contraction sequence picked greedily.

    Each step contracts the pair minimizing (resulting max red degree,
    resulting red edge count), breaking ties by the smallest surviving-label
    pair; tie_break="largest" reverses the label comparison, giving a second
    deterministic sequence for cross-checks.  The achieved width lands in
    declared_width.
    """
    if tie_break not in ("smallest", "largest"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    if bipartite:
        _require_sides(graph, "bipartite greedy")
    g = graph
    labels = {v: v for v in g.vertices()}
    steps: list[tuple[int, int]] = []
    width = g.max_red_degree()
    while True:
        pairs = _candidate_pairs(g, bipartite)
        if not pairs:
            break
        by_red_desc = sorted(g.vertices(), key=g.red_degree, reverse=True)
        total_red = sum(g.red_degree(v) for v in g.vertices()) // 2
        best_key: tuple | None = None
        best_pair = pairs[0]
        for u, v in pairs:
            score = _contraction_score(g, u, v, by_red_desc, total_red)
            low, high = sorted((labels[u], labels[v]))
            tie = (low, high) if tie_break == "smallest" else (-low, -high)
            key = (*score, tie)
            if best_key is None or key < best_key:
                best_key = key
                best_pair = (u, v)
        u, v = best_pair
        keep, merge = sorted((labels[u], labels[v]))
        new = g.fresh_id()
        g = g.contract(u, v)
        labels[new] = keep
        del labels[u], labels[v]
        steps.append((keep, merge))
        width = max(width, g.max_red_degree())
    return ContractionSequence(
        tuple(steps),
        declared_width=width,
        num_vertices=max(graph.vertices(), default=0),
    )


def exact_tww_bruteforce(
    graph: SignedTrigraph,
    bipartite: bool = False,
    max_vertices: int = 10,
    width_cap: int | None = None,
) -> tuple[int, ContractionSequence]:
    """Exact minimum width over all (bipartite) sequences, with a witness.

    Searches partition states with memoization, iteratively deepening a red
    degree cap so structured graphs stay cheap; pass max_vertices explicitly
    to override the size guard.  With width_cap set, raises ValueError if
    the true minimum exceeds the cap.  The witness is the lexicographically
    smallest among minimum-width sequences.
    """
    n = graph.num_vertices
    if n > max_vertices:
        raise ValueError(f"{n} vertices exceeds the brute-force guard {max_vertices}")
    if bipartite:
        _require_sides(graph, "bipartite search")

    initial = graph.max_red_degree()
    top_cap = width_cap if width_cap is not None else max(n - 1, 0)
    infinity = float("inf")

    def make_solver(cap: int):
        memo: dict[frozenset[frozenset[int]], int | float] = {}

        def solve(g: SignedTrigraph) -> int | float:
            parts = frozenset(g.bag(v) for v in g.vertices())
            hit = memo.get(parts)
            if hit is not None:
                return hit
            pairs = _candidate_pairs(g, bipartite)
            if not pairs:
                memo[parts] = 0
                return 0
            best: int | float = infinity
            for u, v in pairs:
                h = g.contract(u, v)
                m = h.max_red_degree()
                if m > cap:
                    continue
                value = max(m, solve(h))
                if value < best:
                    best = value
                    if best == 0:
                        break
            memo[parts] = best
            return best

        return solve

    for cap in range(initial, top_cap + 1):
        solve = make_solver(cap)
        achieved = solve(graph)
        if achieved == infinity:
            continue
        width = max(initial, int(achieved))
        # Reconstruct the lexicographically smallest witness: at each state
        # take the smallest label pair that still meets the achieved value.
        steps: list[tuple[int, int]] = []
        labels = {v: v for v in graph.vertices()}
        g = graph
        while True:
            pairs = _candidate_pairs(g, bipartite)
            if not pairs:
                break
            ordered = sorted(pairs, key=lambda p: sorted((labels[p[0]], labels[p[1]])))
            for u, v in ordered:
                h = g.contract(u, v)
                m = h.max_red_degree()
                if m > achieved:
                    continue
                if max(m, solve(h)) <= achieved:
                    keep, merge = sorted((labels[u], labels[v]))
                    new = g.fresh_id()
                    g = h
                    labels[new] = keep
                    del labels[u], labels[v]
                    steps.append((keep, merge))
                    break
            else:
                raise AssertionError("witness reconstruction lost the optimum")
        return width, ContractionSequence(
            tuple(steps),
            declared_width=width,
            num_vertices=max(graph.vertices(), default=0),
        )
    raise ValueError(f"no sequence within width cap {top_cap}")


def _trace_path(
    graph: SignedTrigraph, start: int, first: int, clique: set[int]
) -> tuple[int, list[int]]:
    """Follow a subdivided edge from a clique vertex to the next clique vertex."""
    path: list[int] = []
    prev, cur = start, first
    while cur not in clique:
        path.append(cur)
        nexts = [x for x in graph.neighbors(cur) if x != prev]
        if len(nexts) != 1:
            raise ValueError(f"vertex {cur} does not continue a subdivision path")
        prev, cur = cur, nexts[0]
    return cur, path


def _validate_subdivided_clique(graph: SignedTrigraph, clique: list[int]) -> None:
    clique_set = set(clique)
    d = len(clique_set)
    if d < 2:
        raise ValueError("need at least two clique vertices")
    for v in clique_set:
        if not graph.has_vertex(v):
            raise ValueError(f"clique vertex {v} not in graph")
        if len(graph.neighbors(v)) != d - 1:
            raise ValueError(f"clique vertex {v} has degree {len(graph.neighbors(v))}, want {d - 1}")
    for v in graph.vertices():
        if v not in clique_set and len(graph.neighbors(v)) != 2:
            raise ValueError(f"subdivision vertex {v} has degree {len(graph.neighbors(v))}, want 2")
    pair_count: dict[tuple[int, int], int] = {}
    inner_visits: dict[int, int] = {v: 0 for v in graph.vertices() if v not in clique_set}
    for v in sorted(clique_set):
        for first in graph.neighbors(v):
            end, path = _trace_path(graph, v, first, clique_set)
            if end == v:
                raise ValueError(f"subdivision path loops back to {v}")
            key = (min(v, end), max(v, end))
            pair_count[key] = pair_count.get(key, 0) + 1
            for x in path:
                inner_visits[x] += 1
    expected = {(a, b) for a, b in combinations(sorted(clique_set), 2)}
    # each path is discovered once from either end
    if set(pair_count) != expected or any(c != 2 for c in pair_count.values()):
        raise ValueError("clique pairs are not each joined by exactly one path")
    if any(c != 2 for c in inner_visits.values()):
        raise ValueError("some subdivision vertex lies on no (or several) paths")


def subdivided_clique_sequence(
    graph: SignedTrigraph, clique_vertices: list[int] | None = None
) -> ContractionSequence:
    """Contraction sequence of width <= d-1 for a subdivision of K_d.

    Repeatedly contracts a subdivision vertex into an adjacent clique
    vertex (smallest ids first), then contracts the remaining clique in
    ascending order.  Along the way asserts the invariant the bound rests
    on: every vertex keeps total degree (black plus red) at most d-1; for
    d = 2 only the red part of the bound holds and is asserted instead.

    The clique/subdivider classification is recovered from degrees when
    possible (clique vertices are exactly those of degree != 2); for inputs
    where every degree is 2 it must be supplied.
    """
    for _, _, kind in graph.edges():
        if kind == RED:
            raise ValueError("input graph must not contain red edges")
    if clique_vertices is None:
        clique_vertices = [v for v in graph.vertices() if len(graph.neighbors(v)) != 2]
        if not clique_vertices:
            raise ValueError(
                "every vertex has degree 2; supply clique_vertices explicitly"
            )
    _validate_subdivided_clique(graph, clique_vertices)
    d = len(set(clique_vertices))

    g = graph
    labels = {v: v for v in g.vertices()}
    clique = set(clique_vertices)
    subdividers = set(g.vertices()) - clique
    steps: list[tuple[int, int]] = []
    width = 0

    def check_degrees() -> None:
        nonlocal width
        width = max(width, g.max_red_degree())
        if g.max_red_degree() > d - 1:
            raise AssertionError(f"red degree exceeded {d - 1}")
        if d >= 3:
            worst = max((len(g.neighbors(x)) for x in g.vertices()), default=0)
            if worst > d - 1:
                raise AssertionError(f"total degree {worst} exceeded {d - 1}")

    def contract_into(u: int, v: int) -> int:
        """Contract u and v; the merged vertex answers to the smaller label."""
        nonlocal g
        keep, merge = sorted((labels[u], labels[v]))
        new = g.fresh_id()
        g = g.contract(u, v)
        labels[new] = keep
        del labels[u], labels[v]
        steps.append((keep, merge))
        return new

    check_degrees()
    while subdividers:
        pick = None
        for v in sorted(clique, key=labels.get):
            adjacent = [u for u in g.neighbors(v) if u in subdividers]
            if adjacent:
                pick = (v, min(adjacent, key=labels.get))
                break
        if pick is None:
            raise AssertionError("subdivision vertices left but none adjacent to the clique")
        v, u = pick
        subdividers.remove(u)
        clique.remove(v)
        clique.add(contract_into(u, v))
        check_degrees()
    while len(clique) > 1:
        first, second = sorted(clique, key=labels.get)[:2]
        clique.remove(first)
        clique.remove(second)
        clique.add(contract_into(first, second))
        check_degrees()
    return ContractionSequence(
        tuple(steps),
        declared_width=width,
        num_vertices=max(graph.vertices(), default=0),
    )
