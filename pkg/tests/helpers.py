"""Shared random-instance builders and brute-force referees.

Everything here is deliberately independent of the solver internals: the
record referee recomputes profile weights straight from the definitions, so
the dynamic program and the tests can only agree by both being right.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction

from stww.bwmc import Profile, enumerate_red_connected, realizes
from stww.cnf import Formula, WeightFunction
from stww.cwexpr import CliqueWidthExpression, CwEdge, CwLeaf, CwRelabel, CwUnion, expression
from stww.trigraph import NEG, POS, SIDE_CLA, SIDE_VAR, SignedTrigraph


def random_formula(rng, max_vars=10, max_clauses=12, widths=(2, 3, 4), min_clauses=0):
    """Random CNF: distinct clauses, no complementary pair inside a clause."""
    n = rng.randint(1, max_vars)
    target = rng.randint(min_clauses, max_clauses)
    clauses = []
    seen = set()
    for _ in range(6 * target + 12):
        if len(clauses) >= target:
            break
        width = min(rng.choice(widths), n)
        chosen = rng.sample(range(1, n + 1), width)
        clause = frozenset(v if rng.random() < 0.5 else -v for v in chosen)
        if clause in seen:
            continue
        seen.add(clause)
        clauses.append(clause)
    return Formula(n, tuple(clauses))


def random_weights(rng, num_vars, zeros=True, negatives=True):
    """Random rational literal weights, mixing signs and denominators."""
    low = -6 if negatives else 0
    table = {}
    for v in range(1, num_vars + 1):
        for lit in (v, -v):
            numerator = rng.randint(low, 6)
            if not zeros and numerator == 0:
                numerator = 1
            table[lit] = Fraction(numerator, rng.randint(1, 4))
    return WeightFunction(table)


def random_bipartite_graph(rng, max_n=30, p=0.3, min_n=2):
    """Random sided signed graph, edges only across the two sides."""
    n = rng.randint(min_n, max_n)
    split = rng.randint(1, n - 1)
    sides = {v: (SIDE_VAR if v <= split else SIDE_CLA) for v in range(1, n + 1)}
    edges = []
    for u in range(1, split + 1):
        for v in range(split + 1, n + 1):
            if rng.random() < p:
                edges.append((u, v, POS if rng.random() < 0.5 else NEG))
    return SignedTrigraph(range(1, n + 1), edges, sides=sides)


def brute_min_bipartite_width(graph):
    """Reference exact bipartite twin-width: plain recursion, no memo tricks."""

    def best(g):
        pairs = [
            (u, v)
            for u, v in itertools.combinations(g.vertices(), 2)
            if g.side(u) == g.side(v)
        ]
        if not pairs:
            return 0
        result = None
        for u, v in pairs:
            h = g.contract(u, v)
            value = max(h.max_red_degree(), best(h))
            if result is None or value < result:
                result = value
        return result

    return max(graph.max_red_degree(), best(graph))


def brute_hitting_set_exists(universe, sets, k):
    """Is there a ≤ k element subset of the universe meeting every set?"""
    for size in range(0, k + 1):
        for pick in itertools.combinations(sorted(universe), size):
            chosen = set(pick)
            if all(chosen & set(s) for s in sets):
                return True
    return False


def brute_multicolored_clique_exists(parts, edge_set):
    """Is there a clique picking exactly one vertex from every part?"""
    for pick in itertools.product(*parts):
        if all(
            frozenset((u, v)) in edge_set
            for u, v in itertools.combinations(pick, 2)
        ):
            return True
    return False


def random_partitioned_instance(rng, max_parts=3, max_size=3, ensure_nonedge=False):
    """Balanced parts 1..d*size plus random cross-part edges.

    With ensure_nonedge, one cross pair per part pair is forced absent, so
    the instance's incidence graph carries at least one non-edge clause for
    every pair of parts.
    """
    d = rng.randint(2, max_parts)
    size = rng.randint(1, max_size)
    parts = [list(range(1 + i * size, 1 + (i + 1) * size)) for i in range(d)]
    edges = set()
    for i, j in itertools.combinations(range(d), 2):
        crosses = [(u, v) for u in parts[i] for v in parts[j]]
        banned = rng.choice(crosses) if ensure_nonedge else None
        for cross in crosses:
            if cross != banned and rng.random() < 0.6:
                edges.add(frozenset(cross))
    return parts, edges


# -- profile record referee -------------------------------------------------


def region_scope(current, region):
    """Original variables bagged in the region's variable-side vertices."""
    out = set()
    for u in region:
        if current.side(u) == SIDE_VAR:
            out |= current.bag(u)
    return sorted(out)


def _clause_satisfied(initial, clause_vertex, tau, scope):
    for v, kind in initial.neighbors(clause_vertex).items():
        if v not in scope:
            continue
        if kind == POS and tau[v]:
            return True
        if kind == NEG and not tau[v]:
            return True
    return False


def profile_of(region, tau, initial, current):
    """The unique profile a scope assignment induces on a region."""
    scope = set(region_scope(current, region))
    has_one, mixed, satisfied = set(), set(), set()
    for u in region:
        if current.side(u) == SIDE_VAR:
            bag = current.bag(u)
            if any(tau[v] for v in bag):
                has_one.add(u)
                if any(not tau[v] for v in bag):
                    mixed.add(u)
        else:
            if all(_clause_satisfied(initial, c, tau, scope) for c in current.bag(u)):
                satisfied.add(u)
    return Profile(
        frozenset(region),
        frozenset(has_one),
        frozenset(mixed),
        sum(1 for v in scope if tau[v]),
        frozenset(satisfied),
    )


def check_record(initial, current, record, weights, budget, max_region):
    """Referee one level's full record against exhaustive enumeration.

    For every red-connected region up to the size threshold, enumerates all
    scope assignments within the ones budget, derives each one's profile
    (cross-checked against `realizes`), and accumulates expected weights.
    Asserts the record holds exactly the realizable profiles with exactly
    those weights.  Returns the number of entries checked.
    """
    regions = set(enumerate_red_connected(current, max_region))
    by_region = defaultdict(dict)
    for prof, value in record.items():
        by_region[prof.region][prof] = value
    stray = set(by_region) - regions
    assert not stray, f"record mentions untracked regions: {sorted(map(sorted, stray))[:3]}"

    checked = 0
    for region in regions:
        scope = region_scope(current, region)
        expected = defaultdict(Fraction)
        for bits in itertools.product((0, 1), repeat=len(scope)):
            if sum(bits) > budget:
                continue
            tau = dict(zip(scope, bits))
            prof = profile_of(region, tau, initial, current)
            assert realizes(prof, tau, initial, current), (prof, tau)
            weight = Fraction(1)
            for v in scope:
                weight *= weights.of(v if tau[v] else -v)
            expected[prof] += weight
        got = by_region.get(region, {})
        missing = set(expected) - set(got)
        extra = set(got) - set(expected)
        assert not missing, f"realizable profiles missing from the record: {sorted(missing, key=str)[:2]}"
        assert not extra, f"unrealizable profiles present in the record: {sorted(extra, key=str)[:2]}"
        for prof, value in expected.items():
            assert got[prof] == value, (prof, got[prof], value)
        checked += len(expected)
    return checked


# -- clique-width expressions -------------------------------------------------


def random_cw_expression(rng, k, max_leaves=20):
    """Random well-formed k-expression whose evaluation never sign-conflicts.

    Built bottom-up while tracking the evaluated labels and edges, so an
    edge insertion that would assign both signs to one pair is simply not
    emitted.  Leaves are named 1..n, making vertex ids explicit.
    """
    counter = itertools.count(1)

    def build(n_leaves):
        if n_leaves == 1:
            name = str(next(counter))
            label = rng.randint(1, k)
            node = CwLeaf(label, name)
            labels = {int(name): label}
            edges = {}
        else:
            split = rng.randint(1, n_leaves - 1)
            left, lab_l, ed_l = build(split)
            right, lab_r, ed_r = build(n_leaves - split)
            node = CwUnion(left, right)
            labels = {**lab_l, **lab_r}
            edges = {**ed_l, **ed_r}
        for _ in range(rng.randint(0, 3)):
            if k < 2:
                break
            a, b = rng.sample(range(1, k + 1), 2)
            if rng.random() < 0.55:
                sign = POS if rng.random() < 0.5 else NEG
                group_a = [v for v, lab in labels.items() if lab == a]
                group_b = [v for v, lab in labels.items() if lab == b]
                if not group_a or not group_b:
                    continue
                pairs = [(min(x, y), max(x, y)) for x in group_a for y in group_b]
                if any(edges.get(p, sign) != sign for p in pairs):
                    continue
                for p in pairs:
                    edges[p] = sign
                node = CwEdge(a, b, sign, node)
            else:
                for v, lab in list(labels.items()):
                    if lab == a:
                        labels[v] = b
                node = CwRelabel(a, b, node)
        return node, labels, edges

    node, _, _ = build(rng.randint(1, max_leaves))
    return expression(node)


def evaluate_cw_text(text):
    """Independent evaluator: parses serialized expression text itself.

    Returns (vertex ids, {(u, v): sign}) built with its own tokenizer and
    stack-free recursion, sharing nothing with stww.cwexpr. Numeric leaf
    names only (which is what the tests generate).
    """
    tokens = text.replace("(", " ").replace(")", " ").split()
    pos = 0

    def next_token():
        nonlocal pos
        token = tokens[pos]
        pos += 1
        return token

    def node():
        kind = next_token()
        if kind == "leaf":
            label = int(next_token())
            vertex = int(next_token())
            return {vertex: label}, {}
        if kind == "un":
            labels_a, edges_a = node()
            labels_b, edges_b = node()
            assert not set(labels_a) & set(labels_b)
            return {**labels_a, **labels_b}, {**edges_a, **edges_b}
        if kind == "rl":
            old, new = int(next_token()), int(next_token())
            labels, edges = node()
            return {v: (new if lab == old else lab) for v, lab in labels.items()}, edges
        assert kind in ("ep", "en")
        a, b = int(next_token()), int(next_token())
        sign = POS if kind == "ep" else NEG
        labels, edges = node()
        for x in labels:
            for y in labels:
                if x < y and {labels[x], labels[y]} == {a, b}:
                    assert edges.get((x, y), sign) == sign
                    edges[(x, y)] = sign
        return labels, edges

    labels, edges = node()
    assert pos == len(tokens)
    return set(labels), edges
