"""Turn any d-sequence of a bipartite signed graph into a bipartite one.

The transform walks the input sequence once.  Every vertex of the current
input graph owns two halves, its intersections with the two sides; the
output graph keeps those halves as separate vertices.  An input contraction
of u and v into w then falls into one of three cases:

  * both u and v lie entirely in one side: contract their representatives
    if the sides agree, otherwise do nothing (the halves of w already exist
    as two output vertices);
  * exactly one of the four halves is empty: contract the two halves on the
    side where both exist;
  * all four halves exist: a double step, contracting the side-0 halves
    first and the side-1 halves second.

The output width exceeds the input width by at most 2, and the output has
at most twice as many steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sequence import ContractionSequence, replay
from .trigraph import SIDE_CLA, SIDE_VAR, SignedTrigraph


class HalfDegreeError(AssertionError):
    """A half vertex exceeded the input width excluding its sibling half.

    This is the internal soundness check of the width argument: at every
    aligned snapshot, each side-0 half must have red degree at most the
    input width d once its own side-1 half is discounted (and vice versa).
    If it fires, the transform or the contraction rules are broken.
    """


@dataclass(frozen=True)
class BipartizationResult:
    seq: ContractionSequence
    # output step index -> input step index (0-based, monotone non-decreasing;
    # an input index appears twice exactly for double steps)
    index_map: dict[int, int]
    # output indices after which the graph is the intermediate of a double step
    doubled_steps: frozenset[int]
    input_width: int
    output_width: int


def bipartize(graph: SignedTrigraph, seq: ContractionSequence) -> BipartizationResult:
    """Transform a verified d-sequence into a bipartite (d+2)-sequence.

    The input graph must be bipartite with every vertex carrying a side
    tag; the input sequence may contract across sides freely.
    """
    for v in graph.vertices():
        if graph.side(v) is None:
            raise ValueError(f"vertex {v} has no side; bipartize needs a sided graph")

    # Verified width of the whole input sequence; the half-degree check
    # below is against this d.
    input_width = graph.max_red_degree()
    for step in replay(graph, seq):
        input_width = max(input_width, step.after.max_red_degree())

    out_graph = graph
    output_width = out_graph.max_red_degree()
    labels = {v: v for v in out_graph.vertices()}
    # input-graph vertex -> (side-0 half, side-1 half) as output-graph vertices
    halves: dict[int, tuple[int | None, int | None]] = {
        v: ((v, None) if graph.side(v) == SIDE_VAR else (None, v))
        for v in graph.vertices()
    }
    out_steps: list[tuple[int, int]] = []
    index_map: dict[int, int] = {}
    doubled: set[int] = set()

    def contract_out(p: int, q: int, input_index: int) -> int:
        nonlocal out_graph, output_width
        keep, merge = sorted((labels[p], labels[q]))
        new = out_graph.fresh_id()
        out_graph = out_graph.contract(p, q)
        labels[new] = keep
        del labels[p], labels[q]
        out_steps.append((keep, merge))
        index_map[len(out_steps) - 1] = input_index
        output_width = max(output_width, out_graph.max_red_degree())
        return new

    def check_half_degrees(current_halves: dict[int, tuple[int | None, int | None]]) -> None:
        for xa, xb in current_halves.values():
            for half, sibling in ((xa, xb), (xb, xa)):
                if half is None:
                    continue
                reds = out_graph.red_neighbors(half)
                if len(reds - {sibling}) > input_width:
                    raise HalfDegreeError(
                        f"half {half} has red degree {len(reds - {sibling})} "
                        f"> input width {input_width}"
                    )

    check_half_degrees(halves)
    for step in replay(graph, seq):
        ua, ub = halves.pop(step.keep_vertex)
        va, vb = halves.pop(step.merge_vertex)
        empties = sum(1 for half in (ua, ub, va, vb) if half is None)
        if empties == 2:
            if ua is not None and va is not None:
                halves[step.new_vertex] = (contract_out(ua, va, step.index), None)
            elif ub is not None and vb is not None:
                halves[step.new_vertex] = (None, contract_out(ub, vb, step.index))
            else:
                # u and v sit on opposite sides; w's halves already exist
                halves[step.new_vertex] = (ua if ua is not None else va,
                                           ub if ub is not None else vb)
        elif empties == 1:
            if ua is not None and va is not None:
                halves[step.new_vertex] = (
                    contract_out(ua, va, step.index),
                    ub if ub is not None else vb,
                )
            else:
                halves[step.new_vertex] = (
                    ua if ua is not None else va,
                    contract_out(ub, vb, step.index),
                )
        else:
            merged_a = contract_out(ua, va, step.index)
            doubled.add(len(out_steps) - 1)
            merged_b = contract_out(ub, vb, step.index)
            halves[step.new_vertex] = (merged_a, merged_b)
        check_half_degrees(halves)

    n = max(graph.vertices(), default=0)
    return BipartizationResult(
        ContractionSequence(tuple(out_steps), num_vertices=n),
        index_map,
        frozenset(doubled),
        input_width,
        output_width,
    )
