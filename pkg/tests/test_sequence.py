import random

import pytest

from helpers import random_bipartite_graph
from stww.bounds import greedy_sequence
from stww.cnf import ParseError
from stww.sequence import (
    ContractionSequence,
    final_graph,
    parse_sequence,
    replay,
    serialize_sequence,
    verify,
    width_of,
)
from stww.trigraph import NEG, POS, RED, SignedTrigraph


def path4():
    return SignedTrigraph([1, 2, 3, 4], [(1, 2, POS), (2, 3, POS), (3, 4, POS)])


def test_sequence_validation():
    seq = ContractionSequence(((1, 2), (1, 3)))
    assert len(seq) == 2
    with pytest.raises(ValueError, match="bad pair"):
        ContractionSequence(((1, 1),))
    with pytest.raises(ValueError, match="bad pair"):
        ContractionSequence(((0, 2),))


def test_replay_survivor_labels():
    g = path4()
    steps = list(replay(g, ContractionSequence(((2, 1), (2, 3)))))
    first, second = steps
    assert (first.keep_label, first.merge_label) == (2, 1)
    assert (first.keep_vertex, first.merge_vertex, first.new_vertex) == (2, 1, 5)
    # the label 2 now answers for the merged vertex 5
    assert (second.keep_vertex, second.merge_vertex, second.new_vertex) == (5, 3, 6)
    assert second.after.bag(6) == frozenset({1, 2, 3})
    with pytest.raises(ValueError, match="unknown vertex id 1"):
        list(replay(g, ContractionSequence(((2, 1), (1, 3)))))


def test_verify_reports_width_and_per_step():
    g = path4()
    # contracting the path ends: (1,2) -> red to 3; then (3,4) -> red to merged
    report = verify(g, ContractionSequence(((1, 2), (3, 4), (1, 3))))
    assert report.ok
    assert report.width == max(report.per_step_max_red)
    assert len(report.per_step_max_red) == 3
    assert report.width == 1
    assert width_of(g, ContractionSequence(((1, 2), (3, 4), (1, 3)))) == 1


def test_verify_counts_initial_red_edges():
    g = SignedTrigraph([1, 2, 3], [(1, 2, RED), (1, 3, RED)])
    report = verify(g, ContractionSequence(()))
    assert report.ok and report.width == 2


def test_verify_failures():
    g = path4()
    report = verify(g, ContractionSequence(((1, 9),)))
    assert not report.ok
    assert report.failure[0] == 0 and "unknown" in report.failure[1]
    with pytest.raises(ValueError, match="step 0"):
        width_of(g, ContractionSequence(((1, 9),)))

    sided = SignedTrigraph([1, 2, 3], [(1, 2, POS)], sides={1: 0, 2: 1, 3: 0})
    cross = ContractionSequence(((1, 2),))
    lax = verify(sided, cross)
    assert lax.ok and not lax.is_bipartite_sequence
    strict = verify(sided, cross, require_bipartite=True)
    assert not strict.ok and "cross-side" in strict.failure[1]


def test_final_graph():
    g = path4()
    h = final_graph(g, ContractionSequence(((1, 2), (1, 3), (1, 4))))
    assert h.num_vertices == 1
    assert h.bag(h.vertices()[0]) == frozenset({1, 2, 3, 4})


def test_tws_round_trip():
    seq = ContractionSequence(((3, 1), (3, 2)), num_vertices=4)
    text = serialize_sequence(seq)
    assert text.splitlines()[0] == "p tws 4 2"
    back = parse_sequence(text)
    assert back.steps == seq.steps
    assert back.num_vertices == 4
    # num_vertices can also be supplied at serialization time
    assert serialize_sequence(ContractionSequence(((3, 1),)), num_vertices=3).startswith(
        "p tws 3 1"
    )
    with pytest.raises(ValueError, match="unknown"):
        serialize_sequence(ContractionSequence(((3, 1),)))
    with pytest.raises(ValueError, match="impossible"):
        serialize_sequence(ContractionSequence(((1, 2), (1, 3))), num_vertices=2)


@pytest.mark.parametrize(
    "text, match",
    [
        ("1 2\n", "before"),
        ("p tws 3 1\n", "declares"),
        ("p tws 3 0\n1 2\n", "more steps"),
        ("p tws 3 1\n1 1\n", "itself"),
        ("p tws 3 1\n1 7\n", "out of range"),
        ("p tws 3 1\n1\n", "step line"),
        ("p tws 3 9\n", "impossible"),
        ("p tws 3 1\np tws 3 1\n", "duplicate"),
        ("", "missing"),
    ],
)
def test_parse_sequence_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_sequence(text)


def test_random_greedy_sequences_round_trip_and_verify():
    for seed in range(12):
        rng = random.Random(seed)
        g = random_bipartite_graph(rng, max_n=14)
        seq = greedy_sequence(g, bipartite=True)
        report = verify(g, seq, require_bipartite=True)
        assert report.ok and report.is_bipartite_sequence
        assert report.width == seq.declared_width
        back = parse_sequence(serialize_sequence(seq))
        assert back.steps == seq.steps
        assert verify(g, back, require_bipartite=True).width == report.width
