from fractions import Fraction

import pytest
from hypothesis import given

from lexnet import InputError, LexicalNetwork, dyad_compare, egonet, growth_trajectory, top_degree_report
from lexnet.analysis import degree_report_rows, stage_table
from lexnet.builder import DEFAULT_RANGES, StagePlan, StageWindow

from .conftest import networks
from .test_builder import corpus_from_mlus

# (label, network size, average degree as printed) for one child's stage networks
JOEL_STAGES = [("S1", 422, 0.7), ("S2", 591, 1.33), ("S3", 744, 2), ("early S4", 1060, 2.36), ("late S4", 875, 2.35)]


def sized(n, arcs):
    """n nodes, exactly ``arcs`` arcs (arcs <= n*n)."""
    nodes = [f"n{i:04d}" for i in range(n)]
    pairs = ((nodes[i % n], nodes[(i // n + i) % n]) for i in range(n * n))
    return LexicalNetwork.from_arcs(list(pairs)[:arcs], nodes=nodes)


def window(label):
    return StageWindow(label, 1, DEFAULT_RANGES[0], ())


def test_egonet_directions():
    g = LexicalNetwork.from_arcs([("want", "a"), ("a", "ball"), ("a", "car"), ("ball", "car"), ("see", "dog")])
    both = egonet(g, "a").network
    assert both.nodes == {"want", "a", "ball", "car"}
    assert ("ball", "car") in both.arcs
    assert egonet(g, "a", "out").network.nodes == {"a", "ball", "car"}
    assert egonet(g, "a", "in").network.arcs == {("want", "a")}
    assert egonet(g, "dog").network.nodes == {"see", "dog"}
    with pytest.raises(KeyError):
        egonet(g, "zebra")
    with pytest.raises(ValueError):
        egonet(g, "a", "up")


@given(networks())
def test_egonet_is_induced_subgraph(g):
    word = min(g.nodes)
    ego = egonet(g, word).network
    assert word in ego.nodes and ego.nodes <= g.nodes
    assert ego.arcs == {(u, v) for u, v in g.arcs if u in ego.nodes and v in ego.nodes}
    assert ego.nodes == {word} | g.successors[word] | g.predecessors[word]


def test_growth_trajectory_reproduces_stage_measures():
    nets = [(label, sized(n, round(n * d))) for label, n, d in JOEL_STAGES]
    points = growth_trajectory(nets)
    assert [p.size for p in points] == [n for _, n, _ in JOEL_STAGES]
    assert [p.arcs for p in points] == [295, 786, 1488, 2502, 2056]
    for p, (_, _, d) in zip(points, JOEL_STAGES):
        assert round(float(p.average_degree), 2) == d


def test_dyad_deltas_are_mother_minus_child():
    child = [(window("S3"), sized(10, 25)), (window("S4"), sized(10, 30))]
    mother = [(window("S3"), sized(10, 43)), (window("S4"), sized(20, 74))]
    report = dyad_compare(child, mother)
    assert report.size_deltas == [0, 10]
    assert report.degree_deltas == [Fraction(18, 10), Fraction(7, 10)]
    # mother's own degree falls 4.3 -> 3.7 between stages
    assert report.mother_points[1].average_degree - report.mother_points[0].average_degree == Fraction(-6, 10)
    assert report.rows()[1]["delta_size"] == 10
    with pytest.raises(InputError):
        dyad_compare(child, mother[:1])


@given(networks(), networks())
def test_dyad_antisymmetry(a, b):
    forward = dyad_compare([(window("S1"), a)], [(window("S1"), b)])
    backward = dyad_compare([(window("S1"), b)], [(window("S1"), a)])
    assert forward.size_deltas == [-d for d in backward.size_deltas]
    assert forward.degree_deltas == [-d for d in backward.degree_deltas]


def test_top_degree_report(mother_net, child_net):
    assert top_degree_report(mother_net, 1) == (["a"], ["like"])
    ins, outs = top_degree_report(child_net, 3)
    assert ins == ["a", "elephant", "like"]
    assert outs == ["a", "and", "i'd"]
    rows = degree_report_rows(mother_net, 2)
    assert rows[0] == {"rank": 1, "in_word": "a", "in_degree": 1, "out_word": "like", "out_degree": 2}


def test_stage_table_counts():
    corpus = corpus_from_mlus([1.2, 1.4])
    plan = StagePlan("kid", (StageWindow("S1", 1, DEFAULT_RANGES[0], (1, 2)),))
    (row,) = stage_table(corpus, plan, "CHI")
    assert (row.files, row.utterances, row.morphemes) == (2, 10, 13)
    assert row.mlu == Fraction(13, 10)
    assert row.avg_degree == Fraction(row.arcs, row.size)
