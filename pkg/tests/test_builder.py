from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexnet import (
    ConfigError,
    Corpus,
    InputError,
    MluRange,
    StagePlan,
    accumulative_series,
    assign_stage,
    build_network,
    build_stage_networks,
    parse_session,
    plan_stages,
)
from lexnet.builder import DEFAULT_RANGES, smooth, validate_ranges

from .conftest import CHILD_ARCS, CHILD_NODES, MOTHER_ARCS, MOTHER_NODES, corpus_texts


def corpus_from_mlus(mlus, child="kid", first_visit=1):
    """One session per value; each hits its MLU exactly with CHI utterances."""
    sessions = []
    for i, value in enumerate(mlus):
        frac = Fraction(str(value)).limit_denominator(20)
        words, utts = frac.numerator, frac.denominator
        lengths = [1] * utts
        for j in range(words - utts):
            lengths[j % utts] += 1
        text = "".join(f"*CHI:\t{' '.join(f'v{i}w{k}' for k in range(n))} .\n" for n in lengths)
        text += "*MOT:\tlook at that .\n"
        sessions.append(parse_session(text, child_id=child, visit_index=first_visit + i))
    return Corpus(child, tuple(sessions))


def corpus_from_texts(texts, child="kid"):
    return Corpus(child, tuple(parse_session(t, child_id=child, visit_index=i + 1) for i, t in enumerate(texts)))


def test_birthday_networks(mother_net, child_net):
    assert mother_net.nodes == MOTHER_NODES and mother_net.arcs == MOTHER_ARCS
    assert child_net.nodes == CHILD_NODES and child_net.arcs == CHILD_ARCS


def test_repeated_pairs_collapse():
    g = build_network([["more", "juice"], ["more", "juice"], ["more", "more"]])
    assert g.arcs == {("more", "juice"), ("more", "more")}
    assert build_network([["more", "more"]], self_loops=False).arcs == frozenset()
    assert build_network([["ball"]]).nodes == {"ball"}


def test_no_arcs_across_utterances():
    g = build_network([["want", "ball"], ["dog"]])
    assert ("ball", "dog") not in g.arcs


def test_accumulative_labels_and_meta():
    corpus = corpus_from_texts(["*CHI:\tmy ball .\n", "*CHI:\tmy dog .\n"])
    series = accumulative_series(corpus, "CHI")
    assert [g.meta.label for g in series] == ["visit 1", "visit 2"]
    assert series[1].meta.visits == (1, 2)
    assert series[1].arcs == {("my", "ball"), ("my", "dog")}


@settings(max_examples=40, deadline=None)
@given(corpus_texts(max_files=6, max_utts=20))
def test_accumulation_is_monotone(texts):
    series = accumulative_series(corpus_from_texts(texts), "CHI")
    for a, b in zip(series, series[1:]):
        assert a.nodes <= b.nodes and a.arcs <= b.arcs


@given(st.lists(st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=8), max_size=10))
def test_arc_count_bound(utts):
    g = build_network(utts)
    assert g.arc_count <= sum(len(u) - 1 for u in utts)
    assert g.arc_count <= g.size**2


@pytest.mark.parametrize(
    "mlu, stage",
    [
        (Fraction(1), 1),
        (Fraction(1464, 1091), 1),
        (Fraction(3, 2), 1),
        (Fraction(3, 2) + Fraction(1, 10**12), 2),
        (Fraction(2), 2),
        (Fraction(5, 2), 3),
        (Fraction(7, 2), 5),
        (Fraction(36, 10), None),
        (Fraction(9, 10), None),
    ],
)
def test_assign_stage(mlu, stage):
    assert assign_stage(mlu) == stage


def test_ranges_parse_and_print():
    r = MluRange.parse("(1.5, 2]")
    assert (r.low, r.high, r.low_closed, r.high_closed) == (Fraction(3, 2), 2, False, True)
    assert str(r) == "(1.5,2]"
    assert [str(x) for x in DEFAULT_RANGES] == ["[1,1.5]", "(1.5,2]", "(2,2.5]", "(2.5,3]", "(3,3.5]"]
    for bad in ["1,2", "[2,1]", "(1,1]", "[a,b]"]:
        with pytest.raises(ConfigError):
            MluRange.parse(bad)


def test_overlapping_ranges_rejected():
    with pytest.raises(ConfigError):
        validate_ranges([MluRange.parse("[1,1.5]"), MluRange.parse("[1.5,2]")])
    with pytest.raises(ConfigError):
        assign_stage(Fraction(1), [MluRange.parse("[1,2]"), MluRange.parse("(1.5,3]")])
    with pytest.raises(ConfigError):
        validate_ranges([MluRange.parse("(2,3]"), MluRange.parse("[1,2]")])
    validate_ranges([MluRange.parse("[1,1.5)"), MluRange.parse("[1.5,2]")])


def test_four_file_run_gives_four_file_window():
    plan = plan_stages(corpus_from_mlus([1.2, 1.3, 1.4, 1.2, 1.8]))
    s1 = plan.windows[0]
    assert (s1.stage_label, s1.file_indices) == ("S1", (1, 2, 3, 4))


def test_ten_file_run_splits_early_late():
    plan = plan_stages(corpus_from_mlus([1.2] * 10))
    assert [(w.stage_label, w.file_indices) for w in plan.windows] == [
        ("early S1", (1, 2, 3, 4, 5)),
        ("late S1", (6, 7, 8, 9, 10)),
    ]


def test_middle_window_when_three_substages_allowed():
    plan = plan_stages(corpus_from_mlus([2.6] * 17), max_substages=3)
    assert [(w.stage_label, w.file_indices[0]) for w in plan.windows] == [
        ("early S4", 1),
        ("middle S4", 7),
        ("late S4", 13),
    ]


def test_short_runs_and_placement():
    corpus = corpus_from_mlus([1.2, 1.3, 1.6, 1.7, 1.8])
    plan = plan_stages(corpus)
    assert [(w.stage_label, w.file_indices) for w in plan.windows] == [("S1", (1, 2)), ("S2", (3, 4, 5))]
    corpus = corpus_from_mlus([1.6] * 8)
    assert plan_stages(corpus, placement="start").windows[0].file_indices == (1, 2, 3, 4, 5)
    assert plan_stages(corpus, placement="center").windows[0].file_indices == (2, 3, 4, 5, 6)
    assert plan_stages(corpus, placement="end").windows[0].file_indices == (4, 5, 6, 7, 8)


def test_longest_run_wins_and_gaps_break_runs():
    corpus = corpus_from_mlus([1.2, 1.8, 1.2, 1.3, 1.4])
    assert [w.file_indices for w in plan_stages(corpus).windows] == [(2,), (3, 4, 5)]
    gapped = Corpus("kid", (*corpus_from_mlus([1.2]).sessions, *corpus_from_mlus([1.2, 1.3], first_visit=5).sessions))
    assert plan_stages(gapped).windows[0].file_indices == (5, 6)


def test_plan_rejects_bad_config():
    corpus = corpus_from_mlus([1.2])
    with pytest.raises(ConfigError):
        plan_stages(corpus, split_threshold=6)
    with pytest.raises(ConfigError):
        plan_stages(corpus, placement="middle")


def test_smoothing():
    values = [Fraction(1), None, Fraction(3), Fraction(5)]
    assert smooth(values, 1) == values
    assert smooth(values, 3) == [Fraction(1), None, Fraction(4), Fraction(4)]
    with pytest.raises(ConfigError):
        smooth(values, 2)


def test_plan_text_round_trip():
    plan = plan_stages(corpus_from_mlus([1.2] * 10 + [1.7] * 3))
    text = plan.to_text()
    assert text.splitlines()[2] == "label\tstage\trange\tfiles\tspan_days"
    assert StagePlan.from_text(text) == plan
    with pytest.raises(InputError):
        StagePlan.from_text(text.replace("1,2,3,4,5", "1,3,4,5,6"))


def test_stage_networks_share_plan():
    corpus = corpus_from_mlus([1.2, 1.3, 1.7])
    plan = plan_stages(corpus)
    child = build_stage_networks(corpus, plan, "CHI")
    mother = build_stage_networks(corpus, plan, "MOT")
    assert [w for w, _ in child] == [w for w, _ in mother]
    assert mother[0][1].arcs == {("look", "at"), ("at", "that")}
    assert child[0][1].meta.visits == (1, 2)


def test_stage_networks_missing_visit():
    corpus = corpus_from_mlus([1.2])
    plan = StagePlan.from_text("# child\tkid\nlabel\tstage\trange\tfiles\tspan_days\nS1\t1\t[1,1.5]\t1,2\t-\n")
    with pytest.raises(InputError):
        build_stage_networks(corpus, plan, "CHI")


def test_span_days_from_dates():
    texts = ["@Date:\t01-JAN-2002\n*CHI:\tball .\n", "@Date:\t15-JAN-2002\n*CHI:\tball .\n"]
    plan = plan_stages(corpus_from_texts(texts))
    assert plan.windows[0].span_days == 14
