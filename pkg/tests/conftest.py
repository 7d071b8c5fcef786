from __future__ import annotations

import pytest
from hypothesis import strategies as st

from lexnet import LexicalNetwork, build_network, parse_session

BIRTHDAY_TALK = """\
*MOT:	what would you like for your birthday ?
*MOT:	would you like a train ?
*MOT:	Joel ?
*CHI:	yes .
*CHI:	oh .
*CHI:	I'd like a elephant .
*CHI:	no .
*CHI:	and lion .
"""

# hand adjacency listing for the conversation above
MOTHER_NODES = {"what", "would", "you", "like", "for", "your", "birthday", "a", "train", "joel"}
MOTHER_ARCS = {
    ("what", "would"),
    ("would", "you"),
    ("you", "like"),
    ("like", "for"),
    ("for", "your"),
    ("your", "birthday"),
    ("like", "a"),
    ("a", "train"),
}
CHILD_NODES = {"yes", "oh", "i'd", "like", "a", "elephant", "no", "and", "lion"}
CHILD_ARCS = {("i'd", "like"), ("like", "a"), ("a", "elephant"), ("and", "lion")}


@pytest.fixture
def birthday_session():
    return parse_session(BIRTHDAY_TALK, child_id="joel", visit_index=1, source_name="birthday.cha")


@pytest.fixture
def mother_net(birthday_session):
    return build_network(birthday_session.spontaneous("MOT"))


@pytest.fixture
def child_net(birthday_session):
    return build_network(birthday_session.spontaneous("CHI"))


WORDS = ["a", "the", "you", "it", "car", "ball", "no", "more", "want", "dog", "see", "that"]


@st.composite
def networks(draw, max_nodes=8, min_nodes=1):
    n = draw(st.integers(min_nodes, max_nodes))
    nodes = [f"w{i}" for i in range(n)]
    pairs = [(u, v) for u in nodes for v in nodes]
    arcs = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return LexicalNetwork.from_arcs(arcs, nodes=nodes)


utterance_tokens = st.lists(st.sampled_from(WORDS), min_size=1, max_size=6)


@st.composite
def corpus_texts(draw, max_files=10, max_utts=50):
    """List of transcript texts; each utterance is MOT or CHI with words from WORDS."""
    files = []
    for _ in range(draw(st.integers(1, max_files))):
        lines = []
        for _ in range(draw(st.integers(0, max_utts))):
            speaker = draw(st.sampled_from(["CHI", "MOT"]))
            lines.append(f"*{speaker}:\t{' '.join(draw(utterance_tokens))} .")
        files.append("\n".join(lines) + "\n")
    return files


def pytest_runtest_makereport(item, call):
    if call.when == "call" and item.get_closest_marker("acceptance"):
        item.config._acceptance = getattr(item.config, "_acceptance", [])
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        item.config._acceptance.append((doc, call.excinfo is None))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for doc, ok in results:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {doc}")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criterion of the build")
