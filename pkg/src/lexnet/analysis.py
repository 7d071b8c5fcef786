"""Egonets, growth trajectories, stage tables and child/mother comparison."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from .builder import StagePlan, StageWindow, build_stage_networks, speaker_utterances
from .corpus import Corpus, mlu_from_counts
from .errors import InputError
from .graph import IN, OUT, GrowthPoint, LexicalNetwork, top_k_by_degree


@dataclass(frozen=True)
class EgonetView:
    center: str
    network: LexicalNetwork


def egonet(g: LexicalNetwork, word: str, direction: str = "both") -> EgonetView:
    """Subgraph induced by ``word`` and its immediate neighbours.

    ``direction`` limits the neighbours to predecessors (``"in"``) or
    successors (``"out"``); arcs among the kept nodes are always included.
    """
    if word not in g.nodes:
        raise KeyError(word)
    if direction not in ("both", IN, OUT):
        raise ValueError(f"direction must be 'both', 'in' or 'out', got {direction!r}")
    keep = {word}
    if direction in ("both", IN):
        keep |= g.predecessors[word]
    if direction in ("both", OUT):
        keep |= g.successors[word]
    arcs = frozenset((u, v) for u, v in g.arcs if u in keep and v in keep)
    meta = replace(g.meta, label=f"{g.meta.label} egonet {word}".strip())
    return EgonetView(word, LexicalNetwork(frozenset(keep), arcs, meta))


def growth_trajectory(networks: Sequence[tuple[str, LexicalNetwork]]) -> list[GrowthPoint]:
    return [GrowthPoint.of(label, g) for label, g in networks]


@dataclass(frozen=True)
class DyadReport:
    stage_labels: tuple[str, ...]
    child_points: tuple[GrowthPoint, ...]
    mother_points: tuple[GrowthPoint, ...]

    @property
    def size_deltas(self) -> list[int]:
        return [m.size - c.size for c, m in zip(self.child_points, self.mother_points)]

    @property
    def degree_deltas(self) -> list[Fraction]:
        return [m.average_degree - c.average_degree for c, m in zip(self.child_points, self.mother_points)]

    def rows(self) -> list[dict]:
        out = []
        for label, c, m, ds, dd in zip(
            self.stage_labels, self.child_points, self.mother_points, self.size_deltas, self.degree_deltas
        ):
            out.append(
                {
                    "label": label,
                    "child_size": c.size,
                    "child_arcs": c.arcs,
                    "child_avg_degree": c.average_degree,
                    "mother_size": m.size,
                    "mother_arcs": m.arcs,
                    "mother_avg_degree": m.average_degree,
                    "delta_size": ds,
                    "delta_degree": dd,
                }
            )
        return out


DYAD_COLUMNS = [
    "label",
    "child_size",
    "child_arcs",
    "child_avg_degree",
    "mother_size",
    "mother_arcs",
    "mother_avg_degree",
    "delta_size",
    "delta_degree",
]


def dyad_compare(
    child: Sequence[tuple[StageWindow, LexicalNetwork]],
    mother: Sequence[tuple[StageWindow, LexicalNetwork]],
) -> DyadReport:
    """Pair child and mother stage networks; deltas are mother minus child."""
    child_labels = [w.stage_label for w, _ in child]
    mother_labels = [w.stage_label for w, _ in mother]
    if child_labels != mother_labels:
        raise InputError(f"stage labels do not align: {child_labels} vs {mother_labels}")
    return DyadReport(
        tuple(child_labels),
        tuple(growth_trajectory([(w.stage_label, g) for w, g in child])),
        tuple(growth_trajectory([(w.stage_label, g) for w, g in mother])),
    )


def top_degree_report(g: LexicalNetwork, k: int = 10) -> tuple[list[str], list[str]]:
    """(top-k by in-degree, top-k by out-degree)."""
    return top_k_by_degree(g, k, IN), top_k_by_degree(g, k, OUT)


def degree_report_rows(g: LexicalNetwork, k: int = 10) -> list[dict]:
    ins, outs = top_degree_report(g, k)
    rows = []
    for rank in range(max(len(ins), len(outs))):
        rows.append(
            {
                "rank": rank + 1,
                "in_word": ins[rank] if rank < len(ins) else "",
                "in_degree": g.in_degrees[ins[rank]] if rank < len(ins) else "",
                "out_word": outs[rank] if rank < len(outs) else "",
                "out_degree": g.out_degrees[outs[rank]] if rank < len(outs) else "",
            }
        )
    return rows


@dataclass(frozen=True)
class StageRow:
    """One line of the per-stage summary: data used and the resulting network."""

    label: str
    files: int
    utterances: int
    morphemes: int
    mlu: Fraction | None
    size: int
    arcs: int
    avg_degree: Fraction

    def as_row(self) -> dict:
        return {
            "label": self.label,
            "files": self.files,
            "utterances": self.utterances,
            "morphemes": self.morphemes,
            "mlu": self.mlu,
            "size": self.size,
            "arcs": self.arcs,
            "avg_degree": self.avg_degree,
        }


STAGE_COLUMNS = ["label", "files", "utterances", "morphemes", "mlu", "size", "arcs", "avg_degree"]


def stage_row(window: StageWindow, utterances: int, morphemes: int, g: LexicalNetwork) -> StageRow:
    point = GrowthPoint.of(window.stage_label, g)
    return StageRow(
        label=window.stage_label,
        files=len(window.file_indices),
        utterances=utterances,
        morphemes=morphemes,
        mlu=mlu_from_counts(morphemes, utterances) if utterances else None,
        size=point.size,
        arcs=point.arcs,
        avg_degree=point.average_degree,
    )


def stage_table(corpus: Corpus, plan: StagePlan, speaker: str, *, self_loops: bool = True) -> list[StageRow]:
    rows = []
    by_visit = {s.visit_index: s for s in corpus.sessions}
    for window, g in build_stage_networks(corpus, plan, speaker, self_loops=self_loops):
        utts = speaker_utterances([by_visit[i] for i in window.file_indices], speaker)
        rows.append(stage_row(window, len(utts), sum(u.morphemes for u in utts), g))
    return rows
