"""End-to-end run: transcripts in, per-child report tree out."""

from __future__ import annotations

import logging
from pathlib import Path

from .analysis import DYAD_COLUMNS, STAGE_COLUMNS, dyad_compare, growth_trajectory, stage_row, top_degree_report
from .builder import (
    StagePlan,
    accumulative_series,
    assign_stage,
    build_stage_networks,
    plan_stages,
    speaker_utterances,
)
from .centrality import DEGENERATE_GAP, hits, shift_rows, shift_table, top_authorities, top_hubs
from .config import RunConfig
from .corpus import Corpus, dump_session, is_word_based, load_corpora, mlu_from_counts, speaker_counts
from .errors import InputError, InvariantError
from .graph import LexicalNetwork
from .pajek import export_pajek
from .reports import export_csv, export_json

log = logging.getLogger(__name__)

GROWTH_COLUMNS = ["label", "size", "arcs", "avg_degree"]
MLU_COLUMNS = ["visit", "speaker", "utterances", "morphemes", "mlu", "basis", "stage"]


def check_network(g: LexicalNetwork) -> None:
    total_in = sum(g.in_degrees.values())
    total_out = sum(g.out_degrees.values())
    if not total_in == total_out == g.arc_count:
        raise InvariantError(
            f"network {g.meta.label!r}: in-degree sum {total_in}, out-degree sum {total_out}, arcs {g.arc_count}"
        )


def mlu_rows(corpus: Corpus, config: RunConfig) -> list[dict]:
    rows = []
    for session in corpus.sessions:
        for speaker in (config.child_speaker, config.mother_speaker):
            n_utt, n_morph = speaker_counts([session], speaker)
            mlu = mlu_from_counts(n_morph, n_utt) if n_utt else None
            stage = assign_stage(mlu, config.mlu_ranges) if mlu is not None and speaker == config.child_speaker else None
            rows.append(
                {
                    "visit": session.visit_index,
                    "speaker": speaker,
                    "utterances": n_utt,
                    "morphemes": n_morph,
                    "mlu": mlu,
                    "basis": "word" if is_word_based([session], speaker) else "morpheme",
                    "stage": stage,
                }
            )
    return rows


def load_plans(paths: list[Path]) -> dict[str, StagePlan]:
    plans = {}
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{path}: cannot read stage plan ({exc})") from exc
        plan = StagePlan.from_text(text)
        plans[plan.child_id] = plan
    return plans


def plan_for(corpus: Corpus, config: RunConfig, pinned: dict[str, StagePlan] | None = None) -> StagePlan:
    """The pinned plan for this child if one was supplied, else one derived from its MLU."""
    if pinned and corpus.child_id in pinned:
        return pinned[corpus.child_id]
    return plan_stages(
        corpus,
        config.mlu_ranges,
        config.window_size,
        config.effective_split_threshold,
        speaker=config.child_speaker,
        placement=config.placement,
        smoothing=config.smoothing,
        max_substages=config.max_substages,
    )


def _hits_report(stage_networks, config: RunConfig) -> list[dict]:
    report = []
    for window, g in stage_networks:
        entry: dict = {"label": window.stage_label, "files": list(window.file_indices)}
        if g.nodes:
            r = hits(g, config.hits_tolerance, config.hits_max_iterations)
            top_in, top_out = top_degree_report(g, config.k)
            entry.update(
                {
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "spectral_gap": r.spectral_gap,
                    "degenerate": r.spectral_gap is not None and r.spectral_gap < DEGENERATE_GAP,
                    "hubs": [{"word": w, "weight": r.hub[w]} for w in top_hubs(r, config.k)],
                    "authorities": [{"word": w, "weight": r.authority[w]} for w in top_authorities(r, config.k)],
                    "top_in_degree": [{"word": w, "degree": g.in_degrees[w]} for w in top_in],
                    "top_out_degree": [{"word": w, "degree": g.out_degrees[w]} for w in top_out],
                }
            )
        else:
            entry.update({"iterations": 0, "converged": True, "hubs": [], "authorities": []})
        report.append(entry)
    return report


def speaker_artifacts(corpus: Corpus, plan: StagePlan, speaker: str, config: RunConfig) -> dict[str, str]:
    if not speaker_utterances(corpus.sessions, speaker):
        raise InputError(f"child {corpus.child_id}: no spontaneous utterances for speaker {speaker}")
    files: dict[str, str] = {}

    series = accumulative_series(corpus, speaker, self_loops=config.self_loops)
    for g in series:
        check_network(g)
    points = growth_trajectory([(g.meta.label, g) for g in series])
    files["growth.csv"] = export_csv([p.as_row() for p in points], GROWTH_COLUMNS)

    stage_networks = build_stage_networks(corpus, plan, speaker, self_loops=config.self_loops)
    by_visit = {s.visit_index: s for s in corpus.sessions}
    rows = []
    for window, g in stage_networks:
        check_network(g)
        files[f"stages/{window.slug}.net"] = export_pajek(g)
        utts = speaker_utterances([by_visit[i] for i in window.file_indices], speaker)
        rows.append(stage_row(window, len(utts), sum(u.morphemes for u in utts), g).as_row())
    files["stages.csv"] = export_csv(rows, STAGE_COLUMNS)

    if stage_networks:
        files["hits.json"] = export_json(_hits_report(stage_networks, config))
        records = shift_table(
            stage_networks,
            config.shift_words,
            config.k,
            tolerance=config.hits_tolerance,
            max_iterations=config.hits_max_iterations,
        )
        columns, shift = shift_rows(records)
        files["shift.csv"] = export_csv(shift, columns)
    return files


def child_artifacts(
    corpus: Corpus, config: RunConfig, pinned: dict[str, StagePlan] | None = None
) -> dict[str, str]:
    files: dict[str, str] = {"sessions.tsv": "".join(dump_session(s) for s in corpus.sessions)}
    files["mlu.csv"] = export_csv(mlu_rows(corpus, config), MLU_COLUMNS)
    plan = plan_for(corpus, config, pinned)
    files["stage_plan.tsv"] = plan.to_text()
    for speaker in (config.child_speaker, config.mother_speaker):
        for name, text in speaker_artifacts(corpus, plan, speaker, config).items():
            files[f"{speaker}/{name}"] = text
    child_nets = build_stage_networks(corpus, plan, config.child_speaker, self_loops=config.self_loops)
    mother_nets = build_stage_networks(corpus, plan, config.mother_speaker, self_loops=config.self_loops)
    files["dyad.csv"] = export_csv(dyad_compare(child_nets, mother_nets).rows(), DYAD_COLUMNS)
    return files


def collect_artifacts(config: RunConfig) -> dict[str, str]:
    """Relative path -> file content for every child found in ``config.inputs``."""
    if not config.inputs:
        raise InputError("no input transcripts given")
    corpora = load_corpora(config.inputs, config.ingest_config())
    pinned = load_plans(config.stage_plans)
    artifacts = {}
    for child, corpus in corpora.items():
        log.info("processing %s (%d sessions)", child, len(corpus.sessions))
        for name, text in child_artifacts(corpus, config, pinned).items():
            artifacts[f"{child}/{name}"] = text
    return artifacts


def write_artifacts(artifacts: dict[str, str], out_dir: Path) -> None:
    for rel, text in sorted(artifacts.items()):
        path = out_dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")


def run_pipeline(config: RunConfig) -> int:
    """Write every artifact under ``config.output_dir``; returns 0 on success.

    Errors propagate as LexnetError subclasses carrying their exit code.
    """
    config.validate()
    artifacts = collect_artifacts(config)
    write_artifacts(artifacts, Path(config.output_dir))
    log.info("wrote %d files to %s", len(artifacts), config.output_dir)
    return 0
