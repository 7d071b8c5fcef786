"""``lexnet`` command line.

Exit codes: 0 success, 1 input error, 2 configuration error, 3 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    DYAD_COLUMNS,
    STAGE_COLUMNS,
    dyad_compare,
    egonet,
    growth_trajectory,
    stage_table,
    top_degree_report,
)
from .builder import accumulative_series, build_stage_networks
from .centrality import hits, shift_rows, shift_table, top_authorities, top_hubs
from .config import RunConfig, load_config
from .corpus import Corpus, dump_session, load_corpora
from .errors import InputError, LexnetError
from .pajek import export_pajek, read_pajek
from .pipeline import (
    GROWTH_COLUMNS,
    MLU_COLUMNS,
    check_network,
    load_plans,
    mlu_rows,
    plan_for,
    run_pipeline,
)
from .reports import export_csv, export_json

log = logging.getLogger("lexnet")


def _config_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration (flags override the config file)")
    g.add_argument("-c", "--config", type=Path, help="TOML configuration file")
    g.add_argument("--speakers", nargs="+", help="speaker codes to ingest (default MOT CHI)")
    g.add_argument("--child-speaker", dest="child_speaker")
    g.add_argument("--mother-speaker", dest="mother_speaker")
    g.add_argument("--exclude", dest="exclusion_postcodes", nargs="+", metavar="CODE", help="exclusion postcodes")
    g.add_argument("--unintelligible", nargs="+", metavar="TOKEN")
    g.add_argument("--ranges", dest="mlu_ranges", nargs="+", metavar="RANGE", help="MLU ranges, e.g. '[1,1.5]'")
    g.add_argument("--window-size", dest="window_size", type=int)
    g.add_argument("--split-threshold", dest="split_threshold", type=int)
    g.add_argument("--max-substages", dest="max_substages", type=int)
    g.add_argument("--placement", choices=["start", "center", "end"])
    g.add_argument("--smoothing", type=int)
    g.add_argument("-k", type=int, help="length of top-k lists (default 10)")
    g.add_argument("--tolerance", dest="hits_tolerance", type=float)
    g.add_argument("--max-iterations", dest="hits_max_iterations", type=int)
    g.add_argument("--words", dest="shift_words", nargs="+", help="words for the shift table (default a the)")
    g.add_argument("--no-self-loops", dest="self_loops", action="store_const", const=False)
    g.add_argument("--plan", dest="stage_plans", action="append", type=Path, help="pinned stage plan file")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


_OVERRIDE_KEYS = (
    "speakers",
    "child_speaker",
    "mother_speaker",
    "exclusion_postcodes",
    "unintelligible",
    "mlu_ranges",
    "window_size",
    "split_threshold",
    "max_substages",
    "placement",
    "smoothing",
    "k",
    "hits_tolerance",
    "hits_max_iterations",
    "shift_words",
    "self_loops",
    "stage_plans",
)


def _config(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key, None) for key in _OVERRIDE_KEYS}
    if getattr(args, "inputs", None):
        overrides["inputs"] = [str(p) for p in args.inputs]
    if getattr(args, "output", None) is not None and args.command == "export":
        overrides["output_dir"] = str(args.output)
    return load_config(args.config, overrides)


def _corpora(cfg: RunConfig) -> dict[str, Corpus]:
    if not cfg.inputs:
        raise InputError("no input transcripts given")
    return load_corpora(cfg.inputs, cfg.ingest_config())


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8", newline="\n")


def _with_child(child: str, rows: list[dict]) -> list[dict]:
    return [{"child": child, **row} for row in rows]


def cmd_ingest(args, cfg: RunConfig) -> int:
    chunks = []
    for corpus in _corpora(cfg).values():
        for session in corpus.sessions:
            for warning in session.warnings:
                log.warning("%s: %s", session.source_name, warning)
            chunks.append(dump_session(session))
    _emit("".join(chunks), args.output)
    return 0


def cmd_mlu(args, cfg: RunConfig) -> int:
    rows = []
    for child, corpus in _corpora(cfg).items():
        rows += _with_child(child, mlu_rows(corpus, cfg))
    _emit(export_csv(rows, ["child"] + MLU_COLUMNS), args.output)
    return 0


def cmd_build(args, cfg: RunConfig) -> int:
    speaker = args.speaker or cfg.child_speaker
    pinned = load_plans(cfg.stage_plans)
    rows = []
    for child, corpus in _corpora(cfg).items():
        if args.mode == "accumulative":
            named = [(g.meta.label, g) for g in accumulative_series(corpus, speaker, self_loops=cfg.self_loops)]
        else:
            plan = plan_for(corpus, cfg, pinned)
            if args.out_dir is not None:
                _emit(plan.to_text(), args.out_dir / child / "stage_plan.tsv")
            named = [
                (w.stage_label, g)
                for w, g in build_stage_networks(corpus, plan, speaker, self_loops=cfg.self_loops)
            ]
        for label, g in named:
            check_network(g)
            if args.out_dir is not None:
                _emit(export_pajek(g), args.out_dir / child / speaker / f"{label.replace(' ', '_')}.net")
        rows += _with_child(child, [p.as_row() for p in growth_trajectory(named)])
    _emit(export_csv(rows, ["child"] + GROWTH_COLUMNS), args.output)
    return 0


def _read_net(path: Path):
    try:
        return read_pajek(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{path}: cannot read network ({exc})") from exc


def cmd_hits(args, cfg: RunConfig) -> int:
    g = _read_net(args.network)
    if not g.nodes:
        raise InputError(f"{args.network}: network has no nodes")
    r = hits(g, cfg.hits_tolerance, cfg.hits_max_iterations)
    top_in, top_out = top_degree_report(g, cfg.k)
    report = {
        "network": args.network.name,
        "iterations": r.iterations,
        "converged": r.converged,
        "spectral_gap": r.spectral_gap,
        "hubs": [{"word": w, "weight": r.hub[w]} for w in top_hubs(r, cfg.k)],
        "authorities": [{"word": w, "weight": r.authority[w]} for w in top_authorities(r, cfg.k)],
        "top_in_degree": [{"word": w, "degree": g.in_degrees[w]} for w in top_in],
        "top_out_degree": [{"word": w, "degree": g.out_degrees[w]} for w in top_out],
    }
    _emit(export_json(report), args.output)
    return 0


def cmd_egonet(args, cfg: RunConfig) -> int:
    g = _read_net(args.network)
    if args.word not in g.nodes:
        raise InputError(f"{args.network}: word {args.word!r} is not in the network")
    _emit(export_pajek(egonet(g, args.word, args.direction).network), args.output)
    return 0


def cmd_shift(args, cfg: RunConfig) -> int:
    speaker = args.speaker or cfg.child_speaker
    pinned = load_plans(cfg.stage_plans)
    chunks = []
    for child, corpus in _corpora(cfg).items():
        nets = build_stage_networks(corpus, plan_for(corpus, cfg, pinned), speaker, self_loops=cfg.self_loops)
        if not nets:
            raise InputError(f"child {child}: no stage windows, nothing to classify")
        records = shift_table(
            nets, cfg.shift_words, cfg.k, tolerance=cfg.hits_tolerance, max_iterations=cfg.hits_max_iterations
        )
        columns, rows = shift_rows(records)
        chunks.append(export_csv(_with_child(child, rows), ["child"] + columns))
    _emit("".join(chunks), args.output)
    return 0


def cmd_report(args, cfg: RunConfig) -> int:
    pinned = load_plans(cfg.stage_plans)
    rows = []
    for child, corpus in _corpora(cfg).items():
        plan = plan_for(corpus, cfg, pinned)
        if args.kind == "dyad":
            child_nets = build_stage_networks(corpus, plan, cfg.child_speaker, self_loops=cfg.self_loops)
            mother_nets = build_stage_networks(corpus, plan, cfg.mother_speaker, self_loops=cfg.self_loops)
            rows += _with_child(child, dyad_compare(child_nets, mother_nets).rows())
        else:
            for speaker in (cfg.child_speaker, cfg.mother_speaker):
                rows += [
                    {"child": child, "speaker": speaker, **r.as_row()}
                    for r in stage_table(corpus, plan, speaker, self_loops=cfg.self_loops)
                ]
    columns = ["child"] + DYAD_COLUMNS if args.kind == "dyad" else ["child", "speaker"] + STAGE_COLUMNS
    _emit(export_csv(rows, columns), args.output)
    return 0


def cmd_export(args, cfg: RunConfig) -> int:
    return run_pipeline(cfg)


def build_parser() -> argparse.ArgumentParser:
    common = _config_options()
    parser = argparse.ArgumentParser(
        prog="lexnet", description="Word collocation networks from child/caretaker transcripts."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str, inputs: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        if inputs:
            p.add_argument("inputs", nargs="*", type=Path, help="transcript files or per-child directories")
        p.add_argument("-o", "--output", type=Path, help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    add("ingest", cmd_ingest, "dump normalized sessions, one utterance per line")
    add("mlu", cmd_mlu, "per-visit MLU table")
    p = add("build", cmd_build, "build accumulative or stage networks")
    p.add_argument("--mode", choices=["accumulative", "stage"], default="accumulative")
    p.add_argument("--speaker", help="speaker code (default: the child speaker)")
    p.add_argument("--out-dir", type=Path, help="write Pajek files under this directory")
    p = add("hits", cmd_hits, "hub/authority top-k lists of a Pajek network", inputs=False)
    p.add_argument("network", type=Path)
    p = add("egonet", cmd_egonet, "egonet of one word in a Pajek network", inputs=False)
    p.add_argument("network", type=Path)
    p.add_argument("--word", required=True)
    p.add_argument("--direction", choices=["both", "in", "out"], default="both")
    p = add("shift", cmd_shift, "hub/authority status of words across stages")
    p.add_argument("--speaker", help="speaker code (default: the child speaker)")
    p = add("report", cmd_report, "per-stage summary table or child/mother comparison")
    p.add_argument("--kind", choices=["stages", "dyad"], default="stages")
    add("export", cmd_export, "run the whole pipeline and write every artifact (-o sets the output directory)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="lexnet: %(levelname)s: %(message)s"
    )
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except LexnetError as exc:
        print(f"lexnet: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyError as exc:
        print(f"lexnet: error: unknown word or visit {exc}", file=sys.stderr)
        return InputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
