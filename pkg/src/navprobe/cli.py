"""navprobe command line: one subcommand per pipeline.

Exit status is 0 on success, 1 on validation or I/O failure and 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .augment import mlm_mask_spatial, mlm_mask_standard, shuffle_negatives
from .config import ConfigError, RunConfig, load_config
from .counterfactual import analyze_corpus
from .dataset import (
    GENERATED,
    Episode,
    SchemaError,
    dump_jsonl,
    load_episodes,
    read_records,
    validate_against_graphs,
)
from .generate import PhraseSets, generate_dataset
from .graph import (
    GraphError,
    aggregate_metrics,
    evaluate,
    load_graphs,
    path_length_meters,
    sample_paths,
)
from .lexicon import CueSet, LexiconError, Lexicons
from .stats import EmptyCorpusError, PartialStats, StatsReport, partial_stats
from .text import Instruction, mask, mask_all_language, swap_left_right

log = logging.getLogger("navprobe")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """Reported on stderr; exits with status 1."""


# ---------------------------------------------------------------- helpers

def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")
        log.info("wrote %s", output)


def _write_manifest(args: argparse.Namespace, cfg: RunConfig, lex: Lexicons | None, **info: Any) -> None:
    target = args.manifest or (f"{args.output}.manifest.json" if args.output not in (None, "-") else None)
    if target is None:
        return
    manifest = {"tool": "navprobe", "version": __version__, "command": args.command,
                "seed": cfg.seed, **info}
    if lex is not None:
        manifest["lexicons"] = lex.hashes()
    Path(target).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _lexicons(cfg: RunConfig) -> Lexicons:
    return Lexicons.load(spatial=cfg.spatial_words, objects=cfg.object_words, numbers=cfg.number_words,
                         tags=cfg.tag_lexicon, suffixes=cfg.suffix_rules)


def _load_inputs(paths: Sequence[str]) -> list[Episode]:
    episodes: list[Episode] = []
    for p in paths:
        eps = load_episodes(p)
        log.info("loaded %d episodes from %s", len(eps), p)
        episodes.extend(eps)
    return episodes


def _graphs_for(args: argparse.Namespace, scans=None):
    if not args.graphs:
        raise CliError("--graphs is required for this command")
    graphs = load_graphs(args.graphs, scans)
    log.info("loaded %d graphs from %s", len(graphs), args.graphs)
    return graphs


def _exclusion(paths: Sequence[str] | None) -> set[tuple[str, ...]]:
    excluded: set[tuple[str, ...]] = set()
    for p in paths or ():
        for rec in read_records(p):
            excluded.add(tuple(rec["path"]))
    return excluded


def _stats_chunk(job):
    episodes, lex = job
    return partial_stats(episodes, lex)


# ---------------------------------------------------------------- commands

def cmd_stats(args, cfg):
    lex = _lexicons(cfg)
    episodes = _load_inputs(args.input)
    if not episodes:
        raise EmptyCorpusError()
    if cfg.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        size = -(-len(episodes) // cfg.workers)
        chunks = [(episodes[i:i + size], lex) for i in range(0, len(episodes), size)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            part = sum(pool.map(_stats_chunk, chunks), PartialStats())
    else:
        part = partial_stats(episodes, lex)
    rep = StatsReport.from_partial(part)
    _emit(rep.to_tsv() if args.format == "tsv" else rep.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_ablate(args, cfg):
    lex = _lexicons(cfg)
    if args.swap:
        op, mode = swap_left_right, "swap"
    elif args.no_language:
        op, mode = (lambda i: mask_all_language(i, cfg.mask_token)), "no-language"
    else:
        cue = CueSet.parse(args.cue)
        op, mode = (lambda i: mask(i, cue, cfg.mask_token)), cue.value
    out = []
    for p in args.input:
        for ep in load_episodes(p):
            rec = ep.to_record()
            rec["instructions"] = [op(Instruction.parse(s, lex)).text for s in ep.instructions]
            out.append(rec)
    log.info("ablation %s applied to %d episodes", mode, len(out))
    _emit(dump_jsonl(out), args.output)
    return EXIT_OK


def cmd_counterfactuals(args, cfg):
    episodes = _load_inputs(args.input)
    graphs = _graphs_for(args, {ep.scan for ep in episodes})
    rep, per_episode = analyze_corpus(episodes, graphs, cfg.turn_threshold, cfg.around_threshold)
    _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.output)
    if args.per_episode:
        lines = ["path_id\tturns\tcounterfactuals\n"]
        lines += [f"{e.path_id}\t{e.turns}\t{','.join(map(str, e.counts))}\n" for e in per_episode]
        Path(args.per_episode).write_text("".join(lines), encoding="utf-8")
    return EXIT_OK


def cmd_gen_paths(args, cfg):
    graphs = _graphs_for(args)
    excluded = _exclusion(args.exclude)
    from .generate import split_quota

    quota = split_quota(args.count, sorted(graphs))
    out = []
    for scan in sorted(graphs):
        if quota[scan] == 0:
            continue
        g = graphs[scan]
        try:
            paths = sample_paths(g, f"{cfg.seed}:{scan}", quota[scan], cfg.min_edges, cfg.max_edges, excluded)
        except GraphError as exc:
            log.warning("%s", exc)
            continue
        for k, path in enumerate(paths):
            out.append(Episode(f"gen-{scan}-{k:05d}", scan, tuple(path), (),
                               distance=round(path_length_meters(path, g), 4), source=GENERATED).to_record())
    if len(out) < args.count:
        log.warning("generated %d of %d requested paths", len(out), args.count)
    _emit(dump_jsonl(out), args.output)
    return EXIT_OK


def cmd_gen_instructions(args, cfg):
    graphs = _graphs_for(args)
    phrases = PhraseSets.load(cfg.phrase_sets)
    result = generate_dataset(
        graphs, cfg.seed, args.count, _exclusion(args.exclude), phrases, workers=cfg.workers,
        min_edges=cfg.min_edges, max_edges=cfg.max_edges, turn_threshold=cfg.turn_threshold,
        around_threshold=cfg.around_threshold, z_threshold=cfg.stair_z_threshold,
    )
    if result.warnings:
        log.warning("%d warnings; %d episodes short of target", len(result.warnings), result.shortfall)
    _emit(dump_jsonl(ep.to_record() for ep in result.episodes), args.output)
    return EXIT_OK


def cmd_shuffle_negatives(args, cfg):
    out = []
    for ep in _load_inputs(args.input):
        for pair in shuffle_negatives(ep, f"{cfg.seed}:{ep.path_id}", args.negatives):
            out.append(pair.to_record())
    _emit(dump_jsonl(out), args.output)
    _write_manifest(args, cfg, None, negatives=args.negatives, records=len(out))
    return EXIT_OK


def cmd_mlm_corpus(args, cfg):
    lex = _lexicons(cfg)
    out = []
    for ep in _load_inputs(args.input):
        for j, raw in enumerate(ep.instructions):
            instr = Instruction.parse(raw, lex)
            if args.mode == "spatial":
                rec = mlm_mask_spatial(instr, cfg.mask_token)
            else:
                if not instr.tokens:
                    continue
                rec = mlm_mask_standard(instr, f"{cfg.seed}:{ep.path_id}:{j}", cfg.mask_rate,
                                        cfg.mask_token, bert_style=args.bert_style)
            if rec.skippable and args.drop_skippable:
                continue
            out.append(rec.to_record(path_id=ep.path_id, instruction_index=j))
    _emit(dump_jsonl(out), args.output)
    _write_manifest(args, cfg, lex, mode=args.mode, mask_rate=cfg.mask_rate if args.mode == "standard" else 1.0,
                    bert_style=args.bert_style, mask_token=cfg.mask_token, records=len(out))
    return EXIT_OK


def _prediction_key(rec: dict) -> str:
    if "path_id" in rec:
        return str(rec["path_id"])
    if "instr_id" in rec:
        return str(rec["instr_id"]).rsplit("_", 1)[0]
    raise CliError("prediction records need 'path_id' or 'instr_id'")


def _prediction_path(rec: dict) -> list[str]:
    if "path" in rec:
        return [str(n) for n in rec["path"]]
    if "trajectory" in rec:
        nodes = [step[0] if isinstance(step, (list, tuple)) else step for step in rec["trajectory"]]
        return [n for i, n in enumerate(nodes) if i == 0 or n != nodes[i - 1]]
    raise CliError("prediction records need 'path' or 'trajectory'")


def cmd_eval_paths(args, cfg):
    if not args.reference:
        raise CliError("--reference is required for eval-paths")
    refs = {str(ep.path_id): ep for ep in _load_inputs(args.reference)}
    preds = read_records(args.input[0]) if len(args.input) == 1 else sum((read_records(p) for p in args.input), [])
    graphs = _graphs_for(args, {ep.scan for ep in refs.values()})
    rows, metrics = [], []
    for rec in preds:
        key = _prediction_key(rec)
        ref = refs.get(key)
        if ref is None:
            raise CliError(f"prediction {key} has no reference episode")
        if ref.scan not in graphs:
            raise CliError(f"no graph loaded for scan {ref.scan}")
        m = evaluate(_prediction_path(rec), ref.goal, graphs[ref.scan])
        metrics.append(m)
        rows.append({"id": rec.get("instr_id", rec.get("path_id")), "scan": ref.scan,
                     "nav_error": m.nav_error, "success": m.success, "spl": m.spl,
                     "path_length": m.path_length, "shortest_length": m.shortest_length})
    summary = aggregate_metrics(metrics)
    _emit(dump_jsonl(rows), args.output)
    text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        Path(args.summary).write_text(text, encoding="utf-8")
    else:
        sys.stderr.write(text)
    return EXIT_OK


def cmd_validate(args, cfg):
    episodes = _load_inputs(args.input)
    graphs = _graphs_for(args, {ep.scan for ep in episodes})
    violations = validate_against_graphs(episodes, graphs)
    report = {"episodes": len(episodes), "violations": [v.to_record() for v in violations]}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_FAIL if violations else EXIT_OK


COMMANDS: dict[str, Callable] = {
    "stats": cmd_stats,
    "ablate": cmd_ablate,
    "counterfactuals": cmd_counterfactuals,
    "gen-paths": cmd_gen_paths,
    "gen-instructions": cmd_gen_instructions,
    "shuffle-negatives": cmd_shuffle_negatives,
    "mlm-corpus": cmd_mlm_corpus,
    "eval-paths": cmd_eval_paths,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config (default: $NAVPROBE_CONFIG)")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--workers", type=int)
    common.add_argument("--quiet", "-q", action="store_true")
    lexg = common.add_argument_group("lexicons")
    lexg.add_argument("--spatial-words", dest="spatial_words")
    lexg.add_argument("--object-words", dest="object_words")
    lexg.add_argument("--number-words", dest="number_words")
    lexg.add_argument("--tag-lexicon", dest="tag_lexicon")
    lexg.add_argument("--suffix-rules", dest="suffix_rules")
    lexg.add_argument("--mask-token", dest="mask_token")
    geo = common.add_argument_group("geometry")
    geo.add_argument("--turn-threshold", dest="turn_threshold", type=float)
    geo.add_argument("--around-threshold", dest="around_threshold", type=float)
    geo.add_argument("--stair-z", dest="stair_z_threshold", type=float)

    def inputs(p, required=True):
        p.add_argument("--input", "-i", action="append", required=required, default=None,
                       help="episode file (JSON array or JSONL); repeat to pool splits")

    parser = argparse.ArgumentParser(prog="navprobe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"navprobe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("stats", parents=[common], help="vocabulary, length and cue densities")
    inputs(p)
    p.add_argument("--format", choices=("json", "tsv"), default="json")

    p = sub.add_parser("ablate", parents=[common], help="masking or left/right swap ablations")
    inputs(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--cue", choices=[c.value for c in CueSet])
    mode.add_argument("--swap", action="store_true")
    mode.add_argument("--no-language", dest="no_language", action="store_true")

    p = sub.add_parser("counterfactuals", parents=[common], help="turns and counterfactual options")
    inputs(p)
    p.add_argument("--graphs", required=True)
    p.add_argument("--per-episode", dest="per_episode", help="also write a per-episode TSV here")

    for name, text in (("gen-paths", "sample 6-9 edge shortest paths"),
                       ("gen-instructions", "generate paths with rule-based instructions")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--graphs", required=True)
        p.add_argument("--count", type=int, required=True)
        p.add_argument("--exclude", action="append", help="episode file whose paths must not be emitted")
        p.add_argument("--min-edges", dest="min_edges", type=int)
        p.add_argument("--max-edges", dest="max_edges", type=int)
        if name == "gen-instructions":
            p.add_argument("--phrases", dest="phrase_sets", help="phrase-set JSON file")

    p = sub.add_parser("shuffle-negatives", parents=[common], help="shuffled hard-negative paths")
    inputs(p)
    p.add_argument("--negatives", type=int, default=4)
    p.add_argument("--manifest")

    p = sub.add_parser("mlm-corpus", parents=[common], help="masked-language-modeling records")
    inputs(p)
    p.add_argument("--mode", choices=("standard", "spatial"), default="standard")
    p.add_argument("--rate", dest="mask_rate", type=float)
    p.add_argument("--bert-style", dest="bert_style", action="store_true",
                   help="80/10/10 mask/random/keep replacement in standard mode")
    p.add_argument("--drop-skippable", dest="drop_skippable", action="store_true")
    p.add_argument("--manifest")

    p = sub.add_parser("eval-paths", parents=[common], help="NE / SR / SPL of predicted paths")
    inputs(p)
    p.add_argument("--reference", action="append", help="ground-truth episode file")
    p.add_argument("--graphs", required=True)
    p.add_argument("--summary", help="write aggregate metrics JSON here (default: stderr)")

    p = sub.add_parser("validate", parents=[common], help="check episode paths against graphs")
    inputs(p)
    p.add_argument("--graphs", required=True)
    return parser


_CONFIG_KEYS = ("seed", "workers", "spatial_words", "object_words", "number_words", "tag_lexicon",
                "suffix_rules", "mask_token", "turn_threshold", "around_threshold", "stair_z_threshold",
                "mask_rate", "phrase_sets", "min_edges", "max_edges")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="navprobe: %(message)s", stream=sys.stderr, force=True)
    if getattr(args, "negatives", 1) < 1 or getattr(args, "count", 0) < 0:
        parser.error("--negatives must be >= 1 and --count >= 0")
    try:
        cfg = load_config(args.config, {k: getattr(args, k, None) for k in _CONFIG_KEYS})
    except ConfigError as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[args.command](args, cfg)
    except (CliError, SchemaError, GraphError, LexiconError, EmptyCorpusError, OSError,
            ValueError, KeyError) as exc:
        log.error("error: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
