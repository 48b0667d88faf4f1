"""Command-line entry point: score, plan-chunks, simulate, augment.

Reports go to stdout (or ``-o``); diagnostics go to stderr. Exit codes are 0 on
success, 1 on a data error and 2 on a usage error.
"""

import argparse
from dataclasses import replace
from pathlib import Path
import sys
from typing import Dict, List, Optional, Sequence

from loguru import logger
from pydantic import RootModel, ValidationError

from .chunker import ChunkConfig, chunk_coverage_check, plan_chunks, plan_to_document
from .core import SegmentList, SpeakerEmbedding, load_segments, load_uem
from .enrollment import DEFAULT_FRAME_RATE, dump_prompts, load_prompts
from .metrics import Tokenizer
from .reports import METRICS, ReportConfig, ReportGenerator
from .simkit import (
    AugmentConfig,
    MixtureConfig,
    augment,
    build_corpus,
    calibrate_gap_range,
    child_seeds,
    dump_corpus,
    load_pool,
    placeholder_embeddings,
    synthetic_pool,
)
from .utils import BaseError, Config, FormatError, setup_logger

PROG = "diarasr"
USAGE_ERROR = 2
DATA_ERROR = 1


class CliParser(argparse.ArgumentParser):
    """Usage errors as one line on stderr, exit code 2."""

    def error(self, message: str):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class EmbeddingTable(RootModel[Dict[str, List[float]]]):
    pass


def load_embeddings(path: str) -> Dict[str, SpeakerEmbedding]:
    try:
        table = EmbeddingTable.model_validate_json(Path(path).read_bytes())
    except ValidationError as e:
        err = e.errors()[0]
        where = ".".join(str(p) for p in err["loc"]) or None
        raise FormatError(err["msg"], source=path, location=where)
    try:
        return {speaker: SpeakerEmbedding(tuple(values)) for speaker, values in table.root.items()}
    except FormatError as e:
        raise e.with_source(path) from None


def write_output(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config-dir", help="directory of YAML settings (default: $DIARASR_CONFIG_DIR or ./config)")
    parser.add_argument("--log-level", help="loguru level for stderr diagnostics")
    parser.add_argument("-o", "--out", help="write the report here instead of stdout")


def build_parser() -> CliParser:
    parser = CliParser(prog=PROG, description="Diarization-aware multi-speaker ASR scoring and data tools")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=CliParser)
    sub.required = True

    # -h is --hyp here, so help is long-form only
    score = sub.add_parser("score", help="cpWER, tcpWER or DER per session", add_help=False)
    score.add_argument("--help", action="help", help="show this help message and exit")
    score.add_argument("metric", choices=METRICS)
    score.add_argument("-r", "--ref", required=True, help="reference RTTM or segment-list file")
    score.add_argument("-h", "--hyp", required=True, help="hypothesis RTTM or segment-list file")
    score.add_argument("--collar", type=float, help="seconds (default 5.0 for tcpwer, 0.25 for der)")
    score.add_argument("--tokenizer", choices=("word", "char"), help="token unit (default word)")
    score.add_argument("--uem", help="scoring regions for der")
    score.add_argument("--by-num-speakers", action="store_true", help="add a per-speaker-count breakdown")
    score.add_argument("--format", choices=("json", "markdown"), default="json")
    score.add_argument("--workers", type=int, help="parallel session workers")
    _common(score)

    plan = sub.add_parser("plan-chunks", help="split a diarization output into decoder chunks")
    plan.add_argument("-i", "--input", required=True, help="diarization RTTM or segment-list file")
    plan.add_argument("--preset", choices=("alimeeting", "mlc_slm"), help="chunk bounds preset")
    plan.add_argument("--max-dur", type=float, help="maximum chunk duration in seconds")
    plan.add_argument("--max-segments", type=int, help="maximum segments per chunk")
    plan.add_argument("--max-per-speaker", type=int, help="maximum segments per speaker per chunk")
    plan.add_argument("--frame-rate", type=float, help="encoder frames per second")
    plan.add_argument("--tokenizer", choices=("word", "char"), help="token unit for splitting long transcripts")
    plan.add_argument("--embeddings", help="JSON object mapping speaker to embedding vector")
    plan.add_argument("--seed", type=int, default=0, help="seed for placeholder embeddings")
    _common(plan)

    simulate = sub.add_parser("simulate", help="generate simulated multi-speaker training mixtures")
    source = simulate.add_mutually_exclusive_group(required=True)
    source.add_argument("--pool", help="utterance pool JSON document")
    source.add_argument("--synthetic-speakers", type=int, help="generate a synthetic pool of N speakers")
    simulate.add_argument("--utterances-per-speaker", type=int, default=8)
    simulate.add_argument("--num-speakers", type=int, help="speakers per mixture (default: 2 to 4)")
    simulate.add_argument("--count", type=int, default=1, help="number of mixtures")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--max-dur", type=float, help="mixture duration bound in seconds")
    simulate.add_argument("--gap-min", type=float, help="lower gap bound in seconds (negative allows overlap)")
    simulate.add_argument("--gap-max", type=float, help="upper gap bound in seconds")
    simulate.add_argument("--target-overlap", type=float, help="calibrate the gap range to this overlap ratio")
    simulate.add_argument("--embedding-mode", choices=("random", "mean"), default="random")
    simulate.add_argument("--frame-rate", type=float)
    simulate.add_argument("--workers", type=int)
    _common(simulate)

    aug = sub.add_parser("augment", help="apply embedding replacement, dropout and shuffling")
    aug.add_argument("-i", "--input", required=True, help="prompt record document")
    aug.add_argument("--p-replace", type=float)
    aug.add_argument("--p-drop", type=float)
    aug.add_argument("--p-shuffle", type=float)
    aug.add_argument("--seed", type=int)
    _common(aug)

    return parser


def cmd_score(args, config: Config) -> str:
    defaults = {"tcpwer": "settings.metrics.tcpwer_collar", "der": "settings.metrics.der_collar"}
    collar = args.collar
    if collar is None and args.metric in defaults:
        collar = float(config.get(defaults[args.metric]))
    tok = Tokenizer.parse(args.tokenizer or config.get("settings.metrics.tokenizer", "word"))

    ref = load_segments(args.ref)
    hyp = load_segments(args.hyp)
    uem = load_uem(args.uem) if args.uem else None

    parameters = {"collar": collar, "tokenizer": tok.mode.value}
    if args.uem:
        parameters["uem"] = args.uem
    generator = ReportGenerator(
        ReportConfig(
            fmt=args.format,
            workers=args.workers or int(config.get("settings.workers", 4)),
            breakdown=args.by_num_speakers,
        )
    )
    report = generator.score(args.metric, ref, hyp, collar or 0.0, tok, uem, parameters)
    return generator.render(report)


def chunk_config(args, config: Config) -> ChunkConfig:
    cfg = ChunkConfig.from_settings(config, args.preset)
    overrides = {
        "max_chunk_duration": args.max_dur,
        "max_total_segments": args.max_segments,
        "max_segments_per_speaker": args.max_per_speaker,
    }
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def cmd_plan_chunks(args, config: Config) -> str:
    segs = load_segments(args.input)
    cfg = chunk_config(args, config)
    frame_rate = args.frame_rate or float(config.get("settings.enrollment.frame_rate", DEFAULT_FRAME_RATE))
    if args.embeddings:
        embeddings = load_embeddings(args.embeddings)
    else:
        dim = int(config.get("settings.simulation.embedding_dim", 16))
        logger.info(f"no --embeddings given; using {dim}-dim placeholder vectors")
        embeddings = placeholder_embeddings(segs.speakers, dim, args.seed)

    tok = Tokenizer.parse(args.tokenizer or config.get("settings.metrics.tokenizer", "word"))
    chunks = plan_chunks(segs, cfg, embeddings, frame_rate, tok)
    coverage = chunk_coverage_check(segs, chunks, cfg.max_chunk_duration, tok)
    if not coverage:
        raise BaseError(f"chunk plan lost {len(coverage.missing)} and invented {len(coverage.extra)} segment(s)")
    return plan_to_document(chunks, cfg, frame_rate).model_dump_json(indent=2) + "\n"


def cmd_simulate(args, config: Config) -> str:
    if args.pool:
        pool = load_pool(Path(args.pool).read_text(encoding="utf-8"))
    else:
        pool = synthetic_pool(
            args.synthetic_speakers,
            args.utterances_per_speaker,
            seed=args.seed,
            dim=int(config.get("settings.simulation.embedding_dim", 16)),
        )

    base = MixtureConfig.from_settings(config)
    mixture = replace(
        base,
        max_duration=args.max_dur if args.max_dur is not None else base.max_duration,
        gap_min=args.gap_min if args.gap_min is not None else base.gap_min,
        gap_max=args.gap_max if args.gap_max is not None else base.gap_max,
    )
    speakers = (args.num_speakers, args.num_speakers) if args.num_speakers else (2, 4)
    if args.target_overlap is not None:
        width = mixture.gap_max - mixture.gap_min
        gap_min, gap_max = calibrate_gap_range(
            pool, speakers[0], args.target_overlap, width=width, max_duration=mixture.max_duration
        )
        logger.info(f"calibrated gap range [{gap_min:.3f}, {gap_max:.3f}] s")
        mixture = replace(mixture, gap_min=gap_min, gap_max=gap_max)

    items = build_corpus(
        pool,
        args.count,
        seed=args.seed,
        n_speakers_range=speakers,
        mixture=mixture,
        embedding_mode=args.embedding_mode,
        frame_rate=args.frame_rate or float(config.get("settings.enrollment.frame_rate", DEFAULT_FRAME_RATE)),
        instruction=config.get("settings.enrollment.instruction"),
        workers=args.workers or int(config.get("settings.workers", 4)),
    )
    return dump_corpus(items)


def cmd_augment(args, config: Config) -> str:
    base = AugmentConfig.from_settings(config, args.seed)
    cfg = replace(
        base,
        p_replace=args.p_replace if args.p_replace is not None else base.p_replace,
        p_drop=args.p_drop if args.p_drop is not None else base.p_drop,
        p_shuffle=args.p_shuffle if args.p_shuffle is not None else base.p_shuffle,
    )
    try:
        prompts = load_prompts(Path(args.input).read_text(encoding="utf-8"))
    except FormatError as e:
        raise e.with_source(args.input) from None

    donors = list({t.embedding.values: t.embedding for p in prompts for t in p.triplets}.values())
    seeds = child_seeds(cfg.seed, len(prompts))
    augmented = [augment(p, replace(cfg, seed=s), donors) for p, s in zip(prompts, seeds)]
    return dump_prompts(augmented)


COMMANDS = {
    "score": cmd_score,
    "plan-chunks": cmd_plan_chunks,
    "simulate": cmd_simulate,
    "augment": cmd_augment,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR

    try:
        config = Config(args.config_dir)
        setup_logger(
            args.log_level or config.get("settings.logging.level", "INFO"),
            config.get("settings.logging.file"),
        )
        text = COMMANDS[args.command](args, config)
        write_output(text, args.out)
    except (BaseError, OSError) as e:
        logger.error(str(e).replace("\n", " "))
        return DATA_ERROR
    return 0


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
