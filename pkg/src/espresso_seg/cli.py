"""Command-line interface: run, bench, synth, and eval subcommands.

Configuration precedence is command-line flags over a JSON config file
over built-in defaults. Exit codes: 0 on success, 1 on validation
failures, 2 on I/O failures (unreadable or unparseable inputs).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .dataio import (
    DatasetManifest,
    aggregate_metrics,
    canonical_json,
    ingest_csv,
    read_boundaries,
    result_document,
    write_curve_csv,
    write_result,
    write_series_csv,
)
from .entropy import StopRule
from .errors import EspressoError, IngestError, ValidationError
from .metrics import evaluate, window_to_samples
from .pipeline import PipelineConfig, run_espresso
from .series import MultiSeries, SubseqSpec
from .synthetic import generate_synthetic

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

# keys a JSON config file may set; flags override these
CONFIG_KEYS = (
    "subseq_len", "mode", "chain_beta", "smoothing", "min_gap", "margin",
    "curve", "distance", "grid_step", "k", "auto_k", "window_seconds",
    "window_samples", "label_column", "channels", "rate", "pool_candidates",
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, EspressoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="espresso",
        description="Hybrid shape + entropy segmentation for multivariate time-series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="segment one CSV dataset")
    _add_input_flags(run)
    _add_pipeline_flags(run)
    run.add_argument("--out", help="output directory for the result document")
    run.add_argument("--export-curves", action="store_true", help="write per-channel curve CSVs")
    run.set_defaults(handler=_cmd_run)

    bench = sub.add_parser("bench", help="sweep subsequence lengths and aggregate scores")
    _add_input_flags(bench, required=False)
    _add_synth_flags(bench, prefix=True)
    _add_pipeline_flags(bench, include_length=False)
    bench.add_argument("--subseq-lens", required=True, help="comma-separated window lengths, e.g. 8,16,32")
    bench.add_argument("--out", required=True, help="output directory for run and summary documents")
    bench.add_argument("--export-curves", action="store_true")
    bench.add_argument("--workers", type=int, default=1, help="concurrent sweep workers")
    bench.set_defaults(handler=_cmd_bench)

    synth = sub.add_parser("synth", help="generate a labeled synthetic dataset CSV")
    _add_synth_flags(synth)
    synth.add_argument("--out", required=True, help="output CSV path")
    synth.set_defaults(handler=_cmd_synth)

    ev = sub.add_parser("eval", help="score estimated boundaries against ground truth")
    ev.add_argument("--gt", required=True, help="boundary-list file, or CSV when --label-column is given")
    ev.add_argument("--est", required=True, help="boundary-list file of estimates")
    ev.add_argument("--label-column", help="treat --gt as a labeled CSV with this column")
    ev.add_argument("--n", type=int, help="series length in samples (required with boundary-list gt)")
    ev.add_argument("--window-samples", type=int)
    ev.add_argument("--window-seconds", type=float)
    ev.add_argument("--rate", type=float, help="sample rate in Hz (for --window-seconds)")
    ev.add_argument("--out", help="write the report JSON here instead of stdout")
    ev.set_defaults(handler=_cmd_eval)
    return parser


def _add_input_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", required=required, help="input CSV (header row, numeric channels)")
    p.add_argument("--label-column", help="column holding per-sample segment labels")
    p.add_argument("--channels", help="comma-separated channel columns (default: all non-label)")
    p.add_argument("--rate", type=float, help="sample rate in Hz")
    p.add_argument("--gt-boundaries", help="boundary-list file when the CSV has no label column")


def _add_pipeline_flags(p: argparse.ArgumentParser, include_length: bool = True) -> None:
    if include_length:
        p.add_argument("--subseq-len", type=int, help="window length L (the headline parameter)")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--mode", choices=["hybrid", "shape_only", "entropy_only"])
    p.add_argument("--chain-beta", type=float, help="chain threshold = beta * median(mp)")
    p.add_argument("--smoothing", type=int, help="curve smoothing width (1 disables)")
    p.add_argument("--min-gap", type=int, help="minimum tick gap between candidates")
    p.add_argument("--margin", type=int, help="candidate margin at curve ends")
    p.add_argument("--curve", choices=["wcac", "ac"], help="shape curve kind")
    p.add_argument("--distance", choices=["znorm", "plain"], help="window distance metric")
    p.add_argument("--grid-step", type=int, help="dense grid spacing for entropy_only")
    p.add_argument("--k", type=int, help="fixed number of segments")
    p.add_argument("--auto-k", action="store_true", help="pick k by knee detection even when truth is known")
    p.add_argument("--pool-candidates", action="store_true", help="search pooled candidates from all channels")
    p.add_argument("--window-samples", type=int, help="F-score tolerance window in samples")
    p.add_argument("--window-seconds", type=float, help="F-score tolerance window in seconds (needs rate)")


def _add_synth_flags(p: argparse.ArgumentParser, prefix: bool = False) -> None:
    lead = "--synthetic-" if prefix else "--"
    if prefix:
        p.add_argument("--synthetic", action="store_true", help="generate the input instead of reading a CSV")
    p.add_argument(f"{lead}continuity", choices=["C", "NC"], default="NC", dest="continuity")
    p.add_argument(f"{lead}patterns", choices=["R", "NR"], default="R", dest="patterns")
    p.add_argument(f"{lead}segments", type=int, default=3, dest="segments")
    p.add_argument(f"{lead}seed", type=int, default=0, dest="seed")
    p.add_argument(f"{lead}length", type=int, default=None, dest="length")
    p.add_argument(f"{lead}channels", type=int, default=2, dest="n_channels")
    p.add_argument(f"{lead}noise-channels", type=int, default=0, dest="noise_channels")
    p.add_argument(f"{lead}class-sequence", default=None, dest="class_sequence",
                   help="comma-separated segment classes, e.g. 0,1,0")


@dataclass
class _Settings:
    """Flags merged over config-file values over defaults."""

    values: dict

    def get(self, key, default=None):
        v = self.values.get(key)
        return default if v is None else v


def _merge_settings(args: argparse.Namespace) -> _Settings:
    merged: dict = {}
    config_path = getattr(args, "config", None)
    if config_path:
        loaded = json.loads(Path(config_path).read_text())
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            merged[key] = flag
    return _Settings(merged)


def _load_input(args) -> tuple[MultiSeries, list[int] | None]:
    settings = _merge_settings(args)
    channels = settings.get("channels")
    if isinstance(channels, str):
        channels = tuple(c.strip() for c in channels.split(","))
    manifest = DatasetManifest(
        path=args.input,
        label_column=settings.get("label_column"),
        channel_columns=channels,
        sample_rate_hz=settings.get("rate"),
    )
    series, gt = ingest_csv(manifest)
    if gt is None and getattr(args, "gt_boundaries", None):
        gt = read_boundaries(args.gt_boundaries)
    return series, gt


def _make_config(args, subseq_len: int, gt: list[int] | None) -> PipelineConfig:
    settings = _merge_settings(args)
    if settings.get("auto_k", False):
        k_hint = settings.get("k") or (len(gt) + 1 if gt else None)
        stop = StopRule.auto(k_hint=k_hint)
    elif settings.get("k") is not None:
        stop = StopRule.fixed(int(settings.get("k")))
    elif gt:
        stop = StopRule.fixed(len(gt) + 1)
    else:
        stop = StopRule.auto()
    return PipelineConfig(
        spec=SubseqSpec(length=subseq_len),
        mode=settings.get("mode", "hybrid"),
        stop=stop,
        chain_beta=settings.get("chain_beta", 2.0),
        smoothing_width=settings.get("smoothing"),
        margin=settings.get("margin"),
        min_gap=settings.get("min_gap"),
        distance_kind=settings.get("distance", "znorm"),
        curve_kind=settings.get("curve", "wcac"),
        dense_grid_step=settings.get("grid_step", 1),
        pool_candidates=bool(settings.get("pool_candidates", False)),
    )


def _window_samples(args, series: MultiSeries) -> int:
    settings = _merge_settings(args)
    if settings.get("window_samples") is not None:
        return int(settings.get("window_samples"))
    if settings.get("window_seconds") is not None:
        rate = series.sample_rate_hz or settings.get("rate")
        if not rate:
            raise ValidationError("--window-seconds needs a sample rate")
        return window_to_samples(float(settings.get("window_seconds")), float(rate))
    return max(1, round(0.02 * series.n_samples))


def _config_echo(cfg: PipelineConfig, extra: dict | None = None) -> dict:
    echo = {
        "subseq_len": cfg.spec.length,
        "exclusion_radius": cfg.spec.exclusion_radius,
        "mode": cfg.mode,
        "chain_beta": cfg.chain_beta,
        "chain_threshold": cfg.chain_threshold,
        "smoothing_width": cfg.smoothing_width,
        "margin": cfg.margin,
        "min_gap": cfg.min_gap,
        "distance_kind": cfg.distance_kind,
        "curve_kind": cfg.curve_kind,
        "dense_grid_step": cfg.dense_grid_step,
        "pool_candidates": cfg.pool_candidates,
        "stop": {
            "fixed_k": cfg.stop.fixed_k,
            "k_hint": cfg.stop.k_hint,
            "max_boundaries": cfg.stop.max_boundaries,
        },
    }
    if extra:
        echo.update(extra)
    return echo


def _single_run(series, gt, cfg, window, export_curves, out_dir, tag, extra_echo=None):
    result = run_espresso(series, cfg)
    report = None
    if gt:
        report = evaluate(gt, list(result.segmentation.boundaries), series.n_samples, window)
    doc = result_document(result, series, _config_echo(cfg, extra_echo), gt, report)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_result(out_dir / f"{tag}.json", doc)
        if export_curves and result.curves:
            for j, curve in result.curves.items():
                write_curve_csv(out_dir / f"{tag}_curve_ch{j}.csv", curve.values)
    return result, report, doc


def _cmd_run(args) -> int:
    series, gt = _load_input(args)
    if args.subseq_len is None and _merge_settings(args).get("subseq_len") is None:
        raise ValidationError("--subseq-len is required (or set subseq_len in the config file)")
    subseq_len = args.subseq_len or int(_merge_settings(args).get("subseq_len"))
    cfg = _make_config(args, subseq_len, gt)
    window = _window_samples(args, series)
    out_dir = Path(args.out) if args.out else None
    result, report, doc = _single_run(series, gt, cfg, window, args.export_curves, out_dir, "run")

    print(f"boundaries: {list(result.segmentation.boundaries)}")
    print(f"source channel: {result.segmentation.source_channel}")
    if report is not None:
        print(f"f_score={report.f_score:.4f} precision={report.precision:.4f} "
              f"recall={report.recall:.4f} rmse_norm={report.rmse_norm:.4f} mae={report.mae_samples:.2f}")
    if out_dir is None:
        print(canonical_json(doc), end="")
    return EXIT_OK


def _parse_lengths(text: str) -> list[int]:
    try:
        lengths = sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise ValidationError(f"bad --subseq-lens value {text!r}") from None
    if not lengths:
        raise ValidationError("empty --subseq-lens")
    return lengths


def _cmd_bench(args) -> int:
    if args.synthetic:
        class_sequence = None
        if args.class_sequence:
            class_sequence = [int(c) for c in args.class_sequence.split(",")]
        series, gt = generate_synthetic(
            args.continuity, args.patterns, args.segments, args.seed,
            n_samples=args.length, n_channels=args.n_channels,
            noise_channels=args.noise_channels, class_sequence=class_sequence,
        )
        synth_echo = {
            "synthetic": {
                "continuity": args.continuity, "patterns": args.patterns,
                "segments": args.segments, "seed": args.seed,
                "length": args.length, "channels": args.n_channels,
                "noise_channels": args.noise_channels,
                "class_sequence": args.class_sequence,
            }
        }
    elif args.input:
        series, gt = _load_input(args)
        synth_echo = None
    else:
        raise ValidationError("bench needs --input or --synthetic")
    if not gt:
        raise ValidationError("bench needs ground truth (label column, --gt-boundaries, or --synthetic)")

    lengths = _parse_lengths(args.subseq_lens)
    too_long = [L for L in lengths if 2 * L > series.n_samples]
    if too_long:
        raise ValidationError(f"subsequence lengths {too_long} exceed half the series length")

    window = _window_samples(args, series)
    out_dir = Path(args.out)

    def one(L: int):
        cfg = _make_config(args, L, gt)
        return L, _single_run(series, gt, cfg, window, args.export_curves, out_dir, f"run_L{L}", synth_echo)

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            runs = dict(pool.map(one, lengths))
    else:
        runs = dict(one(L) for L in lengths)

    reports = [runs[L][1] for L in lengths]
    summary = {
        "schema": "espresso-summary/1",
        "window_samples": window,
        "subseq_lengths": lengths,
        "aggregate": aggregate_metrics(reports),
        "runs": {str(L): f"run_L{L}.json" for L in lengths},
    }
    write_result(out_dir / "summary.json", summary)

    print(f"{'L':>6} {'f_score':>9} {'precision':>9} {'recall':>9} {'rmse_norm':>9} {'mae':>9}")
    for L in lengths:
        r = runs[L][1]
        print(f"{L:>6} {r.f_score:>9.4f} {r.precision:>9.4f} {r.recall:>9.4f} "
              f"{r.rmse_norm:>9.4f} {r.mae_samples:>9.2f}")
    agg = summary["aggregate"]
    print(f"{'mean':>6} {agg['f_score']:>9.4f} {agg['precision']:>9.4f} {agg['recall']:>9.4f} "
          f"{agg['rmse_norm']:>9.4f} {agg['mae_samples']:>9.2f}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    class_sequence = None
    if args.class_sequence:
        class_sequence = [int(c) for c in args.class_sequence.split(",")]
    series, boundaries = generate_synthetic(
        args.continuity, args.patterns, args.segments, args.seed,
        n_samples=args.length, n_channels=args.n_channels,
        noise_channels=args.noise_channels, class_sequence=class_sequence,
    )
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    write_series_csv(out, series, boundaries)
    print(f"wrote {out} ({series.n_channels} channels x {series.n_samples} samples, "
          f"boundaries {boundaries}, seed {args.seed})")
    return EXIT_OK


def _cmd_eval(args) -> int:
    if args.label_column:
        manifest = DatasetManifest(path=args.gt, label_column=args.label_column)
        series, gt = ingest_csv(manifest)
        n = series.n_samples
        if gt is None:
            raise ValidationError("ground-truth CSV produced no boundaries")
    else:
        gt = read_boundaries(args.gt)
        if args.n is None:
            raise ValidationError("--n is required with a boundary-list ground truth")
        n = args.n
    est = read_boundaries(args.est)

    if args.window_samples is not None:
        window = args.window_samples
    elif args.window_seconds is not None:
        if not args.rate:
            raise ValidationError("--window-seconds needs --rate")
        window = window_to_samples(args.window_seconds, args.rate)
    else:
        window = max(1, round(0.02 * n))

    report = evaluate(gt, est, n, window)
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
