"""Command-line front end.

Subcommands: classify, analyze, brute, simulate.  stdout carries exactly one
JSON document per run; logs go to stderr.  Exit codes: 0 ok, 2 bad config,
3 resource guard tripped, 4 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .benford import DEFAULT_KS_THRESHOLD, benford_report, star_discrepancy, write_digits_csv
from .enumeration import (
    DEFAULT_CAP,
    MEASURE_UNIFORM,
    MEASURES,
    exact_distribution,
    rotate_distribution,
    write_distribution_csv,
)
from .errors import ConfigError, ResourceLimitError
from .model import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_TOLERANCE,
    classify_rationality,
    parse_config,
    predict_benford,
)
from .montecarlo import (
    FixedProportions,
    SamplerConfig,
    sample_leaf_residues,
    write_metadata_json,
    write_samples_csv,
)
from .oracle import cross_check

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4

SCALE_CHECK_TOL = 1e-9


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2))


def _config_sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_model(args: argparse.Namespace):
    """Parse the config file; --base applies only when the file has no base."""
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
    if isinstance(raw, dict) and "base" not in raw:
        raw = {**raw, "base": args.base}
    model, spec = parse_config(raw)
    return model, spec, raw


def _write_manifest(out_dir: Path, args: argparse.Namespace, outputs: list[str]) -> None:
    manifest = {
        "command": " ".join(args.command_echo),
        "config_sha256": _config_sha256(args.config),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": outputs,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    for name in outputs:
        target = out_dir / name
        if not target.exists() or target.stat().st_size == 0:
            raise RuntimeError(f"declared output {name} missing or empty")


def _classification_dict(spec, classification) -> dict:
    entries = []
    for value, verdict in zip(spec.values(), classification.verdicts):
        entries.append(
            {
                "value": value,
                "verdict": "rational" if verdict.rational else "presumed_irrational",
                "rational": [verdict.numerator, verdict.denominator] if verdict.rational else None,
                "witness": {
                    "numerator": verdict.witness_numerator,
                    "denominator": verdict.witness_denominator,
                    "error": verdict.witness_error,
                },
            }
        )
    return {
        "exponents": entries,
        "base": spec.base,
        "max_denominator": classification.max_denominator,
        "tolerance": classification.tolerance,
        "prediction": predict_benford(classification),
    }


def cmd_classify(args: argparse.Namespace) -> int:
    model, spec, _ = _load_model(args)
    classification = classify_rationality(spec, args.max_denominator, args.tolerance)
    _emit(_classification_dict(spec, classification))
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    model, spec, _ = _load_model(args)
    base = spec.base
    _log(f"analyzing m={model.m} N={args.N} measure={args.measure}")
    try:
        dist = exact_distribution(model, args.N, base, args.measure, cap=args.cap, threads=args.threads)
    except ResourceLimitError as exc:
        _log(f"{exc}; consider `stickfrag simulate` for this size")
        return EXIT_RESOURCE
    if args.length != 1.0:
        if args.length <= 0 or not math.isfinite(args.length):
            raise ConfigError(f"--length must be positive and finite, got {args.length}")
        shift = math.log10(args.length) if base == 10 else math.log(args.length) / math.log(base)
        rotated = rotate_distribution(dist, shift)
        drift = abs(star_discrepancy(rotated) - star_discrepancy(dist))
        _log(f"scale invariance check: star-discrepancy drift {drift:.3e} at L={args.length}")
        if drift > SCALE_CHECK_TOL:
            _log("scale invariance violated")
            return EXIT_VERIFY
        dist = rotated
    report = benford_report(dist, base, args.ks_threshold)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_distribution_csv(dist, out_dir / "distribution.csv")
    write_digits_csv(report.leading_digit_freqs, base, out_dir / "digits.csv")
    (out_dir / "report.json").write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    _write_manifest(out_dir, args, ["report.json", "distribution.csv", "digits.csv"])
    _emit(report.to_json_dict())
    return EXIT_OK


def cmd_brute(args: argparse.Namespace) -> int:
    model, spec, _ = _load_model(args)
    try:
        report = cross_check(model, args.N, spec.base, args.measure)
    except ResourceLimitError as exc:
        _log(str(exc))
        return EXIT_RESOURCE
    _emit(report.to_json_dict())
    if not report.passed:
        _log(f"cross-check failed: max mass deviation {report.max_mass_deviation:.3e}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    model, spec, raw_config = _load_model(args)
    config = SamplerConfig(
        seed=args.seed, samples=args.samples, mode=FixedProportions(model), measure=args.measure
    )
    _log(f"sampling {args.samples} paths of length {args.N} (seed {args.seed})")
    residues, dist = sample_leaf_residues(config, args.N, spec.base, tasks=args.threads)
    report = benford_report(dist, spec.base, args.ks_threshold)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_samples_csv(residues, out_dir / "samples.csv")
    write_metadata_json(config, args.N, spec.base, raw_config, out_dir / "metadata.json")
    (out_dir / "report.json").write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    _write_manifest(out_dir, args, ["report.json", "samples.csv", "metadata.json"])
    _emit(report.to_json_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stickfrag",
        description="Benford analysis of fixed multi-proportion stick fragmentation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="model configuration JSON file")
        p.add_argument("--base", type=int, default=10, help="significand base (config file wins)")

    p_classify = sub.add_parser("classify", help="rationality verdicts and Benford prediction")
    add_common(p_classify)
    p_classify.add_argument("--max-denominator", type=int, default=DEFAULT_MAX_DENOMINATOR)
    p_classify.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p_classify.set_defaults(func=cmd_classify)

    p_analyze = sub.add_parser("analyze", help="exact distribution, metrics, CSV/JSON outputs")
    add_common(p_analyze)
    p_analyze.add_argument("--N", type=int, required=True, help="number of fragmentation stages")
    p_analyze.add_argument("--measure", choices=MEASURES, default=MEASURE_UNIFORM)
    p_analyze.add_argument("--out", required=True, help="output directory for this run")
    p_analyze.add_argument("--cap", type=int, default=DEFAULT_CAP, help="composition-count guard")
    p_analyze.add_argument("--threads", type=int, default=1)
    p_analyze.add_argument("--ks-threshold", type=float, default=DEFAULT_KS_THRESHOLD)
    p_analyze.add_argument("--length", type=float, default=1.0, help="initial stick length L")
    p_analyze.set_defaults(func=cmd_analyze)

    p_brute = sub.add_parser("brute", help="cross-check enumeration against brute force")
    add_common(p_brute)
    p_brute.add_argument("--N", type=int, required=True)
    p_brute.add_argument("--measure", choices=MEASURES, default=MEASURE_UNIFORM)
    p_brute.set_defaults(func=cmd_brute)

    p_sim = sub.add_parser("simulate", help="Monte Carlo path sampling")
    add_common(p_sim)
    p_sim.add_argument("--N", type=int, required=True)
    p_sim.add_argument("--measure", choices=MEASURES, default=MEASURE_UNIFORM)
    p_sim.add_argument("--samples", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--threads", type=int, default=1)
    p_sim.add_argument("--ks-threshold", type=float, default=DEFAULT_KS_THRESHOLD)
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_echo = ["stickfrag"] + argv
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        _log(str(exc))
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
