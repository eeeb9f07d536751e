"""Command-line interface.

Every command that writes to ``--out`` also writes ``manifest.json`` there;
``lexiscale replay manifest.json`` reruns it with the recorded arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from lexiscale import __version__
from lexiscale.analysis import AnalysisSettings, analyze_sequence, curve_csv, write_curves
from lexiscale.calibration import Bounds, CalibrationTarget, calibrate
from lexiscale.compare import ExponentSample, welch_t_test
from lexiscale.corpus import KINDS, IngestError, TokenizerRules, load_corpus
from lexiscale.fitting import FitRegion
from lexiscale.simulation import ModelParams, simulate
from lexiscale.stats import EmptyCorpusError

log = logging.getLogger("lexiscale")

LAW_ALIASES = {"lambda": "lambda", "heaps": "lambda", "beta": "beta", "spectrum": "beta",
               "alpha": "alpha", "zipf": "alpha", "phi": "phi", "pa": "phi",
               "k0": "k0", "kt": "kt", "kp": "kp"}


def dump_json(obj, path: Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_manifest(directory: Path, args: argparse.Namespace, argv: list[str], inputs: list[str]) -> Path:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "argv")}
    manifest = {
        "tool": "lexiscale",
        "version": __version__,
        "command": args.command,
        "argv": argv,
        "inputs": inputs,
        "parameters": params,
    }
    path = directory / "manifest.json"
    dump_json(manifest, path)
    return path


def _region(values) -> FitRegion:
    return FitRegion(float(values[0]), float(values[1]))


def _rules(args) -> TokenizerRules:
    return TokenizerRules(keep_apostrophes=args.keep_apostrophes, strip_gutenberg=args.strip_gutenberg)


def _settings(args) -> AnalysisSettings:
    return AnalysisSettings(
        base=args.base,
        spectrum_region=_region(args.spectrum_region),
        rank_region=_region(args.rank_region),
        growth_region=_region(args.growth_region),
        rho=args.rho,
        normalize_rank=getattr(args, "normalize_rank", False),
    )


def _analyze_file(path: str, rules: TokenizerRules, kind: str, settings: AnalysisSettings):
    seq = load_corpus(path, rules, kind)
    if seq.T == 0:
        raise EmptyCorpusError("empty corpus")
    return analyze_sequence(seq, settings)


def _unique_names(paths: list[str]) -> list[str]:
    names, seen = [], {}
    for p in paths:
        stem = Path(p).stem
        seen[stem] = seen.get(stem, 0) + 1
        names.append(stem if seen[stem] == 1 else f"{stem}-{seen[stem]}")
    return names


def cmd_analyze(args) -> int:
    rules, settings = _rules(args), _settings(args)
    out = Path(args.out) if args.out else None
    names = _unique_names(args.paths)
    if args.jobs > 1 and len(args.paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_analyze_file, p, rules, args.kind, settings) for p in args.paths]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append((fut.result(), None))
                except (OSError, IngestError, ValueError) as exc:
                    outcomes.append((None, exc))
    else:
        outcomes = []
        for p in args.paths:
            try:
                outcomes.append((_analyze_file(p, rules, args.kind, settings), None))
            except (OSError, IngestError, ValueError) as exc:
                outcomes.append((None, exc))

    reports, errors = [], {}
    for path, name, (analysis, exc) in zip(args.paths, names, outcomes):
        if exc is not None:
            log.error("%s: %s", path, exc)
            errors[path] = str(exc)
            continue
        analysis.report["path"] = path
        reports.append(analysis.report)
        if out:
            dump_json(analysis.report, out / name / "report.json")
            write_curves(analysis, out / name)
    if out:
        if errors:
            dump_json(errors, out / "errors.json")
        write_manifest(out, args, args.argv, args.paths)
    sys.stdout.write(dump_json(reports if len(args.paths) > 1 else (reports[0] if reports else [])))
    return 1 if errors else 0


_SINGLE = {"spectrum": "beta", "zipf": "alpha", "heaps": "lambda", "pa": "phi"}


def cmd_curve(args) -> int:
    try:
        analysis = _analyze_file(args.path, _rules(args), args.kind, _settings(args))
    except (OSError, IngestError, ValueError) as exc:
        log.error("%s: %s", args.path, exc)
        return 1
    name = args.command
    csv_text = curve_csv(analysis.curves[name], name)
    fit = analysis.report["fits"].get(_SINGLE[name])
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.csv").write_text(csv_text, encoding="utf-8")
        dump_json(fit, out / f"{name}_fit.json")
        write_manifest(out, args, args.argv, [args.path])
        sys.stdout.write(dump_json(fit))
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_simulate(args) -> int:
    params = ModelParams(args.k0, args.kt, args.kp, args.length, args.seed)
    seq = simulate(params)
    analysis = analyze_sequence(seq, _settings(args))
    summary = dict(analysis.report, params=params.to_json(), innovations=seq.Nt)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        words = [seq.vocabulary[i] for i in seq.ids.tolist()]
        lines = (" ".join(words[i:i + 20]) for i in range(0, len(words), 20))
        (out / "corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        (out / "ids.txt").write_text("\n".join(map(str, seq.ids.tolist())) + "\n", encoding="utf-8")
        dump_json(summary, out / "summary.json")
        write_curves(analysis, out)
        write_manifest(out, args, args.argv, [])
    sys.stdout.write(dump_json(summary))
    return 0


def cmd_calibrate(args) -> int:
    try:
        seq = load_corpus(args.input, _rules(args), args.kind)
    except (OSError, IngestError) as exc:
        log.error("%s: %s", args.input, exc)
        return 1
    if seq.T == 0:
        log.error("%s: empty corpus", args.input)
        return 1
    bounds = Bounds(tuple(args.k0_bounds), tuple(args.kt_bounds), tuple(args.kp_bounds))
    target = CalibrationTarget.from_sequence(seq, args.base)
    result = calibrate(target, bounds, args.budget, args.ensemble, args.seed, args.grid)
    payload = dict(result.to_json(), id=seq.identifier, T=seq.T, Nt=seq.Nt)
    if args.out:
        out = Path(args.out)
        if out.suffix == ".json":
            dump_json(payload, out)
            write_manifest(out.parent, args, args.argv, [args.input])
        else:
            dump_json(payload, out / "params.json")
            write_manifest(out, args, args.argv, [args.input])
    sys.stdout.write(dump_json(payload))
    return 0


def collect_values(directory: Path, quantity: str, args) -> tuple[list[float], dict[str, str]]:
    """Gather one quantity from analysis/calibration JSON files or raw corpora under ``directory``."""
    values, errors = [], {}
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    for path in sorted(directory.rglob("*")):
        if path.name == "manifest.json" or not path.is_file():
            continue
        try:
            if path.suffix == ".json":
                data = json.loads(path.read_text(encoding="utf-8"))
                entries = data if isinstance(data, list) else [data]
                for entry in entries:
                    if isinstance(entry, dict) and entry.get(quantity) is not None:
                        values.append(float(entry[quantity]))
            elif path.suffix == ".txt":
                report = _analyze_file(str(path), _rules(args), "book", _settings(args)).report
                if report.get(quantity) is None:
                    raise ValueError(f"no {quantity} fit: {report.get('fit_errors')}")
                values.append(float(report[quantity]))
        except (OSError, IngestError, ValueError) as exc:
            errors[str(path)] = str(exc)
    return values, errors


def cmd_compare(args) -> int:
    quantity = LAW_ALIASES[args.law]
    try:
        a, err_a = collect_values(Path(args.group_a), quantity, args)
        b, err_b = collect_values(Path(args.group_b), quantity, args)
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return 2
    errors = {**err_a, **err_b}
    for path, msg in errors.items():
        log.error("%s: %s", path, msg)
    try:
        result = welch_t_test(ExponentSample("a", quantity, a), ExponentSample("b", quantity, b))
    except ValueError as exc:
        log.error("cannot compare %s: %s", quantity, exc)
        return 1
    payload = dict(result.to_json(), law=quantity, group_a=args.group_a, group_b=args.group_b)
    if args.out:
        out = Path(args.out)
        dump_json(payload, out / "ttest.json")
        write_manifest(out, args, args.argv, [args.group_a, args.group_b])
    sys.stdout.write(dump_json(payload))
    return 1 if errors else 0


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if manifest.get("tool") != "lexiscale":
        log.error("%s is not a lexiscale manifest", args.manifest)
        return 2
    if manifest.get("version") != __version__:
        log.warning("manifest written by version %s, running %s", manifest.get("version"), __version__)
    return main(manifest["argv"])


def _add_tokenizer_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("tokenizer")
    g.add_argument("--keep-apostrophes", action=argparse.BooleanOptionalAction, default=True,
                   help="keep word-internal apostrophes (default: on)")
    g.add_argument("--strip-gutenberg", action="store_true",
                   help="drop Project Gutenberg header and license footer")
    g.add_argument("--kind", choices=KINDS, default="book")


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("fitting")
    g.add_argument("--base", type=float, default=1.2, help="log-binning base b > 1 (default 1.2)")
    g.add_argument("--spectrum-region", nargs=2, type=float, default=[2, 100], metavar=("LO", "HI"))
    g.add_argument("--rank-region", nargs=2, type=float, default=[60, 1000], metavar=("LO", "HI"))
    g.add_argument("--growth-region", nargs=2, type=float, default=[100, 20000], metavar=("LO", "HI"))
    g.add_argument("--rho", type=float, default=0.5, help="Part I fraction for phi(k) (default 0.5)")
    g.add_argument("--normalize-rank", action="store_true", help="export Z(r)/T instead of counts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexiscale", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lexiscale {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="T, Nt, fitted exponents and curve CSVs per corpus")
    p.add_argument("paths", nargs="+")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    _add_tokenizer_flags(p)
    _add_fit_flags(p)
    p.set_defaults(func=cmd_analyze)

    for name, helptext in (("spectrum", "frequency spectrum P(k)"), ("zipf", "rank profile Z(r)"),
                           ("heaps", "growth curve N(t)"), ("pa", "attachment profile phi(k)")):
        p = sub.add_parser(name, help=f"{helptext} as CSV")
        p.add_argument("path")
        p.add_argument("--out", help="output directory (CSV, fit JSON, manifest)")
        _add_tokenizer_flags(p)
        _add_fit_flags(p)
        p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", help="generate text with the generalized Yule-Simon model")
    p.add_argument("--k0", type=float, required=True)
    p.add_argument("--kt", type=float, required=True)
    p.add_argument("--kp", type=float, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory")
    _add_fit_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="fit k0, kt, kp to a corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--budget", type=int, default=300)
    p.add_argument("--ensemble", type=int, default=4, help="simulations per objective evaluation")
    p.add_argument("--grid", type=int, default=4, help="grid points per parameter")
    p.add_argument("--seed", type=int, default=0, help="seed of the first ensemble member")
    p.add_argument("--k0-bounds", nargs=2, type=float, default=[0.1, 10.0])
    p.add_argument("--kt-bounds", nargs=2, type=float, default=[0.0, 1.0])
    p.add_argument("--kp-bounds", nargs=2, type=float, default=[0.1, 2.0])
    p.add_argument("--base", type=float, default=1.2)
    p.add_argument("--out", help="params.json path or output directory")
    _add_tokenizer_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", help="Welch t-test of one exponent between two groups")
    p.add_argument("--group-a", required=True, help="directory of corpora (.txt) or reports (.json)")
    p.add_argument("--group-b", required=True)
    p.add_argument("--law", choices=sorted(LAW_ALIASES), default="lambda")
    p.add_argument("--out", help="output directory")
    _add_tokenizer_flags(p)
    _add_fit_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    if args.command == "simulate":
        try:
            ModelParams(args.k0, args.kt, args.kp, args.length, args.seed)
        except ValueError as exc:
            parser.error(str(exc))
    for name in ("spectrum_region", "rank_region", "growth_region"):
        if hasattr(args, name):
            try:
                _region(getattr(args, name))
            except ValueError as exc:
                parser.error(str(exc))
    if getattr(args, "base", 2.0) <= 1:
        parser.error("--base must exceed 1")
    if hasattr(args, "rho") and not 0 < args.rho < 1:
        parser.error("--rho must lie in (0, 1)")
    if args.command == "calibrate" and args.budget < 50:
        parser.error("--budget must be at least 50")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
