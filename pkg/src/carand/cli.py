"""Command-line entry point: ``carand <subcommand> [flags]``.

Exit status: 0 success, 1 usage error, 2 I/O error, 3 a requested battery
could not run (for example a corpus too short for the stream layout).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__, battery, bitio, keystream
from ._pool import default_jobs
from .ca import BOUNDARIES, CYCLIC, REPRESENTATIVE_RULES, Lattice, evolve_rows, rule_from_number
from .cipher import CipherKey, decrypt, encrypt, random_key
from .keystream import EXTRACTIONS, SplitMix64
from .report import FORMATS, parse_report, parse_reproduction, render_report, render_reproduction
from .sts import TestParams

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INCOMPLETE = 0, 1, 2, 3
SEED_ENV = "CARAND_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(args, default=0) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return default if args.seed is None else args.seed


def _rule_list(text: str) -> tuple[int, ...]:
    try:
        rules = tuple(int(r) for r in text.split(",") if r.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid rule list {text!r}") from None
    if not rules:
        raise argparse.ArgumentTypeError("empty rule list")
    return rules


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _write_text(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _figure_stem(out) -> str | None:
    if out is None or str(out) == "-":
        return None
    p = Path(out)
    return str(p.with_suffix("")) if p.suffix else str(p)


# -- argument groups ------------------------------------------------------------

def _add_gen(p, sequences=1000, bits=10_000):
    g = p.add_argument_group("generation")
    g.add_argument("--width", type=_positive, default=100, help="seed lattice width (default 100)")
    g.add_argument("--bits", type=_positive, default=bits, help="bits per sequence")
    g.add_argument("--sequences", type=_positive, default=sequences, help="sequences per corpus")
    g.add_argument("--extraction", choices=EXTRACTIONS, default=keystream.CENTER)
    g.add_argument("--warmup", type=_non_negative, default=0, help="rows discarded before extraction")
    g.add_argument("--boundary", choices=BOUNDARIES, default=CYCLIC)


def _add_battery(p):
    g = p.add_argument_group("battery")
    g.add_argument("--stream-length", type=_positive, default=1_000_000)
    g.add_argument("--streams", type=_positive, default=10)
    g.add_argument("--alpha", type=float, default=0.01)
    g.add_argument("--uniformity-threshold", type=float, default=0.0001)


def _add_output(p, formats=True):
    p.add_argument("-o", "--out", help="output file (default: stdout)")
    if formats:
        p.add_argument("--format", choices=FORMATS, default=None,
                       help="text, csv or json (default: from the output suffix, else text)")
        p.add_argument("--no-figures", action="store_true",
                       help="skip the PNG figures written next to the output file")


def _add_jobs(p):
    p.add_argument("--jobs", type=_positive, default=None,
                   help="worker processes (default: available cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="carand", description="Cellular-automaton random bit generation and testing.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="generate a corpus and its manifest")
    p.add_argument("--rule", type=int, default=30)
    p.add_argument("--seed", type=int, default=None, help=f"master seed (env {SEED_ENV} overrides)")
    _add_gen(p)
    p.add_argument("-o", "--out", required=True, help="corpus file (.txt/.asc for ASCII, else packed)")
    _add_jobs(p)

    p = sub.add_parser("test", help="run the battery over corpus files")
    p.add_argument("corpora", nargs="+", help="corpus files")
    p.add_argument("--rules", type=_rule_list, default=None,
                   help="comma-separated labels for the corpora (default: file names)")
    _add_battery(p)
    _add_output(p)
    _add_jobs(p)

    p = sub.add_parser("report", help="re-render a JSON report")
    p.add_argument("report", help="JSON written by test or reproduce")
    _add_output(p)

    p = sub.add_parser("reproduce", help="generate, test and repeat for several rules")
    p.add_argument("--rules", type=_rule_list, default=REPRESENTATIVE_RULES)
    p.add_argument("--seed", type=int, default=None,
                   help=f"base seed; rule i uses seed+i (default 0, env {SEED_ENV} overrides)")
    p.add_argument("--repeats", type=_positive, default=3)
    p.add_argument("--corpus-dir", help="also write each corpus and manifest here")
    _add_gen(p)
    _add_battery(p)
    _add_output(p)
    _add_jobs(p)

    for name, helptext in (("encrypt", "XOR a file with a CA keystream"),
                           ("decrypt", "inverse of encrypt (the same XOR)")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input", help="input file ('-' for stdin)")
        p.add_argument("--key", required=True, help="key file (JSON)")
        if name == "encrypt":
            p.add_argument("--new-key", action="store_true",
                           help="create the key file from --seed/--rule/--width first")
            p.add_argument("--rule", type=int, default=30)
            p.add_argument("--width", type=_positive, default=64)
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--extraction", choices=EXTRACTIONS, default=keystream.CENTER)
            p.add_argument("--warmup", type=_non_negative, default=64)
        p.add_argument("-o", "--out", help="output file (default: stdout)")

    p = sub.add_parser("evolve", help="print or draw an evolution")
    p.add_argument("--rule", type=int, default=30)
    p.add_argument("--width", type=_positive, default=79)
    p.add_argument("--steps", type=_non_negative, default=40)
    p.add_argument("--seed", type=int, default=None,
                   help="random initial row from this seed (default: single centred cell)")
    p.add_argument("--init", help="initial row as a 0/1 string (conflicts with --seed)")
    p.add_argument("--boundary", choices=BOUNDARIES, default=CYCLIC)
    p.add_argument("--format", choices=("text", "pbm"), default="text")
    p.add_argument("-o", "--out", help="output file; a PNG raster is written next to it")
    p.add_argument("--no-figures", action="store_true")
    return parser


# -- subcommands ------------------------------------------------------------------

def _gen_spec(args, rule: int, seed: int) -> keystream.GenSpec:
    return keystream.GenSpec(rule=rule, seed_width=args.width, extraction=args.extraction,
                             warmup_rows=args.warmup, bits_per_sequence=args.bits,
                             sequences=args.sequences, master_seed=seed, boundary=args.boundary)


def _battery_config(args, rules) -> battery.BatteryConfig:
    return battery.BatteryConfig(rules=tuple(rules), stream_length=args.stream_length,
                                 streams=args.streams, alpha=args.alpha,
                                 uniformity_threshold=args.uniformity_threshold,
                                 params=TestParams(alpha=args.alpha))


def _format(args) -> str:
    if args.format:
        return args.format
    suffix = Path(args.out).suffix.lower() if args.out else ""
    return {".csv": "csv", ".json": "json"}.get(suffix, "text")


def _emit(args, text: str, report: battery.BatteryReport | None, matrix=None):
    _write_text(args.out, text)
    stem = _figure_stem(args.out)
    if stem and not args.no_figures and report is not None:
        from . import plotting
        plotting.report_figures(report, stem)
        if matrix is not None:
            plotting.verdict_heatmap(matrix, f"{stem}.modal.png", "Modal verdicts")


def cmd_generate(args) -> int:
    spec = _gen_spec(args, args.rule, _seed(args))
    bits = keystream.generate_corpus(spec, args.out, args.jobs)
    print(f"wrote {bits.size} bits to {args.out} (manifest {keystream.manifest_path(args.out)})",
          file=sys.stderr)
    return EXIT_OK


def cmd_test(args) -> int:
    labels = args.rules or tuple(Path(c).stem for c in args.corpora)
    if len(labels) != len(args.corpora):
        raise UsageError("--rules must give one label per corpus file")
    config = _battery_config(args, [lab for lab in labels])
    rules, failed = [], []
    for label, path in zip(labels, args.corpora):
        bits = bitio.read_bits(path)
        try:
            rules.append(battery.run_corpus(label, bits, config, args.jobs))
        except battery.BatteryError as exc:
            failed.append(str(exc))
    report = battery.BatteryReport(config=config.describe(), rules=rules)
    _emit(args, render_report(report, _format(args)), report)
    for msg in failed:
        print(f"carand: {msg}", file=sys.stderr)
    return EXIT_INCOMPLETE if failed else EXIT_OK


def cmd_report(args) -> int:
    text = Path(args.report).read_text(encoding="utf-8")
    fmt = _format(args)
    if '"repeats"' in text[:64] or '"modal"' in text:
        bundle = parse_reproduction(text)
        _emit(args, render_reproduction(bundle, fmt), bundle.repeats[0] if bundle.repeats else None,
              bundle.modal)
    else:
        report = parse_report(text)
        _emit(args, render_report(report, fmt), report)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    base = _seed(args)
    seeds = [base + i for i in range(len(args.rules))]
    gen = _gen_spec(args, args.rules[0], 0)
    config = _battery_config(args, args.rules)
    if config.bits_needed > gen.corpus_bits:
        raise battery.BatteryError(f"each corpus has {gen.corpus_bits} bits, the battery needs "
                                   f"{config.bits_needed}")
    if args.corpus_dir:
        Path(args.corpus_dir).mkdir(parents=True, exist_ok=True)
    bundle = battery.reproduce_paper(args.repeats, args.rules, seeds, gen, config, args.jobs,
                                     args.corpus_dir, lambda m: print(m, file=sys.stderr))
    fmt = _format(args)
    _emit(args, render_reproduction(bundle, fmt), bundle.repeats[-1], bundle.modal)
    return EXIT_OK


def _read_input(path) -> bytes:
    return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()


def _write_output(path, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(path).write_bytes(data)


def cmd_encrypt(args) -> int:
    if args.new_key:
        seed = _seed(args, default=int.from_bytes(os.urandom(8), "big"))
        key = random_key(seed, args.rule, args.width, extraction=args.extraction, warmup=args.warmup)
        Path(args.key).write_text(key.to_json(), encoding="utf-8")
    else:
        key = CipherKey.from_json(Path(args.key).read_text(encoding="utf-8"))
    _write_output(args.out, encrypt(_read_input(args.input), key))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = CipherKey.from_json(Path(args.key).read_text(encoding="utf-8"))
    _write_output(args.out, decrypt(_read_input(args.input), key))
    return EXIT_OK


def _pbm(rows) -> str:
    h, w = rows.shape
    body = "\n".join(" ".join(str(int(c)) for c in row) for row in rows)
    return f"P1\n{w} {h}\n{body}\n"


def cmd_evolve(args) -> int:
    if args.init is not None and args.seed is not None:
        raise UsageError("--init and --seed are mutually exclusive")
    rule = rule_from_number(args.rule)
    if args.init is not None:
        initial = Lattice.from_string(args.init, args.boundary)
    elif args.seed is not None or os.environ.get(SEED_ENV):
        initial = Lattice(SplitMix64(_seed(args)).bits(args.width), args.boundary)
    else:
        initial = Lattice.single_seed(args.width, args.boundary)
    rows = evolve_rows(initial.cells, rule, args.steps, args.boundary)
    if args.format == "pbm":
        text = _pbm(rows)
    else:
        text = "\n".join("".join(" #"[c] for c in row).rstrip() for row in rows) + "\n"
    _write_text(args.out, text)
    stem = _figure_stem(args.out)
    if stem and not args.no_figures:
        from . import plotting
        plotting.evolution_raster(rows, f"{stem}.png", f"Rule {args.rule}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate, "test": cmd_test, "report": cmd_report, "reproduce": cmd_reproduce,
    "encrypt": cmd_encrypt, "decrypt": cmd_decrypt, "evolve": cmd_evolve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 0) is None:
            args.jobs = default_jobs()
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except battery.BatteryError as exc:
        print(f"carand: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (OSError, bitio.BitFormatError) as exc:
        print(f"carand: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"carand: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
