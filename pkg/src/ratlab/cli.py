"""Command-line driver for the experiments.

Every subcommand is deterministic given its flags: the same flags give the
same bytes, whatever the worker count. Seeds, bits and caps are echoed into
every JSON output. Library errors end the run with exit code 2 and a JSON
object ``{"error", "message", "index"}`` on stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from . import experiments as ex
from .cf import cf_expand, sample_irrational
from .errors import RatlabError
from .svg import write_scatter

__all__ = ["ExperimentConfig", "run", "main", "build_parser"]

FIG1_ALPHAS = (Fraction(1), Fraction(7, 10), Fraction(1, 2))
EXIT_ERROR = 2


@dataclass
class ExperimentConfig:
    command: str
    alphas: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    bits: int | None = None
    count: int = 1
    k: int = 1
    cap: int = 50
    preset: str | None = None
    decimal: str | None = None
    path: str | None = None
    out: str | None = None
    svg: str | None = None
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.bits is not None and self.bits < 64:
            raise ValueError(f"bits must be at least 64, got {self.bits}")
        for name in ("count", "k", "cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for a in self.alphas:
            if not 0 < a <= 1:
                raise ValueError(f"alpha must lie in (0, 1], got {a}")


# -- argument types ----------------------------------------------------------------

def _alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < a <= 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return a


def _positive(text: str) -> int:
    try:
        v = int(float(text))  # accept 1e6
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1 or v != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _bits(text: str) -> int:
    v = _positive(text)
    if v < 64:
        raise argparse.ArgumentTypeError("bits must be at least 64")
    return v


# -- output helpers ----------------------------------------------------------------

def _emit(obj, stream) -> None:
    stream.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _suffixed(path: str, alpha: Fraction, many: bool) -> str:
    if not many:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}_a{float(alpha):g}{ext}"


def _write_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["k", "w", "z"])
    for k, w, z in rows:
        writer.writerow([int(k), repr(float(w)), repr(float(z))])


def _input_description(cfg: ExperimentConfig) -> dict:
    if cfg.preset:
        return {"preset": cfg.preset}
    if cfg.decimal:
        return {"decimal": cfg.decimal}
    if cfg.path:
        return {"file": cfg.path}
    return {"seed": cfg.seeds[0], "bits": cfg.bits}


# -- subcommands -------------------------------------------------------------------

def _cmd_pairs(cfg: ExperimentConfig, stdout) -> int:
    if cfg.preset or cfg.decimal or cfg.path:
        x = ex.load_constant(cfg.preset, cfg.decimal, cfg.path)
    else:
        x = sample_irrational(cfg.seeds[0], cfg.bits or 4 * ex.DEFAULT_TERMS)
    many = len(cfg.alphas) > 1
    if cfg.out is None and many:
        raise ValueError("several alphas need --out (one CSV per alpha)")
    rows = ex.pair_rows(x, cfg.alphas, cfg.count)
    summary = {"command": "pairs", "input": _input_description(cfg),
               "bits": x.bits, "certified_quotients": cf_expand(x).length,
               "count": cfg.count, "outputs": []}
    for a in cfg.alphas:
        entry = {"alpha": float(a), "rows": len(rows[a]), "in_lambda": True}
        if cfg.out is None:
            _write_csv(rows[a], stdout)
        else:
            entry["csv"] = _suffixed(cfg.out, a, many)
            with open(entry["csv"], "w", encoding="utf-8", newline="") as fh:
                _write_csv(rows[a], fh)
        if cfg.svg is not None:
            entry["svg"] = _suffixed(cfg.svg, a, many)
            write_scatter(entry["svg"], rows[a][:, 1:], float(a),
                          title=f"alpha = {float(a):g}")
        summary["outputs"].append(entry)
    if cfg.out is not None:
        _emit(summary, stdout)
    return 0


def _cmd_levy_ratio(cfg: ExperimentConfig, stdout) -> int:
    data = ex.levy_and_ratio(cfg.alphas, cfg.k, cfg.seeds)
    for a in cfg.alphas:
        if cfg.command == "levy":
            rep = ex.levy_report(a, cfg.k, cfg.seeds, [v[0] for v in data[a]])
        else:
            rep = ex.ratio_report(a, cfg.k, cfg.seeds, [v[1] for v in data[a]])
        _emit(rep.to_dict(), stdout)
    return 0


def _cmd_dl_hist(cfg: ExperimentConfig, stdout) -> int:
    for a in cfg.alphas:
        rep = ex.dl_hist_report(a, cfg.count, bins=cfg.options["bins"],
                                n_terms=cfg.options["terms"], first_seed=cfg.seeds[0])
        _emit(rep.to_dict(), stdout)
    return 0


def _cmd_pair_hist(cfg: ExperimentConfig, stdout) -> int:
    for a in cfg.alphas:
        for rep in ex.pair_hist_reports(a, cfg.count, grid=cfg.options["grid"],
                                        n_terms=cfg.options["terms"],
                                        first_seed=cfg.seeds[0],
                                        oracle=cfg.options["oracle"]):
            _emit(rep.to_dict(), stdout)
    return 0


def _cmd_geom_check(cfg: ExperimentConfig, stdout) -> int:
    for a in cfg.alphas:
        _emit(ex.geom_check(a, cfg.count, seed=cfg.seeds[0], cap=cfg.cap,
                            search=cfg.options["search"]), stdout)
    return 0


def _cmd_hurwitz(cfg: ExperimentConfig, stdout) -> int:
    reports = [ex.hurwitz_scan(a, cfg.count, bits=cfg.bits or ex.GOLDEN_BITS,
                               tail_cap=cfg.cap) for a in cfg.alphas]
    for rep in reports:
        _emit(rep["returns"], stdout)
    if cfg.out is not None:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            for rep in reports:
                _emit(rep, fh)
    return 0


COMMANDS = {
    "pairs": _cmd_pairs,
    "levy": _cmd_levy_ratio,
    "ratio": _cmd_levy_ratio,
    "dl-hist": _cmd_dl_hist,
    "pair-hist": _cmd_pair_hist,
    "geom-check": _cmd_geom_check,
    "hurwitz": _cmd_hurwitz,
}


def run(cfg: ExperimentConfig, stdout=None) -> int:
    """Run one experiment; returns the exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg, stdout)
    except RatlabError as exc:
        _emit(exc.to_dict(), stdout)
        return EXIT_ERROR


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratlab", description="Certified experiments on continued-fraction approximation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=_positive, default=None,
                        help="worker processes (default: RATLAB_THREADS or all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    def seeds(p, default, help_text="number of seeds; seeds are first-seed .. first-seed+N-1"):
        p.add_argument("--seeds", type=_positive, default=default, help=help_text)
        p.add_argument("--first-seed", type=int, default=1)

    p = sub.add_parser("pairs", help="CSV (and SVG) of consecutive theta_bar pairs")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=ex.PRESETS)
    src.add_argument("--x", dest="decimal", help="decimal digits of x (integer part ignored)")
    src.add_argument("--x-file", dest="path", help="file with the decimal digits of x")
    p.add_argument("--alpha", type=_alpha, nargs="+",
                   help="thresholds (default: 1 0.7 0.5 with --preset fig1, else 1)")
    p.add_argument("--count", type=_positive, default=20000, help="pairs per alpha")
    p.add_argument("--seed", type=int, default=1, help="random x when no input is given")
    p.add_argument("--bits", type=_bits, default=None, help="bits of the random x")
    p.add_argument("--out", help="CSV path; with several alphas _a<alpha> is appended")
    p.add_argument("--svg", help="SVG scatter path; suffixed like --out")

    for name, help_text in (("levy", "log(q_bar_k)/k against the closed form"),
                            ("ratio", "k/n_k against mu(Omega_alpha)")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--alpha", type=_alpha, nargs="+", default=[Fraction(1)])
        p.add_argument("--k", type=_positive, default=10000)
        seeds(p, 20)

    p = sub.add_parser("dl-hist", help="theta_bar histogram against the conditional law")
    p.add_argument("--alpha", type=_alpha, nargs="+", default=[Fraction(1)])
    p.add_argument("--samples", dest="count", type=_positive, default=100000)
    p.add_argument("--bins", type=_positive, default=100)
    p.add_argument("--terms", type=_positive, default=ex.DEFAULT_TERMS,
                   help="orbit length per seed")
    p.add_argument("--first-seed", type=int, default=1)

    p = sub.add_parser("pair-hist", help="2-D pair histogram against both density variants")
    p.add_argument("--alpha", type=_alpha, nargs="+", default=[Fraction(1)])
    p.add_argument("--samples", dest="count", type=_positive, default=100000)
    p.add_argument("--grid", type=_positive, default=50)
    p.add_argument("--terms", type=_positive, default=ex.DEFAULT_TERMS)
    p.add_argument("--first-seed", type=int, default=1)
    p.add_argument("--no-oracle", dest="oracle", action="store_false",
                   help="skip the pushforward oracle")

    p = sub.add_parser("geom-check", help="geometric return time against the dynamics")
    p.add_argument("--alpha", type=_alpha, nargs="+", default=[Fraction(1, 2)])
    p.add_argument("--count", type=_positive, default=10000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--cap", type=_positive, default=50)
    p.add_argument("--search", choices=("convergents", "stern-brocot"), default="convergents")

    p = sub.add_parser("hurwitz", help="return indices of the golden-ratio orbit")
    p.add_argument("--alpha", type=_alpha, nargs="+", default=[Fraction(11, 25)])
    p.add_argument("--n", dest="count", type=_positive, default=1000)
    p.add_argument("--bits", type=_bits, default=ex.GOLDEN_BITS)
    p.add_argument("--tail-cap", dest="cap", type=_positive, default=1000)
    p.add_argument("--report", dest="out",
                   help="also write the full report (bits, tail outcome) to this file")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cmd = args.command
    cfg = ExperimentConfig(command=cmd)
    if cmd == "pairs":
        alphas = args.alpha or (list(FIG1_ALPHAS) if args.preset == "fig1" else [Fraction(1)])
        cfg.alphas, cfg.count, cfg.seeds, cfg.bits = alphas, args.count, [args.seed], args.bits
        cfg.preset, cfg.decimal, cfg.path = args.preset, args.decimal, args.path
        cfg.out, cfg.svg = args.out, args.svg
    elif cmd in ("levy", "ratio"):
        cfg.alphas, cfg.k = args.alpha, args.k
        cfg.seeds = list(range(args.first_seed, args.first_seed + args.seeds))
    elif cmd == "dl-hist":
        cfg.alphas, cfg.count, cfg.seeds = args.alpha, args.count, [args.first_seed]
        cfg.options = {"bins": args.bins, "terms": args.terms}
    elif cmd == "pair-hist":
        cfg.alphas, cfg.count, cfg.seeds = args.alpha, args.count, [args.first_seed]
        cfg.options = {"grid": args.grid, "terms": args.terms, "oracle": args.oracle}
    elif cmd == "geom-check":
        cfg.alphas, cfg.count, cfg.seeds, cfg.cap = args.alpha, args.count, [args.seed], args.cap
        cfg.options = {"search": args.search}
    elif cmd == "hurwitz":
        cfg.alphas, cfg.count, cfg.bits, cfg.cap = args.alpha, args.count, args.bits, args.cap
        cfg.out = args.out
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        os.environ["RATLAB_THREADS"] = str(args.threads)
    cfg = config_from_args(args)
    try:
        return run(cfg)
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
