"""Command-line interface: ``wordmaps classify|certify|witness|engel|selftest``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, matfile, selftest
from .certify import (
    Certificate,
    CertificateError,
    Classification,
    SearchExhausted,
    Status,
    certify,
    classify,
    engel_certificate,
)
from .freegroup import WordParseError, exponent_sums, parse
from .metabelian import derived_class, fox_derivatives
from .witness import NotCertified, find_witness, haar_random_su

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INAPPLICABLE = 3
EXIT_RESOURCE = 4
EXIT_UNCERTIFIED = 5

INAPPLICABLE_NOTE = ("method inapplicable: the word lies in the second derived subgroup, "
                     "where its polynomial vanishes in every basis (open question)")


@dataclass(frozen=True)
class Config:
    max_q: int = 16
    max_depth: int = 3
    hard_cap_q: int = 512
    tolerance: float = 1e-8
    seed: int = 0
    output_path: Path | None = None

    def __post_init__(self):
        if min(self.max_q, self.max_depth, self.hard_cap_q) < 1:
            raise ValueError("search bounds must be positive")
        if not 0 < self.tolerance < 1e-2:
            raise ValueError("tolerance must lie in (0, 1e-2)")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        return cls(
            max_q=getattr(args, "max_q", 16),
            max_depth=getattr(args, "max_depth", 3),
            hard_cap_q=getattr(args, "hard_cap_q", 512),
            tolerance=getattr(args, "tol", 1e-8),
            seed=getattr(args, "seed", 0),
            output_path=getattr(args, "out", None),
        )

    @property
    def bounds(self) -> dict:
        return {"max_q": self.max_q, "max_depth": self.max_depth, "hard_cap_q": self.hard_cap_q}


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_classify(args: argparse.Namespace) -> int:
    w = parse(args.word)
    cls_ = classify(w)
    da, db = fox_derivatives(w)
    print(f"word:            {w}")
    print(f"classification:  {cls_.value}")
    print(f"exponent sums:   {exponent_sums(w)}")
    print(f"Fox derivatives: D_a = {da}")
    print(f"                 D_b = {db}")
    if cls_ != Classification.NOT_IN_F1:
        print(f"derived class:   {derived_class(w)}")
    if cls_ == Classification.IN_F2:
        print(f"note: {INAPPLICABLE_NOTE}")
    return EXIT_OK


def _summary(cert: Certificate) -> str:
    lines = [
        f"word:           {cert.word}",
        f"classification: {cert.classification.value}",
        f"status:         {cert.status.value}",
    ]
    if cert.polynomial:
        lines += [
            f"moves:          {', '.join(map(str, cert.moves)) or '(none)'}",
            f"polynomial:     {cert.polynomial}",
            f"bad set:        {sorted(cert.bad_set)}",
            f"lpf bound:      {cert.analysis.lpf_bound}",
        ]
    lines.append(f"certified n:    {cert.describe_n()}")
    if cert.status == Status.INAPPLICABLE:
        lines.append(f"note:           {INAPPLICABLE_NOTE}")
    return "\n".join(lines)


def _emit(cert: Certificate, cfg: Config) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(cert.to_json())
        print(_summary(cert))
        print(f"certificate written to {cfg.output_path}")
    else:
        sys.stdout.write(cert.to_json())
        print(_summary(cert), file=sys.stderr)


def cmd_certify(args: argparse.Namespace) -> int:
    cfg = Config.from_args(args)
    if (args.word is None) == (args.engel is None):
        _err("give exactly one of WORD or --engel K")
        return EXIT_INPUT
    if args.engel is not None:
        cert = engel_certificate(args.engel)
    else:
        try:
            cert = certify(parse(args.word), **cfg.bounds)
        except SearchExhausted as exc:
            _err(str(exc))
            return EXIT_RESOURCE
    _emit(cert, cfg)
    return EXIT_INAPPLICABLE if cert.status == Status.INAPPLICABLE else EXIT_OK


def cmd_engel(args: argparse.Namespace) -> int:
    args.engel, args.word = args.k, None
    return cmd_certify(args)


def _load_source(source: str, cfg: Config) -> Certificate:
    path = Path(source)
    if path.is_file():
        return Certificate.from_json(path.read_text())
    return certify(parse(source), **cfg.bounds)


def cmd_witness(args: argparse.Namespace) -> int:
    cfg = Config.from_args(args)
    if args.random == (args.target is not None):
        _err("give exactly one of --target PATH or --random")
        return EXIT_INPUT
    try:
        cert = _load_source(args.source, cfg)
    except SearchExhausted as exc:
        _err(str(exc))
        return EXIT_RESOURCE
    n = args.n
    if cert.status == Status.INAPPLICABLE:
        _err(INAPPLICABLE_NOTE)
        return EXIT_INAPPLICABLE
    if args.random:
        g = haar_random_su(n, cfg.seed)
    else:
        g = matfile.read_matrix(args.target)
        if g.shape[0] != n:
            _err(f"target is {g.shape[0]}x{g.shape[0]} but --n is {n}")
            return EXIT_INPUT
    try:
        result = find_witness(cert, n, g)
    except NotCertified as exc:
        _err(f"n={n} is not certified for {cert.word}: Phi_m divides the polynomial "
             f"for divisor(s) m = {exc.divisors} of n (surjectivity is not claimed either way)")
        return EXIT_UNCERTIFIED
    if cfg.output_path:
        out = Path(cfg.output_path)
        out.mkdir(parents=True, exist_ok=True)
        matfile.write_matrix(out / "u.mat", result.u)
        matfile.write_matrix(out / "v.mat", result.v)
        matfile.write_matrix(out / "g.mat", g)
    print(f"word:     {cert.word}")
    print(f"n:        {n}")
    print(f"residual: {result.residual:.3e}")
    if cfg.output_path:
        print(f"matrices: {cfg.output_path}/u.mat, v.mat, g.mat")
    if result.residual <= cfg.tolerance:
        return EXIT_OK
    _err(f"residual {result.residual:.3e} exceeds tolerance {cfg.tolerance:g}")
    return EXIT_FAIL


def cmd_selftest(args: argparse.Namespace) -> int:
    cfg = Config.from_args(args)

    def report(res: selftest.CheckResult) -> None:
        mark = "PASS" if res.passed else "FAIL"
        detail = f" ({res.detail})" if res.detail else ""
        print(f"[{mark}] {res.name}: {res.cases} cases{detail}")

    results = selftest.run(seed=cfg.seed, tol=cfg.tolerance, quick=args.quick, report=report)
    failed = [r for r in results if not r.passed]
    if failed:
        _err(f"first failure: {failed[0].name}: {failed[0].detail}")
        return EXIT_FAIL
    print("all checks passed")
    return EXIT_OK


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-q", type=int, default=16, help="largest |q| in a -> a b^q moves")
    p.add_argument("--max-depth", type=int, default=3, help="longest move sequence searched")
    p.add_argument("--hard-cap-q", type=int, default=512, help="cap for the fallback walk")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordmaps", description="Certify surjectivity of word maps on SU(n).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="locate a word in the derived series")
    p.add_argument("word")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("certify", help="search a basis and emit a certificate")
    p.add_argument("word", nargs="?")
    p.add_argument("--engel", type=int, metavar="K", help="certify the K-th Engel word")
    p.add_argument("--out", type=Path, help="write the certificate JSON here")
    _add_search_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("engel", help="certificate for the K-th Engel word")
    p.add_argument("k", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_engel)

    p = sub.add_parser("witness", help="construct (u, v) with w(u, v) = g")
    p.add_argument("source", help="word text or path to a certificate JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=Path, help="matrix file with the target g")
    p.add_argument("--random", action="store_true", help="Haar-random target from --seed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", type=Path, help="directory for u.mat, v.mat, g.mat")
    _add_search_flags(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("selftest", help="run the built-in identity and witness checks")
    p.add_argument("--quick", action="store_true", help="symbolic checks only")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WordParseError, CertificateError, matfile.MatrixFormatError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
