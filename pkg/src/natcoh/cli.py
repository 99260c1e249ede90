"""Command-line surface.

Subcommands:

    search    construct and certify a monad for gamma, write monad+certificate JSON
    verify    recompute every check on a monad document, print its table
    table     print the cohomology table of a monad document
    dual      Serre-dualize a monad document
    shape     derive the monad shape for a general (x-alpha)(y-beta)-gamma
    example   run a built-in fixture through verification, check by check

Exit codes: 0 success/pass, 2 verification or certification failure,
3 search retries exhausted, 4 input error.  Every command is deterministic
given its flags; NATCOH_SEED provides the seed when --seed is absent.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from math import lcm

from .certify import (
    DEFAULT_WINDOW,
    Window,
    coh_table,
    pushforward_split_type,
    theorem_certify,
)
from .errors import (
    DocumentError,
    MixedMonadCohomology,
    NatcohError,
    NoValidShapeWithinShiftBound,
    RetriesExhausted,
)
from .fixtures import example_document
from .monads import (
    HilbertParams,
    certify_injective,
    certify_surjective,
    composition_is_zero,
    minimal_rank_multiplier,
    serre_dual,
)
from .search import SearchConfig, check_conditions, monad_shape, search_kernel_bundle, search_monad
from .serialize import (
    document_text,
    monad_to_document,
    parse_document_text,
    table_to_csv,
    table_to_json,
    table_to_text,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 2
EXIT_RETRIES = 3
EXIT_INPUT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 4
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _window(text: str) -> Window:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be a0:a1:b0:b1")
    try:
        a0, a1, b0, b1 = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("window bounds must be integers")
    if a0 > a1 or b0 > b1:
        raise argparse.ArgumentTypeError("window bounds out of order")
    return (a0, a1, b0, b1)


def _default_seed() -> int:
    env = os.environ.get("NATCOH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="natcoh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="construct and certify a monad")
    p_search.add_argument("--gamma", type=_fraction, required=True, metavar="P/Q")
    p_search.add_argument("--rank-multiple", type=int, default=None, metavar="N")
    p_search.add_argument("--seed", type=int, default=None)
    p_search.add_argument("--height", type=int, default=100)
    p_search.add_argument("--retries", type=int, default=10)
    p_search.add_argument("--prime", type=int, default=2**31 - 1)
    p_search.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    p_search.add_argument("--out", default=None, metavar="PATH")

    p_verify = sub.add_parser("verify", help="recompute all checks on a document")
    p_verify.add_argument("path")
    p_verify.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    p_verify.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p_table = sub.add_parser("table", help="print the cohomology table")
    p_table.add_argument("path")
    p_table.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    p_table.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p_dual = sub.add_parser("dual", help="Serre-dualize a monad document")
    p_dual.add_argument("path")
    p_dual.add_argument("--out", default=None, metavar="PATH")

    p_shape = sub.add_parser("shape", help="derive the monad shape for P")
    p_shape.add_argument("--alpha", type=_fraction, default=Fraction(0))
    p_shape.add_argument("--beta", type=_fraction, default=Fraction(0))
    p_shape.add_argument("--gamma", type=_fraction, required=True)
    p_shape.add_argument("--rank-multiple", type=int, default=None)
    p_shape.add_argument("--shift-bound", type=int, default=3)

    p_example = sub.add_parser("example", help="run a built-in fixture")
    p_example.add_argument("name", nargs="?", default="paper-g2r2")
    p_example.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    p_example.add_argument("--out", default=None, metavar="PATH")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render_table(table, fmt: str) -> str:
    if fmt == "csv":
        return table_to_csv(table)
    if fmt == "json":
        return table_to_json(table)
    return table_to_text(table)


def cmd_search(args) -> int:
    gamma = args.gamma
    if gamma <= 0:
        print("error: gamma must be positive", file=sys.stderr)
        return EXIT_INPUT
    r = args.rank_multiple if args.rank_multiple is not None else minimal_rank_multiplier(gamma)
    try:
        params = HilbertParams(r, gamma)
        if gamma <= 1 and params.r < 2:
            raise ValueError("kernel construction requires r >= 2")
        if (r * gamma).denominator != 1 or (gamma <= 1 and (r * (1 - gamma)).denominator != 1):
            raise ValueError(f"exponents are not integral for r = {r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = SearchConfig(
        seed=seed, max_retries=args.retries, height=args.height, prime=args.prime
    )
    try:
        if gamma > 1:
            monad, report = search_monad(params, cfg)
        else:
            monad, report = search_kernel_bundle(params, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RetriesExhausted as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            for rec in exc.report.failures():
                print(f"  last attempt failed: {rec.name} {rec.observed}", file=sys.stderr)
        return EXIT_RETRIES
    certificate = theorem_certify(monad, params, args.window)
    doc = monad_to_document(
        monad,
        params=params,
        seed=seed,
        certificate={
            "search": report.to_json_dict(),
            "theorem": certificate.to_json_dict(),
        },
    )
    _emit(document_text(doc), args.out)
    if args.out is not None:
        print(f"wrote {args.out}: theorem certificate {certificate.verdict}")
    if not certificate.passed:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return parse_document_text(text)


def _verify_document(parsed, window: Window, fmt: str) -> int:
    """Shared by verify and example: recompute everything, report, table."""
    monad = parsed.monad
    failures = []

    def check(name: str, ok: bool, detail: str = ""):
        status = "pass" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"check {name}: {status}{suffix}")
        if not ok:
            failures.append(name)

    if parsed.params is not None:
        # check_conditions covers the composition, both bundle-map
        # certificates and every rank condition in one pass.
        cfg = SearchConfig(seed=parsed.seed or 0)
        report = check_conditions(monad.f, monad.g, parsed.params, cfg)
        for rec in report.records:
            check(rec.name, rec.passed, "" if rec.passed else str(rec.observed))
    else:
        check("composition g o f = 0", composition_is_zero(monad))
        g_cert = certify_surjective(monad.g)
        check("g surjective bundle map", g_cert.certified, g_cert.verdict)
        if len(monad.A) > 0:
            f_cert = certify_injective(monad.f)
            check("f injective bundle map", f_cert.certified, f_cert.verdict)
    try:
        if parsed.params is not None:
            certificate = theorem_certify(monad, parsed.params, window)
            check("theorem certificate", certificate.passed)
        table = coh_table(monad, window)
    except MixedMonadCohomology as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    bad = table.violations()
    check("window naturality", not bad, "" if not bad else f"violations at {bad[:5]}")
    sys.stdout.write(_render_table(table, fmt))
    if failures:
        print(f"verification FAILED: {failures[0]}")
        return EXIT_VERIFY_FAILED
    print("verification passed")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        parsed = _load(args.path)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return _verify_document(parsed, args.window, args.format)


def cmd_table(args) -> int:
    try:
        parsed = _load(args.path)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        table = coh_table(parsed.monad, args.window)
    except MixedMonadCohomology as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    sys.stdout.write(_render_table(table, args.format))
    return EXIT_OK


def cmd_dual(args) -> int:
    try:
        parsed = _load(args.path)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    dual = serre_dual(parsed.monad)
    doc = monad_to_document(
        dual,
        params=parsed.params,
        seed=parsed.seed,
        certificate=parsed.certificate,
    )
    _emit(document_text(doc), args.out)
    if args.out is not None:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_shape(args) -> int:
    gamma = args.gamma
    if gamma <= 0:
        print("error: gamma must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.rank_multiple is not None:
        r = args.rank_multiple
    else:
        # universal multiplier: clears every corner denominator at any shift
        r = lcm(args.alpha.denominator * args.beta.denominator, gamma.denominator)
    try:
        params = HilbertParams(r, gamma, args.alpha, args.beta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        shape = monad_shape(params, shift_bound=args.shift_bound)
    except NoValidShapeWithinShiftBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(shape.describe())
    return EXIT_OK


def cmd_example(args) -> int:
    try:
        doc = example_document(args.name)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    text = document_text(doc)
    if args.out is not None:
        _emit(text, args.out)
        print(f"wrote {args.out}")
    parsed = parse_document_text(text)
    print(f"example {args.name}: monad {parsed.monad.A} -> {parsed.monad.B} -> {parsed.monad.C}")
    return _verify_document(parsed, args.window, "text")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "search": cmd_search,
        "verify": cmd_verify,
        "table": cmd_table,
        "dual": cmd_dual,
        "shape": cmd_shape,
        "example": cmd_example,
    }
    try:
        return handlers[args.command](args)
    except NatcohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
