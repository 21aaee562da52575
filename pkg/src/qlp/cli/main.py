"""Command-line entry point: ``qlp [options] (-e SOURCE | SCRIPT | WORDS...)``."""

from __future__ import annotations

import argparse
import os
import sys

from ..errors import QLPError, ResourceError
from .session import Session

EPILOG = """\
examples:
  qlp verify-table1 5 --csv
  qlp -e "field GF(2)(x,y); aniso <x, y, x+y>"
  qlp --field "GF(3)(x,y,z)" pisp "<1,x,y,z>" --max-gens 2
  qlp script.qlp --json

exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 resource guard (degree cap, search budget, memory)."""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qlp",
        description="Isotropy invariants and splitting patterns of quasilinear p-forms.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    out = ap.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="one JSON object per result line")
    out.add_argument("--csv", action="store_true", help="CSV with a header row per result")
    ap.add_argument("--max-degree", type=int, metavar="N", help="total degree cap for polynomials")
    ap.add_argument("--max-gens", type=int, metavar="N", help="default generator budget for pisp")
    ap.add_argument("--seed", type=int, default=0, metavar="N", help="seed for the check command")
    ap.add_argument("--field", metavar="DECL", help="field declaration, e.g. 'GF(2)(x,y)'")
    ap.add_argument("-e", "--execute", metavar="SOURCE", help="program text to run")
    ap.add_argument("words", nargs="*", help="a script file, '-' for stdin, or a single statement")
    return ap


def _source(args, ap) -> str:
    if args.execute is not None:
        if args.words:
            ap.error("give either -e SOURCE or positional input, not both")
        return args.execute
    if not args.words:
        ap.error("no input: pass -e SOURCE, a script file, or a statement")
    if args.words == ["-"]:
        return sys.stdin.read()
    if len(args.words) == 1 and os.path.isfile(args.words[0]):
        with open(args.words[0], encoding="utf-8") as fh:
            return fh.read()
    return " ".join(args.words)


_FLAGS = {"--json", "--csv", "-h", "--help"}
_VALUED = {"--max-degree", "--max-gens", "--seed", "--field", "-e", "--execute"}


def _split_options(argv):
    """Separate global options from statement words, keeping the words in order.

    Statement options the front end does not know (``--extra x,y`` after
    ``pisp``) stay with the statement.
    """
    options, words = [], []
    it = iter(argv)
    for a in it:
        name = a.split("=", 1)[0]
        if a in _FLAGS:
            options.append(a)
        elif name in _VALUED:
            options.append(a)
            if "=" not in a:
                options.append(next(it, ""))
        else:
            words.append(a)
    return options, words


def main(argv=None) -> int:
    ap = build_parser()
    options, words = _split_options(sys.argv[1:] if argv is None else list(argv))
    args = ap.parse_args(options)
    args.words = words
    if args.max_degree is not None and args.max_degree < 1:
        ap.error("--max-degree must be positive")
    source = _source(args, ap)
    if args.field:
        source = f"field {args.field}\n{source}"
    mode = "json" if args.json else "csv" if args.csv else "text"
    session = Session(max_degree=args.max_degree, max_gens=args.max_gens, seed=args.seed)
    status = 0
    first = True
    try:
        for res in session.run(source):
            if mode != "json" and not first:
                print()
            print(res.render(mode), flush=True)
            first = False
            if res.failed:
                print(f"verification failed: {res.failed}", file=sys.stderr)
                status = 1
    except QLPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (MemoryError, RecursionError) as exc:
        print(f"error: {ResourceError(type(exc).__name__)}", file=sys.stderr)
        return ResourceError.exit_code
    return status


if __name__ == "__main__":
    sys.exit(main())
