#!/usr/bin/env python3
"""Run every identity once at a shared digit target and print the reports.

Exit status is the worst verify status seen, so this doubles as a smoke
gate: 0 all pass, 1 some residual exceeded tolerance, 3 evaluation error.
"""

import argparse
import sys
from fractions import Fraction

from zetaforge.cli import IDENTITIES, VerifyRequest, _report_text, run_verify

# identities with a free parameter get a representative interior point
PARAMS = {
    "general": {"m": 2},
    "milgram": {"m": 2},
    "tyagi-holm": {"s": Fraction(3, 2)},
    "param-sum": {"t": Fraction(1, 2)},
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--mode", choices=("direct", "accelerated"),
                    default="accelerated")
    args = ap.parse_args(argv)

    worst = 0
    for name in IDENTITIES:
        mode = args.mode
        if name == "tyagi-holm":
            mode = "accelerated"  # single evaluation scheme
        req = VerifyRequest(identity=name, digits=args.digits, mode=mode,
                            **PARAMS.get(name, {}))
        code, doc = run_verify(req)
        if doc is None:
            print(f"{name}: failed with exit code {code}", file=sys.stderr)
        else:
            print(_report_text(doc.reports[0]))
            print()
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
