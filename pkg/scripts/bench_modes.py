#!/usr/bin/env python3
"""Compare direct vs accelerated term counts across digit targets.

Prints one JSON document per identity; the interesting column is
terms_used, which grows like 10^d for direct mode and linearly in d
for the accelerated split.
"""

import argparse
import json
import sys

from zetaforge.cli import run_bench


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--identities", default="ln2,zeta3")
    ap.add_argument("--digits", default="10,20,30")
    ap.add_argument("--max-terms", type=int, default=10 ** 6)
    args = ap.parse_args(argv)

    digits = [int(d) for d in args.digits.split(",")]
    for name in args.identities.split(","):
        code, doc = run_bench(name, digits, ["direct", "accelerated"],
                              max_terms=args.max_terms)
        if code != 0:
            print(f"bench failed for {name} (exit {code})", file=sys.stderr)
            return code
        print(json.dumps(doc, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
