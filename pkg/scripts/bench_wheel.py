"""Wheel enumeration against a plain sieve for a few wheel sizes."""

import argparse
import sys

from wavenum.cli import main

WHEELS = ("2,3", "2,3,5", "2,3,5,7", "2,3,5,7,11,13")

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=10**6)
    ap.add_argument("--format", choices=("text", "json", "csv"), default="text")
    args = ap.parse_args()
    codes = [
        main(["bench", "--limit", str(args.limit), "--wheel-primes", w, "--format", args.format])
        for w in WHEELS
    ]
    sys.exit(max(codes))
