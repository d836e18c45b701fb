"""Largest identified prime per iteration with the count estimate.

Extra arguments pass through, e.g. ``--iterations 3 --format json``.
"""

import sys

from wavenum.cli import main

if __name__ == "__main__":
    sys.exit(main(["schedule", *sys.argv[1:]]))
