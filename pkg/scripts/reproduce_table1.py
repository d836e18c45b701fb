"""Print the modular co-number table for 2, 3, 5 and check it against the fixture."""

import sys

from wavenum.cli import main

if __name__ == "__main__":
    sys.exit(main(["table1", "--check", *sys.argv[1:]]))
