"""Main module for the epsbm project."""

import sys

from epsbm.cli.app import main

if __name__ == "__main__":
    sys.exit(main())
