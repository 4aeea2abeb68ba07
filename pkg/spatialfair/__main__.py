"""
    Runs the command line interface with ``python -m spatialfair``.
"""

import sys

from .cli import main

sys.exit(main())
