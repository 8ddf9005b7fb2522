"""Allow ``python -m cier``."""

import sys

from .cli import main

sys.exit(main())
