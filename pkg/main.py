#!/usr/bin/env python3
"""
Entry point for ariel-rwd.
"""

import sys
from ariel_rwd.main import main

if __name__ == "__main__":
    sys.exit(main())
