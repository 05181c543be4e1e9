# app.py
"""Entry point: ``python app.py verify-state --D 3``."""
import sys

from bound_key.cli import main

if __name__ == "__main__":
    sys.exit(main())
