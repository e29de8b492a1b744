"""
reulab
Command line entry point: python reulab.py run scenarios/tg.cfg
"""

from lab.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
