#!/usr/bin/env python3
# main.py
"""
rigidlab command line

- eval:   transform, characteristic data and Beltrami coefficient at a point
- grid:   sampled field export (CSV/JSON)
- verify: identity suites over built-in check points
- shock:  shock locus inside a grid window
- leaf:   Beltrami coefficients over a grid
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from cli.rigidlab_cli import cli

if __name__ == "__main__":
    cli(prog_name="rigidlab")
