#!/usr/bin/env python3
"""Illumination sweep: object pixel survival per segmentation method."""

import sys

from colortrack.cli import main

sys.exit(main(["sweep", "--levels", "1.0", "0.8", "0.6", "0.4",
               "--out", "sweep.csv"]))
