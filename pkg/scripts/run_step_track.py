#!/usr/bin/env python3
"""Corner-start tracking experiment: settle a 20x15 degree offset to center."""

import sys

from colortrack.cli import main

sys.exit(main([
    "track",
    "--set", "kind=step_track",
    "--set", "duration=5.0",
    "--set", "motion_az=20",
    "--set", "motion_el=15",
    "--csv", "step_track.csv",
    "--report", "step_track_report.txt",
]))
