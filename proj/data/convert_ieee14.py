#!/usr/bin/env python3
"""Convert an IEEE common-data-format (CDF) case file to data/ieee14.json.

Usage: convert_ieee14.py ieee14cdf.txt > ieee14.json

Only the branch section is taken from the CDF file (columns: tap bus, Z bus,
and branch reactance X). Machine placement and dynamic constants are merged
from the DEFAULT_MACHINES table below; edit it to match your dynamic dataset.
"""

import json
import sys

DEFAULT_MACHINES = [
    {"bus": 1, "inertia": 0.1255, "damping": 0.0920, "xd_transient": 0.2995},
    {"bus": 2, "inertia": 0.0634, "damping": 0.0552, "xd_transient": 0.1850},
    {"bus": 3, "inertia": 0.0396, "damping": 0.0410, "xd_transient": 0.2560},
    {"bus": 6, "inertia": 0.0211, "damping": 0.0341, "xd_transient": 0.1340},
    {"bus": 8, "inertia": 0.0170, "damping": 0.0288, "xd_transient": 0.2304},
]


def parse_cdf(path):
    branches = []
    buses = 0
    section = None
    with open(path) as fh:
        for line in fh:
            upper = line.upper()
            if upper.startswith("BUS DATA"):
                section = "bus"
                continue
            if upper.startswith("BRANCH DATA"):
                section = "branch"
                continue
            if line.startswith("-999") or line.startswith("-99"):
                section = None
                continue
            if section == "bus" and line.strip():
                buses += 1
            elif section == "branch" and line.strip():
                cols = line.split()
                branches.append(
                    {"from": int(cols[0]), "to": int(cols[1]), "x": float(cols[7])}
                )
    return buses, branches


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    buses, branches = parse_cdf(sys.argv[1])
    doc = {
        "description": "IEEE 14-bus case converted from CDF; machine constants "
        "are representative dynamic-study values.",
        "buses": buses,
        "rotor_angle_of_generator": 1,
        "branches": branches,
        "generators": DEFAULT_MACHINES,
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
