#!/usr/bin/env python3
# Copyright 2026 The rxreturn Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Four-panel cost breakdown from `rxreturn sweep` output.

Usage: plot_sweep.py sweep.csv out.png
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PANELS = [("fixed", "Fixed cost"), ("incentive", "Incentive cost"),
          ("penalty", "Penalty cost"), ("total", "Total cost")]


def read_sweep(path):
    series = defaultdict(dict)  # level -> theta -> row
    levels = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            if row["status"] != "optimal" or not row["total"]:
                continue
            if row["level"] not in levels:
                levels.append(row["level"])
            series[row["level"]][float(row["theta"])] = row
    return levels, series


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sweep_csv")
    ap.add_argument("output")
    args = ap.parse_args()

    levels, series = read_sweep(args.sweep_csv)
    thetas = sorted({t for rows in series.values() for t in rows})
    width = 0.8 / max(1, len(levels))
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for ax, (column, title) in zip(axes.flat, PANELS):
        for k, level in enumerate(levels):
            xs = [i + (k - (len(levels) - 1) / 2) * width for i in range(len(thetas))]
            ys = [float(series[level][t][column]) if t in series[level] else 0.0 for t in thetas]
            ax.bar(xs, ys, width, label=level)
        ax.set_xticks(range(len(thetas)))
        ax.set_xticklabels([f"{t:.0%}" for t in thetas])
        ax.set_xlabel("theta")
        ax.set_title(title)
        ax.ticklabel_format(axis="y", style="sci", scilimits=(0, 0))
    axes.flat[0].legend(title="level")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
