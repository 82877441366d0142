#!/usr/bin/env python3
"""Plot the CSV sweeps emitted by `esq figure`.

Usage:
    esq figure dephasing
    esq figure depolarizing
    esq figure pure-loss
    python3 docs/plot_figures.py dephasing.csv depolarizing.csv pure-loss.csv

Writes a PNG next to each input CSV. Not part of the tested surface.
"""

import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot(path: pathlib.Path) -> None:
    params, uppers, lowers = [], [], []
    with path.open() as handle:
        for row in csv.DictReader(handle):
            params.append(float(row["param"]))
            uppers.append(float(row["upper_bound"]))
            lowers.append(float(row["lower_bound"]))
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(params, uppers, label="upper bound")
    ax.plot(params, lowers, label="lower bound", linestyle="--")
    ax.set_xlabel("channel parameter")
    ax.set_ylabel("bits per channel use")
    ax.set_title(path.stem)
    ax.legend()
    ax.grid(True, alpha=0.3)
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    for name in sys.argv[1:]:
        plot(pathlib.Path(name))
