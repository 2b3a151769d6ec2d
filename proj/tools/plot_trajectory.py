#!/usr/bin/env python3
"""Plot lattice-averaged observables from one or more trajectory.csv files."""

import argparse
import csv


def read_trajectory(path):
    with open(path) as fh:
        schema = fh.readline()
        if not schema.startswith("# vmcs-trajectory"):
            raise SystemExit(f"{path}: not a trajectory file")
        reader = csv.DictReader(fh)
        rows = list(reader)
    t = [float(r["t"]) for r in rows]
    obs = {k: [float(r[k]) for r in rows] for k in ("sx_avg", "sy_avg", "sz_avg")}
    return t, obs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("files", nargs="+", help="trajectory.csv paths")
    ap.add_argument("-o", "--output", default="trajectory.png")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 8))
    labels = {"sx_avg": r"$\langle\sigma^x\rangle$", "sy_avg": r"$\langle\sigma^y\rangle$",
              "sz_avg": r"$\langle\sigma^z\rangle$"}
    for path in args.files:
        t, obs = read_trajectory(path)
        for ax, key in zip(axes, ("sx_avg", "sy_avg", "sz_avg")):
            ax.plot(t, obs[key], label=path)
    for ax, key in zip(axes, ("sx_avg", "sy_avg", "sz_avg")):
        ax.set_ylabel(labels[key])
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel(r"$t\,\gamma$")
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
