"""Render the CSV outputs of the other scripts. Needs matplotlib (not a package dependency)."""

import argparse
import csv
import os

import numpy as np


def load(path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0] if k != "status"}


def main():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--outdir", default="results")
    args = p.parse_args()

    path = os.path.join(args.outdir, "phase_map_config_iii.csv")
    if os.path.exists(path):
        d = load(path)
        n = int(round(np.sqrt(len(d["phi_a"]))))
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        for ax, key in zip(axes, ("concurrence", "cross_correlation")):
            im = ax.imshow(d[key].reshape(n, n).T, origin="lower", extent=[0, 2, 0, 2], aspect="equal")
            ax.set_xlabel("phi_1 / pi")
            ax.set_ylabel("phi_3 / pi")
            ax.set_title(key)
            fig.colorbar(im, ax=ax)
        fig.savefig(os.path.join(args.outdir, "phase_map.png"), dpi=150, bbox_inches="tight")

    path = os.path.join(args.outdir, "ratio_scan.csv")
    if os.path.exists(path):
        d = load(path)
        fig = plt.figure()
        ax = fig.add_subplot(projection="polar")
        ax.plot(np.r_[d["theta"], d["theta"][0]], np.r_[d["concurrence"], d["concurrence"][0]])
        fig.savefig(os.path.join(args.outdir, "ratio_scan.png"), dpi=150, bbox_inches="tight")

    path = os.path.join(args.outdir, "loss_scan.csv")
    if os.path.exists(path):
        d = load(path)
        fig, ax = plt.subplots()
        for key, style in (("C_config_i", "-"), ("envelope_config_ii", "--"), ("C_config_iii", ":")):
            ax.plot(d["z"], d[key], style, label=key)
        ax.set_xlabel("z")
        ax.set_ylabel("C")
        ax.legend()
        fig.savefig(os.path.join(args.outdir, "loss_scan.png"), dpi=150, bbox_inches="tight")


if __name__ == "__main__":
    main()
