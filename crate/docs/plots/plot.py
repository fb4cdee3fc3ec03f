"""Render CSV files written by `multiplets` with matplotlib.

    python docs/plots/plot.py out/char_D3_m0_r1.2.csv [more.csv ...] [--show]

Each input produces a PNG next to it. The layout is chosen from the columns:
x,p,C / x,p,W give a colour map, r,r_p,overlap a heat map (with the matching
maxcurve file overlaid when present), ray_angle,first_zero_radius a polar plot
of the first zeros.
"""

import argparse
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    with open(path) as f:
        manifest = json.loads(f.readline().lstrip("#").strip())
        header = f.readline().strip().split(",")
        rows = [line.strip().split(",") for line in f if line.strip()]
    cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}
    return manifest, header, cols


def numeric(values):
    return np.array([float(v) if v not in ("", "true", "false") else np.nan for v in values])


def as_grid(a, b, v):
    xs, ys = np.unique(a), np.unique(b)
    grid = np.full((ys.size, xs.size), np.nan)
    grid[np.searchsorted(ys, b), np.searchsorted(xs, a)] = v
    return xs, ys, grid


def phase_space(ax, manifest, header, cols):
    name = header[2]
    xs, ps, grid = as_grid(numeric(cols["x"]), numeric(cols["p"]), numeric(cols[name]))
    lim = np.nanmax(np.abs(grid))
    im = ax.pcolormesh(xs, ps, grid, cmap="RdBu_r", vmin=-lim, vmax=lim, shading="nearest")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    prm = manifest["parameters"]
    ax.set_title(f"{name}: p={prm.get('order', 2)}, D={prm['size']}, m={prm['member']}, r={prm['strength']}")
    plt.colorbar(im, ax=ax)


def overlap(ax, path, cols):
    rps, rs, grid = as_grid(numeric(cols["r_p"]), numeric(cols["r"]), numeric(cols["overlap"]))
    im = ax.pcolormesh(rps, rs, grid, cmap="viridis", vmin=0, vmax=1, shading="nearest")
    curve = path.with_name(path.name.replace("overlap_", "maxcurve_", 1))
    if curve.exists():
        _, _, c = load(curve)
        ax.plot(numeric(c["r_p"]), numeric(c["r_star"]), "w-", lw=1.5, label="max overlap")
        ax.legend(loc="lower right")
    ax.set_xlabel("r_p")
    ax.set_ylabel("r")
    plt.colorbar(im, ax=ax, label="|<psi|phi>|")


def zeros(fig, manifest, cols):
    ax = fig.add_subplot(projection="polar")
    angle, radius = numeric(cols["ray_angle"]), numeric(cols["first_zero_radius"])
    ax.plot(angle, radius, "o", ms=3)
    ax.set_title(f"first zeros, ring: {manifest['summary']['ring']}")


def render(path, show):
    manifest, header, cols = load(path)
    fig = plt.figure(figsize=(6, 5))
    if header[:2] == ["x", "p"]:
        phase_space(fig.add_subplot(), manifest, header, cols)
    elif header == ["r", "r_p", "overlap"]:
        overlap(fig.add_subplot(), path, cols)
    elif header[0] == "ray_angle":
        zeros(fig, manifest, cols)
    else:
        print(f"skipping {path}: no layout for columns {header}")
        plt.close(fig)
        return
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    if show:
        plt.show()
    plt.close(fig)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("files", nargs="+", type=Path)
    ap.add_argument("--show", action="store_true")
    args = ap.parse_args()
    if args.show:
        matplotlib.use("TkAgg", force=True)
    for f in args.files:
        render(f, args.show)


if __name__ == "__main__":
    main()
