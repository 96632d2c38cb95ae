#!/usr/bin/env python3
from __future__ import annotations

import argparse
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd


def plot_security_wreath(ax, df: pd.DataFrame, level: float) -> None:
    sel = df[df["prob_level"].round(6) == round(level, 6)]
    if sel.empty:
        raise ValueError(f"no rows at prob_level {level} in security table")
    for m, grp in sel.groupby("m"):
        grp = grp.sort_values("n")
        ax.plot(grp["n"], grp["bits"], marker="o", ms=3, label=f"m = {m}")
    ax.set_title(f"ISD security, decoding probability {level:g}")
    ax.set_xlabel("n (columns)")
    ax.set_ylabel("log2 work factor (bits)")
    ax.grid(True, alpha=0.3)
    ax.legend(frameon=False)


def plot_threshold(ax, df: pd.DataFrame, level: float) -> None:
    sel = df[df["prob_level"].round(6) == round(level, 6)]
    for m, grp in sel.groupby("m"):
        grp = grp.sort_values("n")
        ax.plot(grp["n"], grp["error_rate"], marker="o", ms=3, label=f"m = {m}")
    ax.set_title(f"Correctable error rate at probability {level:g}")
    ax.set_xlabel("n (columns)")
    ax.set_ylabel("max errors / (m n)")
    ax.grid(True, alpha=0.3)
    ax.legend(frameon=False)


def main():
    ap = argparse.ArgumentParser(description="Plot security and threshold curves from CSV")
    ap.add_argument("--security", required=True, help="security_wreath.csv")
    ap.add_argument("--threshold", help="threshold_curve.csv (optional second panel)")
    ap.add_argument("--level", type=float, default=0.95, help="Decoding probability to plot")
    ap.add_argument("--out", required=True, help="Output PNG/SVG path")
    args = ap.parse_args()

    sec = pd.read_csv(args.security)
    panels = 2 if args.threshold else 1
    fig, axs = plt.subplots(1, panels, figsize=(6 * panels, 4), squeeze=False)
    plot_security_wreath(axs[0][0], sec, args.level)
    if args.threshold:
        plot_threshold(axs[0][1], pd.read_csv(args.threshold), args.level)

    fig.tight_layout()
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(args.out, dpi=200)
    print(f"Wrote {args.out}")


if __name__ == "__main__":
    main()
