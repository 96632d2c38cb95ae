#!/usr/bin/env python3
"""Seeded sweep of attacks over fresh keys; one CSV row per (key, attack)."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from permcode.analysis import random_index
from permcode.attacks import AttackInapplicable, GroupTooLargeError, run_attack
from permcode.config import load_settings
from permcode.cryptosystem import encrypt, keygen

COLUMNS = ["family", "m", "n", "r", "seed", "attack", "success", "iterations", "elapsed_ms"]


def main():
    ap = argparse.ArgumentParser(description="Benchmark attacks against freshly generated keys")
    ap.add_argument("--family", choices=["wreath", "two-subsets"], default="wreath")
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20], help="Column counts (wreath)")
    ap.add_argument("--attacks", default="isd,block", help="Comma-separated attack kinds")
    ap.add_argument("--keys", type=int, default=5, help="Keys per parameter set")
    ap.add_argument("--budget", type=int, default=1000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--config")
    ap.add_argument("--out", required=True, help="Output CSV")
    args = ap.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    settings = load_settings(args.config)
    kinds = [k.strip() for k in args.attacks.split(",") if k.strip()]
    ns = args.n if args.family == "wreath" else [None]
    seeds = np.random.SeedSequence(args.seed).spawn(len(ns) * args.keys)

    rows = []
    for i, n in enumerate(ns):
        params = {"m": args.m} if n is None else {"m": args.m, "n": n}
        for j in range(args.keys):
            ss = seeds[i * args.keys + j]
            rng = np.random.default_rng(ss)
            _, pk = keygen(args.family, params, rng, settings=settings)
            c = encrypt(pk, random_index(pk.message_space_size, rng), rng, settings)
            attack_seed = int(ss.generate_state(1)[0])
            for kind in kinds:
                try:
                    rep = run_attack(kind, pk, c, attack_seed, args.budget, args.threads, settings)
                    ok, its, ms = rep.success, rep.iterations, rep.elapsed_ms
                except (AttackInapplicable, GroupTooLargeError) as exc:
                    logging.getLogger(__name__).info("%s skipped for %s: %s", kind, params, exc)
                    ok, its, ms = False, 0, 0.0
                rows.append([args.family, args.m, n, pk.r, attack_seed, kind, ok, its, ms])

    df = pd.DataFrame(rows, columns=COLUMNS)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(out, index=False)
    summary = df.groupby(["n", "attack"], dropna=False)["success"].mean()
    print(summary.to_string())
    print(f"Wrote {out}")


if __name__ == "__main__":
    main()
