from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import analysis, attacks, keyfile, reduction
from .codes import DecodeFailure
from .config import Settings, load_settings
from .cryptosystem import KeyGenerationError, decrypt, encrypt, keygen
from .stab_chain import EnumerationLimitError, IncompleteChainError

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DECODE_FAILURE = 2
EXIT_ATTACK_FAILED = 3
EXIT_VERIFY_FAILED = 4


def _write_settings(out: Path, settings: Settings, extra: dict) -> None:
    """Record the run parameters next to an output file."""
    path = out.with_name(out.stem + ".settings.json")
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump({**extra, "settings": settings.to_dict()}, fh, indent=2)
        fh.write("\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML settings file (see configs/default.yaml)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    p = argparse.ArgumentParser(
        prog="permcode",
        description="Permutation-code cryptosystem: keys, encryption, attacks and analysis.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    kg = sub.add_parser("keygen", parents=[common], help="Generate a keypair")
    kg.add_argument("--family", choices=["wreath", "two-subsets"], required=True)
    kg.add_argument("--m", type=int, required=True)
    kg.add_argument("--n", type=int, help="Number of columns (wreath family)")
    kg.add_argument("--errors", type=int, help="Errors per ciphertext (default: capacity)")
    kg.add_argument("--seed", type=int, required=True)
    kg.add_argument("--out-private", required=True)
    kg.add_argument("--out-public", required=True)

    enc = sub.add_parser("encrypt", parents=[common], help="Encrypt a message index")
    enc.add_argument("--public", required=True)
    enc.add_argument("--message", required=True, help="Message index (decimal, any size)")
    enc.add_argument("--seed", type=int, required=True)
    enc.add_argument("--out", required=True)

    dec = sub.add_parser("decrypt", parents=[common], help="Decrypt a ciphertext")
    dec.add_argument("--private", required=True)
    dec.add_argument("--public", required=True)
    dec.add_argument("--in", dest="inp", required=True)

    att = sub.add_parser("attack", parents=[common], help="Attack a ciphertext with public data")
    att.add_argument("--kind", choices=list(attacks.ATTACK_KINDS), required=True)
    att.add_argument("--public", required=True)
    att.add_argument("--in", dest="inp", help="Ciphertext (optional for the conjugator search)")
    att.add_argument("--seed", type=int, required=True)
    att.add_argument("--budget", type=int, help="Iteration budget")
    att.add_argument("--threads", type=int, default=1)
    att.add_argument("--report", required=True, help="Output JSON report")

    an = sub.add_parser("analyze", parents=[common], help="Emit analysis curves as CSV")
    an.add_argument("kind", choices=sorted(analysis.CURVES))
    an.add_argument("--m", default="5", help="m values: 'a', 'a:b' or 'a:b:step' (inclusive)")
    an.add_argument("--n-range", "--n", dest="n_range", default="10:100:10", help="n values")
    an.add_argument("--levels", default="0.95,0.90,0.80,0.50", help="Comma-separated levels")
    an.add_argument("--trials", type=int, default=200, help="Trials per point (simulated-curve)")
    an.add_argument("--seed", type=int, help="Required for simulated-curve")
    an.add_argument("--out", help="Output CSV (default: the curve's standard file name)")

    red = sub.add_parser("reduce", parents=[common], help="Max-2-SAT to subgroup distance")
    red.add_argument("--in", dest="inp", required=True, help="DIMACS CNF, two literals per clause")
    red.add_argument("--k", type=int, required=True)
    red.add_argument("--out", required=True)
    red.add_argument("--verify", action="store_true", help="Brute-force check of the 4k threshold")

    ver = sub.add_parser("verify", parents=[common], help="Run the desk-scale self checks")
    ver.add_argument("--seed", type=int, default=0)
    return p


def _keygen(args, settings: Settings) -> int:
    params = {"m": args.m}
    if args.family == "wreath":
        if args.n is None:
            raise ValueError("--n is required for the wreath family")
        params["n"] = args.n
    rng = np.random.default_rng(args.seed)
    sk, pk = keygen(args.family, params, rng, errors=args.errors, settings=settings)
    keyfile.write_private_key(args.out_private, sk)
    keyfile.write_public_key(args.out_public, pk)
    print(f"{pk.family} {pk.params}: degree {pk.degree}, r={pk.r}, |H|={pk.message_space_size}")
    print(f"Wrote: {args.out_private}\nWrote: {args.out_public}")
    return 0


def _encrypt(args, settings: Settings) -> int:
    pk = keyfile.read_public_key(args.public)
    c = encrypt(pk, int(args.message), np.random.default_rng(args.seed), settings)
    keyfile.write_ciphertext(args.out, c)
    print(f"Wrote: {args.out}")
    return 0


def _decrypt(args, settings: Settings) -> int:
    sk = keyfile.read_private_key(args.private)
    pk = keyfile.read_public_key(args.public)
    c = keyfile.read_ciphertext(args.inp)
    try:
        print(decrypt(sk, pk, c))
    except DecodeFailure as exc:
        logger.info("decode failure: %s", exc.reason)
        print("DECODE_FAILURE")
        return EXIT_DECODE_FAILURE
    return 0


def _attack(args, settings: Settings) -> int:
    pk = keyfile.read_public_key(args.public)
    c = keyfile.read_ciphertext(args.inp) if args.inp else None
    out = Path(args.report)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        report = attacks.run_attack(
            args.kind, pk, c, args.seed, args.budget, args.threads, settings
        )
    except (attacks.AttackInapplicable, attacks.GroupTooLargeError) as exc:
        report = attacks.AttackReport(args.kind, False, 0, args.seed, 0.0, {"error": str(exc)})
        print(f"Attack not run: {exc}", file=sys.stderr)
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_json() + "\n")
    _write_settings(out, settings, {"kind": args.kind, "seed": args.seed, "budget": args.budget})
    outcome = "success" if report.success else "failure"
    print(f"{report.attack}: {outcome} after {report.iterations} iterations")
    print(f"Wrote: {out}")
    return 0 if report.success else EXIT_ATTACK_FAILED


def _analyze(args, settings: Settings) -> int:
    if args.kind == "simulated-curve" and args.seed is None:
        raise ValueError("--seed is required for simulated-curve")
    out = Path(args.out or analysis.CURVES[args.kind])
    levels = [float(x) for x in args.levels.split(",") if x.strip()]
    df = analysis.emit_security_curves(
        args.kind,
        out,
        ms=analysis.parse_range(args.m),
        ns=analysis.parse_range(args.n_range),
        levels=levels,
        trials=args.trials,
        rng=np.random.default_rng(args.seed) if args.seed is not None else None,
    )
    run_params = {"kind": args.kind, "m": args.m, "n": args.n_range, "levels": levels}
    _write_settings(out, settings, {**run_params, "seed": args.seed})
    print(f"Wrote: {out} ({len(df)} rows)")
    return 0


def _reduce(args, settings: Settings) -> int:
    inst = reduction.read_dimacs(args.inp, args.k)
    sd = reduction.reduce(inst)
    reduction.write_instance(args.out, sd)
    print(f"Wrote: {args.out} (degree {sd.degree}, {len(sd.generators)} generators)")
    print(f"Agreement threshold: {sd.threshold}")
    if args.verify:
        check = reduction.verify_reduction(inst)
        print(
            f"max-2-sat optimum {check.max2sat_optimum}, "
            f"subgroup distance optimum {check.distance_optimum}, |G| = {check.group_order}"
        )
        if not check.ok:
            print("VERIFY FAILED")
            return EXIT_VERIFY_FAILED
        print("VERIFY OK")
    return 0


def _verify(args, settings: Settings) -> int:
    from .verify import run_verification

    table = run_verification(args.seed, settings)
    print(table.to_string(index=False))
    return 0 if (table["result"] == "PASS").all() else EXIT_VERIFY_FAILED


COMMANDS = {
    "keygen": _keygen,
    "encrypt": _encrypt,
    "decrypt": _decrypt,
    "attack": _attack,
    "analyze": _analyze,
    "reduce": _reduce,
    "verify": _verify,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = load_settings(args.config)
        return COMMANDS[args.cmd](args, settings)
    except DecodeFailure as exc:
        print(f"DECODE_FAILURE: {exc.reason}", file=sys.stderr)
        return EXIT_DECODE_FAILURE
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        KeyGenerationError,
        IncompleteChainError,
        EnumerationLimitError,
        reduction.BruteForceLimitError,
    ) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
