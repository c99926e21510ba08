"""Command-line front door: every pipeline is reachable for scripted runs.

Exit codes: 0 success, 1 configuration/usage error, 2 I/O error.  Flags
mirror config-file keys one-to-one; flags override file values.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import harness
from .signal_core import mutual_coherence, partial_idft
from .sparse_codec import capacity
from .svc import FlopsParams, flops_deep_svc, flops_omp


class _UsageError(Exception):
    pass


def _parse_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("1", "true", "yes"):
        return True
    if lowered in ("0", "false", "no"):
        return False
    raise _UsageError(f"expected boolean, got {value!r}")


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; the contract here is 1
    def error(self, message):
        raise _UsageError(message)


def _add_scheme_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="key=value config file")
    parser.add_argument("--snr", help="comma-separated SNR grid in dB (inf allowed)")
    parser.add_argument("--trials", type=int, help="trials per SNR point")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--out", metavar="PATH", help="output CSV path")
    parser.add_argument("--n", type=int, help="sparse-vector dimension")
    parser.add_argument("--m", type=int, help="measurement count")
    parser.add_argument("--k", type=int, help="sparsity")
    parser.add_argument("--bs", type=int, help="bits per active symbol")
    parser.add_argument("--ui-mode", dest="ui_mode", choices=("data_positions", "eaui"))
    parser.add_argument("--tolerance", type=int, help="support mismatch tolerance d")
    parser.add_argument("--circular", help="circular index distance (true/false)")
    parser.add_argument("--channel-mode", dest="channel_mode",
                        choices=("iid_rayleigh", "multipath"))
    parser.add_argument("--num-taps", dest="num_taps", type=int)
    parser.add_argument("--sample-rate-hz", dest="sample_rate_hz", type=float)
    parser.add_argument("--carrier-hz", dest="carrier_hz", type=float)
    parser.add_argument("--speed-mps", dest="speed_mps", type=float)
    parser.add_argument("--reciprocity-error-var", dest="reciprocity_error_var", type=float)
    parser.add_argument("--codebook-seed", dest="codebook_seed", type=int)


def _build_parser() -> _Parser:
    parser = _Parser(prog="svt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for scheme in ("fdst", "svc"):
        p = sub.add_parser(scheme, help=f"run a {scheme} BLER sweep and write CSV")
        _add_scheme_flags(p)

    p = sub.add_parser("flops", help="print both decoder complexity formulas")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=int, default=32, help="filter count")
    p.add_argument("--p", type=int, default=2, help="pooling size")
    p.add_argument("--q", type=int, default=3, help="convolution filter size")
    p.add_argument("--L", type=int, default=6, help="hidden layer count")

    p = sub.add_parser("coherence", help="mutual coherence of the partial IDFT")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--offset", type=int, default=0)

    p = sub.add_parser("capacity", help="bits conveyed by one sparse block")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bs", type=int, default=0)

    p = sub.add_parser("export-dataset", help="write a labeled dataset for decoder training")
    _add_scheme_flags(p)
    p.add_argument("--count", type=int, required=True, help="number of examples")
    p.add_argument("--codebook-out", dest="codebook_out", metavar="PATH",
                   help="also export the codebook matrix")

    return parser


def _scheme_config(scheme: str, args: argparse.Namespace) -> harness.SchemeConfig:
    config = harness.fdst_defaults() if scheme == "fdst" else harness.svc_defaults()
    if args.config:
        config = replace(config, **harness.parse_config_file(args.config))
    overrides = {}
    for flag, field in (
        ("snr", "snr_db_list"),
        ("trials", "trials_per_point"),
        ("seed", "master_seed"),
        ("out", "out_path"),
        ("n", "n"),
        ("m", "m"),
        ("k", "k"),
        ("bs", "bits_per_symbol"),
        ("ui_mode", "ui_mode"),
        ("tolerance", "tolerance"),
        ("circular", "circular"),
        ("channel_mode", "channel_mode"),
        ("num_taps", "num_taps"),
        ("sample_rate_hz", "sample_rate_hz"),
        ("carrier_hz", "carrier_hz"),
        ("speed_mps", "speed_mps"),
        ("reciprocity_error_var", "reciprocity_error_var"),
        ("codebook_seed", "codebook_seed"),
    ):
        value = getattr(args, flag, None)
        if value is None:
            continue
        if flag == "snr":
            value = tuple(float(v) for v in value.split(","))
        elif flag == "circular":
            value = _parse_bool(value)
        overrides[field] = value
    if overrides:
        config = replace(config, **overrides)
    return replace(config, scheme=scheme)


def _run_sweep(scheme: str, args: argparse.Namespace) -> int:
    config = _scheme_config(scheme, args)
    if not config.out_path:
        raise _UsageError("an output CSV path is required (--out or out= in the config)")
    rows = harness.run_bler(config)
    harness.write_bler_csv(rows, config.out_path)
    for row in rows:
        print(f"snr_db={row.snr_db:g} bler={row.bler:.6g} "
              f"({row.block_errors}/{row.trials}, ci95 +/-{row.ci95:.3g})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("fdst", "svc"):
            return _run_sweep(args.command, args)
        if args.command == "flops":
            params = FlopsParams(args.m, args.n, args.k, args.T, args.p, args.q, args.L)
            print(f"deep_svc {flops_deep_svc(params):.6g}")
            print(f"omp {float(flops_omp(args.m, args.n, args.k)):.6g}")
            return 0
        if args.command == "coherence":
            value = mutual_coherence(partial_idft(args.n, args.offset, args.m))
            print(repr(value))
            return 0
        if args.command == "capacity":
            print(capacity(args.n, args.k, args.bs))
            return 0
        if args.command == "export-dataset":
            config = _scheme_config("svc", args)
            if not config.out_path:
                raise _UsageError("an output path is required (--out)")
            harness.export_dataset(config, args.count, config.out_path,
                                   codebook_out=args.codebook_out)
            print(f"wrote {args.count} examples to {config.out_path}")
            return 0
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
