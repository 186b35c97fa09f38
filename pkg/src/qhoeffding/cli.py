"""Command-line front end: ``qhoeffding <command> [options]``.

Commands write a CSV table (``--out`` or stdout) with a ``# key=value``
metadata header; ``--json`` adds a machine-readable mirror. Exit codes:
0 success, 1 usage, 2 validation/domain/file errors, 3 resource caps,
4 numerical consistency failures.
"""

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import formats
from ._version import __version__
from .channels import random_channel
from .classical_iid import DEFAULT_TYPE_CAP, GUARD
from .ensembles import bernoulli_pair, reference_pair
from .errors import ConsistencyError, QHoeffdingError, ValidationError
from .functionals import FAIL_TOL
from .linalg import DEFAULT_DIM_CAP, EPS_SPEC
from .nussbaum_szkola import ns_distributions
from .reports import (
    Table,
    bounds_table,
    channel_check_table,
    ns_report,
    phi_sweep_table,
    probe_table,
    simulate_table,
    tails_table,
)

log = logging.getLogger("qhoeffding")

BUILTIN_PAIRS = {"reference": reference_pair, "bernoulli": bernoulli_pair}

#: Per-command default for ``--tol`` and what it controls.
DEFAULT_TOL = {
    "bounds": FAIL_TOL,
    "sweep-phi": 1e-9,
    "ns": 1e-9,
    "tails": GUARD,
    "simulate": 1e-10,
    "probe": EPS_SPEC,
    "channel-check": 1e-10,
}


class UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors with exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageExit()


def parse_float_grid(text: str) -> np.ndarray:
    """``"0,0.5,1"`` or ``"start:stop:count"`` (inclusive linspace)."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return np.linspace(float(start), float(stop), int(count))
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise ValidationError(f"cannot parse grid {text!r}: {exc}") from exc


def parse_int_grid(text: str) -> list:
    """``"1,2,5"`` or ``"1-10"`` (inclusive range)."""
    try:
        if "-" in text and "," not in text:
            lo, hi = text.split("-")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse integer grid {text!r}: {exc}") from exc


@dataclass
class RunConfig:
    """Validated command parameters shared by all commands."""

    command: str
    tol: float
    cap: int
    seed: int = None
    workers: int = 1

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationError(f"--tol must be positive, got {self.tol}")
        if self.cap < 1:
            raise ValidationError(f"--cap must be positive, got {self.cap}")
        if self.workers < 1:
            raise ValidationError(f"--workers must be positive, got {self.workers}")


def check_grid(values, name: str, lo=None, hi=None):
    values = list(values)
    if not values:
        raise ValidationError(f"{name} grid is empty")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{name} grid must be sorted ascending")
    if lo is not None and values[0] < lo:
        raise ValidationError(f"{name} grid starts below {lo}: {values[0]}")
    if hi is not None and values[-1] > hi:
        raise ValidationError(f"{name} grid ends above {hi}: {values[-1]}")
    return values


def _file_digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def load_pair(args) -> tuple:
    """The state pair and a provenance string for the metadata header."""
    if args.states and args.pair:
        raise ValidationError("give either --states or --pair, not both")
    if args.pair:
        return BUILTIN_PAIRS[args.pair](), f"builtin:{args.pair}"
    if not args.states:
        raise ValidationError("a state pair is required: --states FILE or --pair NAME")
    pair = formats.load_state_pair(args.states)
    return pair, f"sha256:{_file_digest(args.states)}"


def _metadata(cfg: RunConfig, source: str, **params) -> dict:
    meta = {
        "tool": "qhoeffding",
        "version": __version__,
        "command": cfg.command,
        "input": source,
        "seed": "none" if cfg.seed is None else cfg.seed,
        "tol": formats.format_value(float(cfg.tol)),
        "cap": cfg.cap,
        "eps_spec": formats.format_value(EPS_SPEC),
    }
    meta.update({k: formats.format_value(v) if isinstance(v, float) else v for k, v in params.items()})
    return meta


def emit_table(table: Table, meta: dict, args) -> None:
    if args.base2:
        table = table.in_base2()
    meta = dict(meta, units="bits" if args.base2 else "nats")
    text = formats.render_csv(table.columns, table.rows, meta)
    mirror = None
    if args.json:
        mirror = json.dumps(
            formats.to_jsonable({"metadata": meta, "columns": list(table.columns), "rows": table.rows}), indent=2
        ) + "\n"
    if args.out:
        formats.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    if mirror is not None:
        formats.atomic_write(args.json, mirror)


def cmd_bounds(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    d = pair.d_rho_sigma
    if args.r is not None:
        r = check_grid(parse_float_grid(args.r), "r", 0.0)
    else:
        if args.r_points < 2:
            raise ValidationError("--r-points must be at least 2")
        r = np.linspace(0.0, d, args.r_points)
        r[-1] = d
    table = bounds_table(pair, r, cfg.tol)
    emit_table(table, _metadata(cfg, source), args)
    return 0


def cmd_sweep_phi(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    s = check_grid(parse_float_grid(args.s), "s", 0.0, 1.0)
    table = phi_sweep_table(pair, s, cfg.tol)
    emit_table(table, _metadata(cfg, source), args)
    return 0


def cmd_ns(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    s = check_grid(parse_float_grid(args.s), "s", 0.0, 1.0)
    report = ns_report(pair, s)
    meta = _metadata(cfg, source)
    text = json.dumps(formats.to_jsonable(dict(report, metadata=meta)), indent=2) + "\n"
    if args.out:
        formats.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"phi identity residual: {report['residual']:.3e}", file=sys.stderr)
    if report["residual"] > cfg.tol:
        raise ConsistencyError(f"phi identity residual {report['residual']:.3e} exceeds {cfg.tol:.1e}")
    return 0


def cmd_tails(args, cfg: RunConfig) -> int:
    if args.classical:
        if args.states or args.pair:
            raise ValidationError("give either --classical or a state pair, not both")
        cp = formats.load_classical_pair(args.classical)
        source = f"sha256:{_file_digest(args.classical)}"
    else:
        pair, source = load_pair(args)
        cp = ns_distributions(pair)
    ns = check_grid(parse_int_grid(args.n) if args.n else range(1, args.n_max + 1), "n", 1)
    table = tails_table(cp, ns, args.b, cfg.cap, cfg.workers, guard=cfg.tol)
    emit_table(table, _metadata(cfg, source, b=float(args.b), guard=float(cfg.tol)), args)
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    ns = check_grid(parse_int_grid(args.n), "n", 1)
    deltas = check_grid(parse_float_grid(args.delta), "delta")
    table = simulate_table(pair, ns, deltas, cfg.cap, args.random_tests, cfg.seed, cfg.workers)
    emit_table(table, _metadata(cfg, source, random_tests=args.random_tests), args)
    if args.random_tests:
        risk, best = table.columns.index("risk"), table.columns.index("random_min_risk")
        if any(row[risk] > row[best] + cfg.tol for row in table.rows):
            raise ConsistencyError("a random test beat the Helstrom test")
    return 0


def cmd_probe(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    if args.n_max < 1:
        raise ValidationError("--n-max must be at least 1")
    table = probe_table(pair, args.a, args.n_max, cfg.cap)
    emit_table(table, _metadata(cfg, source, a=float(args.a), n_max=args.n_max), args)
    return 0


def cmd_channel_check(args, cfg: RunConfig) -> int:
    pair, source = load_pair(args)
    if (args.channels is None) == (args.random is None):
        raise ValidationError("give exactly one of --channels FILE or --random N")
    if args.channels:
        channels = formats.load_channels(args.channels)
        chan_source = f"sha256:{_file_digest(args.channels)}"
    else:
        if args.random < 1:
            raise ValidationError("--random must be at least 1")
        d_out = args.d_out or pair.dim
        seeds = np.random.SeedSequence(cfg.seed).spawn(args.random)
        channels = [random_channel(pair.dim, d_out, args.kraus, s) for s in seeds]
        chan_source = f"random:{args.random}x{args.kraus}"
    s = check_grid(parse_float_grid(args.s), "s", 0.0, 1.0)
    table = channel_check_table(pair, channels, s, cfg.tol, args.relent_tol, cfg.workers)
    meta = _metadata(cfg, source, channels=chan_source, relent_tol=float(args.relent_tol))
    emit_table(table, meta, args)
    cols = table.columns
    bad = [row[0] for row in table.rows
           if row[cols.index("renyi_flag")] == "fail" or row[cols.index("relent_flag")] == "fail"]
    print(f"violations: {len(bad)}/{len(table.rows)}", file=sys.stderr)
    if bad:
        raise ConsistencyError(f"data-processing violated beyond tolerance for channels {bad}")
    return 0


def _common(p: argparse.ArgumentParser, states: bool = True) -> None:
    if states:
        p.add_argument("--states", metavar="FILE", help='JSON with "rho" and "sigma" matrices')
        p.add_argument("--pair", choices=sorted(BUILTIN_PAIRS), help="use a built-in state pair")
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    p.add_argument("--json", metavar="FILE", help="also write a JSON mirror of the table")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized parts")
    p.add_argument("--tol", type=float, default=None, help="command tolerance (see --help of each command)")
    p.add_argument("--cap", type=int, default=None, help="resource cap (tensor dimension or type classes)")
    p.add_argument("--base2", action="store_true", help="report log-scale columns in bits")
    p.add_argument("--workers", type=int, default=1, help="threads for independent grid points")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qhoeffding", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="Hoeffding exponent table over r (--tol: duality agreement)")
    _common(p)
    p.add_argument("--r", help='r grid, "r1,r2,..." or "start:stop:count"')
    p.add_argument("--r-points", type=int, default=21, help="evenly spaced r in [0, D] (default 21)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep-phi", help="phi, phi_ns, phi_tilde on an s grid (--tol: identity flag)")
    _common(p)
    p.add_argument("--s", default="0:1:21", help='s grid (default "0:1:21")')
    p.set_defaults(func=cmd_sweep_phi)

    p = sub.add_parser("ns", help="classical distributions as JSON (--tol: phi identity residual)")
    _common(p)
    p.add_argument("--s", default="0:1:21", help="s grid for the residual")
    p.set_defaults(func=cmd_ns)

    p = sub.add_parser("tails", help="exact classical tails f_n, g_n and rates (--tol: boundary guard per draw)")
    _common(p)
    p.add_argument("--classical", metavar="FILE", help="classical pair JSON instead of states")
    p.add_argument("--b", type=float, default=0.0, help="threshold b (default 0)")
    p.add_argument("--n", help='n grid, "1,2,3" or "1-40"')
    p.add_argument("--n-max", type=int, default=40, help="n = 1..N when --n is absent (default 40)")
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("simulate", help="Helstrom test errors (--tol: optimality check slack)")
    _common(p)
    p.add_argument("--n", default="1-3", help='n grid (default "1-3")')
    p.add_argument("--delta", default="0.5,1,2", help='delta grid (default "0.5,1,2")')
    p.add_argument("--random-tests", type=int, default=0, help="random tests per grid point")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("probe", help="finite-n spectral tails beside Phi, Psi (--tol: recorded only)")
    _common(p)
    p.add_argument("--a", type=float, default=0.0, help="threshold a (default 0)")
    p.add_argument("--n-max", type=int, default=10, help="largest n (default 10)")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("channel-check", help="data-processing checks (--tol: Renyi overlap violations)")
    _common(p)
    p.add_argument("--channels", metavar="FILE", help="channel JSON (one, a list, or {\"channels\": [...]})")
    p.add_argument("--random", type=int, metavar="N", help="check N seeded random channels")
    p.add_argument("--kraus", type=int, default=2, help="Kraus operators per random channel")
    p.add_argument("--d-out", type=int, default=None, help="output dimension of random channels")
    p.add_argument("--s", default="0:1:11", help='s grid (default "0:1:11")')
    p.add_argument("--relent-tol", type=float, default=1e-8, help="relative-entropy violation tolerance")
    p.set_defaults(func=cmd_channel_check)
    return parser


_CAP_DEFAULTS = {"tails": DEFAULT_TYPE_CAP}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageExit:
        return 1
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        tol = DEFAULT_TOL[args.command] if args.tol is None else args.tol
        cap = _CAP_DEFAULTS.get(args.command, DEFAULT_DIM_CAP) if args.cap is None else args.cap
        cfg = RunConfig(args.command, tol, cap, args.seed, args.workers)
        return args.func(args, cfg)
    except QHoeffdingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        print(f"error: linear algebra failure: {exc}", file=sys.stderr)
        return ConsistencyError.exit_code


if __name__ == "__main__":
    sys.exit(main())
