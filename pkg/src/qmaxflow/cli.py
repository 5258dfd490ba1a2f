"""Command-line front end.  Reports go to stdout as JSON (or CSV)."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .entropy import ZeroNetworkError, entanglement_entropy, estimate_mee
from .flow import PrecisionError, quantum_min_cut
from .netgraph import NetworkError, parse_network, serialize
from .qmf import (
    DEFAULT_MAX_DIM,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_TRIALS_V2,
    InvariantViolation,
    ResourceLimit,
    construct_path_tensors,
    estimate_qmf,
    estimate_qmf_v2,
    scaling_experiment,
)
from .qsat import ConsensusError, QsatError, generic_kernel_dim, parse_instance
from .tensor import DEFAULT_PRIME, ComplexFloat, PrimeField

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def _network(path: str):
    try:
        return parse_network(_read(path))
    except NetworkError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _domain(args):
    if args.domain == "complex":
        return ComplexFloat()
    try:
        return PrimeField(args.prime)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(report, fmt: str, out) -> None:
    rows = report if isinstance(report, list) else [report]
    if fmt == "json":
        json.dump(report, out, sort_keys=False)
        out.write("\n")
        return
    buf = io.StringIO()
    fields = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ";".join(map(str, v)) if isinstance(v, list) else v for k, v in r.items()})
    out.write(buf.getvalue())


def cmd_qmc(args) -> tuple[int, object]:
    return EXIT_OK, {"qmc": quantum_min_cut(_network(args.file))}


def cmd_qmf(args) -> tuple[int, object]:
    net = _network(args.file)
    fn = estimate_qmf_v2 if args.command == "qmf2" else estimate_qmf
    trials = args.trials or (DEFAULT_TRIALS_V2 if args.command == "qmf2" else DEFAULT_TRIALS)
    est = fn(net, trials, args.seed, _domain(args), args.rtol, max_dim=args.max_dim)
    return EXIT_OK, est.to_json()


def cmd_ee(args) -> tuple[int, object]:
    net = _network(args.file)
    if args.path_tensors:
        rep = entanglement_entropy(net, construct_path_tensors(net, args.path_tensors, ComplexFloat()))
        rep = type(rep)(rep.bits, rep.nats, rep.eigenvalues, rep.rank, quantum_min_cut(net))
    else:
        rep = estimate_mee(net, args.trials or DEFAULT_TRIALS, args.seed)
    return EXIT_OK, rep.to_json()


def cmd_qsat(args) -> tuple[int, object]:
    try:
        inst = parse_instance(_read(args.file))
    except QsatError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    if args.domain != "field":
        raise UsageError("qsat runs over a prime field only")
    g = generic_kernel_dim(inst, args.seed, _domain(args).p, max_entries=args.max_dim)
    return EXIT_OK, {"gqsat": g, "total_dim": inst.total_dim, "naive_bound": max(inst.naive_bound(), 0)}


def cmd_scale(args) -> tuple[int, object]:
    net = _network(args.file)
    rows = scaling_experiment(net, args.n_max, args.trials or DEFAULT_TRIALS, args.seed, args.max_dim)
    return EXIT_OK, [{"n": r.n, "qmc": r.qmc, "qmf_sampled": r.qmf_sampled, "gap": r.gap} for r in rows]


def cmd_corpus(args) -> tuple[int, object]:
    rows = corpus_mod.run(args.filter, args.seed)
    code = EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL
    return code, [r.to_json() for r in rows]


def cmd_net(args) -> tuple[int, object]:
    entry = corpus_mod.corpus().get(args.name)
    if entry is None or entry.network is None:
        raise UsageError(f"no corpus network named {args.name!r}")
    return EXIT_OK, serialize(entry.network)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trials", type=int, default=None, help="random trials (default 20; 50 for qmf2)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--domain", choices=("field", "complex"), default="field")
    common.add_argument("--rtol", type=float, default=1e-9)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)

    parser = argparse.ArgumentParser(prog="qmaxflow", description="Quantum max-flow / min-cut toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
        ("qmc", cmd_qmc, "min over cuts of the capacity product"),
        ("qmf", cmd_qmf, "sampled max rank, independent tensors"),
        ("qmf2", cmd_qmf, "sampled max rank, one tensor per valence type"),
        ("ee", cmd_ee, "entanglement entropy across the input/output split"),
        ("qsat", cmd_qsat, "generic kernel dimension of a constraint file"),
        ("scale", cmd_scale, "min cut and sampled rank with capacities scaled by 1..n"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        p.set_defaults(func=fn)
        if name == "scale":
            p.add_argument("--n-max", type=int, default=3)
        if name == "ee":
            p.add_argument("--path-tensors", type=int, metavar="D", default=None,
                           help="use the explicit path tensors for base D instead of sampling")
    p = sub.add_parser("corpus", parents=[common], help="run the named fixture checks")
    p.add_argument("--filter", default=None, help="glob over entry names")
    p.set_defaults(func=cmd_corpus)
    p = sub.add_parser("net", help="print a corpus network in the .net format")
    p.add_argument("name")
    p.set_defaults(func=cmd_net)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "trials", None) is not None and args.trials < 1:
            raise UsageError("--trials must be >= 1")
        if not 0 < getattr(args, "rtol", 0.5) < 1:
            raise UsageError("--rtol must lie in (0, 1)")
        if getattr(args, "n_max", 1) < 1:
            raise UsageError("--n-max must be >= 1")
        code, report = args.func(args)
    except UsageError as exc:
        print(f"qmaxflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, ResourceLimit, PrecisionError, ConsensusError,
            ZeroNetworkError, NetworkError, QsatError, ValueError, AssertionError) as exc:
        print(f"qmaxflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if isinstance(report, str):
        sys.stdout.write(report)
    else:
        _emit(report, getattr(args, "format", "json"), sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
