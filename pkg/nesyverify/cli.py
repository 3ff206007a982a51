"""Command-line front door: compile, verify, benchmarks, oracle checks and the MCP server.

Exit codes: 0 success, 1 property-check failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from nesyverify import __version__
from nesyverify.bench.addition import (
    addition_dataset,
    bench_addition,
    bench_csv,
    max_exact_digits,
    runtime_growth,
)
from nesyverify.bench.driving import DEFAULT_EPS_GRID, bench_driving, driving_csv
from nesyverify.bench.emajsat import emajsat_check, exhaustive_two_variable
from nesyverify.bench.training import train_digit_network, train_driving_networks
from nesyverify.circuit.io import write_circuit
from nesyverify.compiler.pipeline import compile_text
from nesyverify.config import config
from nesyverify.data.idx import read_idx
from nesyverify.nn.network import accuracy
from nesyverify.nn.train import TrainingParams
from nesyverify.nn.weights import load_weights, save_weights
from nesyverify.utils.errors import exit_code_for, handle_error
from nesyverify.utils.formatting import (
    format_bench_rows,
    format_emajsat_summary,
    format_verification_summary,
    markdown_table,
)
from nesyverify.verifier.dataset import group_tuples, load_dataset_npz, save_dataset_npz
from nesyverify.verifier.manifest import load_system, manifest_for, save_manifest
from nesyverify.verifier.report import write_report_csv, write_report_json
from nesyverify.verifier.system import build_sum_system
from nesyverify.verifier.verify import Threshold, verify_dataset

logger = logging.getLogger(__name__)


def _non_negative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _probability(text: str) -> float:
    value = _non_negative(text)
    if value > 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return value


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# --- compile ---------------------------------------------------------------


def cmd_compile(args: argparse.Namespace) -> int:
    path = Path(args.formula)
    text = path.read_text(encoding="utf-8")
    order = [name.strip() for name in args.order.split(",") if name.strip()] if args.order else None
    compiled = compile_text(text, order)
    circuit = compiled.circuit

    print(f"variables: {len(compiled.pool)} ({', '.join(compiled.pool.names)})")
    print(f"circuit: {circuit.num_nodes} nodes, {circuit.num_leaves} leaves, {len(circuit.outputs)} outputs")
    if compiled.unsatisfiable:
        print("warning: formula is unsatisfiable; the circuit evaluates to 0", file=sys.stderr)
    status = 0
    if compiled.self_check is not None:
        got, want = compiled.self_check
        verdict = "ok" if compiled.self_check_ok else "MISMATCH"
        print(f"WMC(0.5-weights) = {got:.12g} (brute force {want:.12g}, {verdict})")
        if not compiled.self_check_ok:
            status = 1
    else:
        print(f"self-check skipped: {len(compiled.pool)} variables")

    out = Path(args.out) if args.out else path.with_suffix(".ac")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_circuit(circuit, out)
    print(f"wrote {out}")
    return status


# --- verify ----------------------------------------------------------------


def _load_verify_dataset(args: argparse.Namespace, system):
    if args.idx:
        images, labels = read_idx(*args.idx)
        return group_tuples(images, labels, system.num_inputs)
    if not args.dataset:
        raise ValueError("give a dataset (.npz) or --idx IMAGES LABELS")
    return load_dataset_npz(args.dataset, system.input_names)


def cmd_verify(args: argparse.Namespace) -> int:
    system, query = load_system(args.manifest)
    ds = _load_verify_dataset(args, system)
    mode = Threshold(args.output, args.threshold) if args.threshold is not None else query.to_mode()
    methods = ["relaxed", "exact"] if args.exact_symbolic else ["relaxed"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    reports = []
    for eps in args.eps:
        for method in methods:
            report = verify_dataset(
                system, ds, eps, mode=mode, method=method, threads=args.threads, max_leaves=args.vertex_limit
            )
            stem = out / f"report_eps{eps:g}_{method}"
            write_report_json(report, stem.with_suffix(".json"))
            write_report_csv(report, stem.with_suffix(".csv"))
            reports.append(report)
    print(format_verification_summary(reports))
    return 0


# --- train -----------------------------------------------------------------


def cmd_train(args: argparse.Namespace) -> int:
    images = labels = None
    if args.idx:
        images, labels = read_idx(*args.idx)
    hp = TrainingParams(lr=args.lr, epochs=args.epochs, batch=args.batch, seed=args.seed)
    net = train_digit_network(
        num_classes=args.classes, seed=args.seed, samples=args.samples, hp=hp, images=images, labels=labels
    )
    if images is not None:
        print(f"training accuracy: {accuracy(net, images, labels):.4f}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    weights_path = out / "digit.weights.json"
    save_weights(net, weights_path)
    print(f"wrote {weights_path}")

    if args.sum_digits:
        k = args.sum_digits
        system = build_sum_system(net, k, args.classes)
        circuit_path = out / f"sum{k}.ac"
        write_circuit(system.circuit, circuit_path)
        manifest = manifest_for(system, [weights_path.name] * k, circuit_path.name)
        manifest_path = out / f"sum{k}.manifest.json"
        save_manifest(manifest, manifest_path)
        # held-out samples come from the next seed
        ds = addition_dataset(k, args.test_samples, args.classes, args.seed + 1)
        dataset_path = out / f"sum{k}.npz"
        save_dataset_npz(dataset_path, ds, system.input_names)
        print(f"wrote {circuit_path}, {manifest_path} and {dataset_path} ({len(ds)} samples)")
    return 0


# --- benchmarks ------------------------------------------------------------


def cmd_bench_addition(args: argparse.Namespace) -> int:
    if args.weights:
        net = load_weights(args.weights)
        if net.output_size != args.classes:
            raise ValueError(f"{args.weights} has {net.output_size} outputs, --classes is {args.classes}")
    else:
        net = train_digit_network(num_classes=args.classes, seed=args.seed)
    timeout = config.timeout_s if args.timeout_s is None else args.timeout_s
    rows = bench_addition(
        net,
        args.digits,
        args.eps,
        seed=args.seed,
        samples=args.samples,
        timeout_s=timeout,
        max_leaves=args.vertex_limit,
    )
    print(format_bench_rows(rows))
    reach = max_exact_digits(net.output_size, args.vertex_limit)
    print(f"exact bounds cover up to {reach} digits at {net.output_size} classes; guard cells are not comparable")
    for eps in args.eps:
        growth = {m: runtime_growth(rows, m, eps, censored_s=timeout) for m in ("relaxed", "exact")}
        shown = ", ".join(f"{m} x{g:.2f}" if g is not None else f"{m} -" for m, g in growth.items())
        print(f"runtime growth per digit at eps={eps:g}: {shown}")
    if args.out:
        _write_text(Path(args.out), bench_csv(rows))
        print(f"wrote {args.out}")
    return 0


def cmd_bench_driving(args: argparse.Namespace) -> int:
    detector, action = train_driving_networks(seed=args.seed)
    rows, _ = bench_driving(
        detector,
        action,
        seed=args.seed + 1,
        samples=args.samples,
        eps_list=args.eps,
        threshold=args.threshold,
        threads=args.threads,
    )
    table = [
        {
            "eps": f"{r.eps:g}",
            "robustness %": f"{r.robustness_pct:.2f}",
            "mean lower": "-" if r.mean_lower is None else f"{r.mean_lower:.6g}",
            "runtime/sample (s)": f"{r.mean_runtime_s:.4f}",
        }
        for r in rows
    ]
    print(markdown_table(table, ["eps", "robustness %", "mean lower", "runtime/sample (s)"]))
    if args.out:
        _write_text(Path(args.out), driving_csv(rows))
        print(f"wrote {args.out}")
    return 0


# --- oracle check ----------------------------------------------------------


def cmd_emajsat_check(args: argparse.Namespace) -> int:
    summary = emajsat_check(args.count, args.max_n, args.max_m, args.seed)
    print(format_emajsat_summary(summary).replace("**", ""))
    ok = summary.ok
    if args.exhaustive:
        sweep = exhaustive_two_variable()
        print("exhaustive two-variable sweep: " + format_emajsat_summary(sweep).replace("**", ""))
        ok = ok and sweep.ok
    return 0 if ok else 1


# --- server ----------------------------------------------------------------


def cmd_serve(args: argparse.Namespace) -> int:
    # importing the server module builds the FastMCP app
    from nesyverify.main import serve

    serve(args.transport, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nesy-verify", description="Robustness verification of neuro-symbolic systems"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="Compile a formula file into an arithmetic circuit")
    p.add_argument("formula", help="Formula file (expression grammar or DIMACS CNF)")
    p.add_argument("--order", help="Comma-separated branching order (default: first appearance)")
    p.add_argument("--out", help="Circuit file to write (default: formula path with .ac suffix)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="Verify a system manifest on a dataset for each eps")
    p.add_argument("manifest", help="nesy-system/1 manifest")
    p.add_argument("dataset", nargs="?", help=".npz dataset with one array per input and optional labels")
    p.add_argument("--idx", nargs=2, metavar=("IMAGES", "LABELS"), help="IDX pair grouped into input tuples")
    p.add_argument("--eps", nargs="+", type=_non_negative, default=[1e-4, 1e-3, 1e-2])
    p.add_argument("--exact-symbolic", action="store_true", help="Also bound circuits exactly")
    p.add_argument("--threshold", type=_probability, help="Threshold mode: robust iff lower bound >= T")
    p.add_argument("--output", type=int, default=0, help="Circuit output checked in threshold mode")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--vertex-limit", type=_positive_int, default=None, help="Free-leaf guard of --exact-symbolic")
    p.add_argument("--out", default="reports", help="Directory for per-eps reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("train", help="Train the dense digit classifier")
    p.add_argument("--idx", nargs=2, metavar=("IMAGES", "LABELS"), help="Train on an IDX pair")
    p.add_argument("--classes", type=_positive_int, default=10)
    p.add_argument("--samples", type=_positive_int, default=2000, help="Synthetic training images")
    p.add_argument("--epochs", type=_positive_int, default=15)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--batch", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sum-digits", type=_positive_int, help="Also write a K-digit addition system")
    p.add_argument("--test-samples", type=_positive_int, default=100, help="Held-out addition samples")
    p.add_argument("--out", default="model", help="Output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench-addition", help="Relaxed vs exact bounds on multi-digit addition")
    p.add_argument("--digits", nargs="+", type=_positive_int, default=[2, 3, 4, 5])
    p.add_argument("--eps", nargs="+", type=_non_negative, default=[1e-3])
    p.add_argument(
        "--classes",
        type=_positive_int,
        default=4,
        help="Digit classes; exact bounds need digits x classes <= the vertex guard",
    )
    p.add_argument("--samples", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", help="Digit network weight file (default: train one)")
    p.add_argument("--timeout-s", type=_non_negative, default=None, help="Per-cell budget")
    p.add_argument("--vertex-limit", type=_positive_int, default=None)
    p.add_argument("--out", help="CSV file to write")
    p.set_defaults(func=cmd_bench_addition)

    p = sub.add_parser("bench-driving", help="Threshold verification of the driving constraints")
    p.add_argument("--eps", nargs="+", type=_non_negative, default=list(DEFAULT_EPS_GRID))
    p.add_argument("--samples", type=_positive_int, default=50)
    p.add_argument("--threshold", type=_probability, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--out", help="CSV file to write")
    p.set_defaults(func=cmd_bench_driving)

    p = sub.add_parser("emajsat-check", help="Check the E-MAJSAT reduction on random formulas")
    p.add_argument("--count", type=_positive_int, default=200)
    p.add_argument("--max-n", type=_positive_int, default=4)
    p.add_argument("--max-m", type=_positive_int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true", help="Also sweep all two-variable functions")
    p.set_defaults(func=cmd_emajsat_check)

    p = sub.add_parser("serve", help="Run the MCP server")
    p.add_argument("--transport", choices=["stdio", "streamable-http"], default="streamable-http")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=config.log_level)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:
        logger.debug("Command failed", exc_info=True)
        print(handle_error(e), file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
