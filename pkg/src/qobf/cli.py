"""Command-line surface: obfuscate, simulate, compare, analyze, bench.

Exit codes: 0 success, 2 parse error, 3 validation/schema error,
4 simulation cap exceeded, 5 threshold failure, 6 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bench import (
    PAPER_SUITE,
    counts_to_csv,
    paper_case_study,
    run_paper_suite,
    write_case_study_artifacts,
)
from .circuit import Circuit, CircuitError, gate_count
from .jsonio import SchemaError, counts_to_json, read_json, write_json
from .metrics import MetricsError, overhead, timed_compare
from .obfuscate import (
    ObfuscationError,
    ObfuscationMode,
    obfuscate,
    read_key_json,
    write_key_json,
)
from .qasm import ParseError, emit_qasm2, parse
from .security import audit_circuit, whitebox_profile
from .simulate import DEFAULT_MAX_QUBITS, SimulationCapError, run

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SIMCAP = 4
EXIT_THRESHOLD = 5
EXIT_IO = 6


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _max_qubits(args) -> int:
    env = os.environ.get("QOBF_MAX_QUBITS")
    if args.max_qubits is not None:
        return args.max_qubits
    if env is not None:
        return int(env)
    return DEFAULT_MAX_QUBITS


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliFailure(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliFailure(EXIT_IO, f"cannot write {path}: {exc}") from exc


def load_circuit(path: str) -> Circuit:
    """Load QASM or JSON, auto-detected by extension then content sniffing."""
    text = _read_text(path)
    suffix = Path(path).suffix.lower()
    sniffed_json = text.lstrip().startswith("{")
    is_json = suffix == ".json" or (suffix not in (".qasm", ".qasm2") and sniffed_json)
    if is_json:
        return read_json(text)
    return parse(text)


def _mode_of(args) -> tuple[ObfuscationMode, int | None]:
    mode = ObfuscationMode(args.mode)
    if mode is ObfuscationMode.SUBSET:
        if args.subset_size is None:
            raise CliFailure(EXIT_VALIDATION, "--mode subset requires --subset-size")
        return mode, args.subset_size
    if args.subset_size is not None:
        raise CliFailure(EXIT_VALIDATION, "--subset-size is only valid with --mode subset")
    return mode, None


def _print_overhead(report, as_json: bool):
    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
        return
    print("structural overhead:")
    print(f"  gates m = {report.m}, qubits n = {report.n}")
    print(f"  pre-fusion count 3m + 2n = {report.pre_fusion_count}")
    print(f"  final count m + 2n = {report.final_count} (measured {report.measured_count})")
    print(
        f"  depth {report.depth_original} -> {report.depth_obfuscated}"
        f" (delta {report.depth_delta})"
    )
    if not report.consistent:
        print("  WARNING: measured structure does not match the closed-form counts")


def _print_security(report, as_json: bool):
    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
        return
    print(f"security ({report.model}): parameters {report.parameters}")
    print(f"  success probability {report.success_probability:.6g}")
    print(f"  min-entropy {report.min_entropy_bits:.4f} bits")
    if report.warning:
        print(f"  WARNING: {report.warning}")


def cmd_obfuscate(args) -> int:
    original = load_circuit(getattr(args, "in"))
    mode, subset = _mode_of(args)
    result = obfuscate(original, mode, seed=args.seed, subset_size=subset)
    _write_text(args.out, write_json(result.circuit))
    if args.key_out:
        _write_text(args.key_out, write_key_json(result.key))
    _print_overhead(overhead(original, result.circuit, mode=mode.value), args.json)
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit = load_circuit(getattr(args, "in"))
    counts = run(circuit, args.shots, seed=args.seed, max_qubits=_max_qubits(args))
    text = counts_to_json(counts.counts, counts.shots)
    if args.out:
        _write_text(args.out, text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_compare(args) -> int:
    original = load_circuit(args.original)
    obfuscated = load_circuit(args.obfuscated)
    report = timed_compare(
        original,
        obfuscated,
        shots=args.shots,
        runs=args.runs,
        seed=args.seed,
        max_qubits=_max_qubits(args),
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"semantic accuracy : {report.semantic_accuracy_percent:.2f} %")
        print(f"TVD               : {report.tvd:.4f}")
        print(
            f"original time     : mean {report.original_runtime_seconds * 1e3:.3f} ms, "
            f"min {report.original_runtime_min_seconds * 1e3:.3f} ms"
        )
        print(
            f"obfuscated time   : mean {report.obfuscated_runtime_seconds * 1e3:.3f} ms, "
            f"min {report.obfuscated_runtime_min_seconds * 1e3:.3f} ms"
        )
    if report.semantic_accuracy_percent < args.accuracy_floor:
        raise CliFailure(
            EXIT_THRESHOLD,
            f"semantic accuracy {report.semantic_accuracy_percent:.2f} below "
            f"floor {args.accuracy_floor:.2f}",
        )
    return EXIT_OK


def cmd_analyze(args) -> int:
    circuit = load_circuit(getattr(args, "in"))
    if args.key:
        key = read_key_json(_read_text(args.key))
        from .obfuscate import ObfuscatedCircuit

        security = audit_circuit(ObfuscatedCircuit(circuit, key))
        m, n = key.num_gates, key.num_qubits
    else:
        m, n = gate_count(circuit), circuit.num_qubits
        security = whitebox_profile(m, m // 2) if m else None
    overhead = {
        "m": m,
        "n": n,
        "pre_fusion_count": 3 * m + 2 * n,
        "final_count": m + 2 * n,
        "depth_delta": 2,
    }
    if args.json:
        doc = {"overhead": overhead}
        if security is not None:
            doc["security"] = security.to_dict()
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    if not args.key:
        print(f"unobfuscated input: projecting overhead for m={m}, n={n}")
    if security is not None:
        _print_security(security, False)
    print(f"overhead projection: pre-fusion {3 * m + 2 * n}, final {m + 2 * n}, depth +2")
    return EXIT_OK


def cmd_bench(args) -> int:
    modes = [ObfuscationMode(m) for m in args.modes.split(",")]
    rows = run_paper_suite(modes=modes, shots=args.shots, runs=args.runs, seed=args.seed)
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "circuit": r.name,
                        "mode": r.mode,
                        **r.report.to_dict(),
                        "structure": r.structure.to_dict(),
                    }
                    for r in rows
                ],
                indent=2,
            )
        )
    else:
        header = (
            f"{'Circuit':<18}{'Mode':<9}{'Orig Time (s)':>14}{'Obf Time (s)':>14}"
            f"{'Accuracy (%)':>14}{'TVD':>9}"
        )
        print(header)
        print("-" * len(header))
        for r in rows:
            print(
                f"{r.name:<18}{r.mode:<9}"
                f"{r.report.original_runtime_seconds:>14.5f}"
                f"{r.report.obfuscated_runtime_seconds:>14.5f}"
                f"{r.report.semantic_accuracy_percent:>14.2f}"
                f"{r.report.tvd:>9.4f}"
            )
    if args.case_study_out:
        result = paper_case_study(shots=args.shots, runs=args.runs, seed=args.seed)
        paths = write_case_study_artifacts(result, args.case_study_out)
        for name, path in sorted(paths.items()):
            print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qobf",
        description="Quantum circuit obfuscation by randomized U3 basis conjugation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_in=True):
        if needs_in:
            p.add_argument("--in", required=True, help="input circuit (QASM or JSON)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--max-qubits", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1, help="reserved; timing runs stay sequential")

    p = sub.add_parser("obfuscate", help="rewrite a circuit into an obfuscated form")
    common(p)
    p.add_argument("--mode", choices=["global", "chained", "subset"], default="global")
    p.add_argument("--subset-size", type=int, default=None)
    p.add_argument("--out", required=True, help="obfuscated circuit JSON path")
    p.add_argument("--key-out", default=None, help="obfuscation key JSON path")
    p.set_defaults(func=cmd_obfuscate)

    p = sub.add_parser("simulate", help="sample measurement counts")
    common(p)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--out", default=None, help="counts JSON path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare two circuits' output distributions")
    p.add_argument("original")
    p.add_argument("obfuscated")
    common(p, needs_in=False)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--accuracy-floor", type=float, default=0.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("analyze", help="overhead and security report")
    common(p)
    p.add_argument("--key", default=None, help="obfuscation key JSON path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="run the benchmark suite")
    common(p, needs_in=False)
    p.add_argument("--suite", choices=["paper"], default="paper")
    p.add_argument("--modes", default="global")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--case-study-out", default=None, help="directory for case-study artifacts")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error ({exc.kind}): {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SchemaError, CircuitError, ObfuscationError, MetricsError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SimulationCapError as exc:
        print(f"simulation cap: {exc}", file=sys.stderr)
        return EXIT_SIMCAP
    except CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
