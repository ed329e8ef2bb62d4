"""Command-line entry point: ``qencopt <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import linear
from .circuit import Circuit, CircuitError, emit_circuit, read_circuit
from .encoder import synthesize
from .rewrite import DEFAULT_PASSES, OptimizeConfig, optimize
from .routing import GridLayout, LayoutError, decompose_swaps, is_nnc, route, routing_equivalent, search_layout
from .stabilizer import CodeError, StabilizerCode, five_qubit_code, read_code, verify_encoder

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# Swap counts a hand-made routing of the two encoders achieves on the 2x3 grid.
REFERENCE_SWAPS = {"initial": 3, "optimized": 1}
# Static comparison column: a 6-CNOT encoder found by exhaustive search elsewhere.
PRIOR_SEARCHED_ENCODER = {"label": "prior searched encoder (static, not reproduced)", "cnot": 6, "single_qubit": 12}


class InputError(Exception):
    pass


class _Ctx:
    def __init__(self, args):
        self.pretty = args.pretty
        self.out_dir = Path(args.out_dir) if args.out_dir else None

    def path(self, name: str | None) -> Path | None:
        if name is None:
            return None
        p = Path(name)
        if self.out_dir is not None and not p.is_absolute():
            self.out_dir.mkdir(parents=True, exist_ok=True)
            p = self.out_dir / p
        return p

    def write(self, name: str | None, text: str) -> None:
        p = self.path(name)
        if p is None:
            sys.stdout.write(text)
        else:
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text, encoding="utf-8")

    def emit(self, report: dict, render=None) -> None:
        if self.pretty:
            print(render(report) if render else _render_generic(report))
        else:
            print(json.dumps(report, indent=2, sort_keys=True))


def _render_generic(report: dict, indent: str = "") -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_generic(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def _load_circuit(path: str) -> Circuit:
    try:
        return read_circuit(path)
    except OSError as exc:
        raise InputError(f"cannot read circuit {path}: {exc.strerror or exc}") from None
    except CircuitError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_code(path: str | None) -> StabilizerCode:
    if path is None:
        return five_qubit_code()
    try:
        return read_code(path)
    except OSError as exc:
        raise InputError(f"cannot read code {path}: {exc.strerror or exc}") from None
    except (CodeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _grid(text: str) -> tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        rows, cols = int(r), int(c)
    except ValueError:
        raise InputError(f"grid must look like RxC, got {text!r}") from None
    if rows < 1 or cols < 1:
        raise InputError(f"grid must be at least 1x1, got {text!r}")
    return rows, cols


# ---------------------------------------------------------------------------
# commands

def cmd_synth(args, ctx: _Ctx) -> int:
    code = _load_code(args.code)
    result = synthesize(code, expand_cy=not args.no_expand_cy, exact_logical_frame=args.exact_logical_frame)
    ctx.write(args.out, emit_circuit(result.circuit))
    if args.out is not None:
        ctx.emit(result.report())
    return EXIT_OK


def cmd_optimize(args, ctx: _Ctx) -> int:
    circuit = _load_circuit(args.input)
    passes = tuple(p.strip() for p in args.passes.split(",")) if args.passes else DEFAULT_PASSES
    try:
        config = OptimizeConfig(passes=passes)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out, trace = optimize(circuit, config)
    ctx.write(args.out, emit_circuit(out))
    if args.trace:
        ctx.write(args.trace, trace.to_json(indent=2) + "\n")
    if args.out is not None:
        ctx.emit({
            "census_before": circuit.census().as_dict(),
            "census_after": out.census().as_dict(),
            "rewrites": len(trace),
            "notes": trace.notes,
        })
    return EXIT_OK


def cmd_route(args, ctx: _Ctx) -> int:
    circuit = _load_circuit(args.input)
    rows, cols = _grid(args.grid)
    try:
        if args.layout:
            try:
                text = Path(args.layout).read_text(encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot read layout {args.layout}: {exc.strerror or exc}") from None
            layout = GridLayout.from_text(text, rows, cols)
            routed = route(circuit, layout)
        elif args.search:
            layout, routed = search_layout(circuit, rows, cols)
        else:
            layout = GridLayout.row_major(rows, cols, circuit.width)
            routed = route(circuit, layout)
    except LayoutError as exc:
        raise InputError(str(exc)) from None
    out = routed.decomposed() if args.decompose else routed.circuit
    ctx.write(args.out, emit_circuit(out))
    report = routed.report()
    report["layout_text"] = layout.to_text()
    if args.report:
        ctx.write(args.report, json.dumps(report, indent=2, sort_keys=True) + "\n")
    elif args.out is not None:
        ctx.emit(report)
    return EXIT_OK


def cmd_verify(args, ctx: _Ctx) -> int:
    circuit = _load_circuit(args.circuit)
    code = _load_code(args.code)
    try:
        report = verify_encoder(circuit, code, strict_logical_phase=args.strict)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ctx.emit(report.as_dict(), _render_verify)
    return EXIT_OK if report.passed else EXIT_FAIL


def _render_verify(report: dict) -> str:
    lines = [f"verdict: {report['verdict']}"]
    for c in report["checks"]:
        mark = "ok  " if c["passed"] else "FAIL"
        lines.append(f"  {mark} {c['generator']:<8} -> {c['image']}  {c['reason']}".rstrip())
    lines += [f"  error: {e}" for e in report["errors"]]
    return "\n".join(lines)


def cmd_linear(args, ctx: _Ctx) -> int:
    try:
        if args.matrix:
            try:
                m = linear.parse_matrix(Path(args.matrix).read_text(encoding="utf-8"))
            except OSError as exc:
                raise InputError(f"cannot read matrix {args.matrix}: {exc.strerror or exc}") from None
            if args.method == "optimal":
                circ = linear.optimal_synthesize(m)
            else:
                circ = linear.gauss_synthesize(m)
            ctx.write(args.out, emit_circuit(circ))
        else:
            circ = _load_circuit(args.input)
            ctx.write(args.out, linear.format_matrix(linear.circuit_to_matrix(circ)))
    except linear.LinearCircuitError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK


def cmd_stats(args, ctx: _Ctx) -> int:
    circuit = _load_circuit(args.input)
    ctx.emit(circuit.census().as_dict())
    return EXIT_OK


# ---------------------------------------------------------------------------
# demo

def _stage_route(name: str, circuit: Circuit, rows: int, cols: int, ctx: _Ctx) -> dict:
    search = search_layout(circuit, rows, cols)
    routed = search.routed
    flat = decompose_swaps(routed.circuit)
    ctx.write(f"{name}_layout.txt", search.layout.to_text())
    ctx.write(f"{name}_routed.circ", emit_circuit(routed.circuit))
    ctx.write(f"{name}_nnc.circ", emit_circuit(flat))
    nnc = is_nnc(flat, routed.grid())
    equivalent = routing_equivalent(circuit, routed)
    reference = REFERENCE_SWAPS.get(name)
    return {
        "stage": f"route-{name}",
        "swap_count": routed.swap_count,
        "placements_evaluated": search.evaluated,
        "layout": search.layout.as_dict(),
        "final_permutation": {str(q): p for q, p in routed.final_permutation.items()},
        "census": flat.census().as_dict(),
        "nnc": nnc.ok,
        "equivalent": equivalent,
        "reference_swaps": reference,
        "improves_on_reference": reference is not None and routed.swap_count < reference,
        "verdict": "PASS" if nnc.ok and equivalent else "FAIL",
    }


def _stage_encoder(name: str, circuit: Circuit, code: StabilizerCode, ctx: _Ctx, **extra) -> dict:
    ctx.write(f"{name}.circ", emit_circuit(circuit))
    report = verify_encoder(circuit, code)
    return {
        "stage": name,
        "census": circuit.census().as_dict(),
        "verdict": "PASS" if report.passed else "FAIL",
        "logical_frame": report.logical_frame,
        **extra,
    }


def run_demo(ctx: _Ctx, skip_optimize: bool = False, grid: tuple[int, int] = (2, 3)) -> dict:
    code = five_qubit_code()
    rows, cols = grid
    stages = []
    initial = synthesize(code).circuit
    stages.append(_stage_encoder("initial", initial, code, ctx))
    optimized = None
    if not skip_optimize:
        optimized, trace = optimize(initial)
        ctx.write("optimize_trace.json", trace.to_json(indent=2) + "\n")
        stages.append(_stage_encoder("optimized", optimized, code, ctx, rewrites=len(trace)))
    stages.append(_stage_route("initial", initial, rows, cols, ctx))
    if optimized is not None:
        stages.append(_stage_route("optimized", optimized, rows, cols, ctx))

    def column(label, census):
        return {"label": label, "cnot": census.get("cnot", 0), "cz": census.get("cz", 0),
                "h": census.get("h", 0), "z": census.get("z", 0),
                "single_qubit": census["single_qubit_total"], "total": census["single_qubit_total"] + census["two_qubit_total"]}

    by_name = {s["stage"]: s for s in stages}
    table = [column("initial encoder", by_name["initial"]["census"])]
    if optimized is not None:
        table.append(column("optimized encoder", by_name["optimized"]["census"]))
    table.append(column("initial encoder, NNC", by_name["route-initial"]["census"]))
    if optimized is not None:
        table.append(column("optimized encoder, NNC", by_name["route-optimized"]["census"]))
    table.append(dict(PRIOR_SEARCHED_ENCODER))
    report = {
        "grid": f"{rows}x{cols}",
        "stages": stages,
        "table": table,
        "passed": all(s["verdict"] == "PASS" for s in stages),
    }
    if optimized is not None:
        report["gates_saved"] = table[0]["total"] - table[1]["total"]
    failed = [s["stage"] for s in stages if s["verdict"] != "PASS"]
    if failed:
        report["failed_stages"] = failed
    ctx.write("report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report


def _render_demo(report: dict) -> str:
    lines = [f"grid {report['grid']}"]
    for s in report["stages"]:
        extra = f"  swaps={s['swap_count']}" if "swap_count" in s else ""
        lines.append(f"  {s['stage']:<16} {s['verdict']}{extra}")
    header = f"{'column':<48} {'CNOT':>4} {'CZ':>4} {'H':>4} {'Z':>4} {'1q':>4} {'all':>4}"
    lines += ["", header, "-" * len(header)]
    for col in report["table"]:
        def v(k):
            return str(col[k]) if k in col else "-"
        lines.append(f"{col['label']:<48} {v('cnot'):>4} {v('cz'):>4} {v('h'):>4} {v('z'):>4} "
                     f"{v('single_qubit'):>4} {v('total'):>4}")
    if "gates_saved" in report:
        lines.append(f"\ngates saved by optimization: {report['gates_saved']}")
    lines.append("overall: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines)


def cmd_demo(args, ctx: _Ctx) -> int:
    if ctx.out_dir is None:
        ctx.out_dir = Path("demo_out")
    report = run_demo(ctx, skip_optimize=args.skip_optimize, grid=_grid(args.grid))
    ctx.emit(report, _render_demo)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qencopt", description="Stabilizer encoder synthesis, optimization and routing.")
    parser.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    parser.add_argument("--out-dir", help="directory for output files given as relative paths")
    # The global flags are also accepted after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--out-dir", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="build a standard-form encoder for a stabilizer code")
    p.add_argument("--code", help="code file (default: the built-in five-qubit code)")
    p.add_argument("--out", help="circuit file (default: stdout)")
    p.add_argument("--no-expand-cy", action="store_true", help="keep CY gates instead of CZ+CNOT pairs")
    p.add_argument("--exact-logical-frame", action="store_true", help="also fix logical operator signs")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("optimize", parents=[common], help="rewrite a circuit into a cheaper equivalent")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--passes", help=f"comma-separated pass list (default: {','.join(DEFAULT_PASSES)})")
    p.add_argument("--trace", help="write the rewrite trace as JSON")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("route", parents=[common], help="insert swaps for a 2-D nearest-neighbour grid")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--grid", required=True, help="grid size RxC")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--layout", help="layout file with 'place <qubit> <row> <col>' lines")
    group.add_argument("--search", action="store_true", help="search all placements for the fewest swaps")
    p.add_argument("--decompose", action="store_true", help="write swaps as three CNOTs")
    p.add_argument("--out")
    p.add_argument("--report", help="write the routing report as JSON")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("verify", parents=[common], help="check a circuit encodes a stabilizer code")
    p.add_argument("--circuit", required=True)
    p.add_argument("--code", help="code file (default: the built-in five-qubit code)")
    p.add_argument("--strict", action="store_true", help="require +1 signs on logical images")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("linear", parents=[common], help="convert between CNOT circuits and GF(2) matrices")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", help="CNOT circuit to turn into a matrix")
    src.add_argument("--matrix", help="matrix file (rows of 0/1) to synthesize")
    p.add_argument("--method", choices=("gauss", "optimal"), default="gauss")
    p.add_argument("--out")
    p.set_defaults(func=cmd_linear)

    p = sub.add_parser("stats", parents=[common], help="gate census of a circuit")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("demo", parents=[common], help="run the full five-qubit pipeline")
    p.add_argument("--skip-optimize", action="store_true")
    p.add_argument("--grid", default="2x3")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, _Ctx(args))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
