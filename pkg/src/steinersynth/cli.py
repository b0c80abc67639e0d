"""Command-line interface.

Exit codes: 0 = success / verified, 1 = verification failure, 2 = bad input.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from . import bench as bench_mod
from .circuits import Angle, Circuit, emit_circuit, parse_circuit
from .cnot_synth import _report, expand_templates, pmh_synthesize, synthesize_constrained
from .gf2 import parse_matrix, simulate_cnot_circuit
from .graphs import (
    builtin_architecture,
    emit_graph,
    list_architectures,
    parse_graph,
    random_connected_graph,
)
from .optimizer import cancel_pass
from .phase_synth import (
    PhasePolynomial,
    SumOverPaths,
    extract_sum_over_paths,
    parity_from_bits,
    synthesize_cnot_rz,
)
from .universal import route_universal
from .verify import edge_legal, verify_equivalence

INPUT_ERROR = 2
VERIFY_FAIL = 1


def _fail_input(msg: str) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(INPUT_ERROR)


def _load_graph(graph_file: str | None, arch: str | None):
    if (graph_file is None) == (arch is None):
        _fail_input("provide exactly one of --graph or --arch")
    try:
        if graph_file is not None:
            return parse_graph(Path(graph_file).read_text(), name=Path(graph_file).stem)
        return builtin_architecture(arch)
    except (OSError, ValueError) as exc:
        _fail_input(str(exc))


def _write_outputs(circuit: Circuit, report, out: str | None, report_file: str | None,
                   seed: int | None = None) -> None:
    text = emit_circuit(circuit)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    if report_file:
        data = report.to_dict()
        data["seed"] = seed
        Path(report_file).write_text(json.dumps(data, indent=2) + "\n")


@click.group()
def main():
    """Connectivity-aware CNOT / CNOT+RZ circuit synthesis."""


@main.command("synth-cnot")
@click.option("--matrix", "matrix_file", required=True, type=click.Path(exists=True))
@click.option("--graph", "graph_file", type=click.Path(exists=True))
@click.option("--arch", type=str)
@click.option("--baseline", type=click.Choice(["pmh", "templates"]),
              help="synthesize ignoring connectivity (partitioned or plain "
                   "elimination) and expand long-range CNOTs afterwards")
@click.option("--out", type=click.Path())
@click.option("--report", "report_file", type=click.Path())
@click.option("--no-cleanup", is_flag=True, help="skip the cancel pass")
def synth_cnot(matrix_file, graph_file, arch, baseline, out, report_file, no_cleanup):
    """Synthesize an edge-legal CNOT circuit for a GF(2) matrix."""
    g = _load_graph(graph_file, arch)
    try:
        a = parse_matrix(Path(matrix_file).read_text())
    except (OSError, ValueError) as exc:
        _fail_input(str(exc))
    if a.dim != g.node_count:
        _fail_input(f"matrix dim {a.dim} != graph nodes {g.node_count}")
    if baseline:
        t0 = time.perf_counter()
        circuit = expand_templates(pmh_synthesize(a, partition=(baseline == "pmh")), g)
        report = _report(f"baseline_{baseline}", g.name, circuit, t0)
    else:
        circuit, report = synthesize_constrained(a, g)
    if not no_cleanup:
        circuit = cancel_pass(circuit)
        report.cnot_count = circuit.cnot_count
        report.depth = circuit.depth()
    if simulate_cnot_circuit(circuit) != a or not edge_legal(circuit, g):
        click.echo("verification FAILED", err=True)
        sys.exit(VERIFY_FAIL)
    _write_outputs(circuit, report, out, report_file)


def _load_phase_file(path: str, n: int) -> PhasePolynomial:
    terms = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            _fail_input(f"{path}:{lineno}: expected 'bitstring num/den'")
        if len(parts[0]) != n:
            _fail_input(f"{path}:{lineno}: bitstring length != matrix dim {n}")
        mask = parity_from_bits(parts[0])
        angle = Angle.parse(parts[1])
        terms[mask] = terms.get(mask, Angle(0)) + angle
    return PhasePolynomial(n, terms)


@main.command("synth-phase")
@click.option("--circuit", "circuit_file", type=click.Path(exists=True))
@click.option("--phase", "phase_file", type=click.Path(exists=True))
@click.option("--matrix", "matrix_file", type=click.Path(exists=True))
@click.option("--graph", "graph_file", type=click.Path(exists=True))
@click.option("--arch", type=str)
@click.option("--out", type=click.Path())
@click.option("--report", "report_file", type=click.Path())
@click.option("--no-cleanup", is_flag=True)
def synth_phase(circuit_file, phase_file, matrix_file, graph_file, arch, out,
                report_file, no_cleanup):
    """Re-synthesize a CNOT+RZ circuit (or a phase file + matrix) edge-legally."""
    g = _load_graph(graph_file, arch)
    try:
        if circuit_file:
            source = parse_circuit(Path(circuit_file).read_text())
            if source.num_qubits != g.node_count:
                _fail_input("circuit wire count does not match the graph")
            target = extract_sum_over_paths(source)
        elif phase_file and matrix_file:
            linear = parse_matrix(Path(matrix_file).read_text())
            phase = _load_phase_file(phase_file, linear.dim)
            target = SumOverPaths(phase, linear)
            if linear.dim != g.node_count:
                _fail_input("matrix dim does not match the graph")
        else:
            _fail_input("provide --circuit or both --phase and --matrix")
    except ValueError as exc:
        _fail_input(str(exc))
    circuit, report = synthesize_cnot_rz(target, g)
    if not no_cleanup:
        circuit = cancel_pass(circuit)
        report.cnot_count = circuit.cnot_count
        report.rz_count = circuit.count("rz")
        report.depth = circuit.depth()
    back = extract_sum_over_paths(circuit)
    if back.phase != target.phase or back.linear != target.linear or not edge_legal(circuit, g):
        click.echo("verification FAILED", err=True)
        sys.exit(VERIFY_FAIL)
    _write_outputs(circuit, report, out, report_file)


@main.command("route")
@click.option("--circuit", "circuit_file", required=True, type=click.Path(exists=True))
@click.option("--graph", "graph_file", type=click.Path(exists=True))
@click.option("--arch", type=str)
@click.option("--out", type=click.Path())
@click.option("--report", "report_file", type=click.Path())
@click.option("--verify-n-max", default=6, show_default=True,
              help="dense verification cap; larger circuits skip it")
@click.option("--no-cleanup", is_flag=True)
def route(circuit_file, graph_file, arch, out, report_file, verify_n_max, no_cleanup):
    """Route a {CNOT, RZ, H} circuit onto a coupling graph."""
    g = _load_graph(graph_file, arch)
    try:
        c = parse_circuit(Path(circuit_file).read_text())
    except ValueError as exc:
        _fail_input(str(exc))
    if c.num_qubits != g.node_count:
        _fail_input("circuit wire count does not match the graph")
    routed, report = route_universal(c, g)
    if not no_cleanup:
        routed = cancel_pass(routed)
        report.cnot_count = routed.cnot_count
        report.rz_count = routed.count("rz")
        report.h_count = routed.count("h")
        report.depth = routed.depth()
    ok = edge_legal(routed, g)
    if ok and c.num_qubits <= verify_n_max:
        ok = verify_equivalence(c, routed, "unitary").equivalent
    if not ok:
        click.echo("verification FAILED", err=True)
        sys.exit(VERIFY_FAIL)
    _write_outputs(routed, report, out, report_file)


@main.command("verify")
@click.argument("circuit_a", type=click.Path(exists=True))
@click.argument("circuit_b", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["auto", "gf2", "unitary"]), default="auto")
def verify_cmd(circuit_a, circuit_b, mode):
    """Check two circuit files for equivalence."""
    try:
        a = parse_circuit(Path(circuit_a).read_text())
        b = parse_circuit(Path(circuit_b).read_text())
        rep = verify_equivalence(a, b, mode)
    except ValueError as exc:
        _fail_input(str(exc))
    click.echo(f"mode={rep.mode} equivalent={rep.equivalent} deviation={rep.deviation:.3e}")
    sys.exit(0 if rep.equivalent else VERIFY_FAIL)


@main.group("bench")
def bench_group():
    """Random benchmark suites (CSV output)."""


def _emit_csv(text: str, csv_path: str | None) -> None:
    if csv_path:
        Path(csv_path).write_text(text)
    else:
        click.echo(text, nl=False)


@bench_group.command("sparseness")
@click.option("--n", default=20, show_default=True)
@click.option("--trials", default=20, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--mode", type=click.Choice(["cnot", "cnot_rz"]), default="cnot")
@click.option("--csv", "csv_path", type=click.Path())
@click.option("--no-cleanup", is_flag=True)
def bench_sparseness_cmd(n, trials, seed, mode, csv_path, no_cleanup):
    cfg = bench_mod.BenchConfig(n=n, trials=trials, seed=seed, mode=mode)
    _emit_csv(bench_mod.bench_sparseness(cfg, cleanup=not no_cleanup), csv_path)


@bench_group.command("arch")
@click.option("--arch", required=True)
@click.option("--sizes", default="", help="comma list; defaults to the full device")
@click.option("--trials", default=10, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--mode", type=click.Choice(["cnot", "cnot_rz"]), default="cnot")
@click.option("--csv", "csv_path", type=click.Path())
@click.option("--no-cleanup", is_flag=True)
def bench_arch_cmd(arch, sizes, trials, seed, mode, csv_path, no_cleanup):
    try:
        g = builtin_architecture(arch)
        size_list = [int(s) for s in sizes.split(",") if s] or [g.node_count]
        text = bench_mod.bench_architecture(
            arch, size_list, trials, seed, mode, cleanup=not no_cleanup
        )
    except ValueError as exc:
        _fail_input(str(exc))
    _emit_csv(text, csv_path)


@bench_group.command("h-ratio")
@click.option("--n", default=20, show_default=True)
@click.option("--gates", default=1000, show_default=True)
@click.option("--trials", default=5, show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--arch", default=None, help="named architecture; default random graph")
@click.option("--sparseness", default=0.3, show_default=True)
@click.option("--csv", "csv_path", type=click.Path())
@click.option("--no-cleanup", is_flag=True)
def bench_h_ratio_cmd(n, gates, trials, seed, arch, sparseness, csv_path, no_cleanup):
    try:
        if arch:
            g = builtin_architecture(arch)
        else:
            g = random_connected_graph(n, sparseness, seed)
        cfg = bench_mod.BenchConfig(n=g.node_count, trials=trials, seed=seed, gate_count=gates)
        text = bench_mod.bench_h_ratio(cfg, g, cleanup=not no_cleanup)
    except ValueError as exc:
        _fail_input(str(exc))
    _emit_csv(text, csv_path)


@main.group("arch")
def arch_group():
    """Built-in architecture helpers."""


@arch_group.command("list")
def arch_list():
    for name in list_architectures():
        click.echo(name)


@arch_group.command("show")
@click.argument("name")
def arch_show(name):
    try:
        g = builtin_architecture(name)
    except ValueError as exc:
        _fail_input(str(exc))
    click.echo(emit_graph(g), nl=False)


if __name__ == "__main__":
    main()
