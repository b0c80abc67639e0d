import json

from click.testing import CliRunner

from steinersynth import emit_circuit, emit_graph, emit_matrix, random_invertible
from steinersynth.bench import (
    BenchConfig,
    bench_architecture,
    bench_h_ratio,
    bench_sparseness,
    random_universal_circuit,
)
from steinersynth.circuits import Circuit, cnot
from steinersynth.cli import main
from steinersynth.graphs import line_graph


def small_cfg(**kw):
    defaults = dict(n=6, trials=2, seed=3, sparseness_values=(0.4, 1.0), gate_count=30)
    defaults.update(kw)
    return BenchConfig(**defaults)


def test_bench_sparseness_deterministic_and_verified():
    a = bench_sparseness(small_cfg())
    b = bench_sparseness(small_cfg())
    assert a == b
    assert "# excluded_unverified 0" in a
    rows = [ln for ln in a.splitlines() if ln and not ln.startswith(("#", "sparseness"))]
    assert len(rows) == 4  # 2 buckets x 2 trials
    assert all(ln.endswith(",1") for ln in rows)


def test_bench_sparseness_cnot_rz_mode():
    out = bench_sparseness(small_cfg(mode="cnot_rz", support_terms=5))
    assert "# excluded_unverified 0" in out


def test_bench_sparseness_complete_graph_bucket():
    # At sparseness 1.0 template expansion adds nothing, so the baseline
    # column equals the bare partitioned-elimination count.
    from steinersynth.bench import baseline_pmh_templates
    from steinersynth.graphs import complete_graph
    from steinersynth.cnot_synth import pmh_synthesize

    a = random_invertible(6, 11)
    g = complete_graph(6)
    base = baseline_pmh_templates(a, g, cleanup=False)
    assert base.cnot_count == min(
        pmh_synthesize(a, partition=True, section=w).cnot_count for w in (2, 3)
    )


def test_bench_architecture_smoke():
    out = bench_architecture("tokyo20", [6, 10], trials=2, seed=5)
    assert out.splitlines()[0] == "size,trial,seed,constrained_cnots,baseline_cnots,verified"
    assert out == bench_architecture("tokyo20", [6, 10], trials=2, seed=5)


def test_bench_h_ratio_smoke():
    cfg = BenchConfig(n=5, trials=2, seed=7, gate_count=40)
    out = bench_h_ratio(cfg, line_graph(5), h_values=(0.0, 0.2))
    assert "# excluded_unverified 0" in out
    assert out == bench_h_ratio(cfg, line_graph(5), h_values=(0.0, 0.2))


def test_cli_synth_cnot_roundtrip(tmp_path):
    runner = CliRunner()
    m = random_invertible(6, 9)
    matrix = tmp_path / "m.txt"
    matrix.write_text(emit_matrix(m))
    graph = tmp_path / "g.txt"
    graph.write_text(emit_graph(line_graph(6)))
    out = tmp_path / "c.txt"
    report = tmp_path / "r.json"
    res = runner.invoke(
        main,
        ["synth-cnot", "--matrix", str(matrix), "--graph", str(graph),
         "--out", str(out), "--report", str(report)],
    )
    assert res.exit_code == 0, res.output
    data = json.loads(report.read_text())
    assert data["counts"]["cnot"] == data["counts"]["total"]
    assert data["method"] == "steiner"

    # the emitted circuit verifies as equivalent to itself via the CLI
    res2 = runner.invoke(main, ["verify", str(out), str(out)])
    assert res2.exit_code == 0


def test_cli_synth_cnot_baseline_and_errors(tmp_path):
    runner = CliRunner()
    m = random_invertible(4, 2)
    matrix = tmp_path / "m.txt"
    matrix.write_text(emit_matrix(m))
    res = runner.invoke(
        main, ["synth-cnot", "--matrix", str(matrix), "--arch", "line(4)",
               "--baseline", "pmh"]
    )
    assert res.exit_code == 0, res.output
    res_bad = runner.invoke(
        main, ["synth-cnot", "--matrix", str(matrix), "--arch", "line(9)"]
    )
    assert res_bad.exit_code == 2


def test_cli_verify_detects_difference(tmp_path):
    runner = CliRunner()
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text(emit_circuit(Circuit(2, (cnot(0, 1),))))
    b.write_text(emit_circuit(Circuit(2, (cnot(1, 0),))))
    res = runner.invoke(main, ["verify", str(a), str(b)])
    assert res.exit_code == 1


def test_cli_synth_phase_from_files(tmp_path):
    runner = CliRunner()
    phase = tmp_path / "p.txt"
    phase.write_text("1100 1/8\n0110 3/4\n")
    matrix = tmp_path / "m.txt"
    matrix.write_text(emit_matrix(random_invertible(4, 5)))
    graph = tmp_path / "g.txt"
    graph.write_text(emit_graph(line_graph(4)))
    res = runner.invoke(
        main, ["synth-phase", "--phase", str(phase), "--matrix", str(matrix),
               "--graph", str(graph)]
    )
    assert res.exit_code == 0, res.output
    assert "rz" in res.output


def test_cli_route_and_arch(tmp_path):
    runner = CliRunner()
    circ = tmp_path / "c.txt"
    c = random_universal_circuit(
        5, 30, {"cnot": 0.7, "t": 0.1, "s": 0.05, "sdg": 0.0, "tdg": 0.05, "h": 0.1}, 3
    )
    circ.write_text(emit_circuit(c))
    graph = tmp_path / "g.txt"
    graph.write_text(emit_graph(line_graph(5)))
    res = runner.invoke(main, ["route", "--circuit", str(circ), "--graph", str(graph)])
    assert res.exit_code == 0, res.output

    res_list = runner.invoke(main, ["arch", "list"])
    assert "bristlecone72" in res_list.output
    res_show = runner.invoke(main, ["arch", "show", "tokyo20"])
    assert res_show.output.startswith("20 ")


def test_cli_bench_subcommands(tmp_path):
    runner = CliRunner()
    csv = tmp_path / "out.csv"
    res = runner.invoke(
        main, ["bench", "arch", "--arch", "line(5)", "--trials", "1", "--csv", str(csv)]
    )
    assert res.exit_code == 0, res.output
    assert csv.read_text().startswith("size,trial")
