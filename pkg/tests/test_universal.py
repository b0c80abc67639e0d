import itertools
import random

import numpy as np
import pytest

from steinersynth import (
    commutes,
    merge_delete_h,
    partition_segments,
    random_connected_graph,
    route_universal,
)
from steinersynth.bench import random_universal_circuit
from steinersynth.circuits import Angle, Circuit, cnot, h, rz
from steinersynth.graphs import line_graph
from steinersynth.unitary import circuit_unitary, circuits_equivalent, gate_unitary
from steinersynth.universal import Segment, segments_to_circuit
from steinersynth.verify import edge_legal


def all_gates_up_to(n):
    out = []
    for c, t in itertools.permutations(range(n), 2):
        out.append(cnot(c, t))
    for q in range(n):
        out.append(h(q))
        out.append(rz(Angle(1, 8), q))
        out.append(rz(Angle(1, 4), q))
    return out


def test_commutes_sound_against_matrices():
    # Exhaustive soundness: claiming commutation implies the matrices agree.
    n = 3
    for a in all_gates_up_to(n):
        for b in all_gates_up_to(n):
            ua, ub = gate_unitary(a, n), gate_unitary(b, n)
            matrices_commute = np.allclose(ua @ ub, ub @ ua, atol=1e-12)
            if commutes(a, b):
                assert matrices_commute, f"{a} vs {b}"


def test_commutes_expected_pairs():
    assert commutes(cnot(0, 1), cnot(0, 2))        # shared control
    assert commutes(cnot(1, 0), cnot(2, 0))        # shared target
    assert commutes(rz(Angle(1, 8), 0), cnot(0, 1))  # rotation on control
    assert not commutes(rz(Angle(1, 8), 1), cnot(0, 1))
    assert not commutes(h(0), cnot(0, 1))
    assert commutes(h(0), cnot(1, 2))


def test_merge_delete_h_pairs():
    assert len(merge_delete_h(Circuit(1, (h(0), h(0))))) == 0
    c = Circuit(2, (h(0), rz(Angle(1, 8), 1), h(0)))
    out = merge_delete_h(c)
    assert out.gates == (rz(Angle(1, 8), 1),)


def test_merge_delete_h_s_conjugation():
    c = Circuit(1, (h(0), rz(Angle(1, 4), 0), h(0)))
    out = merge_delete_h(c)
    assert out.count("h") == 1
    assert circuits_equivalent(c, out)


def test_merge_delete_h_random_equivalence():
    rng = random.Random(3)
    probs = {"cnot": 0.4, "s": 0.05, "t": 0.05, "sdg": 0.05, "tdg": 0.05, "h": 0.4}
    for trial in range(50):
        n = rng.randint(2, 4)
        c = random_universal_circuit(n, 200, probs, trial)
        out = merge_delete_h(c)
        assert out.count("h") <= c.count("h")
        assert circuits_equivalent(c, out)


def test_partition_no_h_single_block():
    c = Circuit(3, (cnot(0, 1), rz(Angle(1, 8), 2), cnot(1, 2)))
    segs = partition_segments(c)
    assert [s.kind for s in segs] == ["cnot_block"]
    assert segs[0].gates == c.gates


def test_partition_disjoint_h_commutes_out():
    c = Circuit(3, (cnot(0, 1), h(2), cnot(0, 1)))
    segs = partition_segments(c)
    cnot_blocks = [s for s in segs if s.kind == "cnot_block"]
    assert max(len(s.gates) for s in cnot_blocks) == 2


def test_partition_preserves_gates_and_unitary():
    rng = random.Random(8)
    probs = {"cnot": 0.6, "s": 0.05, "t": 0.05, "sdg": 0.02, "tdg": 0.03, "h": 0.25}
    for trial in range(40):
        n = rng.randint(2, 4)
        c = random_universal_circuit(n, 100, probs, trial + 40)
        segs = partition_segments(c)
        rebuilt = segments_to_circuit(segs, n)
        assert len(rebuilt) == len(c)
        assert circuits_equivalent(c, rebuilt)
        for seg in segs:
            kinds = {g.kind for g in seg.gates}
            if seg.kind == "h_block":
                assert kinds <= {"h"}
            else:
                assert kinds <= {"cnot", "rz"}


def test_segment_kind_validation():
    with pytest.raises(ValueError):
        Segment("h_block", (cnot(0, 1),))


def test_route_h_free_reduces_to_phase_synthesis():
    g = line_graph(4)
    c = Circuit(4, (cnot(0, 3), rz(Angle(1, 8), 2)))
    routed, _ = route_universal(c, g)
    assert routed.count("h") == 0
    assert circuits_equivalent(c, routed)
    assert edge_legal(routed, g)


def test_route_small_mixed_circuit():
    g = line_graph(3)
    c = Circuit(3, (rz(Angle(1, 8), 0), cnot(0, 2), h(1), cnot(2, 0)))
    routed, _ = route_universal(c, g)
    assert edge_legal(routed, g)
    assert circuits_equivalent(c, routed)


def test_route_random_universal_circuits():
    rng = random.Random(77)
    for trial in range(30):
        n = rng.randint(2, 6)
        g = random_connected_graph(n, rng.uniform(0.4, 1.0), trial)
        p_h = rng.uniform(0.0, 0.2)
        probs = {"s": 0.01, "t": 0.01, "sdg": 0.01, "tdg": 0.01,
                 "h": p_h, "cnot": 0.96 - p_h}
        c = random_universal_circuit(n, 60, probs, trial)
        routed, report = route_universal(c, g)
        assert edge_legal(routed, g)
        assert circuits_equivalent(c, routed)
        assert report.cnot_count == routed.cnot_count


def test_route_wire_count_mismatch():
    with pytest.raises(ValueError):
        route_universal(Circuit(3), line_graph(4))


def test_unitary_oracle_agrees_with_gf2():
    # A CNOT-only circuit's unitary must be the basis permutation of its matrix.
    from steinersynth import simulate_cnot_circuit

    c = Circuit(3, (cnot(0, 1), cnot(2, 1), cnot(0, 2)))
    m = simulate_cnot_circuit(c)
    u = circuit_unitary(c)
    for x in range(8):
        y = 0
        for i in range(3):
            bit = 0
            for j in range(3):
                bit ^= m.bit(i, j) & (x >> j)
            y |= (bit & 1) << i
        assert abs(u[y, x] - 1) < 1e-12
