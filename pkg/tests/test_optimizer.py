import random

from steinersynth import cancel_pass
from steinersynth.bench import random_universal_circuit
from steinersynth.circuits import Angle, Circuit, cnot, h, rz
from steinersynth.gf2 import simulate_cnot_circuit
from steinersynth.unitary import circuits_equivalent


def test_adjacent_cnot_pair_cancels():
    c = Circuit(2, (cnot(0, 1), cnot(0, 1)))
    assert len(cancel_pass(c)) == 0


def test_rz_angles_merge_mod_full_turn():
    c = Circuit(1, (rz(Angle(1, 8), 0), rz(Angle(7, 8), 0)))
    assert len(cancel_pass(c)) == 0
    c2 = Circuit(1, (rz(Angle(1, 8), 0), rz(Angle(1, 8), 0)))
    out = cancel_pass(c2)
    assert out.gates == (rz(Angle(1, 4), 0),)


def test_cancel_through_commuting_gate():
    c = Circuit(3, (cnot(0, 1), cnot(0, 2), cnot(0, 1)))
    out = cancel_pass(c)
    assert out.gates == (cnot(0, 2),)
    assert circuits_equivalent(c, out)


def test_blocked_pair_stays():
    c = Circuit(2, (cnot(0, 1), cnot(1, 0), cnot(0, 1)))
    assert len(cancel_pass(c)) == 3


def test_h_pair_cancels_across_disjoint():
    c = Circuit(2, (h(0), cnot(1, 0), h(0)))
    assert len(cancel_pass(c)) == 3  # blocked: cnot touches wire 0
    c2 = Circuit(3, (h(0), cnot(1, 2), h(0)))
    assert cancel_pass(c2).gates == (cnot(1, 2),)


def test_monotone_and_idempotent():
    rng = random.Random(5)
    probs = {"cnot": 0.55, "s": 0.1, "t": 0.1, "sdg": 0.05, "tdg": 0.05, "h": 0.15}
    for trial in range(40):
        n = rng.randint(2, 5)
        c = random_universal_circuit(n, 120, probs, trial)
        once = cancel_pass(c)
        assert len(once) <= len(c)
        assert circuits_equivalent(c, once)
        assert cancel_pass(once) == once


def test_preserves_gf2_matrix_on_cnot_circuits():
    rng = random.Random(6)
    for trial in range(30):
        n = rng.randint(2, 10)
        gates = tuple(cnot(*rng.sample(range(n), 2)) for _ in range(60))
        c = Circuit(n, gates)
        out = cancel_pass(c)
        assert simulate_cnot_circuit(out) == simulate_cnot_circuit(c)
