"""Phase-polynomial extraction and constrained parity-network synthesis.

A CNOT+RZ circuit is fully described by the pair (phase polynomial, linear
transformation): tracking each wire as a parity of the inputs, every RZ
contributes its angle to the coefficient of the parity it acts on.  Synthesis
inverts this: build a circuit in which every support parity appears on some
wire (placing the rotations as they appear), then append a CNOT circuit for
the leftover linear correction.

Parities are packed into integers (bit q set = input q participates).  All
angle arithmetic is exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .circuits import Angle, Circuit, Gate, cnot, rz
from .cnot_synth import SynthesisReport, _report, plan_pre_transpose, synthesize_constrained
from .gf2 import BinaryMatrix, invert, is_invertible, multiply, simulate_cnot_circuit
from .graphs import ConnectivityGraph, steiner_approx


def parity_to_bits(mask: int, n: int) -> str:
    """Render a parity mask as a bitstring, qubit 0 first."""
    return "".join("1" if (mask >> q) & 1 else "0" for q in range(n))


def parity_from_bits(bits: str) -> int:
    if set(bits) - {"0", "1"}:
        raise ValueError(f"bad parity bitstring {bits!r}")
    return sum((bits[q] == "1") << q for q in range(len(bits)))


@dataclass(frozen=True)
class PhasePolynomial:
    """Map from nonzero parity masks to nonzero exact angles."""

    num_qubits: int
    terms: dict[int, Angle] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mask, angle in self.terms.items():
            if mask == 0:
                raise ValueError("zero parity cannot carry a phase term")
            if mask >> self.num_qubits:
                raise ValueError(f"parity {mask:#x} wider than {self.num_qubits} qubits")
            if not angle.is_zero:
                clean[mask] = angle
        object.__setattr__(self, "terms", clean)

    def support(self) -> list[int]:
        return sorted(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PhasePolynomial)
            and self.num_qubits == other.num_qubits
            and self.terms == other.terms
        )


@dataclass(frozen=True)
class SumOverPaths:
    """The (phase polynomial, linear part) pair defining a CNOT+RZ unitary."""

    phase: PhasePolynomial
    linear: BinaryMatrix

    def __post_init__(self):
        if self.phase.num_qubits != self.linear.dim:
            raise ValueError("phase and linear part disagree on qubit count")
        if not is_invertible(self.linear):
            raise ValueError("linear part must be invertible")

    @property
    def num_qubits(self) -> int:
        return self.linear.dim


def extract_sum_over_paths(c: Circuit) -> SumOverPaths:
    """Walk a CNOT+RZ circuit, accumulating parities and rotation angles."""
    wires = [1 << q for q in range(c.num_qubits)]
    terms: dict[int, Angle] = {}
    for g in c.gates:
        if g.kind == "cnot":
            wires[g.target] ^= wires[g.control]
        elif g.kind == "rz":
            mask = wires[g.target]
            acc = terms.get(mask)
            terms[mask] = g.angle if acc is None else acc + g.angle
        else:
            raise ValueError(f"gate {g.kind!r} is outside the CNOT+RZ set")
    phase = PhasePolynomial(c.num_qubits, terms)
    return SumOverPaths(phase, BinaryMatrix(c.num_qubits, tuple(wires)))


def build_parity_matrix(s: SumOverPaths) -> list[int]:
    """Support parities as packed columns, in lexicographic bitstring order.

    Column masks use bit q for qubit q, so entry (q, k) of the conceptual
    matrix is bit q of column k.
    """
    n = s.num_qubits
    return sorted(s.phase.support(), key=lambda m: parity_to_bits(m, n))


def parity_matrix_lists(s: SumOverPaths) -> list[list[int]]:
    """The same matrix as nested lists (rows = qubits, columns = parities)."""
    cols = build_parity_matrix(s)
    n = s.num_qubits
    return [[(col >> q) & 1 for col in cols] for q in range(n)]


class _NetworkState:
    """Mutable synthesis state shared across the recursion."""

    def __init__(self, n: int, columns: dict[int, tuple[int, Angle]]):
        self.n = n
        # column id -> current mask (in the moving frame); angles fixed.
        self.masks = {cid: mask for cid, (mask, _) in columns.items()}
        self.angles = {cid: angle for cid, (_, angle) in columns.items()}
        self.pending = set(columns)
        self.wires = [1 << q for q in range(n)]  # physical wire parities
        self.gates: list[Gate] = []

    def emit_ready(self) -> None:
        """Place rotations for every pending parity now sitting on a wire."""
        for cid in sorted(self.pending):
            mask = self.masks[cid]
            if mask & (mask - 1) == 0:
                wire = mask.bit_length() - 1
                self.gates.append(rz(self.angles[cid], wire))
                self.pending.discard(cid)

    def add_cnot(self, control: int, target: int) -> None:
        self.gates.append(cnot(control, target))
        self.wires[target] ^= self.wires[control]
        # In the moving frame a CNOT adds the *target* row into the *control*
        # row of the parity table.
        for cid in self.pending:
            if (self.masks[cid] >> target) & 1:
                self.masks[cid] ^= 1 << control
        self.emit_ready()


def _fold_rows(state: _NetworkState, cols: list[int], pivot: int, g: ConnectivityGraph) -> None:
    """Clear every all-ones row of the pivot's one-block via one Steiner plan.

    Rows that equal one across all the given columns are terminals; the plan
    adds the pivot row into each of them (in the parity table), which zeroes
    them there.  Row ops on the table map to reversed CNOTs on the circuit.
    """
    live = [c for c in cols if c in state.pending]
    if not live:
        return
    ones = None
    for cid in live:
        ones = state.masks[cid] if ones is None else ones & state.masks[cid]
    terms = {q for q in range(state.n) if (ones >> q) & 1 and q != pivot}
    if not terms:
        return
    tree = steiner_approx(g, terms | {pivot}, root=pivot)
    plan = plan_pre_transpose(tree)
    for op in plan.ops():
        # Table row op "row target ^= row control" is the circuit CNOT with
        # the roles swapped.
        state.add_cnot(op.target, op.control)


def synth_parity_network_constrained(
    s: SumOverPaths, g: ConnectivityGraph
) -> tuple[Circuit, BinaryMatrix]:
    """Build an edge-legal circuit realizing every support parity.

    Follows the cofactor recursion over the parity table: pick the row with
    the most extreme 0/1 split, recurse on the zero side, fold the one side
    together along a Steiner tree, recurse on the rest.  Each rotation is
    emitted the first moment its parity is realized on a wire.  Returns the
    circuit and the linear transformation it applies.
    """
    n = s.num_qubits
    if n != g.node_count:
        raise ValueError(f"instance has {n} qubits but graph has {g.node_count}")
    columns = {
        cid: (mask, s.phase.terms[mask]) for cid, mask in enumerate(build_parity_matrix(s))
    }
    state = _NetworkState(n, columns)
    state.emit_ready()

    def recurse(cols: list[int], candidates: set[int]) -> None:
        cols = [c for c in cols if c in state.pending]
        if not cols:
            return
        if not candidates:
            # Candidates exhausted with work left: fold each column onto its
            # lowest participating wire directly.
            for cid in list(cols):
                if cid not in state.pending:
                    continue
                pivot = (state.masks[cid] & -state.masks[cid]).bit_length() - 1
                _fold_rows(state, [cid], pivot, g)
            return
        best = None
        for j in sorted(candidates):
            ones = sum((state.masks[c] >> j) & 1 for c in cols)
            score = max(ones, len(cols) - ones)
            if best is None or score > best[0]:
                best = (score, j)
        j = best[1]
        zeros = [c for c in cols if not (state.masks[c] >> j) & 1]
        ones = [c for c in cols if (state.masks[c] >> j) & 1]
        recurse(zeros, candidates - {j})
        if ones:
            _fold_rows(state, ones, j, g)
            recurse(ones, candidates - {j})

    recurse(sorted(columns), set(range(n)))
    assert not state.pending, "some parities were never realized"
    circuit = Circuit(n, tuple(state.gates))
    linear = BinaryMatrix(n, tuple(state.wires))
    assert simulate_cnot_circuit(
        Circuit(n, tuple(g for g in circuit.gates if g.kind == "cnot"))
    ) == linear
    return circuit, linear


def synthesize_cnot_rz(
    s: SumOverPaths, g: ConnectivityGraph
) -> tuple[Circuit, SynthesisReport]:
    """Full CNOT+RZ synthesis: parity network plus linear fixup.

    The parity network realizes the phase polynomial and applies some linear
    map C; a constrained CNOT synthesis of A @ C^-1 is appended so the whole
    circuit applies exactly the requested linear part A.
    """
    t0 = time.perf_counter()
    network, c_matrix = synth_parity_network_constrained(s, g)
    fixup_target = multiply(s.linear, invert(c_matrix))
    fixup, _ = synthesize_constrained(fixup_target, g)
    circuit = network.extended(fixup.gates)
    report = _report("steiner_rz", g.name, circuit, t0)
    return circuit, report
