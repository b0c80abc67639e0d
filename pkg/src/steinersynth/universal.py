"""Routing pipeline for circuits over {CNOT, RZ, H}.

Hadamard gates break the phase-polynomial picture, so the circuit is cut
into alternating H-only and CNOT+RZ segments.  A two-pass commutation
heuristic grows the CNOT+RZ segments as large as possible, each segment is
re-synthesized against the coupling graph, and the H gates pass through
untouched (single-qubit gates need no routing).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .circuits import Angle, Circuit, Gate, h, rz
from .cnot_synth import SynthesisReport, _report
from .graphs import ConnectivityGraph
from .phase_synth import extract_sum_over_paths, synthesize_cnot_rz

_S = Angle(1, 4)
_SDG = Angle(3, 4)


def commutes(a: Gate, b: Gate) -> bool:
    """Conservative commutation test (never true when the matrices differ).

    Rules: disjoint supports always commute; CNOTs sharing a control or
    sharing a target commute; an RZ commutes with anything diagonal on its
    wire and with a CNOT through the CNOT's control; H commutes only on
    disjoint wires.
    """
    if not set(a.qubits) & set(b.qubits):
        return True
    if a.kind == "cnot" and b.kind == "cnot":
        return a.control == b.control or a.target == b.target
    if "h" in (a.kind, b.kind):
        return False
    if a.kind == "rz" and b.kind == "rz":
        return True
    rz_gate, cx = (a, b) if a.kind == "rz" else (b, a)
    return rz_gate.target == cx.control


def merge_delete_h(c: Circuit) -> Circuit:
    """Reduce the Hadamard count by pair deletion and S-conjugation merges.

    Two H gates on a wire with nothing touching that wire between them
    cancel.  An H / S-or-Sdg / H sandwich on a wire rewrites to the
    conjugated form with a single H (equal up to global phase).
    """
    gates = list(c.gates)

    def next_on_wire(start: int, wire: int) -> int | None:
        for j in range(start, len(gates)):
            if wire in gates[j].qubits:
                return j
        return None

    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gates):
            if g.kind != "h":
                continue
            q = g.target
            j = next_on_wire(i + 1, q)
            if j is None:
                continue
            if gates[j] == g:
                del gates[j], gates[i]
                changed = True
                break
            mid = gates[j]
            if mid.kind == "rz" and mid.angle in (_S, _SDG):
                k = next_on_wire(j + 1, q)
                if k is not None and gates[k] == g:
                    conj = rz(-mid.angle, q)
                    gates[i], gates[j], gates[k] = conj, h(q), conj
                    changed = True
                    break
    return Circuit(c.num_qubits, tuple(gates))


@dataclass(frozen=True)
class Segment:
    """One alternation block: kind is "h_block" or "cnot_block"."""

    kind: str
    gates: tuple[Gate, ...]

    def __post_init__(self):
        want = "h" if self.kind == "h_block" else ("cnot", "rz")
        for g in self.gates:
            if g.kind not in want:
                raise ValueError(f"{g.kind} gate inside a {self.kind}")


def partition_segments(c: Circuit) -> list[Segment]:
    """Cut into alternating H / CNOT+RZ segments, grown by commutation.

    After the naive cut, every CNOT+RZ gate is commuted forward as far as
    possible and dropped into the largest reachable segment (ties go to the
    earlier one); a second pass repeats the process commuting backward.
    """
    # blocks[i] = (uid, gate) list; kinds[i] alternates between block kinds.
    kinds: list[str] = []
    blocks: list[list[tuple[int, Gate]]] = []
    for uid, g in enumerate(c.gates):
        kind = "h_block" if g.kind == "h" else "cnot_block"
        if not kinds or kinds[-1] != kind:
            kinds.append(kind)
            blocks.append([])
        blocks[-1].append((uid, g))

    def locate(uid: int) -> tuple[int, int]:
        for bi, blk in enumerate(blocks):
            for gi, (u, _) in enumerate(blk):
                if u == uid:
                    return bi, gi
        raise AssertionError(f"lost track of gate {uid}")

    def relocate(movers: list[int], forward: bool) -> None:
        for uid in movers:
            bi, gi = locate(uid)
            v = blocks[bi][gi][1]
            positions = [
                (obi, ogi) for obi, blk in enumerate(blocks) for ogi in range(len(blk))
            ]
            at = positions.index((bi, gi))
            span = positions[at + 1 :] if forward else positions[:at][::-1]
            candidates = [bi]
            for obi, ogi in span:
                if not commutes(v, blocks[obi][ogi][1]):
                    break
                if kinds[obi] == "cnot_block" and obi != candidates[-1]:
                    candidates.append(obi)
            best = max(candidates, key=lambda b: (len(blocks[b]), -b))
            if best == bi:
                continue
            item = blocks[bi].pop(gi)
            if forward:
                blocks[best].insert(0, item)
            else:
                blocks[best].append(item)

    movers = [uid for uid, g in enumerate(c.gates) if g.kind != "h"]
    relocate(movers[::-1], forward=True)
    relocate(movers, forward=False)

    segments = [
        Segment(kind, tuple(g for _, g in blk))
        for kind, blk in zip(kinds, blocks)
        if blk
    ]
    return segments


def segments_to_circuit(segments: list[Segment], num_qubits: int) -> Circuit:
    gates: list[Gate] = []
    for seg in segments:
        gates.extend(seg.gates)
    return Circuit(num_qubits, tuple(gates))


def route_universal(
    c: Circuit, g: ConnectivityGraph
) -> tuple[Circuit, SynthesisReport]:
    """Route a {CNOT, RZ, H} circuit onto the coupling graph.

    H segments pass through; every CNOT+RZ segment is re-synthesized from
    its phase-polynomial form under the connectivity constraints.  Wire
    numbering is the identity map throughout: each segment implements its
    full linear transformation on the original wires.
    """
    if c.num_qubits != g.node_count:
        raise ValueError(f"circuit has {c.num_qubits} wires, graph {g.node_count} nodes")
    t0 = time.perf_counter()
    reduced = merge_delete_h(c)
    gates: list[Gate] = []
    for seg in partition_segments(reduced):
        if seg.kind == "h_block":
            gates.extend(seg.gates)
            continue
        sop = extract_sum_over_paths(Circuit(c.num_qubits, seg.gates))
        synth, _ = synthesize_cnot_rz(sop, g)
        gates.extend(synth.gates)
    circuit = Circuit(c.num_qubits, tuple(gates))
    return circuit, _report("route", g.name, circuit, t0)
