"""Commute-and-cancel peephole cleanup.

Runs to a fixpoint: identical CNOT or H pairs cancel and same-wire RZ
angles merge whenever one gate can commute up to the other within a bounded
lookahead window.  Gate count never increases, and the unitary (up to
global phase) never changes.
"""

from __future__ import annotations

from .circuits import Circuit, rz
from .universal import commutes

DEFAULT_WINDOW = 32


def cancel_pass(c: Circuit, window: int = DEFAULT_WINDOW) -> Circuit:
    gates = list(c.gates)
    while True:
        changed = False
        removed = [False] * len(gates)
        for i in range(len(gates)):
            if removed[i]:
                continue
            g = gates[i]
            j, steps = i + 1, 0
            while j < len(gates) and steps < window:
                if removed[j]:
                    j += 1
                    continue
                other = gates[j]
                steps += 1
                if g.kind in ("cnot", "h") and other == g:
                    removed[i] = removed[j] = True
                    changed = True
                    break
                if g.kind == "rz" and other.kind == "rz" and other.target == g.target:
                    merged = g.angle + other.angle
                    removed[j] = True
                    changed = True
                    if merged.is_zero:
                        removed[i] = True
                        break
                    gates[i] = g = rz(merged, g.target)
                    j += 1
                    continue
                if not commutes(g, other):
                    break
                j += 1
        gates = [x for k, x in enumerate(gates) if not removed[k]]
        if not changed:
            return Circuit(c.num_qubits, tuple(gates))
