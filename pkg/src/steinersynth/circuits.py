"""Circuit, gate and angle types plus the line-based circuit text format.

Angles are exact rationals measured in full turns (1 turn = 2*pi), reduced
and normalized into [0, 1).  All phase bookkeeping in the package stays in
this exact representation; floats only appear when a dense unitary is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class CircuitFormatError(ValueError):
    """Malformed circuit text; carries the offending line number."""

    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


@dataclass(frozen=True, order=True)
class Angle:
    """Exact rotation angle as a reduced fraction of a full turn in [0, 1)."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        f = Fraction(self.numerator, self.denominator) % 1
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(int(num), int(den))
        return cls(int(text))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def turns(self) -> float:
        return self.numerator / self.denominator

    def __add__(self, other: "Angle") -> "Angle":
        f = self.fraction + other.fraction
        return Angle(f.numerator, f.denominator)

    def __neg__(self) -> "Angle":
        f = -self.fraction
        return Angle(f.numerator, f.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


# Named z-rotations and their angles in turns.
NAMED_ANGLES = {
    "s": Angle(1, 4),
    "t": Angle(1, 8),
    "sdg": Angle(3, 4),
    "tdg": Angle(7, 8),
}


@dataclass(frozen=True)
class Gate:
    """A gate over {CNOT, RZ, H}: kind is "cnot", "rz" or "h".

    For CNOT, qubits = (control, target); otherwise a single target wire.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: Angle | None = None

    def __post_init__(self):
        if self.kind == "cnot":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"bad cnot wires {self.qubits}")
        elif self.kind == "rz":
            if len(self.qubits) != 1 or self.angle is None:
                raise ValueError("rz needs one wire and an angle")
        elif self.kind == "h":
            if len(self.qubits) != 1:
                raise ValueError("h needs exactly one wire")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def control(self) -> int:
        assert self.kind == "cnot"
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[-1]


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def rz(angle: Angle, target: int) -> Gate:
    return Gate("rz", (target,), angle)


def h(target: int) -> Gate:
    return Gate("h", (target,))


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on a fixed number of wires."""

    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"wire {q} out of range for {self.num_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    @property
    def cnot_count(self) -> int:
        return self.count("cnot")

    def depth(self) -> int:
        """Number of layers when gates are greedily packed left."""
        frontier = [0] * self.num_qubits
        depth = 0
        for g in self.gates:
            layer = 1 + max(frontier[q] for q in g.qubits)
            for q in g.qubits:
                frontier[q] = layer
            depth = max(depth, layer)
        return depth

    def extended(self, gates) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + tuple(gates))

    def is_cnot_only(self) -> bool:
        return all(g.kind == "cnot" for g in self.gates)


def parse_circuit(text: str) -> Circuit:
    """Parse the line-based circuit format.

    Header "qubits n", then one gate per line: "cnot c t", "rz p/q t",
    "h t", or the rz aliases "s t", "t t", "sdg t", "tdg t".  Blank lines
    and '#' comments are ignored.
    """
    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        op = parts[0].lower()
        try:
            if op == "qubits":
                if num_qubits is not None:
                    raise CircuitFormatError(lineno, "duplicate qubits header")
                num_qubits = int(parts[1])
                if num_qubits < 1:
                    raise CircuitFormatError(lineno, "qubit count must be positive")
                continue
            if num_qubits is None:
                raise CircuitFormatError(lineno, "missing 'qubits n' header")
            if op == "cnot":
                g = cnot(int(parts[1]), int(parts[2]))
            elif op == "rz":
                g = rz(Angle.parse(parts[1]), int(parts[2]))
            elif op == "h":
                g = h(int(parts[1]))
            elif op in NAMED_ANGLES:
                g = rz(NAMED_ANGLES[op], int(parts[1]))
            else:
                raise CircuitFormatError(lineno, f"unknown gate {op!r}")
        except CircuitFormatError:
            raise
        except (ValueError, IndexError, ZeroDivisionError) as exc:
            raise CircuitFormatError(lineno, f"cannot parse {line!r}: {exc}") from exc
        for q in g.qubits:
            if not 0 <= q < num_qubits:
                raise CircuitFormatError(lineno, f"wire {q} out of range (0..{num_qubits - 1})")
        gates.append(g)
    if num_qubits is None:
        raise CircuitFormatError(0, "empty input: missing 'qubits n' header")
    return Circuit(num_qubits, tuple(gates))


def emit_circuit(c: Circuit) -> str:
    """Emit the canonical text form: normalized whitespace, reduced angles."""
    lines = [f"qubits {c.num_qubits}"]
    for g in c.gates:
        if g.kind == "cnot":
            lines.append(f"cnot {g.control} {g.target}")
        elif g.kind == "rz":
            lines.append(f"rz {g.angle} {g.target}")
        else:
            lines.append(f"h {g.target}")
    return "\n".join(lines) + "\n"
