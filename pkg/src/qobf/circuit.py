"""Platform-neutral circuit representation and structural analysis.

Conventions (fixed across the toolkit):
  - qubit i is bit i of the state/matrix index (qubit 0 least significant);
  - for a multi-qubit instruction, gate-slot 0 is the least significant bit
    of the instruction's local matrix;
  - counts bitstrings render classical bit (num_clbits-1) leftmost.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import apply_to_tensor, is_unitary


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class StandardGate:
    name: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class OpaqueUnitary:
    label: str
    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dim = 2 ** len(self.qubits)
        if self.matrix.shape != (dim, dim):
            raise CircuitError(
                f"opaque block {self.label!r}: matrix shape {self.matrix.shape} "
                f"does not match arity {len(self.qubits)}"
            )
        if not is_unitary(self.matrix, tol=1e-9):
            raise CircuitError(f"opaque block {self.label!r}: matrix is not unitary")


@dataclass(frozen=True)
class Measure:
    qubit: int
    clbit: int


@dataclass(frozen=True)
class Reset:
    qubit: int


@dataclass(frozen=True)
class Barrier:
    qubits: tuple[int, ...]


Instruction = StandardGate | OpaqueUnitary | Measure | Reset | Barrier


# name -> (parameter count, arity); arity None = any (barrier-like n/a here)
GATE_SIGNATURES: dict[str, tuple[int, int]] = {
    "id": (0, 1),
    "x": (0, 1),
    "y": (0, 1),
    "z": (0, 1),
    "h": (0, 1),
    "s": (0, 1),
    "sdg": (0, 1),
    "t": (0, 1),
    "tdg": (0, 1),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "p": (1, 1),
    "u1": (1, 1),
    "u2": (2, 1),
    "u3": (3, 1),
    "u": (3, 1),
    "cx": (0, 2),
    "cz": (0, 2),
    "swap": (0, 2),
    "ccx": (0, 3),
    "rzz": (1, 2),
}

_SQ2 = 1.0 / math.sqrt(2.0)


def _fixed(*rows) -> np.ndarray:
    return np.array(rows, dtype=np.complex128)


def standard_gate_matrix(name: str, params) -> np.ndarray:
    """Textbook unitary of a supported standard gate.

    Multi-qubit gates use the slot convention above; e.g. for cx the control
    is slot 0 (least significant bit), mapping basis index 1 to 3.
    """
    params = tuple(float(v) for v in params)
    sig = GATE_SIGNATURES.get(name)
    if sig is None:
        raise CircuitError(f"unknown gate {name!r}")
    if len(params) != sig[0]:
        raise CircuitError(
            f"gate {name!r} expects {sig[0]} parameter(s), got {len(params)}"
        )
    if name == "id":
        return np.eye(2, dtype=np.complex128)
    if name == "x":
        return _fixed([0, 1], [1, 0])
    if name == "y":
        return _fixed([0, -1j], [1j, 0])
    if name == "z":
        return _fixed([1, 0], [0, -1])
    if name == "h":
        return _fixed([_SQ2, _SQ2], [_SQ2, -_SQ2])
    if name == "s":
        return _fixed([1, 0], [0, 1j])
    if name == "sdg":
        return _fixed([1, 0], [0, -1j])
    if name == "t":
        return _fixed([1, 0], [0, cmath.exp(0.25j * math.pi)])
    if name == "tdg":
        return _fixed([1, 0], [0, cmath.exp(-0.25j * math.pi)])
    if name == "rx":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return _fixed([c, -1j * s], [-1j * s, c])
    if name == "ry":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return _fixed([c, -s], [s, c])
    if name == "rz":
        e = cmath.exp(0.5j * params[0])
        return _fixed([e.conjugate(), 0], [0, e])
    if name in ("p", "u1"):
        return _fixed([1, 0], [0, cmath.exp(1j * params[0])])
    if name == "u2":
        phi, lam = params
        return _SQ2 * _fixed(
            [1, -cmath.exp(1j * lam)],
            [cmath.exp(1j * phi), cmath.exp(1j * (phi + lam))],
        )
    if name in ("u3", "u"):
        theta, phi, lam = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return _fixed(
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        )
    if name == "cx":
        # control = slot 0: basis 1 <-> 3
        return _fixed([1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0])
    if name == "cz":
        return np.diag([1, 1, 1, -1]).astype(np.complex128)
    if name == "swap":
        return _fixed([1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1])
    if name == "ccx":
        # controls = slots 0, 1; target = slot 2: basis 3 <-> 7
        m = np.eye(8, dtype=np.complex128)
        m[3, 3] = m[7, 7] = 0
        m[3, 7] = m[7, 3] = 1
        return m
    if name == "rzz":
        e = cmath.exp(0.5j * params[0])
        return np.diag([e.conjugate(), e, e, e.conjugate()]).astype(np.complex128)
    raise CircuitError(f"unknown gate {name!r}")  # pragma: no cover


def instruction_matrix(instr: Instruction) -> np.ndarray:
    if isinstance(instr, StandardGate):
        return standard_gate_matrix(instr.name, instr.params)
    if isinstance(instr, OpaqueUnitary):
        return instr.matrix
    raise CircuitError(f"instruction {instr!r} has no unitary matrix")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    num_clbits: int
    instructions: tuple[Instruction, ...]
    register_names: tuple[str, ...] = ("q",)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise CircuitError("num_qubits must be positive")
        if self.num_clbits < 0:
            raise CircuitError("num_clbits must be non-negative")
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def validate(self) -> list[str]:
        """Check index ranges and arity; return non-fatal warnings."""
        warnings: list[str] = []
        written: dict[int, int] = {}
        for i, instr in enumerate(self.instructions):
            if isinstance(instr, (StandardGate, OpaqueUnitary, Barrier)):
                qubits = instr.qubits
            elif isinstance(instr, (Measure, Reset)):
                qubits = (instr.qubit,)
            if len(set(qubits)) != len(qubits):
                raise CircuitError(f"instruction {i}: repeated qubit in {qubits}")
            for q in qubits:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"instruction {i}: qubit {q} out of range")
            if isinstance(instr, Measure):
                if not 0 <= instr.clbit < self.num_clbits:
                    raise CircuitError(f"instruction {i}: clbit {instr.clbit} out of range")
                if instr.clbit in written:
                    warnings.append(
                        f"clbit {instr.clbit} overwritten at instruction {i} "
                        f"(previously written at {written[instr.clbit]})"
                    )
                written[instr.clbit] = i
            if isinstance(instr, StandardGate):
                standard_gate_matrix(instr.name, instr.params)  # signature check
                if len(instr.qubits) != GATE_SIGNATURES[instr.name][1]:
                    raise CircuitError(
                        f"instruction {i}: gate {instr.name!r} arity mismatch"
                    )
        return warnings


@dataclass(frozen=True)
class SegmentView:
    """Maximal unitary instruction ranges separated by Measure/Reset."""

    segments: tuple[tuple[int, int], ...]  # half-open [start, end) ranges
    boundaries: tuple[int, ...]  # indices of Measure/Reset instructions


def segment(c: Circuit) -> SegmentView:
    segments: list[tuple[int, int]] = []
    boundaries: list[int] = []
    start = 0
    for i, instr in enumerate(c.instructions):
        if isinstance(instr, (Measure, Reset)):
            segments.append((start, i))
            boundaries.append(i)
            start = i + 1
    segments.append((start, len(c.instructions)))
    return SegmentView(tuple(segments), tuple(boundaries))


def gate_count(c: Circuit) -> int:
    return sum(
        1 for instr in c.instructions if isinstance(instr, (StandardGate, OpaqueUnitary))
    )


def depth(c: Circuit) -> int:
    """Greedy wire-leveling depth; barriers synchronize without adding depth."""
    levels = [0] * c.num_qubits
    for instr in c.instructions:
        if isinstance(instr, Barrier):
            if instr.qubits:
                sync = max(levels[q] for q in instr.qubits)
                for q in instr.qubits:
                    levels[q] = sync
            continue
        if isinstance(instr, (Measure, Reset)):
            qubits = (instr.qubit,)
        else:
            qubits = instr.qubits
        lvl = 1 + max(levels[q] for q in qubits)
        for q in qubits:
            levels[q] = lvl
    return max(levels, default=0)


def to_unitary(c: Circuit, max_qubits: int = 10) -> np.ndarray:
    """Full-register operator of a measurement-free circuit.

    Brute-force oracle: each instruction is lifted to the register by identity
    padding and multiplied in time order.
    """
    if c.num_qubits > max_qubits:
        raise CircuitError(
            f"to_unitary cap exceeded: {c.num_qubits} qubits > {max_qubits}"
        )
    u = np.eye(2 ** c.num_qubits, dtype=np.complex128)
    for instr in c.instructions:
        if isinstance(instr, (Measure, Reset)):
            raise CircuitError("to_unitary requires a measurement/reset-free circuit")
        if isinstance(instr, Barrier):
            continue
        u = apply_to_tensor(instruction_matrix(instr), instr.qubits, u, c.num_qubits)
    return u


def strip_measurements(c: Circuit) -> Circuit:
    """Drop Measure/Reset instructions (oracle helper for equivalence tests)."""
    kept = tuple(
        instr for instr in c.instructions if not isinstance(instr, (Measure, Reset))
    )
    return Circuit(c.num_qubits, c.num_clbits, kept, c.register_names)


def concat(a: Circuit, b: Circuit) -> Circuit:
    if a.num_qubits != b.num_qubits or a.num_clbits != b.num_clbits:
        raise CircuitError("concat requires matching register sizes")
    return Circuit(a.num_qubits, a.num_clbits, a.instructions + b.instructions)


def lifted_operator(instr: Instruction, num_qubits: int) -> np.ndarray:
    """Instruction operator lifted to the full register (test helper)."""
    out = np.eye(2 ** num_qubits, dtype=np.complex128)
    return apply_to_tensor(instruction_matrix(instr), instr.qubits, out, num_qubits)
