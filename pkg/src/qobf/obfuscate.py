"""Randomized U3 basis conjugation passes.

Three modes:
  - global: one sampled basis per unitary segment; boundary layers on every
    wire, every gate fused into one opaque conjugated block;
  - chained: a fresh basis per gate with per-wire basis chaining, so the
    inserted operators telescope back to the original segment operator;
  - subset: a hidden subset of gate positions is sandwiched between visible
    per-wire basis gates and their inverses.

Orientation: the boundary prologue applies B and the epilogue B-dagger, and
every gate G becomes B.G.B-dagger on its own wires; with B chosen as the
adjoint of the sampled rotation, each block carries the literal conjugation
U-dagger.G.U while the whole circuit operator is exactly preserved.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    Barrier,
    Circuit,
    GATE_SIGNATURES,
    Measure,
    OpaqueUnitary,
    Reset,
    StandardGate,
    gate_count,
    instruction_matrix,
    segment,
    standard_gate_matrix,
)
from .jsonio import KEY_FORMAT, FORMAT_VERSION, SchemaError
from .linalg import (
    TWO_PI,
    U3Params,
    adjoint,
    equal_up_to_global_phase,
    is_unitary,
    kron_slots,
    u3_matrix,
)


class ObfuscationError(ValueError):
    pass


class ObfuscationMode(enum.Enum):
    GLOBAL = "global"
    CHAINED = "chained"
    SUBSET = "subset"


@dataclass(frozen=True)
class BlockRecord:
    """Raw conjugation data for one opaque block: matrix = L . G . R with
    L/R the slot-wise Kronecker lifts of the recorded triples."""

    label: str
    gate_index: int
    original: str
    qubits: tuple[int, ...]
    left: tuple[U3Params, ...]
    right: tuple[U3Params, ...]


@dataclass(frozen=True)
class BoundaryRecord:
    label: str
    segment: int
    qubit: int
    params: U3Params  # emitted matrix is u3_matrix(params)
    role: str  # "basis" | "inv_basis"


@dataclass(frozen=True)
class ObfuscationKey:
    seed: int
    mode: ObfuscationMode
    num_qubits: int
    num_gates: int
    blocks: tuple[BlockRecord, ...]
    boundaries: tuple[BoundaryRecord, ...]
    segment_params: tuple[U3Params, ...] = ()  # global mode, one per segment
    protected: tuple[int, ...] | None = None  # subset mode gate indices

    def block(self, label: str) -> BlockRecord:
        for rec in self.blocks:
            if rec.label == label:
                return rec
        raise ObfuscationError(f"label {label!r} not present in key")


@dataclass(frozen=True)
class ObfuscatedCircuit:
    circuit: Circuit
    key: ObfuscationKey


def sample_basis(rng: np.random.Generator) -> U3Params:
    """Uniform draw over theta in [0, pi], phi and lam in [0, 2pi)."""
    return U3Params(
        float(rng.uniform(0.0, math.pi)),
        float(rng.uniform(0.0, TWO_PI)),
        float(rng.uniform(0.0, TWO_PI)),
    )


def conjugate_gate(g: np.ndarray, left_bases, right_bases) -> np.ndarray:
    """L . g . R with L/R the slot-wise Kronecker products of 2x2 bases."""
    left_bases = list(left_bases)
    right_bases = list(right_bases)
    k = len(left_bases)
    if len(right_bases) != k or g.shape != (2 ** k, 2 ** k):
        raise ObfuscationError(
            f"basis count {len(left_bases)}/{len(right_bases)} does not match "
            f"gate dimension {g.shape}"
        )
    return kron_slots(left_bases) @ g @ kron_slots(right_bases)


def _display_name(instr) -> str:
    if isinstance(instr, OpaqueUnitary):
        return instr.label
    return instr.name.upper()


def obfuscate(
    c: Circuit,
    mode: ObfuscationMode,
    seed: int,
    subset_size: int | None = None,
    global_params: U3Params | None = None,
) -> ObfuscatedCircuit:
    """Rewrite ``c`` into a functionally equivalent obfuscated circuit.

    ``global_params`` pins the sampled basis of every segment in global mode
    (used by the fixed-key case study); the key records it like any sample.
    """
    c.validate()
    rng = np.random.default_rng(seed)
    m = gate_count(c)
    if mode is ObfuscationMode.SUBSET:
        if subset_size is None:
            raise ObfuscationError("subset mode requires subset_size")
        if not 0 <= subset_size <= m:
            raise ObfuscationError(f"subset_size {subset_size} out of range [0, {m}]")
        protected = tuple(sorted(int(i) for i in rng.choice(m, size=subset_size, replace=False)))
    else:
        if subset_size is not None:
            raise ObfuscationError("subset_size only valid in subset mode")
        protected = None

    view = segment(c)
    out: list = []
    blocks: list[BlockRecord] = []
    boundaries: list[BoundaryRecord] = []
    seg_params: list[U3Params] = []
    gate_idx = 0

    for si, (start, end) in enumerate(view.segments):
        body = c.instructions[start:end]
        has_gate = any(isinstance(i, (StandardGate, OpaqueUnitary)) for i in body)
        if (
            mode is not ObfuscationMode.SUBSET
            and not has_gate
            and len(view.segments) > 1
        ):
            # No basis layers around a gate-free segment (e.g. the tail after
            # terminal measurements) -- they would inflate the gate count
            # without hiding anything.
            out.extend(body)
            if si < len(view.boundaries):
                out.append(c.instructions[view.boundaries[si]])
            continue
        if mode is ObfuscationMode.GLOBAL:
            p = global_params if global_params is not None else sample_basis(rng)
            seg_params.append(p)
            u = u3_matrix(p)
            ud = u3_matrix(p.inverse())
            for w in range(c.num_qubits):
                label = f"Basis_s{si}_q{w}"
                out.append(OpaqueUnitary(label, (w,), ud))
                boundaries.append(BoundaryRecord(label, si, w, p.inverse(), "basis"))
            for instr in body:
                if isinstance(instr, Barrier):
                    out.append(instr)
                    continue
                k = len(instr.qubits)
                block = conjugate_gate(instruction_matrix(instr), [ud] * k, [u] * k)
                label = f"Obf_{_display_name(instr)}_{gate_idx}"
                out.append(OpaqueUnitary(label, instr.qubits, block))
                blocks.append(
                    BlockRecord(
                        label, gate_idx, _display_name(instr), instr.qubits,
                        (p.inverse(),) * k, (p,) * k,
                    )
                )
                gate_idx += 1
            for w in range(c.num_qubits):
                label = f"InvBasis_s{si}_q{w}"
                out.append(OpaqueUnitary(label, (w,), u))
                boundaries.append(BoundaryRecord(label, si, w, p, "inv_basis"))
        elif mode is ObfuscationMode.CHAINED:
            cur = {w: sample_basis(rng) for w in range(c.num_qubits)}
            for w in range(c.num_qubits):
                label = f"Basis_s{si}_q{w}"
                out.append(OpaqueUnitary(label, (w,), u3_matrix(cur[w])))
                boundaries.append(BoundaryRecord(label, si, w, cur[w], "basis"))
            for instr in body:
                if isinstance(instr, Barrier):
                    out.append(instr)
                    continue
                fresh = {w: sample_basis(rng) for w in instr.qubits}
                left = tuple(fresh[w] for w in instr.qubits)
                right = tuple(cur[w].inverse() for w in instr.qubits)
                block = conjugate_gate(
                    instruction_matrix(instr),
                    [u3_matrix(t) for t in left],
                    [u3_matrix(t) for t in right],
                )
                label = f"Obf_{_display_name(instr)}_{gate_idx}"
                out.append(OpaqueUnitary(label, instr.qubits, block))
                blocks.append(
                    BlockRecord(label, gate_idx, _display_name(instr), instr.qubits, left, right)
                )
                cur.update(fresh)
                gate_idx += 1
            for w in range(c.num_qubits):
                label = f"InvBasis_s{si}_q{w}"
                out.append(OpaqueUnitary(label, (w,), u3_matrix(cur[w].inverse())))
                boundaries.append(BoundaryRecord(label, si, w, cur[w].inverse(), "inv_basis"))
        else:  # SUBSET
            for instr in body:
                if isinstance(instr, Barrier):
                    out.append(instr)
                    continue
                if gate_idx not in protected:
                    out.append(instr)
                    gate_idx += 1
                    continue
                samples = {w: sample_basis(rng) for w in instr.qubits}
                for w in instr.qubits:
                    label = f"Basis_g{gate_idx}_q{w}"
                    out.append(OpaqueUnitary(label, (w,), u3_matrix(samples[w])))
                    boundaries.append(BoundaryRecord(label, si, w, samples[w], "basis"))
                left = tuple(samples[w] for w in instr.qubits)
                right = tuple(samples[w].inverse() for w in instr.qubits)
                block = conjugate_gate(
                    instruction_matrix(instr),
                    [u3_matrix(t) for t in left],
                    [u3_matrix(t) for t in right],
                )
                label = f"Obf_{_display_name(instr)}_{gate_idx}"
                out.append(OpaqueUnitary(label, instr.qubits, block))
                blocks.append(
                    BlockRecord(label, gate_idx, _display_name(instr), instr.qubits, left, right)
                )
                for w in instr.qubits:
                    label = f"InvBasis_g{gate_idx}_q{w}"
                    out.append(OpaqueUnitary(label, (w,), u3_matrix(samples[w].inverse())))
                    boundaries.append(
                        BoundaryRecord(label, si, w, samples[w].inverse(), "inv_basis")
                    )
                gate_idx += 1
        if si < len(view.boundaries):
            out.append(c.instructions[view.boundaries[si]])

    key = ObfuscationKey(
        seed=seed,
        mode=mode,
        num_qubits=c.num_qubits,
        num_gates=m,
        blocks=tuple(blocks),
        boundaries=tuple(boundaries),
        segment_params=tuple(seg_params),
        protected=protected,
    )
    obf = Circuit(c.num_qubits, c.num_clbits, tuple(out), c.register_names)
    obf.validate()
    return ObfuscatedCircuit(obf, key)


def deobfuscate_block(block: OpaqueUnitary, key: ObfuscationKey) -> np.ndarray:
    """Invert the recorded conjugation of one opaque block."""
    rec = key.block(block.label)
    if rec.qubits != block.qubits:
        raise ObfuscationError(f"key/block mismatch for label {block.label!r}")
    left = kron_slots([u3_matrix(t) for t in rec.left])
    right = kron_slots([u3_matrix(t) for t in rec.right])
    return adjoint(left) @ block.matrix @ adjoint(right)


# ---------------------------------------------------------------------------
# Compiler-resistance probe

_FIXED_BY_DIM = {
    2: ("id", "x", "y", "z", "h", "s", "sdg", "t", "tdg"),
    4: ("cx", "cz", "swap"),
    8: ("ccx",),
}

_PROBE_TOL = 1e-6


def recognize_gate(m: np.ndarray) -> str | None:
    """Name a standard gate matching ``m`` up to global phase, else None.

    Rotation families are matched by recovered angle; rz stands for the
    whole phase-equivalent diagonal family (rz/p/u1 differ only by a global
    phase at equal angle).
    """
    if not is_unitary(m, tol=1e-9):
        raise ObfuscationError("recognize_gate requires a unitary input")
    dim = m.shape[0]
    for name in _FIXED_BY_DIM.get(dim, ()):
        if equal_up_to_global_phase(m, standard_gate_matrix(name, ()), _PROBE_TOL):
            return name
    if dim == 2:
        off = max(abs(m[0, 1]), abs(m[1, 0]))
        if off <= _PROBE_TOL:
            theta = float(np.angle(m[1, 1]) - np.angle(m[0, 0]))
            if equal_up_to_global_phase(m, standard_gate_matrix("rz", (theta,)), _PROBE_TOL):
                return "rz"
        theta = 2.0 * math.atan2(abs(m[0, 1]), abs(m[0, 0]))
        for t in (theta, -theta):
            if equal_up_to_global_phase(m, standard_gate_matrix("rx", (t,)), _PROBE_TOL):
                return "rx"
            if equal_up_to_global_phase(m, standard_gate_matrix("ry", (t,)), _PROBE_TOL):
                return "ry"
    if dim == 4:
        off = float(np.max(np.abs(m - np.diag(np.diag(m)))))
        if off <= _PROBE_TOL:
            theta = float(np.angle(m[1, 1]) - np.angle(m[0, 0]))
            if equal_up_to_global_phase(m, standard_gate_matrix("rzz", (theta,)), _PROBE_TOL):
                return "rzz"
    return None


# ---------------------------------------------------------------------------
# Key serialization

def _params_to_json(p: U3Params) -> list[float]:
    return [p.theta, p.phi, p.lam]


def _params_from_json(v) -> U3Params:
    t, p, l = (float(x) for x in v)
    return U3Params(t, p, l)


def key_to_dict(key: ObfuscationKey) -> dict:
    doc: dict = {
        "format": KEY_FORMAT,
        "version": FORMAT_VERSION,
        "seed": key.seed,
        "mode": key.mode.value,
        "num_qubits": key.num_qubits,
        "num_gates": key.num_gates,
        "records": [
            {
                "kind": "block",
                "label": r.label,
                "gate_index": r.gate_index,
                "original": r.original,
                "qubits": list(r.qubits),
                "left": [_params_to_json(t) for t in r.left],
                "right": [_params_to_json(t) for t in r.right],
            }
            for r in key.blocks
        ]
        + [
            {
                "kind": "boundary",
                "label": r.label,
                "segment": r.segment,
                "qubit": r.qubit,
                "params": _params_to_json(r.params),
                "role": r.role,
            }
            for r in key.boundaries
        ],
        "segment_params": [_params_to_json(p) for p in key.segment_params],
    }
    if key.protected is not None:
        doc["protected"] = list(key.protected)
    return doc


def key_from_dict(doc: dict) -> ObfuscationKey:
    if not isinstance(doc, dict) or doc.get("format") != KEY_FORMAT:
        raise SchemaError(f"not a {KEY_FORMAT} document")
    blocks = []
    boundaries = []
    for r in doc.get("records", []):
        if r.get("kind") == "block":
            blocks.append(
                BlockRecord(
                    r["label"],
                    int(r["gate_index"]),
                    r["original"],
                    tuple(int(q) for q in r["qubits"]),
                    tuple(_params_from_json(t) for t in r["left"]),
                    tuple(_params_from_json(t) for t in r["right"]),
                )
            )
        elif r.get("kind") == "boundary":
            boundaries.append(
                BoundaryRecord(
                    r["label"], int(r["segment"]), int(r["qubit"]),
                    _params_from_json(r["params"]), r["role"],
                )
            )
        else:
            raise SchemaError(f"unknown key record kind {r.get('kind')!r}")
    return ObfuscationKey(
        seed=int(doc["seed"]),
        mode=ObfuscationMode(doc["mode"]),
        num_qubits=int(doc["num_qubits"]),
        num_gates=int(doc["num_gates"]),
        blocks=tuple(blocks),
        boundaries=tuple(boundaries),
        segment_params=tuple(_params_from_json(p) for p in doc.get("segment_params", [])),
        protected=tuple(doc["protected"]) if "protected" in doc else None,
    )


def write_key_json(key: ObfuscationKey) -> str:
    return json.dumps(key_to_dict(key), indent=2) + "\n"


def read_key_json(text: str) -> ObfuscationKey:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return key_from_dict(doc)
