"""Deterministic noise-free statevector simulation with shot sampling.

Measurement-terminal circuits take a fast path (exact distribution plus one
multinomial draw); circuits with mid-circuit measurements or resets are
evaluated exactly by per-segment branching, or per-shot collapse in ``run``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    Barrier,
    Circuit,
    Measure,
    OpaqueUnitary,
    Reset,
    StandardGate,
    instruction_matrix,
)
from .linalg import apply_to_tensor, is_unitary

DEFAULT_MAX_QUBITS = 14
DEFAULT_BRANCH_CAP = 2 ** 12

_PRUNE = 1e-15  # drop branches below this probability
_CLIP = 1e-12  # drop outcome probabilities below this before sampling


class SimulationCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2 ** self.num_qubits,):
            raise ValueError("amplitude vector length must be 2**num_qubits")


@dataclass(frozen=True)
class Counts:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to shots")


def zero_state(num_qubits: int) -> Statevector:
    amps = np.zeros(2 ** num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(num_qubits, amps)


def apply_unitary(s: Statevector, m: np.ndarray, qubits) -> Statevector:
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits) or any(
        not 0 <= q < s.num_qubits for q in qubits
    ):
        raise ValueError(f"invalid qubit list {qubits}")
    if not is_unitary(m, tol=1e-9):
        raise ValueError("operator is not unitary")
    out = apply_to_tensor(m, qubits, s.amplitudes, s.num_qubits)
    norm = float(np.linalg.norm(out))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"norm not preserved: {norm}")
    return Statevector(s.num_qubits, out)


def _bitstring(clbits: dict[int, int], num_clbits: int) -> str:
    return "".join(
        "1" if clbits.get(b, 0) else "0" for b in range(num_clbits - 1, -1, -1)
    )


def _measure_probs(state: np.ndarray, qubit: int) -> tuple[float, np.ndarray]:
    idx = np.arange(state.shape[0])
    mask = ((idx >> qubit) & 1).astype(bool)
    p1 = float(np.sum(np.abs(state[mask]) ** 2))
    return p1, mask


def _check_caps(c: Circuit, max_qubits: int):
    if c.num_qubits > max_qubits:
        raise SimulationCapError(
            f"{c.num_qubits} qubits exceed the simulator cap of {max_qubits}"
        )


def _is_terminal_suffix(instructions, i: int) -> bool:
    return all(isinstance(x, (Measure, Barrier)) for x in instructions[i:])


def _accumulate_terminal(result, state, prob, clbits, measures, num_qubits, num_clbits):
    """Fold a branch's joint terminal-measurement distribution into result."""
    if not measures:
        result[_bitstring(clbits, num_clbits)] = (
            result.get(_bitstring(clbits, num_clbits), 0.0) + prob
        )
        return
    p = (np.abs(state) ** 2).reshape((2,) * num_qubits)
    qubits = {mv.qubit for mv in measures}
    other_axes = tuple(
        num_qubits - 1 - q for q in range(num_qubits) if q not in qubits
    )
    joint = p.sum(axis=other_axes) if other_axes else p
    # surviving axes keep descending-qubit order
    ordered = sorted(qubits, reverse=True)
    for bits, pr in np.ndenumerate(joint):
        if pr * prob <= _PRUNE:
            continue
        assign = dict(clbits)
        values = dict(zip(ordered, bits))
        for mv in measures:
            assign[mv.clbit] = values[mv.qubit]
        key = _bitstring(assign, num_clbits)
        result[key] = result.get(key, 0.0) + prob * float(pr)


def probabilities(
    c: Circuit,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> dict[str, float]:
    """Exact outcome distribution over classical bits."""
    _check_caps(c, max_qubits)
    c.validate()
    n = c.num_qubits
    state = np.zeros(2 ** n, dtype=np.complex128)
    state[0] = 1.0
    branches: list[tuple[np.ndarray, float, dict[int, int]]] = [(state, 1.0, {})]
    result: dict[str, float] = {}
    instructions = list(c.instructions)

    for i, instr in enumerate(instructions):
        if _is_terminal_suffix(instructions, i):
            measures = [x for x in instructions[i:] if isinstance(x, Measure)]
            for st, prob, clbits in branches:
                _accumulate_terminal(result, st, prob, clbits, measures, n, c.num_clbits)
            branches = []
            break
        if isinstance(instr, Barrier):
            continue
        if isinstance(instr, (StandardGate, OpaqueUnitary)):
            m = instruction_matrix(instr)
            branches = [
                (apply_to_tensor(m, instr.qubits, st, n), prob, clbits)
                for st, prob, clbits in branches
            ]
            continue
        nxt: list[tuple[np.ndarray, float, dict[int, int]]] = []
        for st, prob, clbits in branches:
            p1, mask = _measure_probs(st, instr.qubit)
            p0 = 1.0 - p1
            if isinstance(instr, Measure):
                if p0 * prob > _PRUNE:
                    s0 = st.copy()
                    s0[mask] = 0.0
                    nxt.append((s0 / math.sqrt(p0), prob * p0, {**clbits, instr.clbit: 0}))
                if p1 * prob > _PRUNE:
                    s1 = st.copy()
                    s1[~mask] = 0.0
                    nxt.append((s1 / math.sqrt(p1), prob * p1, {**clbits, instr.clbit: 1}))
            else:  # Reset: project, then force the qubit to |0>
                if p0 * prob > _PRUNE:
                    s0 = st.copy()
                    s0[mask] = 0.0
                    nxt.append((s0 / math.sqrt(p0), prob * p0, clbits))
                if p1 * prob > _PRUNE:
                    s1 = np.zeros_like(st)
                    s1[~mask] = st[mask]
                    nxt.append((s1 / math.sqrt(p1), prob * p1, clbits))
        branches = nxt
        if len(branches) > branch_cap:
            raise SimulationCapError(
                f"branch count {len(branches)} exceeds cap {branch_cap}"
            )
    for st, prob, clbits in branches:
        key = _bitstring(clbits, c.num_clbits)
        result[key] = result.get(key, 0.0) + prob
    total = sum(result.values())
    if abs(total - 1.0) > 1e-10:
        raise RuntimeError(f"probabilities sum to {total}, not 1")
    return result


def _has_fast_path(c: Circuit) -> bool:
    seen_measure = False
    for instr in c.instructions:
        if isinstance(instr, Reset):
            return False
        if isinstance(instr, Measure):
            seen_measure = True
        elif isinstance(instr, (StandardGate, OpaqueUnitary)) and seen_measure:
            return False
    return True


def run(
    c: Circuit,
    shots: int,
    seed: int = 0,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> Counts:
    """Sample measurement counts; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    _check_caps(c, max_qubits)
    rng = np.random.default_rng(seed)
    if _has_fast_path(c):
        probs = probabilities(c, max_qubits=max_qubits)
        items = sorted((k, v) for k, v in probs.items() if v > _CLIP)
        keys = [k for k, _ in items]
        p = np.array([v for _, v in items])
        p /= p.sum()
        draws = rng.multinomial(shots, p)
        counts = {k: int(d) for k, d in zip(keys, draws) if d > 0}
        return Counts(counts, shots)
    # trajectory path: per-shot collapse
    n = c.num_qubits
    counts: dict[str, int] = {}
    for _ in range(shots):
        state = np.zeros(2 ** n, dtype=np.complex128)
        state[0] = 1.0
        clbits: dict[int, int] = {}
        for instr in c.instructions:
            if isinstance(instr, Barrier):
                continue
            if isinstance(instr, (StandardGate, OpaqueUnitary)):
                state = apply_to_tensor(instruction_matrix(instr), instr.qubits, state, n)
                continue
            p1, mask = _measure_probs(state, instr.qubit)
            outcome = 1 if rng.random() < p1 else 0
            if outcome:
                nxt = np.zeros_like(state)
                if isinstance(instr, Reset):
                    nxt[~mask] = state[mask]
                else:
                    nxt[mask] = state[mask]
                state = nxt / math.sqrt(p1)
            else:
                state = state.copy()
                state[mask] = 0.0
                state /= math.sqrt(1.0 - p1)
            if isinstance(instr, Measure):
                clbits[instr.clbit] = outcome
        key = _bitstring(clbits, c.num_clbits)
        counts[key] = counts.get(key, 0) + 1
    return Counts(counts, shots)
