"""Dense complex matrix kernel: U3 operators, adjoints, Kronecker lifting.

All operators are numpy ``complex128`` arrays. Multi-qubit operators follow a
little-endian slot convention: slot 0 of an operator is the least significant
bit of its row/column index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Kronecker results are refused beyond this dimension per side.
MAX_KRON_DIM = 2 ** 12

TWO_PI = 2.0 * math.pi


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class U3Params:
    """The (theta, phi, lam) triple of a single-qubit basis rotation."""

    theta: float
    phi: float
    lam: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta, self.phi, self.lam)

    def inverse(self) -> "U3Params":
        return u3_inverse_params(self)


def u3_matrix(p: U3Params) -> np.ndarray:
    """2x2 unitary of the universal single-qubit rotation."""
    t2 = p.theta / 2.0
    c, s = math.cos(t2), math.sin(t2)
    return np.array(
        [
            [c, -np.exp(1j * p.lam) * s],
            [np.exp(1j * p.phi) * s, np.exp(1j * (p.phi + p.lam)) * c],
        ],
        dtype=np.complex128,
    )


def u3_inverse_params(p: U3Params) -> U3Params:
    """Parameters of the exact adjoint: (-theta, -lam, -phi).

    The sign/order swap makes the identity phase-exact, not merely
    phase-equivalent.
    """
    return U3Params(-p.theta, -p.lam, -p.phi)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] * b.shape[0] > MAX_KRON_DIM or a.shape[1] * b.shape[1] > MAX_KRON_DIM:
        raise LinalgError(
            f"kron result would exceed {MAX_KRON_DIM} per side: "
            f"{a.shape} x {b.shape}"
        )
    return np.kron(a, b)


def kron_power(a: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(1, dtype=np.complex128)
    for _ in range(k):
        out = kron(out, a)
    return out


def kron_slots(mats) -> np.ndarray:
    """Kronecker product of per-slot operators, slot 0 least significant.

    ``kron_slots([a, b])`` acts with ``a`` on bit 0 and ``b`` on bit 1,
    i.e. equals ``kron(b, a)`` in textbook (big-endian-first) order.
    """
    out = np.eye(1, dtype=np.complex128)
    for m in mats:
        out = kron(m, out)
    return out


def is_unitary(a: np.ndarray, tol: float = 1e-9) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    if not np.all(np.isfinite(a)):
        return False
    delta = a.conj().T @ a - np.eye(a.shape[0])
    return float(np.max(np.abs(delta))) <= tol


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff a = e^{i alpha} b for some phase, within ``tol`` entry-wise.

    The phase is estimated from the largest-magnitude entry of ``b``, which is
    numerically stable against near-zero entries.
    """
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    ref = b[idx]
    if abs(ref) == 0.0:
        return float(np.max(np.abs(a))) <= tol
    phase = a[idx] / ref
    mag = abs(phase)
    if mag == 0.0:
        return False
    phase /= mag
    return float(np.max(np.abs(a - phase * b))) <= tol


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def apply_to_tensor(m: np.ndarray, qubits, array: np.ndarray, num_qubits: int) -> np.ndarray:
    """Apply operator ``m`` on the given register bits of ``array``.

    ``array`` has leading dimension 2**num_qubits (state index, bit i =
    qubit i) and arbitrary trailing dimensions. ``qubits`` lists the register
    bits in slot order (slot 0 least significant of ``m``'s index).
    """
    k = len(qubits)
    if m.shape != (2 ** k, 2 ** k):
        raise LinalgError(f"operator shape {m.shape} does not match {k} qubits")
    lead = array.shape[0]
    if lead != 2 ** num_qubits:
        raise LinalgError("array leading dimension does not match register size")
    rest = array.shape[1:]
    t = array.reshape((2,) * num_qubits + rest)
    # Axis for register bit q (C order: first axis = most significant bit).
    axes = [num_qubits - 1 - q for q in reversed(qubits)]
    t = np.moveaxis(t, axes, range(k))
    shp = t.shape
    t = t.reshape(2 ** k, -1)
    t = m @ t
    t = t.reshape(shp)
    t = np.moveaxis(t, range(k), axes)
    return np.ascontiguousarray(t).reshape((lead,) + rest)
