"""Tests for the dense linear-algebra core."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qobf.linalg import (
    LinalgError,
    TWO_PI,
    U3Params,
    adjoint,
    apply_to_tensor,
    equal_up_to_global_phase,
    is_unitary,
    kron,
    kron_power,
    kron_slots,
    matmul,
    max_abs_diff,
    u3_inverse_params,
    u3_matrix,
)

ANGLES = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestU3Matrix:
    def test_identity_at_zero(self):
        assert max_abs_diff(u3_matrix(U3Params(0, 0, 0)), np.eye(2)) < 1e-15

    def test_hadamard(self):
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        assert max_abs_diff(u3_matrix(U3Params(np.pi / 2, 0, np.pi)), h) < 1e-15

    def test_pauli_x(self):
        got = u3_matrix(U3Params(np.pi, 0, np.pi))
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        assert equal_up_to_global_phase(got, x, 1e-12)

    def test_explicit_entries(self):
        th, ph, lam = 0.7, 1.1, -0.4
        m = u3_matrix(U3Params(th, ph, lam))
        assert m[0, 0] == pytest.approx(np.cos(th / 2))
        assert m[0, 1] == pytest.approx(-np.exp(1j * lam) * np.sin(th / 2))
        assert m[1, 0] == pytest.approx(np.exp(1j * ph) * np.sin(th / 2))
        assert m[1, 1] == pytest.approx(np.exp(1j * (ph + lam)) * np.cos(th / 2))

    @given(ANGLES, ANGLES, ANGLES)
    @settings(max_examples=200, deadline=None)
    def test_always_unitary(self, th, ph, lam):
        assert is_unitary(u3_matrix(U3Params(th, ph, lam)), 1e-12)

    @given(ANGLES, ANGLES, ANGLES)
    @settings(max_examples=200, deadline=None)
    def test_inverse_params_are_exact_adjoint(self, th, ph, lam):
        p = U3Params(th, ph, lam)
        inv = u3_inverse_params(p)
        assert inv == U3Params(-th, -lam, -ph)
        assert max_abs_diff(u3_matrix(inv), adjoint(u3_matrix(p))) < 1e-12

    def test_params_inverse_method(self):
        p = U3Params(2.86, 2.33, 0.762)
        assert p.inverse() == U3Params(-2.86, -0.762, -2.33)
        assert p.inverse().inverse() == p

    def test_as_tuple(self):
        assert U3Params(1.0, 2.0, 3.0).as_tuple() == (1.0, 2.0, 3.0)


class TestMatrixOps:
    def test_matmul_matches_numpy(self):
        rng = np.random.default_rng(0)
        a, b = random_unitary(rng, 4), random_unitary(rng, 4)
        assert max_abs_diff(matmul(a, b), a @ b) == 0.0

    def test_adjoint(self):
        rng = np.random.default_rng(1)
        a = random_unitary(rng, 2)
        assert max_abs_diff(adjoint(a) @ a, np.eye(2)) < 1e-12

    def test_kron_matches_numpy(self):
        rng = np.random.default_rng(2)
        a, b = random_unitary(rng, 2), random_unitary(rng, 4)
        assert max_abs_diff(kron(a, b), np.kron(a, b)) == 0.0

    def test_kron_power(self):
        rng = np.random.default_rng(3)
        a = random_unitary(rng, 2)
        assert max_abs_diff(kron_power(a, 3), np.kron(a, np.kron(a, a))) < 1e-14
        assert max_abs_diff(kron_power(a, 0), np.eye(1)) == 0.0

    def test_kron_dimension_guard(self):
        with pytest.raises(LinalgError):
            kron_power(np.eye(2), 20)

    def test_kron_slots_order(self):
        # Slot 0 is the least significant local bit: for [A, B] the lifted
        # operator is B (x) A in numpy's kron convention.
        rng = np.random.default_rng(4)
        a, b = random_unitary(rng, 2), random_unitary(rng, 2)
        assert max_abs_diff(kron_slots([a, b]), np.kron(b, a)) == 0.0


class TestPredicates:
    def test_is_unitary_rejects_scaled(self):
        assert not is_unitary(2.0 * np.eye(2))

    def test_global_phase_equality(self):
        rng = np.random.default_rng(5)
        a = random_unitary(rng, 4)
        assert equal_up_to_global_phase(a, np.exp(0.77j) * a, 1e-12)
        assert not equal_up_to_global_phase(a, random_unitary(rng, 4), 1e-6)

    @given(st.floats(0, TWO_PI, allow_nan=False))
    @settings(max_examples=50, deadline=None)
    def test_global_phase_equality_any_phase(self, phase):
        rng = np.random.default_rng(6)
        a = random_unitary(rng, 2)
        assert equal_up_to_global_phase(a, np.exp(1j * phase) * a, 1e-9)


class TestApplyToTensor:
    def test_single_qubit_on_two_qubit_state(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        state = np.zeros(4, dtype=complex)
        state[0] = 1.0
        out = apply_to_tensor(x, [1], state, 2).reshape(-1)
        expect = np.zeros(4, dtype=complex)
        expect[2] = 1.0  # qubit 1 is bit 1 of the index
        assert max_abs_diff(out, expect) == 0.0

    def test_cx_control_slot0(self):
        cx = np.eye(4, dtype=complex)[[0, 3, 2, 1]]
        state = np.zeros(4, dtype=complex)
        state[1] = 1.0  # qubit 0 set
        out = apply_to_tensor(cx, [0, 1], state, 2).reshape(-1)
        assert out[3] == pytest.approx(1.0)

    def test_matches_full_kron(self):
        rng = np.random.default_rng(7)
        m = random_unitary(rng, 4)
        state = rng.normal(size=8) + 1j * rng.normal(size=8)
        state /= np.linalg.norm(state)
        out = apply_to_tensor(m, [0, 2], state, 3).reshape(-1)
        # Build the lifted operator by permuting a kron embedding.
        full = np.zeros((8, 8), dtype=complex)
        for col in range(8):
            vec = np.zeros(8, dtype=complex)
            vec[col] = 1.0
            full[:, col] = apply_to_tensor(m, [0, 2], vec, 3).reshape(-1)
        assert is_unitary(full, 1e-12)
        assert max_abs_diff(out, full @ state) < 1e-12
