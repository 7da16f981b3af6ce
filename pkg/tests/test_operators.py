"""Cost diagonals, reduced-basis identities, drives, and the two-tone check."""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from zenopt.hilbert import SpaceSpec, basis_index, digit_table, product_state
from zenopt.operators import (
    PAULI_X,
    PAULI_Z,
    IsingProblem,
    auxiliary_field_transform,
    bias_alpha_lower_bound,
    bias_correction_hamiltonian,
    biased_offset_projection,
    biased_z_coefficients,
    bit_table,
    effective_hamiltonian_residual,
    ising_diagonal,
    ising_hamiltonian,
    local_z,
    offset_diagonal,
    offset_hamiltonian,
    pair_drive_matrix,
    penalty_indicator,
    predicted_effective_hamiltonian,
    projected_hamiltonian,
    projected_local_z,
    qubit_ising_diagonal,
    qudit_drive_coefficients,
    qudit_drive_identity_residual,
    qudit_drive_matrix,
    qudit_frame_vector,
    stirap_bright_energies,
    stirap_dark_state,
    stirap_hamiltonian,
    stirap_mixing_angle,
    stirap_pulse_schedule,
    tilde_isometry,
    transverse_field_hamiltonian,
    transverse_term,
    z_value_table,
)
from zenopt.states import HALF_PI, qudit_tilde_j, tilde_bit, zeta_pair

THETAS = (0.0, 0.3, np.pi / 4, 1.2, HALF_PI)
PHIS = (0.2, np.pi / 4, 1.3)


def _random_problem(rng, n):
    fields = rng.normal(size=n)
    couplings = {
        (j, k): float(rng.normal())
        for j in range(n)
        for k in range(j + 1, n)
        if rng.random() < 0.7
    }
    return IsingProblem(fields, couplings)


def test_ising_problem_normalises_couplings():
    p = IsingProblem([0.5, -0.5], {(1, 0): 2.0, (0, 1): 1.0})
    assert p.couplings == {(0, 1): 3.0}
    with pytest.raises(ValueError):
        IsingProblem([0.5], {(0, 0): 1.0})
    with pytest.raises(ValueError):
        IsingProblem([0.5, 0.5], {(0, 2): 1.0})


def test_energy_matches_diagonals():
    rng = np.random.default_rng(0)
    p = _random_problem(rng, 3)
    spec = SpaceSpec(3)
    diag3 = ising_diagonal(p, spec)
    diag2 = qubit_ising_diagonal(p)
    for bits in product((0, 1), repeat=3):
        e = p.energy(bits)
        assert diag3[basis_index(bits, spec)] == pytest.approx(e)
        assert diag2[sum(b << j for j, b in enumerate(bits))] == pytest.approx(e)


def test_undefined_units_carry_no_cost():
    p = IsingProblem([1.0, -2.0], {(0, 1): 0.7})
    spec = SpaceSpec(2)
    diag = ising_diagonal(p, spec)
    # u on unit 1 leaves only the unit-0 field term
    assert diag[basis_index((0, 2), spec)] == pytest.approx(1.0)
    assert diag[basis_index((1, 2), spec)] == pytest.approx(-1.0)
    assert diag[basis_index((2, 2), spec)] == pytest.approx(0.0)


def test_z_value_table_maps_digits():
    spec = SpaceSpec(2)
    z = z_value_table(spec)
    table = digit_table(spec)
    expected = np.where(table == 0, 1.0, np.where(table == 1, -1.0, 0.0))
    np.testing.assert_allclose(z, expected)


def test_auxiliary_field_transform_preserves_energies():
    rng = np.random.default_rng(5)
    p = _random_problem(rng, 3)
    aux = auxiliary_field_transform(p)
    assert aux.n_units == 4
    assert not aux.fields.any()
    for bits in product((0, 1), repeat=3):
        assert aux.energy(bits + (0,)) == pytest.approx(p.energy(bits))


def test_offset_diagonal_counts_undefined_units():
    spec = SpaceSpec(2)
    diag = offset_diagonal(0.5, spec)
    assert diag[basis_index((0, 1), spec)] == 0.0
    assert diag[basis_index((2, 1), spec)] == pytest.approx(-0.5)
    assert diag[basis_index((2, 2), spec)] == pytest.approx(-1.0)


def test_penalty_indicator_marks_patterns():
    diag = penalty_indicator([(1, 0), (1, 1)], 2)
    np.testing.assert_allclose(diag, [0.0, 1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        penalty_indicator([(2, 0)], 2)
    with pytest.raises(ValueError):
        penalty_indicator([(1,)], 2)


def test_transverse_field_hamiltonian_endpoints():
    p = IsingProblem([0.3, -0.4], {(0, 1): 0.2})
    np.testing.assert_allclose(
        transverse_field_hamiltonian(p, 0.0), -transverse_term(2), atol=1e-15
    )
    pen = np.array([0.0, 5.0, 0.0, 0.0])
    end = transverse_field_hamiltonian(p, 1.0, pen)
    np.testing.assert_allclose(end, np.diag(qubit_ising_diagonal(p) + pen), atol=1e-15)
    with pytest.raises(ValueError):
        transverse_field_hamiltonian(p, 1.2)


def test_transverse_term_matches_kron():
    expected = np.kron(np.eye(2), PAULI_X) + np.kron(PAULI_X, np.eye(2))
    np.testing.assert_allclose(transverse_term(2), expected)


def test_tilde_isometry_is_isometric():
    spec = SpaceSpec(3)
    for theta in (0.1, 0.9, HALF_PI):
        T = tilde_isometry(theta, spec, phis=(0.3, np.pi / 4, 1.0))
        np.testing.assert_allclose(T.T @ T, np.eye(8), atol=1e-12)


def test_effective_hamiltonian_closed_form():
    rng = np.random.default_rng(9)
    for n in (1, 2, 3):
        for _ in range(4):
            p = _random_problem(rng, n)
            alpha = float(rng.uniform(0.0, 2.0))
            theta = float(rng.uniform(0.0, HALF_PI))
            assert effective_hamiltonian_residual(p, alpha, theta) < 1e-10


def test_effective_hamiltonian_identity_shift():
    p = IsingProblem([0.4, -0.7], {(0, 1): 0.5})
    alpha, theta = 0.8, 0.6
    spec = SpaceSpec(2)
    full = ising_hamiltonian(p, spec) + offset_hamiltonian(alpha, spec)
    compressed = projected_hamiltonian(full, theta, spec)
    predicted = predicted_effective_hamiltonian(p, alpha, theta)
    shift = alpha * 2 * np.cos(theta) ** 2
    np.testing.assert_allclose(
        predicted - compressed, shift * np.eye(4), atol=1e-12
    )


def test_biased_z_coefficients_match_direct_sandwich():
    for phi in PHIS:
        for theta in THETAS:
            direct = projected_local_z(phi, theta)
            b1, bz, bx = biased_z_coefficients(phi, theta)
            model = b1 * np.eye(2) + bz * PAULI_Z + bx * PAULI_X
            np.testing.assert_allclose(direct, model, atol=1e-10)


def test_biased_z_coefficients_limits():
    for phi in PHIS:
        b1, bz, bx = biased_z_coefficients(phi, HALF_PI)
        assert bz == pytest.approx(1.0)
        assert b1 == pytest.approx(0.0, abs=1e-15)
        assert bx == pytest.approx(0.0, abs=1e-15)
    for theta in THETAS:
        b1, bz, bx = biased_z_coefficients(np.pi / 4, theta)
        assert b1 == pytest.approx(0.0, abs=1e-15)
        assert bx == pytest.approx(0.0, abs=1e-15)


def test_biased_offset_projection_matches_compression():
    for phi in PHIS:
        for theta in (0.0, 0.5, 1.2):
            t0 = tilde_bit(theta, 0, phi)
            t1 = tilde_bit(theta, 1, phi)
            u_proj = np.zeros((3, 3))
            u_proj[2, 2] = -1.3
            T = np.column_stack([t0, t1])
            np.testing.assert_allclose(
                biased_offset_projection(phi, theta, 1.3),
                T.T @ u_proj @ T,
                atol=1e-12,
            )


def test_bias_correction_hamiltonian_structure():
    p = IsingProblem([0.0, 0.0, 0.0], {(0, 1): 1.5, (1, 2): -0.5})
    phis = np.array([0.3, 0.7, 1.1])
    theta = 0.9
    corr = bias_correction_hamiltonian(p, phis, theta)
    b1 = [biased_z_coefficients(phi, theta)[0] for phi in phis]
    z = [np.kron(np.eye(2 ** (2 - j)), np.kron(PAULI_Z, np.eye(2**j))) for j in range(3)]
    expected = -0.5 * (
        1.5 * (b1[0] * z[1] + b1[1] * z[0]) - 0.5 * (b1[1] * z[2] + b1[2] * z[1])
    )
    np.testing.assert_allclose(corr, expected, atol=1e-12)
    assert np.trace(corr) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        bias_correction_hamiltonian(p, phis[:2], theta)


def test_bias_alpha_lower_bound_signs():
    phis = (0.2, 0.2)
    anti = IsingProblem([0.0, 0.0], {(0, 1): 1.0})
    ferro = IsingProblem([0.0, 0.0], {(0, 1): -1.0})
    z = float(zeta_pair(0.2)[1] @ local_z() @ zeta_pair(0.2)[1])
    assert bias_alpha_lower_bound(anti, phis) == pytest.approx(-0.5 * z * z)
    assert bias_alpha_lower_bound(ferro, phis) == pytest.approx(0.5 * z * z)


def test_bias_alpha_lower_bound_guarantee():
    # above the bound the all-undefined product is the theta=0 ground state of
    # the compressed cost plus offset; just below it for the ferromagnet the
    # ground state moves elsewhere
    phis = (0.2, 0.2)
    spec = SpaceSpec(2)
    ferro = IsingProblem([0.0, 0.0], {(0, 1): -1.0})
    bound = bias_alpha_lower_bound(ferro, phis)

    def ground_is_undefined(alpha):
        full = ising_hamiltonian(ferro, spec) + offset_hamiltonian(alpha, spec)
        compressed = projected_hamiltonian(full, 0.0, spec, phis)
        vals, vecs = np.linalg.eigh(compressed)
        # at theta=0 the undefined product has tilde coordinates
        # prod_j (cos phi_j, sin phi_j)
        coords = product_state(
            [np.array([np.cos(phi), np.sin(phi)]) for phi in phis]
        )
        return abs(coords @ vecs[:, 0]) > 0.999

    assert ground_is_undefined(bound + 0.05)
    assert not ground_is_undefined(bound - 0.05)


def test_qudit_drive_identity():
    for m in (2, 3, 4, 5):
        for theta in THETAS:
            assert qudit_drive_identity_residual(theta, 1.7, m) < 1e-10


def test_qudit_drive_compresses_to_uniform_matrix():
    for m in (2, 3, 4):
        theta, alpha = 0.8, 1.3
        drive = qudit_drive_matrix(theta, alpha, m)
        T = np.column_stack([qudit_tilde_j(theta, j, m) for j in range(m)])
        np.testing.assert_allclose(
            T.T @ drive @ T, qudit_drive_coefficients(theta, alpha, m), atol=1e-12
        )


def test_qudit_frame_vector_reduces_to_dressed_bits():
    for theta in THETAS:
        for j in (0, 1):
            np.testing.assert_allclose(
                qudit_frame_vector(theta, j, 2),
                np.sqrt(2.0) * tilde_bit(theta, j, np.pi / 4),
                atol=1e-12,
            )


def test_pair_drive_rank_one():
    theta, alpha = 0.6, 1.1
    drive = pair_drive_matrix(theta, alpha)
    vals = np.linalg.eigvalsh(drive)
    np.testing.assert_allclose(vals[1:], 0.0, atol=1e-12)
    assert vals[0] == pytest.approx(-np.sqrt(3.0) / 2.0 * alpha * np.cos(theta))
    # scalar ratio to the single-qudit m=4 drive eigenvalue at theta=0
    qudit_low = np.linalg.eigvalsh(qudit_drive_matrix(0.0, alpha, 4))[0]
    pair_low = np.linalg.eigvalsh(pair_drive_matrix(0.0, alpha))[0]
    assert qudit_low / pair_low == pytest.approx(2.0 / np.sqrt(3.0))


def test_stirap_spectrum_and_dark_state():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a, b = rng.normal(size=2)
        H = stirap_hamiltonian(a, b)
        r = np.hypot(a, b)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(H), sorted([-r, 0.0, 0.0, r]), atol=1e-12
        )
        dark = stirap_dark_state(a, b)
        assert dark @ dark == pytest.approx(1.0)
        np.testing.assert_allclose(H @ dark, 0.0, atol=1e-12)
        assert dark[3] == 0.0
        assert stirap_bright_energies(a, b) == (-r, r)
    assert stirap_mixing_angle(1.0, 1.0) == pytest.approx(np.pi / 4)


def test_stirap_pulse_schedule():
    tau, a, b = stirap_pulse_schedule(5)
    np.testing.assert_allclose(tau, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert a[0] == 1.0 and b[0] == 0.0
    assert a[-1] == pytest.approx(0.0, abs=1e-15)
    assert b[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(a**2 + b**2, 1.0, atol=1e-15)
    with pytest.raises(ValueError):
        stirap_pulse_schedule(1)
