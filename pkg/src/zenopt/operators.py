"""Hamiltonian building blocks: Ising costs, offsets, drives, and
reduced-basis forms.

Z acts as diag(1, -1, 0) on a unit, so undefined units contribute no energy.
Cost Hamiltonians over the extended chain are diagonal and are handed out as
1-D diagonal vectors wherever possible; full matrices exist for the callers
that need them.  The *_effective_* and biased_* helpers express operators in
the two-dimensional per-unit basis that stays orthogonal to the swept
coupling state; bit-string labels there are little endian like everywhere
else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .hilbert import (
    SpaceSpec,
    _digit_table,
    digit_table,
    embed_operator,
    product_state,
)
from .states import (
    antisymmetric_level,
    check_sweep_angle,
    omega_tilde,
    tilde_bit,
    zeta_pair,
)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def local_z(levels: int = 2) -> np.ndarray:
    """Per-unit Z: +1 on |0>, -1 on |1>, zero on everything else."""
    z = np.zeros((levels + 1, levels + 1))
    z[0, 0] = 1.0
    z[1, 1] = -1.0
    return z


@dataclass
class IsingProblem:
    """Classical cost sum_j h_j Z_j + sum_{j<k} J_jk Z_j Z_k."""

    fields: np.ndarray
    couplings: dict = field(default_factory=dict)

    def __post_init__(self):
        self.fields = np.asarray(self.fields, dtype=float)
        if self.fields.ndim != 1 or self.fields.size == 0:
            raise ValueError("fields must be a non-empty 1-D array")
        normalised = {}
        for (j, k), value in self.couplings.items():
            j, k = int(j), int(k)
            if j == k:
                raise ValueError(f"self coupling on unit {j}")
            if not (0 <= j < self.n_units and 0 <= k < self.n_units):
                raise ValueError(f"coupling ({j},{k}) out of range")
            key = (j, k) if j < k else (k, j)
            normalised[key] = normalised.get(key, 0.0) + float(value)
        self.couplings = normalised

    @property
    def n_units(self) -> int:
        return self.fields.size

    def energy(self, bits) -> float:
        bits = tuple(int(b) for b in bits)
        if len(bits) != self.n_units or any(b not in (0, 1) for b in bits):
            raise ValueError("expected a full bit assignment")
        z = np.array([1.0 - 2.0 * b for b in bits])
        e = float(self.fields @ z)
        for (j, k), value in self.couplings.items():
            e += value * z[j] * z[k]
        return e


def auxiliary_field_transform(problem: IsingProblem) -> IsingProblem:
    """Trade fields for couplings to one extra unit pinned to |0>.

    The returned problem has n+1 units, no fields, and J_{j,a} = h_j for the
    appended unit a; fixing a to bit 0 recovers the original energies.
    """
    a = problem.n_units
    couplings = dict(problem.couplings)
    for j, h in enumerate(problem.fields):
        if h != 0.0:
            couplings[(j, a)] = couplings.get((j, a), 0.0) + float(h)
    return IsingProblem(np.zeros(a + 1), couplings)


def z_value_table(spec: SpaceSpec) -> np.ndarray:
    """(dim, n_units) array of Z eigenvalues per digit (0 on undefined)."""
    zmap = np.zeros(spec.local_dim)
    zmap[0] = 1.0
    zmap[1] = -1.0
    return zmap[digit_table(spec)]


def ising_diagonal(problem: IsingProblem, spec: SpaceSpec) -> np.ndarray:
    if problem.n_units != spec.n_units:
        raise ValueError("problem size does not match the space")
    z = z_value_table(spec)
    diag = z @ problem.fields
    for (j, k), value in problem.couplings.items():
        diag = diag + value * z[:, j] * z[:, k]
    return diag


def ising_hamiltonian(problem: IsingProblem, spec: SpaceSpec) -> np.ndarray:
    return np.diag(ising_diagonal(problem, spec))


def undefined_counts(spec: SpaceSpec) -> np.ndarray:
    return np.sum(digit_table(spec) == spec.undefined_level, axis=1)


def offset_diagonal(alpha: float, spec: SpaceSpec) -> np.ndarray:
    """Energy -alpha per undefined unit."""
    return -alpha * undefined_counts(spec).astype(float)


def offset_hamiltonian(alpha: float, spec: SpaceSpec) -> np.ndarray:
    return np.diag(offset_diagonal(alpha, spec))


# ---------------------------------------------------------------- qubit space

def bit_table(n_units: int) -> np.ndarray:
    return _digit_table(n_units, 2)


def qubit_ising_diagonal(problem: IsingProblem) -> np.ndarray:
    """Cost diagonal over the 2^n bit-string space (no undefined level)."""
    z = 1.0 - 2.0 * bit_table(problem.n_units)
    diag = z @ problem.fields
    for (j, k), value in problem.couplings.items():
        diag = diag + value * z[:, j] * z[:, k]
    return diag


def penalty_indicator(patterns, n_units: int) -> np.ndarray:
    """0/1 diagonal over 2^n marking the listed forbidden bit strings."""
    diag = np.zeros(2**n_units)
    for bits in patterns:
        bits = tuple(int(b) for b in bits)
        if len(bits) != n_units or any(b not in (0, 1) for b in bits):
            raise ValueError(f"bad bit pattern {bits}")
        idx = sum(b << j for j, b in enumerate(bits))
        diag[idx] = 1.0
    return diag


@lru_cache(maxsize=8)
def transverse_term(n_units: int) -> np.ndarray:
    """sum_j X_j over the 2^n qubit space."""
    out = np.zeros((2**n_units, 2**n_units))
    for j in range(n_units):
        out += embed_operator(PAULI_X, (j,), n_units, 2)
    out.setflags(write=False)
    return out


def transverse_field_hamiltonian(
    problem: IsingProblem, s: float, penalty: np.ndarray = None
) -> np.ndarray:
    """-(1-s) sum_j X_j + s (cost + penalty) on 2^n qubits."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"sweep parameter {s} outside [0, 1]")
    diag = qubit_ising_diagonal(problem)
    if penalty is not None:
        diag = diag + penalty
    return -(1.0 - s) * transverse_term(problem.n_units) + s * np.diag(diag)


# ------------------------------------------------------------- reduced basis

def tilde_isometry(theta: float, spec: SpaceSpec, phis=None) -> np.ndarray:
    """(dim, 2^n) isometry whose columns are the per-unit tilde products."""
    if spec.levels != 2:
        raise ValueError("tilde products are defined for two-level units")
    if phis is None:
        phis = np.full(spec.n_units, math.pi / 4)
    phis = np.asarray(phis, dtype=float)
    if phis.shape != (spec.n_units,):
        raise ValueError("need one bias angle per unit")
    bits = bit_table(spec.n_units)
    out = np.empty((spec.dim, 2**spec.n_units))
    for col, row in enumerate(bits):
        vecs = [tilde_bit(theta, int(b), phi) for b, phi in zip(row, phis)]
        out[:, col] = product_state(vecs)
    return out


def projected_hamiltonian(
    H: np.ndarray, theta: float, spec: SpaceSpec, phis=None
) -> np.ndarray:
    """Compress a full-space operator into the tilde product basis."""
    T = tilde_isometry(theta, spec, phis)
    return T.T @ np.asarray(H) @ T


def predicted_effective_hamiltonian(
    problem: IsingProblem, alpha: float, theta: float
) -> np.ndarray:
    """Closed form of the cost plus offset seen inside the tilde basis.

    (alpha/2) cos^2(theta) (n - sum_j X_j) + sin(theta) sum_j h_j Z_j
    + sin^2(theta) sum_{j<k} J_jk Z_j Z_k over 2^n tilde labels.  Carries an
    identity shift of alpha n cos^2(theta) relative to the literal
    compression of cost + offset; effective_hamiltonian_residual compares
    the traceless parts.
    """
    check_sweep_angle(theta)
    n = problem.n_units
    dim = 2**n
    c2 = math.cos(theta) ** 2
    s = math.sin(theta)
    H = 0.5 * alpha * c2 * (n * np.eye(dim) - transverse_term(n))
    z = 1.0 - 2.0 * bit_table(n)
    diag = s * (z @ problem.fields)
    for (j, k), value in problem.couplings.items():
        diag = diag + s * s * value * z[:, j] * z[:, k]
    return H + np.diag(diag)


def effective_hamiltonian_residual(
    problem: IsingProblem, alpha: float, theta: float
) -> float:
    """Max abs deviation between the traceless parts of the predicted
    effective Hamiltonian and the compressed cost + offset."""
    spec = SpaceSpec(problem.n_units)
    full = ising_hamiltonian(problem, spec) + offset_hamiltonian(alpha, spec)
    compressed = projected_hamiltonian(full, theta, spec)
    predicted = predicted_effective_hamiltonian(problem, alpha, theta)
    dim = compressed.shape[0]
    compressed = compressed - np.trace(compressed) / dim * np.eye(dim)
    predicted = predicted - np.trace(predicted) / dim * np.eye(dim)
    return float(np.max(np.abs(predicted - compressed)))


# -------------------------------------------------------------- biased drive

def projected_local_z(phi: float, theta: float) -> np.ndarray:
    """2x2 matrix of Z between the biased tilde states, computed directly."""
    t0 = tilde_bit(theta, 0, phi)
    t1 = tilde_bit(theta, 1, phi)
    z = local_z()
    return np.array(
        [[t0 @ z @ t0, t0 @ z @ t1], [t1 @ z @ t0, t1 @ z @ t1]]
    )


def biased_z_coefficients(phi: float, theta: float):
    """Identity, Z, and X weights of Z in the biased tilde basis.

    Closed forms fixed by the requirements that the Z weight is exactly 1 at
    theta = pi/2 for every bias and that all three reduce to the unbiased
    values at phi = pi/4.
    """
    c = math.cos(2.0 * phi)
    s2 = math.sin(2.0 * phi)
    st = math.sin(theta)
    b_1 = 0.5 * c * (st**2 - 1.0)
    b_z = 0.5 * c**2 * (st**2 + 1.0) + s2**2 * st
    b_x = 0.5 * s2 * c * (1.0 - st) ** 2
    return b_1, b_z, b_x


def biased_offset_projection(phi: float, theta: float, alpha: float) -> np.ndarray:
    """2x2 matrix of -alpha |u><u| between the biased tilde states."""
    t0 = tilde_bit(theta, 0, phi)
    t1 = tilde_bit(theta, 1, phi)
    u = np.array([t0[2], t1[2]])
    return -alpha * np.outer(u, u)


def bias_correction_hamiltonian(
    problem: IsingProblem, phis, theta: float
) -> np.ndarray:
    """Compensating single-Z terms for biased driving, over 2^n qubits.

    -sum_{j<k} J_jk (B_1(phi_j) Z_k + B_1(phi_k) Z_j) / 2, cancelling the
    cost distortion that the identity parts of the compressed Z operators
    would otherwise add to the couplings.
    """
    phis = np.asarray(phis, dtype=float)
    if phis.shape != (problem.n_units,):
        raise ValueError("need one bias angle per unit")
    b1 = np.array([biased_z_coefficients(phi, theta)[0] for phi in phis])
    h_eff = np.zeros(problem.n_units)
    for (j, k), value in problem.couplings.items():
        h_eff[k] -= 0.5 * value * b1[j]
        h_eff[j] -= 0.5 * value * b1[k]
    z = 1.0 - 2.0 * bit_table(problem.n_units)
    return np.diag(z @ h_eff)


def bias_alpha_lower_bound(problem: IsingProblem, phis) -> float:
    """Offset strength above which the all-undefined product state is the
    ground state at theta = 0 under biased driving."""
    phis = np.asarray(phis, dtype=float)
    if phis.shape != (problem.n_units,):
        raise ValueError("need one bias angle per unit")
    zop = local_z()
    z = np.array([float(zeta_pair(phi)[1] @ zop @ zeta_pair(phi)[1]) for phi in phis])
    worst = None
    for j in range(problem.n_units):
        acc = 0.0
        for (a, b), value in problem.couplings.items():
            if a == j:
                acc += 0.5 * value * z[b]
            elif b == j:
                acc += 0.5 * value * z[a]
        term = z[j] * acc
        worst = term if worst is None else min(worst, term)
    return -worst


# --------------------------------------------------------------- qudit drive

def qudit_frame_vector(theta: float, j: int, levels: int) -> np.ndarray:
    """Non-normalised frame vector whose all-pairs sum reproduces the drive.

    (cos(theta)|u> + sin(theta)|omega> + antisym_j / sqrt(m-1)) / sqrt(m-1);
    at m = 2 these are sqrt(2) times the tilde bit states.
    """
    if levels < 2:
        raise ValueError("need at least two levels")
    m = levels
    vec = omega_tilde(theta, levels) + antisymmetric_level(j, levels) / math.sqrt(m - 1)
    return vec / math.sqrt(m - 1)


def qudit_drive_matrix(theta: float, alpha: float, levels: int) -> np.ndarray:
    """-alpha cos^2(theta) |omega~><omega~| on one (m+1)-level unit."""
    w = omega_tilde(theta, levels)
    return -alpha * math.cos(theta) ** 2 * np.outer(w, w)


def qudit_drive_coefficients(theta: float, alpha: float, levels: int) -> np.ndarray:
    """The drive compressed to the orthonormal tilde states: a constant
    all-ones m x m matrix with weight -alpha cos^2(theta) / m."""
    m = levels
    return -alpha * math.cos(theta) ** 2 / m * np.ones((m, m))


def qudit_drive_identity_residual(theta: float, alpha: float, levels: int) -> float:
    """Max abs difference between the drive and its all-pairs frame form,
    with the frame prefactor 1 / (m + 1 + 1/(m-1))."""
    m = levels
    lhs = qudit_drive_matrix(theta, alpha, levels)
    frame = np.column_stack(
        [qudit_frame_vector(theta, j, levels) for j in range(m)]
    )
    total = frame.sum(axis=1)
    rhs = -alpha * math.cos(theta) ** 2 / (m + 1 + 1.0 / (m - 1)) * np.outer(total, total)
    return float(np.max(np.abs(lhs - rhs)))


def pair_drive_matrix(theta: float, alpha: float) -> np.ndarray:
    """Two-unit drive -sqrt(3/64) alpha cos(theta) on the sum of the four
    tilde product states (9-dimensional two-unit space)."""
    total = np.zeros(9)
    for a in (0, 1):
        for b in (0, 1):
            total = total + product_state([tilde_bit(theta, a), tilde_bit(theta, b)])
    return -math.sqrt(3.0 / 64.0) * alpha * math.cos(theta) * np.outer(total, total)


# -------------------------------------------------------------------- STIRAP

STIRAP_BETA = 3  # local index of the mediating level in the 4-level unit


def stirap_hamiltonian(a: float, b: float) -> np.ndarray:
    """Two-tone coupling through a fourth level, basis (|0>, |1>, |u>, |beta>).

    a couples |+><beta| + h.c., b couples -(|u><beta| + h.c.); the swept
    two-level state with tan(theta) = b/a is an exact dark state.
    """
    H = np.zeros((4, 4))
    r = 1.0 / math.sqrt(2.0)
    H[0, STIRAP_BETA] = H[STIRAP_BETA, 0] = a * r
    H[1, STIRAP_BETA] = H[STIRAP_BETA, 1] = a * r
    H[2, STIRAP_BETA] = H[STIRAP_BETA, 2] = -b
    return H


def stirap_mixing_angle(a: float, b: float) -> float:
    return math.atan2(b, a)


def stirap_dark_state(a: float, b: float) -> np.ndarray:
    """Zero-eigenvalue state with no weight on the mediating level."""
    theta = stirap_mixing_angle(a, b)
    r = 1.0 / math.sqrt(2.0)
    out = np.zeros(4)
    out[0] = math.sin(theta) * r
    out[1] = math.sin(theta) * r
    out[2] = math.cos(theta)
    return out


def stirap_bright_energies(a: float, b: float):
    r = math.hypot(a, b)
    return -r, r


def stirap_pulse_schedule(n_points: int):
    """Quarter-period two-tone ramp: a = cos(pi tau / 2), b = sin(pi tau / 2)
    on tau in [0, 1], sweeping the mixing angle linearly from 0 to pi/2."""
    if n_points < 2:
        raise ValueError("need at least the two endpoint pulses")
    tau = np.linspace(0.0, 1.0, n_points)
    return tau, np.cos(0.5 * math.pi * tau), np.sin(0.5 * math.pi * tau)
