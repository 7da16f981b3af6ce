"""Single-unit state constructions: forbidden directions and their complements.

Local vectors are plain float arrays of length levels+1 with the undefined
level |u> at the last index.  theta is the sweep angle in [0, pi/2]; phi is
the bias angle in (0, pi/2), with pi/4 the unbiased default where the driven
computational direction is |+> = (|0>+|1>)/sqrt(2).
"""

from __future__ import annotations

import numpy as np

from .hilbert import SpaceSpec, product_state

HALF_PI = np.pi / 2


def check_sweep_angle(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"sweep angle {theta} outside [0, pi/2]")
    return theta


def check_bias_angle(phi: float) -> float:
    phi = float(phi)
    if not 0.0 < phi < HALF_PI:
        raise ValueError(f"bias angle {phi} outside (0, pi/2)")
    return phi


def zeta_pair(phi: float = np.pi / 4):
    """Biased computational pair (zeta_plus, zeta_minus) as 3-level vectors."""
    phi = check_bias_angle(phi)
    plus = np.array([np.cos(phi), np.sin(phi), 0.0])
    minus = np.array([np.sin(phi), -np.cos(phi), 0.0])
    return plus, minus


def omega_state(levels: int) -> np.ndarray:
    """Uniform superposition of the computational levels of one unit."""
    if levels < 2:
        raise ValueError(f"need at least two levels, got {levels}")
    v = np.full(levels + 1, 1.0 / np.sqrt(levels))
    v[levels] = 0.0
    return v


def xi_state(theta: float, phi: float = np.pi / 4, levels: int = 2) -> np.ndarray:
    """Forbidden direction -sin(theta)|u> + cos(theta)|driven>.

    The driven computational direction is zeta_plus(phi) for two levels and
    the uniform superposition for a qudit (which takes no bias).
    """
    theta = check_sweep_angle(theta)
    if levels == 2:
        driven = zeta_pair(phi)[0]
    else:
        if not np.isclose(phi, np.pi / 4):
            raise ValueError("bias angle is only defined for two-level units")
        driven = omega_state(levels)
    v = np.cos(theta) * driven
    v[levels] = -np.sin(theta)
    return v


def omega_tilde(theta: float, levels: int = 2) -> np.ndarray:
    """Allowed partner of xi: cos(theta)|u> + sin(theta)|driven>."""
    theta = check_sweep_angle(theta)
    driven = zeta_pair()[0] if levels == 2 else omega_state(levels)
    v = np.sin(theta) * driven
    v[levels] = np.cos(theta)
    return v


def tilde_basis(theta: float, phi: float = np.pi / 4):
    """Orthonormal allowed pair for one unit: (|+~>, |zeta_minus>)."""
    theta = check_sweep_angle(theta)
    plus, minus = zeta_pair(phi)
    plus_tilde = np.sin(theta) * plus
    plus_tilde[2] = np.cos(theta)
    return plus_tilde, minus


def tilde_bit(theta: float, bit: int, phi: float = np.pi / 4) -> np.ndarray:
    """Dressed bit states spanning the allowed subspace.

    |0~> = cos(phi)|+~> + sin(phi)|zeta_->,
    |1~> = sin(phi)|+~> - cos(phi)|zeta_->; at phi=pi/4 this is the familiar
    (|+~> +- |->)/sqrt(2) pair.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    phi = check_bias_angle(phi)
    plus_tilde, minus = tilde_basis(theta, phi)
    if bit == 0:
        return np.cos(phi) * plus_tilde + np.sin(phi) * minus
    return np.sin(phi) * plus_tilde - np.cos(phi) * minus


def antisymmetric_level(j: int, levels: int) -> np.ndarray:
    """Normalised |j> minus the average of the other computational levels."""
    if not 0 <= j < levels:
        raise ValueError(f"level {j} out of range 0..{levels - 1}")
    v = np.full(levels + 1, -1.0 / (levels - 1))
    v[j] = 1.0
    v[levels] = 0.0
    return v / np.linalg.norm(v)


def qudit_tilde_j(theta: float, j: int, levels: int) -> np.ndarray:
    """Dressed computational level of a qudit unit.

    (cos|u> + sin|omega> + sqrt(m-1)|j_antisym>)/sqrt(m); orthonormal over j,
    orthogonal to xi at the same theta, and exactly |j> at theta = pi/2.  For
    two levels this is tilde_bit at phi = pi/4.
    """
    theta = check_sweep_angle(theta)
    m = levels
    v = omega_tilde(theta, m) + np.sqrt(m - 1) * antisymmetric_level(j, m)
    return v / np.sqrt(m)


def sat_unit_state(theta: float, bit: int) -> np.ndarray:
    """One unit of the constraint-free satisfying state.

    (cos(theta)|u> + sqrt(2) sin(theta)|bit>) / sqrt(1 + sin^2(theta)); equals
    (|+~> + (-1)^bit sin(theta)|->) up to the same normalisation, so it is
    orthogonal to xi(theta) at every theta.
    """
    theta = check_sweep_angle(theta)
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    v = np.zeros(3)
    v[bit] = np.sqrt(2.0) * np.sin(theta)
    v[2] = np.cos(theta)
    return v / np.sqrt(1.0 + np.sin(theta) ** 2)


def phi_sat(theta: float, assignment) -> np.ndarray:
    """Product satisfying state over all units for a bit assignment.

    Normalised to 1 by construction; per-unit factors come from
    sat_unit_state.
    """
    bits = tuple(int(b) for b in assignment)
    if not bits:
        raise ValueError("empty assignment")
    return product_state([sat_unit_state(theta, b) for b in bits])


def undefined_product(spec: SpaceSpec) -> np.ndarray:
    """All units in |u>: the sweep's start state (full-space index dim-1)."""
    psi = np.zeros(spec.dim)
    psi[spec.dim - 1] = 1.0
    return psi


def undefined_probability(theta: float) -> float:
    """Per-unit probability of measuring |u> in the satisfying state.

    cos^2(theta) / (1 + sin^2(theta)): the squared |u> amplitude of
    sat_unit_state, hence 1/3 at theta = pi/4 and 0 at theta = pi/2.
    """
    theta = check_sweep_angle(theta)
    return float(np.cos(theta) ** 2 / (1.0 + np.sin(theta) ** 2))
