"""Spectral scans, satisfiability witnessing, and one-hot overlap algebra.

The spectrum scan tracks eigenvalue curves through crossings so the figures
stay readable, and classifies each track the way the published spectra are
colour coded: the track of lowest final magnitude, the cluster degenerate
with it at the start of the sweep, and everything else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .constraints import CnfFormula
from .evolution import ZenoSystem
from .hilbert import KERNEL_TOL, SpaceSpec, embed_local, hermitian_eigendecomposition
from .operators import local_z
from .states import HALF_PI, phi_sat

COLOR_LOWEST = "blue"
COLOR_CLUSTER = "red"
COLOR_REST = "black"


@dataclass(frozen=True)
class SpectrumScan:
    """Eigenvalue curves of a Hermitian builder over a sweep grid.

    `curves[:, t]` follows one eigenvector track through crossings;
    `sorted_values` keeps the raw per-point spectrum ordered by magnitude.
    """

    thetas: np.ndarray
    curves: np.ndarray
    sorted_values: np.ndarray
    colors: tuple
    kernel_counts: np.ndarray

    @property
    def n_points(self) -> int:
        return self.thetas.size

    @property
    def dimension(self) -> int:
        return self.curves.shape[1]


def _track_order(prev_vecs: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    overlap = np.abs(prev_vecs.conj().T @ vecs) ** 2
    rows, cols = linear_sum_assignment(-overlap)
    order = np.empty_like(cols)
    order[rows] = cols
    return order


def classify_tracks(
    curves: np.ndarray, cluster_tol: float = KERNEL_TOL
) -> tuple:
    """Colour classes per track: lowest final magnitude, its starting
    degenerate cluster, rest."""
    lowest = int(np.argmin(np.abs(curves[-1])))
    first = curves[0]
    colors = []
    for t in range(curves.shape[1]):
        if t == lowest:
            colors.append(COLOR_LOWEST)
        elif abs(first[t] - first[lowest]) <= cluster_tol:
            colors.append(COLOR_CLUSTER)
        else:
            colors.append(COLOR_REST)
    return tuple(colors)


def spectrum_vs_theta(
    matrix_of,
    thetas,
    kernel_tol: float = KERNEL_TOL,
    cluster_tol: float = KERNEL_TOL,
) -> SpectrumScan:
    """Scan `matrix_of(theta)` over the grid with continuity-ordered tracks."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0:
        raise ValueError("empty sweep grid")
    curves = []
    sorted_rows = []
    kernel_counts = []
    prev_vecs = None
    for theta in thetas:
        lam, vecs = hermitian_eigendecomposition(matrix_of(theta), check=False)
        sorted_rows.append(lam[np.argsort(np.abs(lam))])
        kernel_counts.append(int(np.sum(np.abs(lam) < kernel_tol)))
        if prev_vecs is None:
            order = np.argsort(np.abs(lam))
        else:
            order = _track_order(prev_vecs, vecs)
        prev_vecs = vecs[:, order]
        curves.append(lam[order])
    curves = np.array(curves)
    return SpectrumScan(
        thetas=thetas,
        curves=curves,
        sorted_values=np.array(sorted_rows),
        colors=classify_tracks(curves, cluster_tol),
        kernel_counts=np.array(kernel_counts),
    )


def gap_vs_theta(matrix_of, thetas) -> np.ndarray:
    """Difference of the two lowest eigenvalues of `matrix_of(theta)`."""
    gaps = []
    for theta in np.asarray(thetas, dtype=float):
        lam = np.linalg.eigvalsh(matrix_of(theta))
        if lam.size < 2:
            raise ValueError("gap needs at least a two-dimensional matrix")
        gaps.append(lam[1] - lam[0])
    return np.array(gaps)


def satisfiability_witness(
    formula: CnfFormula, theta_probe: float = 0.2, kernel_tol: float = KERNEL_TOL
) -> bool:
    """True iff the forbidden-state generator keeps a zero mode at theta_probe.

    A satisfying assignment supports a decay-free product state at every
    sweep angle, so a kernel at any probe angle > 0 witnesses satisfiability.
    """
    if not 0.0 < theta_probe <= HALF_PI:
        raise ValueError(f"probe angle {theta_probe} outside (0, pi/2]")
    system = ZenoSystem(SpaceSpec(formula.n_vars), formula=formula)
    lam = np.linalg.eigvalsh(system.generator(theta_probe))
    return bool(lam[0] < kernel_tol)


# One-hot manifold algebra. The n single-one assignments give non-orthogonal
# decay-free states phi_j; a symmetric mixing coefficient a(theta)
# orthogonalises them while keeping the permutation symmetry.


def one_hot_unit_overlap(theta: float) -> float:
    """Overlap of the two decay-free unit states carrying opposite bits."""
    return np.cos(theta) ** 2 / (1.0 + np.sin(theta) ** 2)


def one_hot_overlap(theta: float) -> float:
    """<phi_j|phi_l> for j != l; independent of n (exactly two units differ)."""
    return one_hot_unit_overlap(theta) ** 2


def one_hot_quadratic(n: int, theta: float) -> float:
    """Quadratic coefficient of the pairwise orthogonality condition.

    Counting the double sum over k != j, q != l exactly: n-2 diagonal pairs
    contribute 1 each, the remaining (n-1)^2 - (n-2) pairs contribute the
    pair overlap q.
    """
    if n < 2:
        raise ValueError("need at least two one-hot states")
    q = one_hot_overlap(theta)
    return (n - 2) + ((n - 1) ** 2 - (n - 2)) * q


def one_hot_linear(n: int, theta: float) -> float:
    """Half the linear coefficient: sum over q != l of <phi_j|phi_q>."""
    return 1.0 + (n - 2) * one_hot_overlap(theta)


def one_hot_mixing(n: int, theta: float) -> float:
    """Mixing coefficient a(theta) solving q - 2 a m + a^2 b = 0 with
    m = one_hot_linear and b = one_hot_quadratic.

    Negative root branch so that a(pi/2) = 0, written in rationalised form
    q / (m + sqrt(m^2 - b q)) to stay finite when b vanishes (n = 2 near
    theta = pi/2).
    """
    q = one_hot_overlap(theta)
    m = one_hot_linear(n, theta)
    b = one_hot_quadratic(n, theta)
    return q / (m + np.sqrt(m * m - b * q))


def one_hot_norm(n: int, theta: float) -> float:
    q = one_hot_overlap(theta)
    a = one_hot_mixing(n, theta)
    square = 1.0 - 2.0 * a * (n - 1) * q + a**2 * ((n - 1) + (n - 1) * (n - 2) * q)
    return float(np.sqrt(square))


def one_hot_states(n: int, theta: float) -> np.ndarray:
    """Columns are the orthonormalised decay-free states over n units."""
    if not 0.0 < theta <= HALF_PI:
        raise ValueError("one-hot states degenerate at theta = 0")
    raw = np.column_stack(
        [phi_sat(theta, tuple(int(i == j) for i in range(n))) for j in range(n)]
    )
    a = one_hot_mixing(n, theta)
    norm = one_hot_norm(n, theta)
    mix = (1.0 + a) * np.eye(n) - a * np.ones((n, n))
    return (raw @ mix) / norm


def one_hot_offdiagonal(n: int, theta: float) -> float:
    """Direct sandwich <phibar_j|Z_l|phibar_l> for j != l (all equal by
    symmetry)."""
    states = one_hot_states(n, theta)
    spec = SpaceSpec(n)
    z_last = embed_local(local_z(), [n - 1], spec)
    return float(states[:, 0] @ z_last @ states[:, n - 1])


def one_hot_offdiagonal_closed_form(n: int, theta: float) -> float:
    """Off-diagonal sandwich from the per-unit overlap algebra.

    Z on a decay-free unit has no cross element between the two bit states,
    so only same-bit pairs survive in the expansion; collecting them gives
    z a (n-2) (a m - q) / norm^2 with z the diagonal unit element.
    """
    s2 = np.sin(theta) ** 2
    z = 2.0 * s2 / (1.0 + s2)
    q = one_hot_overlap(theta)
    a = one_hot_mixing(n, theta)
    m = one_hot_linear(n, theta)
    return float(z * a * (n - 2) * (a * m - q) / one_hot_norm(n, theta) ** 2)


def one_hot_coefficients(n: int, theta: float) -> tuple:
    """(pair overlap, mixing a, quadratic b, off-diagonal sandwich)."""
    return (
        one_hot_overlap(theta),
        one_hot_mixing(n, theta),
        one_hot_quadratic(n, theta),
        one_hot_offdiagonal(n, theta),
    )
