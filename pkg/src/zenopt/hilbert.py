"""Dense Hilbert-space machinery for chains of extended qudits.

Each unit carries m computational levels |0>, ..., |m-1> plus one extra
"undefined" level |u> stored at local index m, so the local dimension is
m + 1.  Product basis indices are little endian in the unit digits:

    index = sum_j digit_j * (m+1)**j

which puts unit 0 in the least significant digit.  All operators are dense
numpy arrays; matrix functions go through full Hermitian eigendecomposition
and nothing in here is sparse or lazy.  Arrays handed out by this module are
treated as immutable by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

KERNEL_TOL = 1e-9


@dataclass(frozen=True)
class SpaceSpec:
    """Shape of the tensor product space: n_units units, m levels + |u> each."""

    n_units: int
    levels: int = 2

    def __post_init__(self):
        if self.n_units < 1:
            raise ValueError(f"need at least one unit, got {self.n_units}")
        if self.levels < 2:
            raise ValueError(f"need at least two levels per unit, got {self.levels}")

    @property
    def local_dim(self) -> int:
        return self.levels + 1

    @property
    def undefined_level(self) -> int:
        """Local index of |u> (always the last level)."""
        return self.levels

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_units


def basis_index(digits, spec: SpaceSpec) -> int:
    """Little-endian product index of a digit string (unit 0 first)."""
    digits = tuple(int(d) for d in digits)
    if len(digits) != spec.n_units:
        raise ValueError(f"expected {spec.n_units} digits, got {len(digits)}")
    base = spec.local_dim
    idx = 0
    for j, d in enumerate(digits):
        if not 0 <= d < base:
            raise ValueError(f"digit {d} at unit {j} out of range 0..{base - 1}")
        idx += d * base**j
    return idx


def digit_string(index: int, spec: SpaceSpec) -> tuple:
    """Inverse of basis_index."""
    if not 0 <= index < spec.dim:
        raise ValueError(f"index {index} out of range for dim {spec.dim}")
    base = spec.local_dim
    digits = []
    for _ in range(spec.n_units):
        digits.append(index % base)
        index //= base
    return tuple(digits)


def digits_of_string(text: str) -> tuple:
    """Digit tuple of a display string like '00111' (leftmost char = unit 0)."""
    return tuple(int(ch) for ch in text)


@lru_cache(maxsize=32)
def _digit_table(n_units: int, local_dim: int) -> np.ndarray:
    """(dim, n_units) array, row i = digit string of index i.  Read only."""
    idx = np.arange(local_dim**n_units)
    table = np.empty((idx.size, n_units), dtype=np.int64)
    for j in range(n_units):
        table[:, j] = (idx // local_dim**j) % local_dim
    table.setflags(write=False)
    return table


def digit_table(spec: SpaceSpec) -> np.ndarray:
    return _digit_table(spec.n_units, spec.local_dim)


def embed_operator(op: np.ndarray, units, n_units: int, local_dim: int) -> np.ndarray:
    """Embed an operator acting on a subset of units into the full space.

    `op` is a matrix over the listed units in the given order (little endian
    within the subset, so units[0] is the least significant digit of the
    local index).  Remaining units are untouched.
    """
    units = tuple(int(y) for y in units)
    if len(set(units)) != len(units):
        raise ValueError(f"duplicate units in {units}")
    if any(not 0 <= y < n_units for y in units):
        raise ValueError(f"unit index out of range in {units}")
    base = local_dim
    dim = base**n_units
    sub_dim = base ** len(units)
    op = np.asarray(op)
    if op.shape != (sub_dim, sub_dim):
        raise ValueError(f"operator shape {op.shape} does not match units {units}")

    table = _digit_table(n_units, local_dim)
    sub_idx = np.zeros(dim, dtype=np.int64)
    for pos, y in enumerate(units):
        sub_idx += table[:, y] * base**pos
    rest = [y for y in range(n_units) if y not in units]
    rest_idx = np.zeros(dim, dtype=np.int64)
    for pos, y in enumerate(rest):
        rest_idx += table[:, y] * base**pos

    # full index grouped by (rest block, sub index) so each block is a copy of op
    full_of = np.empty((base ** len(rest), sub_dim), dtype=np.int64)
    full_of[rest_idx, sub_idx] = np.arange(dim)
    out = np.zeros((dim, dim), dtype=np.result_type(op.dtype, np.float64))
    for block in full_of:
        out[np.ix_(block, block)] = op
    return out


def embed_local(op: np.ndarray, units, spec: SpaceSpec) -> np.ndarray:
    return embed_operator(op, units, spec.n_units, spec.local_dim)


def product_state(vectors) -> np.ndarray:
    """Tensor product of per-unit vectors (vectors[0] = unit 0, little endian)."""
    vectors = list(vectors)
    if not vectors:
        raise ValueError("need at least one local vector")
    out = np.asarray(vectors[-1])
    for v in reversed(vectors[:-1]):
        out = np.kron(out, np.asarray(v))
    return out


def hermitian_eigendecomposition(G: np.ndarray, check: bool = True):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""
    G = np.asarray(G)
    if check:
        scale = max(1.0, float(np.max(np.abs(G)))) if G.size else 1.0
        herm_err = float(np.max(np.abs(G - G.conj().T))) if G.size else 0.0
        if herm_err > 1e-12 * scale:
            raise ValueError(f"matrix is not Hermitian (max asymmetry {herm_err:.3e})")
    vals, vecs = np.linalg.eigh(G)
    return vals, vecs


def kernel_basis(G: np.ndarray, tol: float = KERNEL_TOL) -> np.ndarray:
    """Orthonormal columns spanning the (numerical) null space of G.

    Eigenvectors with |eigenvalue| < tol.  Returns a (dim, k) array; k may be
    zero, callers must handle an empty kernel themselves.
    """
    vals, vecs = hermitian_eigendecomposition(G)
    keep = np.abs(vals) < tol
    return vecs[:, keep]


def evolve_step(psi: np.ndarray, G: np.ndarray, dt: float, mode: str = "unitary") -> np.ndarray:
    """Apply exp(-i G dt) (unitary) or exp(-G dt) (decay) to a state vector.

    Always via full eigendecomposition of G; dt must be non-negative in decay
    mode so that the norm cannot grow.
    """
    if mode not in ("unitary", "decay"):
        raise ValueError(f"unknown mode {mode!r}")
    if dt < 0:
        raise ValueError(f"negative time step {dt}")
    vals, vecs = hermitian_eigendecomposition(G)
    coeff = vecs.conj().T @ np.asarray(psi, dtype=complex)
    if mode == "unitary":
        coeff = np.exp(-1j * vals * dt) * coeff
    else:
        coeff = np.exp(-vals * dt) * coeff
    return vecs @ coeff
