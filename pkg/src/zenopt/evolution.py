"""Sweep engines: dissipative decay, repeated measurement, Hamiltonian
ramps, and idealised projection, plus the iterative bit-fixing solver.

All engines walk the same right-endpoint grid: the sweep parameter takes the
values start + k (stop - start) / steps for k = 1..steps, so a single-step
schedule acts once at the endpoint and no engine ever acts at the start
value.  Piecewise-constant evolution is exact within each slice (full
eigendecomposition per slice, no Trotter error beyond the schedule
digitisation).  Engines accept a whole array of total runtimes and share the
per-slice eigendecomposition across them, which is what makes the
multi-decade runtime scans affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .constraints import (
    CardinalityConstraint,
    ClauseFalsified,
    CnfFormula,
    cardinality_forbidden_patterns,
    satisfies,
    substitute_bits,
)
from .hilbert import (
    KERNEL_TOL,
    SpaceSpec,
    basis_index,
    digit_string,
    digit_table,
    embed_local,
    hermitian_eigendecomposition,
    kernel_basis,
)
from .operators import (
    ising_diagonal,
    offset_diagonal,
    penalty_indicator,
    qubit_ising_diagonal,
)
from .states import HALF_PI, undefined_product, xi_state


class EmptyKernelError(RuntimeError):
    """The allowed manifold is empty where the protocol needs one."""


class SolverFailure(RuntimeError):
    """The iterative solver exhausted its backtracking budget."""


def sweep_grid(steps: int, start: float = 0.0, stop: float = HALF_PI) -> np.ndarray:
    """Right endpoints of `steps` equal slices of [start, stop]."""
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps}")
    if not stop > start:
        raise ValueError(f"empty sweep range [{start}, {stop}]")
    grid = start + np.arange(1, steps + 1) * ((stop - start) / steps)
    grid[-1] = stop  # rounding must not push the last angle past the endpoint
    return grid


def record_indices(steps: int, max_points: int = 1001) -> np.ndarray:
    """Step indices to record, at most max_points, always including the last."""
    if steps <= max_points:
        return np.arange(steps)
    idx = np.unique(np.linspace(0, steps - 1, max_points).round().astype(int))
    return idx


@dataclass
class ZenoSystem:
    """A chain plus everything the protocol forbids on it.

    Per unit a swept coupling state is forbidden with rate unit_rates[j]
    (bias angle phis[j]); each clause of `formula`, each pattern implied by
    `cardinality`, and each entry of extra_patterns contributes a diagonal
    projector with rate pattern_rate.  Duplicate patterns accumulate weight.
    """

    spec: SpaceSpec
    formula: CnfFormula = None
    cardinality: CardinalityConstraint = None
    extra_patterns: tuple = ()
    unit_rates: np.ndarray = None
    pattern_rate: float = 1.0
    phis: np.ndarray = None

    def __post_init__(self):
        n = self.spec.n_units
        if self.formula is not None and self.formula.n_vars != n:
            raise ValueError("formula size does not match the space")
        if self.unit_rates is None:
            self.unit_rates = np.ones(n)
        self.unit_rates = np.asarray(self.unit_rates, dtype=float)
        if self.unit_rates.shape != (n,):
            raise ValueError("need one coupling rate per unit")
        if self.phis is None:
            self.phis = np.full(n, math.pi / 4)
        self.phis = np.asarray(self.phis, dtype=float)
        if self.phis.shape != (n,):
            raise ValueError("need one bias angle per unit")
        groups = []
        if self.formula is not None:
            for clause in self.formula.clauses:
                groups.append((clause.forbidden_pattern(), clause.variables))
        if self.cardinality is not None:
            all_units = tuple(range(n))
            for pattern in cardinality_forbidden_patterns(self.cardinality, self.spec):
                groups.append((pattern, all_units))
        for pattern, units in self.extra_patterns:
            groups.append((tuple(int(d) for d in pattern), tuple(int(y) for y in units)))
        self._pattern_groups = tuple(groups)
        table = digit_table(self.spec)
        diag = np.zeros(self.spec.dim)
        forbidden = np.zeros(self.spec.dim, dtype=bool)
        for pattern, units in groups:
            if len(pattern) != len(units):
                raise ValueError(f"pattern {pattern} does not fit units {units}")
            hit = np.all(table[:, list(units)] == np.asarray(pattern), axis=1)
            diag += hit
            forbidden |= hit
        self._pattern_diag = self.pattern_rate * diag
        self._allowed_mask = ~forbidden

    @property
    def pattern_groups(self) -> tuple:
        return self._pattern_groups

    def pattern_diagonal(self) -> np.ndarray:
        return self._pattern_diag

    def allowed_mask(self) -> np.ndarray:
        """Bool diagonal mask of states outside every forbidden pattern."""
        return self._allowed_mask

    def generator(self, theta: float) -> np.ndarray:
        """Sum of weighted projectors onto everything forbidden at theta."""
        G = np.diag(self._pattern_diag)
        same_phi = np.all(self.phis == self.phis[0])
        proj = None
        for j in range(self.spec.n_units):
            if proj is None or not same_phi:
                xi = xi_state(theta, self.phis[j], self.spec.levels)
                proj = np.outer(xi, xi)
            G += self.unit_rates[j] * embed_local(proj, (j,), self.spec)
        return G

    def valid_bit_indices(self) -> np.ndarray:
        """Indices of fully defined digit strings allowed by every pattern."""
        table = digit_table(self.spec)
        defined = np.all(table < self.spec.levels, axis=1)
        return np.flatnonzero(defined & self._allowed_mask)


@dataclass
class SweepRecord:
    """Traces and final states of one engine run over several runtimes."""

    grid: np.ndarray          # recorded sweep-parameter values, (n_rec,)
    times: np.ndarray         # total runtimes, (n_T,)
    survival: np.ndarray      # squared norm, (n_rec, n_T)
    success: np.ndarray       # total weight on the targets, (n_rec, n_T)
    final_states: np.ndarray  # (dim, n_T)
    manifold: np.ndarray = None  # weight on the valid manifold, (n_rec, n_T)

    @property
    def final_survival(self) -> np.ndarray:
        return self.survival[-1]

    @property
    def final_success(self) -> np.ndarray:
        return self.success[-1]


def _as_times(times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or times.size == 0 or np.any(times <= 0):
        raise ValueError("runtimes must be a non-empty array of positive values")
    return times


def _weight_on(states: np.ndarray, indices) -> np.ndarray:
    if len(indices) == 0:
        return np.zeros(states.shape[1])
    return np.sum(np.abs(states[np.asarray(indices, dtype=int), :]) ** 2, axis=0)


def dissipative_sweep(
    system: ZenoSystem,
    times,
    steps: int = 1000,
    theta_start: float = 0.0,
    theta_stop: float = HALF_PI,
    initial: np.ndarray = None,
    target_indices=(),
    record_points: int = 1001,
) -> SweepRecord:
    """Piecewise-constant decay exp(-G(theta) dt) along a linear theta ramp.

    Norm decays monotonically; survival is the squared norm and success the
    unnormalised weight on the targets.
    """
    times = _as_times(times)
    thetas = sweep_grid(steps, theta_start, theta_stop)
    dts = times / steps
    if initial is None:
        initial = undefined_product(system.spec)
    states = np.repeat(np.asarray(initial, dtype=float)[:, None], times.size, axis=1)
    rec = record_indices(steps, record_points)
    rec_set = {int(i): r for r, i in enumerate(rec)}
    survival = np.empty((rec.size, times.size))
    success = np.empty((rec.size, times.size))
    for k, theta in enumerate(thetas):
        lam, vecs = hermitian_eigendecomposition(system.generator(theta), check=False)
        work = vecs.T @ states
        work *= np.exp(-np.clip(lam, 0.0, None)[:, None] * dts[None, :])
        states = vecs @ work
        r = rec_set.get(k)
        if r is not None:
            survival[r] = np.sum(states**2, axis=0)
            success[r] = _weight_on(states, target_indices)
    return SweepRecord(thetas[rec], times, survival, success, states)


def _apply_unit(psi: np.ndarray, op: np.ndarray, unit: int, spec: SpaceSpec) -> np.ndarray:
    d = spec.local_dim
    lead = d ** (spec.n_units - 1 - unit)
    trail = d**unit
    cube = psi.reshape(lead, d, trail)
    return np.einsum("pq,aqb->apb", op, cube).reshape(-1)


def measurement_sweep(
    system: ZenoSystem,
    n_measurements: int,
    theta_start: float = 0.0,
    theta_stop: float = HALF_PI,
    initial: np.ndarray = None,
    target_indices=(),
    record_points: int = 1001,
) -> SweepRecord:
    """Null-result branch of projective detector rounds along the ramp.

    Each round first checks every unit for its coupling state, then checks
    the forbidden patterns; the surviving branch keeps its (shrinking) norm.
    Unit checks commute with each other exactly, as do the diagonal pattern
    checks, so within each group the application order is irrelevant.
    """
    thetas = sweep_grid(n_measurements, theta_start, theta_stop)
    if initial is None:
        initial = undefined_product(system.spec)
    psi = np.asarray(initial, dtype=float).copy()
    keep = system.allowed_mask()
    rec = record_indices(n_measurements, record_points)
    rec_set = {int(i): r for r, i in enumerate(rec)}
    survival = np.empty(rec.size)
    success = np.empty(rec.size)
    same_phi = np.all(system.phis == system.phis[0])
    eye = np.eye(system.spec.local_dim)
    for k, theta in enumerate(thetas):
        op = None
        for j in range(system.spec.n_units):
            if op is None or not same_phi:
                xi = xi_state(theta, system.phis[j], system.spec.levels)
                op = eye - np.outer(xi, xi)
            psi = _apply_unit(psi, op, j, system.spec)
        psi *= keep
        r = rec_set.get(k)
        if r is not None:
            survival[r] = float(psi @ psi)
            success[r] = float(_weight_on(psi[:, None], target_indices)[0])
    return SweepRecord(
        thetas[rec],
        np.array([float(n_measurements)]),
        survival[:, None],
        success[:, None],
        psi[:, None],
    )


def hamiltonian_sweep(
    hamiltonian_of,
    times,
    steps: int = 1000,
    start: float = 0.0,
    stop: float = HALF_PI,
    initial: np.ndarray = None,
    target_indices=(),
    manifold_indices=None,
    record_points: int = 1001,
) -> SweepRecord:
    """Unitary ramp under a parameter-dependent Hamiltonian."""
    times = _as_times(times)
    grid = sweep_grid(steps, start, stop)
    dts = times / steps
    if initial is None:
        raise ValueError("hamiltonian_sweep needs an explicit initial state")
    states = np.repeat(np.asarray(initial, dtype=complex)[:, None], times.size, axis=1)
    rec = record_indices(steps, record_points)
    rec_set = {int(i): r for r, i in enumerate(rec)}
    survival = np.empty((rec.size, times.size))
    success = np.empty((rec.size, times.size))
    manifold = None if manifold_indices is None else np.empty((rec.size, times.size))
    for k, value in enumerate(grid):
        lam, vecs = hermitian_eigendecomposition(hamiltonian_of(value), check=False)
        work = vecs.conj().T @ states
        work *= np.exp(-1j * lam[:, None] * dts[None, :])
        states = vecs @ work
        r = rec_set.get(k)
        if r is not None:
            survival[r] = np.sum(np.abs(states) ** 2, axis=0)
            success[r] = _weight_on(states, target_indices)
            if manifold is not None:
                manifold[r] = _weight_on(states, manifold_indices)
    return SweepRecord(grid[rec], times, survival, success, states, manifold)


def adiabatic_sweep(
    system: ZenoSystem,
    times,
    alpha: float = 0.0,
    problem=None,
    steps: int = 1000,
    theta_start: float = 0.0,
    theta_stop: float = HALF_PI,
    initial: np.ndarray = None,
    target_indices=(),
    manifold_indices=None,
    record_points: int = 1001,
) -> SweepRecord:
    """Unitary ramp under the forbidden-state projectors plus diagonal cost.

    H(theta) is the system generator (projector weights double as energies)
    plus the offset of strength alpha and, when given, the Ising cost.
    """
    extra = offset_diagonal(alpha, system.spec)
    if problem is not None:
        extra = extra + ising_diagonal(problem, system.spec)
    if initial is None:
        initial = undefined_product(system.spec)

    def hamiltonian_of(theta):
        return system.generator(theta) + np.diag(extra)

    return hamiltonian_sweep(
        hamiltonian_of,
        times,
        steps=steps,
        start=theta_start,
        stop=theta_stop,
        initial=initial,
        target_indices=target_indices,
        manifold_indices=manifold_indices,
        record_points=record_points,
    )


def transverse_field_sweep(
    problem,
    penalty: np.ndarray,
    times,
    steps: int = 1000,
    target_indices=(),
    record_points: int = 1001,
) -> SweepRecord:
    """Linear transverse-field ramp on 2^n qubits with a penalised cost.

    Starts from the uniform positive superposition (the s = 0 ground state);
    the sweep parameter runs over s in [0, 1].
    """
    from .operators import transverse_field_hamiltonian

    n = problem.n_units
    initial = np.full(2**n, 2.0 ** (-n / 2))

    def hamiltonian_of(s):
        return transverse_field_hamiltonian(problem, s, penalty)

    return hamiltonian_sweep(
        hamiltonian_of,
        times,
        steps=steps,
        start=0.0,
        stop=1.0,
        initial=initial,
        target_indices=target_indices,
        record_points=record_points,
    )


def projected_sweep(
    system: ZenoSystem,
    times,
    diagonal: np.ndarray,
    steps: int = 1000,
    theta_start: float = 0.0,
    theta_stop: float = HALF_PI,
    initial: np.ndarray = None,
    target_indices=(),
    manifold_indices=None,
    record_points: int = 1001,
    kernel_tol: float = KERNEL_TOL,
) -> SweepRecord:
    """Perfect-projection limit: each step measures whether the state is
    still in the allowed manifold, then evolves it under the cost diagonal
    compressed to that manifold.

    The projection permanently discards the weight that the manifold's
    rotation moved out of reach, so survival is non-increasing; within the
    manifold the compressed cost (plus offset) generates the dynamics.
    Raises EmptyKernelError when no allowed state exists at some step, which
    certifies the constraint set unsatisfiable.
    """
    times = _as_times(times)
    thetas = sweep_grid(steps, theta_start, theta_stop)
    dts = times / steps
    diagonal = np.asarray(diagonal, dtype=float)
    if diagonal.shape != (system.spec.dim,):
        raise ValueError("diagonal must cover the full space")
    if initial is None:
        initial = undefined_product(system.spec)
    states = np.repeat(np.asarray(initial, dtype=complex)[:, None], times.size, axis=1)
    rec = record_indices(steps, record_points)
    rec_set = {int(i): r for r, i in enumerate(rec)}
    survival = np.empty((rec.size, times.size))
    success = np.empty((rec.size, times.size))
    manifold = None if manifold_indices is None else np.empty((rec.size, times.size))
    for k, theta in enumerate(thetas):
        basis = kernel_basis(system.generator(theta), kernel_tol)
        if basis.shape[1] == 0:
            raise EmptyKernelError(f"no allowed states at theta={theta}")
        coords = basis.conj().T @ states
        reduced = (basis.conj().T * diagonal) @ basis
        lam, vecs = np.linalg.eigh(reduced)
        work = vecs.conj().T @ coords
        work *= np.exp(-1j * lam[:, None] * dts[None, :])
        states = basis @ (vecs @ work)
        r = rec_set.get(k)
        if r is not None:
            survival[r] = np.sum(np.abs(states) ** 2, axis=0)
            success[r] = _weight_on(states, target_indices)
            if manifold is not None:
                manifold[r] = _weight_on(states, manifold_indices)
    return SweepRecord(thetas[rec], times, survival, success, states, manifold)


def restricted_spectrum(
    system: ZenoSystem,
    diagonal: np.ndarray,
    thetas,
    kernel_tol: float = KERNEL_TOL,
):
    """Eigenvalues of the cost diagonal compressed to the allowed manifold,
    one ascending array per theta (sizes can differ between thetas)."""
    diagonal = np.asarray(diagonal, dtype=float)
    out = []
    for theta in np.asarray(thetas, dtype=float):
        basis = kernel_basis(system.generator(theta), kernel_tol)
        if basis.shape[1] == 0:
            raise EmptyKernelError(f"no allowed states at theta={theta}")
        reduced = (basis.conj().T * diagonal) @ basis
        out.append(np.linalg.eigvalsh(reduced))
    return out


# ------------------------------------------------------ constraint strength

@dataclass(frozen=True)
class StrengthScan:
    """Final success of three constraint implementations per strength."""

    strengths: np.ndarray            # (n_w,)
    times: np.ndarray                # (n_T,)
    success_three_state: np.ndarray  # (n_w, n_T)
    success_tf: np.ndarray           # (n_w, n_T)
    success_projected: np.ndarray    # (n_T,), strength-independent
    ground_state_ok: np.ndarray      # (n_w,) penalised optimum is the target


def constrained_optimum(problem, constraint: CardinalityConstraint) -> tuple:
    """Bit assignment minimising the cost among constraint-satisfying ones."""
    best = None
    for bits in product((0, 1), repeat=problem.n_units):
        if constraint.infeasible(bits):
            continue
        energy = problem.energy(bits)
        if best is None or energy < best[0]:
            best = (energy, bits)
    if best is None:
        raise ValueError("constraint admits no bit string")
    return best[1]


def constraint_strength_scan(
    problem,
    constraint: CardinalityConstraint,
    strengths,
    times,
    alpha: float = 1.0,
    steps: int = 1000,
) -> StrengthScan:
    """Sweep the shared strength of the coupling states and the forbidden
    patterns, comparing the three-state ramp against a transverse-field ramp
    with the same penalty, plus the strength-independent perfect-projection
    reference."""
    strengths = np.asarray(strengths, dtype=float)
    if strengths.ndim != 1 or strengths.size == 0 or np.any(strengths <= 0):
        raise ValueError("strengths must be a non-empty array of positive values")
    times = _as_times(times)
    n = problem.n_units
    spec = SpaceSpec(n)
    target_bits = constrained_optimum(problem, constraint)
    target3 = basis_index(target_bits, spec)
    target2 = sum(b << j for j, b in enumerate(target_bits))
    diagonal = ising_diagonal(problem, spec) + offset_diagonal(alpha, spec)
    reference = projected_sweep(
        ZenoSystem(spec, cardinality=constraint),
        times,
        diagonal,
        steps=steps,
        target_indices=[target3],
        record_points=2,
    )
    violating = [
        bits for bits in product((0, 1), repeat=n) if constraint.infeasible(bits)
    ]
    penalty = penalty_indicator(violating, n)
    qubit_cost = qubit_ising_diagonal(problem)
    three_state = np.empty((strengths.size, times.size))
    tf = np.empty((strengths.size, times.size))
    ground_ok = np.empty(strengths.size, dtype=bool)
    for i, w in enumerate(strengths):
        system = ZenoSystem(
            spec,
            cardinality=constraint,
            unit_rates=np.full(n, w),
            pattern_rate=float(w),
        )
        three_state[i] = adiabatic_sweep(
            system,
            times,
            alpha=alpha,
            problem=problem,
            steps=steps,
            target_indices=[target3],
            record_points=2,
        ).final_success
        tf[i] = transverse_field_sweep(
            problem,
            w * penalty,
            times,
            steps=steps,
            target_indices=[target2],
            record_points=2,
        ).final_success
        ground_ok[i] = int(np.argmin(qubit_cost + w * penalty)) == target2
    return StrengthScan(
        strengths, times, three_state, tf, reference.final_success, ground_ok
    )


# ----------------------------------------------------------- bit-fix solver

@lru_cache(maxsize=128)
def _zeno_final_state(
    formula: CnfFormula, theta_stop: float, total_time: float, steps: int
) -> np.ndarray:
    """Projected-sweep end state for a formula; raises EmptyKernelError when
    the allowed manifold vanishes somewhere along the ramp (unsatisfiable)."""
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    record = projected_sweep(
        system,
        total_time,
        np.zeros(spec.dim),
        steps=steps,
        theta_stop=theta_stop,
        record_points=2,
    )
    state = record.final_states[:, 0]
    state.setflags(write=False)
    return state


def measure_digits(state: np.ndarray, spec: SpaceSpec, rng) -> tuple:
    """Sample one digit string from the squared amplitudes of a state."""
    weights = np.abs(np.asarray(state)) ** 2
    total = float(weights.sum())
    if total <= 0.0:
        raise EmptyKernelError("cannot measure a fully decayed state")
    index = int(rng.choice(weights.size, p=weights / total))
    return digit_string(index, spec)


def sampled_u_fraction(
    formula: CnfFormula,
    theta: float,
    total_time: float,
    steps: int,
    n_samples: int,
    rng,
) -> float:
    """Fraction of undefined digits across repeated measurements of the
    swept state (one shared sweep, independent samples)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    state = _zeno_final_state(formula, float(theta), float(total_time), int(steps))
    spec = SpaceSpec(formula.n_vars)
    weights = np.abs(state) ** 2
    weights = weights / weights.sum()
    indices = rng.choice(weights.size, size=int(n_samples), p=weights)
    digits = digit_table(spec)[indices]
    return float(np.mean(digits == spec.undefined_level))


def iterative_sat_solve(
    formula: CnfFormula,
    rng,
    theta_stop: float = math.pi / 4,
    sweep_time: float = 200.0,
    steps: int = 200,
    max_backtracks: int = None,
):
    """Fix variables by repeated partial sweeps and measurements.

    Each round runs a projected sweep of the current reduced problem up to
    theta_stop, measures every unit, and pins the digits that came out
    defined.  An empty allowed manifold or a falsified clause is evidence
    the current fixes are inconsistent: the last batch is undone.  Returns
    the satisfying assignment, or None when the formula itself admits no
    allowed state; raises SolverFailure once the backtrack budget is spent.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if max_backtracks is None:
        max_backtracks = 10 * formula.n_vars
    fixed = {}
    history = []
    backtracks = 0

    def backtrack():
        nonlocal backtracks
        backtracks += 1
        if backtracks > max_backtracks:
            raise SolverFailure(f"gave up after {backtracks - 1} backtracks")
        for var in history.pop():
            del fixed[var]

    while True:
        try:
            reduced, kept = substitute_bits(formula, fixed)
        except ClauseFalsified:
            if not history:
                return None
            backtrack()
            continue
        if reduced.n_vars == 0:
            assignment = tuple(fixed[v] for v in range(formula.n_vars))
            if not satisfies(formula, assignment):
                raise SolverFailure("complete assignment fails the formula")
            return assignment
        try:
            state = _zeno_final_state(
                reduced, float(theta_stop), float(sweep_time), int(steps)
            )
        except EmptyKernelError:
            if not history:
                return None
            backtrack()
            continue
        digits = measure_digits(state, SpaceSpec(reduced.n_vars), rng)
        batch = [kept[i] for i, d in enumerate(digits) if d in (0, 1)]
        for i, d in enumerate(digits):
            if d in (0, 1):
                fixed[kept[i]] = int(d)
        if batch:
            history.append(batch)
