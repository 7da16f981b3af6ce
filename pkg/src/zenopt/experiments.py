"""Named, parameter-frozen experiment runners writing deterministic CSVs.

Each catalog entry freezes the published figure's parameters, writes one or
more CSV files plus a single metadata sidecar, and returns the written paths.
Keyword overrides (grids, step counts) exist so tests can run scaled-down
versions; defaults always reproduce the full figure data.

CSV conventions: comma separation, header row, floats at 12 significant
digits, atomic replace on write. Metadata sidecars carry the effective
parameters and per-file shapes, with no timestamps, so re-running an
experiment is byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .analysis import (
    one_hot_offdiagonal,
    one_hot_offdiagonal_closed_form,
    one_hot_states,
    spectrum_vs_theta,
)
from .constraints import (
    CardinalityConstraint,
    domain_wall_clauses,
    load_bundled_instance,
    unsatisfiable_variant,
)
from .evolution import (
    ZenoSystem,
    adiabatic_sweep,
    constraint_strength_scan,
    dissipative_sweep,
    measurement_sweep,
    projected_sweep,
    restricted_spectrum,
    sweep_grid,
)
from .hilbert import SpaceSpec, basis_index
from .operators import (
    IsingProblem,
    biased_z_coefficients,
    ising_diagonal,
    offset_diagonal,
    pair_drive_matrix,
    projected_local_z,
    qudit_drive_identity_residual,
    stirap_mixing_angle,
    stirap_pulse_schedule,
    PAULI_X,
    PAULI_Z,
)
from .states import qudit_tilde_j, tilde_bit

# Random field values used by the strength-scan and at-most-two-zeros runs;
# unconstrained optimum 00011, best three-hot configuration 00111.
BUNDLED_FIELDS = (
    -0.67513783,
    -0.62099006,
    -0.14675767,
    0.72688415,
    0.56602992,
)

FIG3_TIMES = tuple(10.0**k for k in range(-1, 10))
FIG4_COUNTS = tuple(10**k for k in range(1, 7))
FIG6_TIMES = tuple(10.0**k for k in range(-1, 10))
FIG6_TIMES_OFFSET = tuple(10.0**k for k in range(1, 6))
FIG7_STRENGTHS = tuple(10.0 ** (k / 2.0) for k in range(-2, 7))
FIG7_TIMES = (1.0, 10.0, 100.0)
APPENDIX_TIMES = (0.1, 1.0, 10.0, 100.0)

SAT_TARGET = (0, 0, 0, 0, 0)
THREE_HOT_TARGET = (0, 0, 1, 1, 1)


def field_problem() -> IsingProblem:
    return IsingProblem(np.array(BUNDLED_FIELDS), {})


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows) -> dict:
    """Write one CSV atomically; returns its shape summary for metadata."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    count = 0
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(_format_value(v) for v in row))
        count += 1
    _atomic_write(path, "\n".join(lines) + "\n")
    return {"columns": list(header), "rows": count}


def _write_metadata(out_dir: Path, name: str, parameters: dict, files: dict) -> Path:
    meta = {"experiment": name, "parameters": parameters, "files": files}
    path = out_dir / f"{name}.meta.json"
    _atomic_write(path, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def _spectrum_rows(panel, scan):
    for i, theta in enumerate(scan.thetas):
        kernel = int(scan.kernel_counts[i])
        for t in range(scan.dimension):
            yield (panel, theta, t, scan.curves[i, t], scan.colors[t], kernel)


def _trace_rows(record, times, trace_of, keys=None):
    keys = range(len(times)) if keys is None else keys
    for j in keys:
        for i, theta in enumerate(record.grid):
            yield trace_of(j, i, theta)


def run_fig2_spectrum(out_dir: Path, n_points: int = 100) -> dict:
    formula = load_bundled_instance()
    spec = SpaceSpec(formula.n_vars)
    grid = np.linspace(0.0, np.pi / 2.0, n_points)
    files = {}
    rows = []
    for panel, instance in (
        ("sat", formula),
        ("unsat", unsatisfiable_variant(formula)),
    ):
        system = ZenoSystem(spec, formula=instance)
        scan = spectrum_vs_theta(system.generator, grid)
        rows.extend(_spectrum_rows(panel, scan))
    files["fig2-spectrum.csv"] = write_csv(
        out_dir / "fig2-spectrum.csv",
        ("panel", "theta", "track", "eigenvalue", "color", "kernel_count"),
        rows,
    )
    return {"parameters": {"n_points": n_points, "unit_rates": 1.0}, "files": files}


def run_fig3_dissipative(
    out_dir: Path,
    times=FIG3_TIMES,
    steps: int = 1000,
    record_points: int = 1001,
) -> dict:
    formula = load_bundled_instance()
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    target = basis_index(SAT_TARGET, spec)
    record = dissipative_sweep(
        system, times, steps=steps, target_indices=[target], record_points=record_points
    )
    files = {}
    for j, total_time in enumerate(times):
        name = f"fig3-dissipative-T1e{int(round(np.log10(total_time)))}.csv"
        files[name] = write_csv(
            out_dir / name,
            ("theta", "survival", "success"),
            (
                (record.grid[i], record.survival[i, j], record.success[i, j])
                for i in range(record.grid.size)
            ),
        )
    files["fig3-dissipative-final.csv"] = write_csv(
        out_dir / "fig3-dissipative-final.csv",
        ("total_time", "final_survival", "final_success"),
        (
            (t, record.final_survival[j], record.final_success[j])
            for j, t in enumerate(times)
        ),
    )
    return {
        "parameters": {"times": list(times), "steps": steps, "target": "00000"},
        "files": files,
    }


def run_fig4_measurement(
    out_dir: Path, counts=FIG4_COUNTS, record_points: int = 1001
) -> dict:
    formula = load_bundled_instance()
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    target = basis_index(SAT_TARGET, spec)
    files = {}
    finals = []
    for n_measurements in counts:
        record = measurement_sweep(
            system,
            n_measurements,
            target_indices=[target],
            record_points=record_points,
        )
        name = f"fig4-measurement-N1e{int(round(np.log10(n_measurements)))}.csv"
        files[name] = write_csv(
            out_dir / name,
            ("theta", "survival", "success"),
            (
                (record.grid[i], record.survival[i, 0], record.success[i, 0])
                for i in range(record.grid.size)
            ),
        )
        finals.append(
            (n_measurements, record.final_survival[0], record.final_success[0])
        )
    files["fig4-measurement-final.csv"] = write_csv(
        out_dir / "fig4-measurement-final.csv",
        ("n_measurements", "final_survival", "final_success"),
        finals,
    )
    return {
        "parameters": {"counts": list(counts), "target": "00000"},
        "files": files,
    }


def run_fig5_spectra(out_dir: Path, n_points: int = 100) -> dict:
    formula = load_bundled_instance()
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    grid = np.linspace(0.0, np.pi / 2.0, n_points)
    rows = []
    for alpha in (0.0, 0.1):
        offset = offset_diagonal(alpha, spec)
        scan = spectrum_vs_theta(lambda th: system.generator(th) + np.diag(offset), grid)
        rows.extend(_spectrum_rows(f"{alpha:g}", scan))
    files = {
        "fig5-spectra.csv": write_csv(
            out_dir / "fig5-spectra.csv",
            ("offset_alpha", "theta", "track", "eigenvalue", "color", "kernel_count"),
            rows,
        )
    }
    return {"parameters": {"n_points": n_points, "alphas": [0.0, 0.1]}, "files": files}


def run_fig6_adiabatic(
    out_dir: Path,
    times=FIG6_TIMES,
    times_offset=FIG6_TIMES_OFFSET,
    steps: int = 1000,
    record_points: int = 1001,
) -> dict:
    formula = load_bundled_instance()
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    target = basis_index(SAT_TARGET, spec)
    trace_rows = []
    final_rows = []
    for alpha, grid in ((0.0, times), (0.1, times_offset)):
        record = adiabatic_sweep(
            system,
            grid,
            alpha=alpha,
            steps=steps,
            target_indices=[target],
            record_points=record_points,
        )
        for j, total_time in enumerate(grid):
            trace_rows.extend(
                (alpha, total_time, record.grid[i], record.success[i, j])
                for i in range(record.grid.size)
            )
            final_rows.append((alpha, total_time, record.final_success[j]))
    files = {
        "fig6-adiabatic.csv": write_csv(
            out_dir / "fig6-adiabatic.csv",
            ("offset_alpha", "total_time", "theta", "success"),
            trace_rows,
        ),
        "fig6-adiabatic-final.csv": write_csv(
            out_dir / "fig6-adiabatic-final.csv",
            ("offset_alpha", "total_time", "final_success"),
            final_rows,
        ),
    }
    return {
        "parameters": {
            "times": [float(t) for t in times],
            "times_offset": [float(t) for t in times_offset],
            "steps": steps,
            "alphas": [0.0, 0.1],
        },
        "files": files,
    }


def run_fig7_scan(
    out_dir: Path,
    strengths=FIG7_STRENGTHS,
    times=FIG7_TIMES,
    steps: int = 1000,
) -> dict:
    scan = constraint_strength_scan(
        field_problem(),
        CardinalityConstraint("exactly", 3),
        strengths,
        times,
        alpha=1.0,
        steps=steps,
    )
    files = {
        "fig7-scan.csv": write_csv(
            out_dir / "fig7-scan.csv",
            (
                "strength",
                "total_time",
                "success_three_state",
                "success_tf",
                "ground_state_ok",
            ),
            (
                (
                    scan.strengths[i],
                    scan.times[j],
                    scan.success_three_state[i, j],
                    scan.success_tf[i, j],
                    bool(scan.ground_state_ok[i]),
                )
                for i in range(scan.strengths.size)
                for j in range(scan.times.size)
            ),
        ),
        "fig7-projected.csv": write_csv(
            out_dir / "fig7-projected.csv",
            ("total_time", "success_projected"),
            (
                (scan.times[j], scan.success_projected[j])
                for j in range(scan.times.size)
            ),
        ),
    }
    return {
        "parameters": {
            "strengths": [float(w) for w in strengths],
            "times": [float(t) for t in times],
            "steps": steps,
            "alpha": 1.0,
            "fields": list(BUNDLED_FIELDS),
            "target": "00111",
        },
        "files": files,
    }


def _run_projected_figure(
    out_dir: Path,
    name: str,
    system: ZenoSystem,
    diagonal: np.ndarray,
    target: int,
    times,
    steps: int,
    spectrum_points: int,
    record_points: int,
    parameters: dict,
) -> dict:
    record = projected_sweep(
        system,
        times,
        diagonal,
        steps=steps,
        target_indices=[target],
        record_points=record_points,
    )
    grid = sweep_grid(spectrum_points)
    spectra = restricted_spectrum(system, diagonal, grid)
    files = {
        f"{name}.csv": write_csv(
            out_dir / f"{name}.csv",
            ("total_time", "theta", "survival", "success"),
            (
                (t, record.grid[i], record.survival[i, j], record.success[i, j])
                for j, t in enumerate(times)
                for i in range(record.grid.size)
            ),
        ),
        f"{name}-final.csv": write_csv(
            out_dir / f"{name}-final.csv",
            ("total_time", "final_survival", "final_success"),
            (
                (t, record.final_survival[j], record.final_success[j])
                for j, t in enumerate(times)
            ),
        ),
        f"{name}-spectrum.csv": write_csv(
            out_dir / f"{name}-spectrum.csv",
            ("theta", "track", "eigenvalue"),
            (
                (theta, t, spectra[i][t])
                for i, theta in enumerate(grid)
                for t in range(len(spectra[i]))
            ),
        ),
    }
    return {"parameters": parameters, "files": files}


def run_figE_dw4(
    out_dir: Path,
    times=APPENDIX_TIMES,
    steps: int = 1000,
    spectrum_points: int = 100,
    record_points: int = 1001,
) -> dict:
    formula = domain_wall_clauses(5)
    spec = SpaceSpec(formula.n_vars)
    system = ZenoSystem(spec, formula=formula)
    target = basis_index((1, 1, 1, 1), spec)
    diagonal = offset_diagonal(2.0, spec)
    diagonal[target] += -2.0
    return _run_projected_figure(
        out_dir,
        "figE-dw4",
        system,
        diagonal,
        target,
        times,
        steps,
        spectrum_points,
        record_points,
        {
            "times": list(times),
            "steps": steps,
            "alpha": 2.0,
            "target": "1111",
            "target_energy": -2.0,
        },
    )


def run_figE_oh5(
    out_dir: Path,
    times=APPENDIX_TIMES,
    steps: int = 1000,
    spectrum_points: int = 100,
    record_points: int = 1001,
) -> dict:
    spec = SpaceSpec(5)
    system = ZenoSystem(spec, cardinality=CardinalityConstraint("exactly", 1))
    target = basis_index((1, 0, 0, 0, 0), spec)
    diagonal = offset_diagonal(2.0, spec)
    diagonal[target] += -2.0
    return _run_projected_figure(
        out_dir,
        "figE-oh5",
        system,
        diagonal,
        target,
        times,
        steps,
        spectrum_points,
        record_points,
        {
            "times": list(times),
            "steps": steps,
            "alpha": 2.0,
            "target": "10000",
            "target_energy": -2.0,
        },
    )


def run_figE_g2(
    out_dir: Path,
    times=APPENDIX_TIMES,
    steps: int = 1000,
    spectrum_points: int = 100,
    record_points: int = 1001,
) -> dict:
    problem = field_problem()
    spec = SpaceSpec(problem.n_units)
    system = ZenoSystem(
        spec, cardinality=CardinalityConstraint("at_most_zeros", 2)
    )
    target = basis_index(THREE_HOT_TARGET, spec)
    diagonal = ising_diagonal(problem, spec) + offset_diagonal(1.0, spec)
    return _run_projected_figure(
        out_dir,
        "figE-g2",
        system,
        diagonal,
        target,
        times,
        steps,
        spectrum_points,
        record_points,
        {
            "times": list(times),
            "steps": steps,
            "alpha": 1.0,
            "target": "00111",
            "fields": list(BUNDLED_FIELDS),
        },
    )


def run_stirap_check(out_dir: Path, n_points: int = 201) -> dict:
    tau, pulse_a, pulse_b = stirap_pulse_schedule(n_points)
    files = {
        "stirap-check.csv": write_csv(
            out_dir / "stirap-check.csv",
            ("tau", "pulse_a", "pulse_b", "mixing_angle"),
            (
                (tau[i], pulse_a[i], pulse_b[i], stirap_mixing_angle(pulse_a[i], pulse_b[i]))
                for i in range(tau.size)
            ),
        )
    }
    return {"parameters": {"n_points": n_points}, "files": files}


def _identity_rows():
    thetas = np.linspace(0.1, np.pi / 2.0, 5)
    for levels in (2, 3, 4, 5):
        for theta in thetas:
            yield (
                "qudit_drive",
                levels,
                None,
                theta,
                qudit_drive_identity_residual(theta, 1.0, levels),
            )
    for theta in thetas:
        resid = 0.0
        for bit in (0, 1):
            diff = qudit_tilde_j(theta, bit, 2) - tilde_bit(theta, bit)
            resid = max(resid, float(np.max(np.abs(diff))))
        yield ("qudit_reduction_m2", 2, None, theta, resid)
    for phi in np.linspace(0.15, np.pi / 2.0 - 0.15, 4):
        for theta in thetas:
            b_1, b_z, b_x = biased_z_coefficients(phi, theta)
            predicted = b_1 * np.eye(2) + b_z * PAULI_Z + b_x * PAULI_X
            resid = float(np.max(np.abs(projected_local_z(phi, theta) - predicted)))
            yield ("biased_sandwich", None, phi, theta, resid)
    for theta in thetas:
        lam = np.linalg.eigvalsh(pair_drive_matrix(theta, 1.0))
        expected = -np.sqrt(3.0) / 2.0 * np.cos(theta)
        resid = max(abs(lam[0] - expected), float(np.max(np.abs(lam[1:]))))
        yield ("pair_drive_rank1", 4, None, theta, resid)
    for theta in thetas:
        states = one_hot_states(5, theta)
        gram = states.T @ states
        yield ("one_hot_gram", 5, None, theta, float(np.max(np.abs(gram - np.eye(5)))))
        dual = abs(
            one_hot_offdiagonal(5, theta) - one_hot_offdiagonal_closed_form(5, theta)
        )
        yield ("one_hot_offdiagonal_dual", 5, None, theta, float(dual))


def run_appxA_identities(out_dir: Path) -> dict:
    files = {
        "appxA-identities.csv": write_csv(
            out_dir / "appxA-identities.csv",
            ("identity", "levels", "phi", "theta", "residual"),
            _identity_rows(),
        )
    }
    return {"parameters": {}, "files": files}


CATALOG = {
    "fig2-spectrum": run_fig2_spectrum,
    "fig3-dissipative": run_fig3_dissipative,
    "fig4-measurement": run_fig4_measurement,
    "fig5-spectra": run_fig5_spectra,
    "fig6-adiabatic": run_fig6_adiabatic,
    "fig7-scan": run_fig7_scan,
    "figE-dw4": run_figE_dw4,
    "figE-oh5": run_figE_oh5,
    "figE-g2": run_figE_g2,
    "stirap-check": run_stirap_check,
    "appxA-identities": run_appxA_identities,
}


def run_experiment(name: str, out_dir, **overrides) -> list:
    """Run one catalog entry; returns the paths written (CSVs + metadata)."""
    if name not in CATALOG:
        raise KeyError(f"unknown experiment {name!r}; known: {sorted(CATALOG)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = CATALOG[name](out_dir, **overrides)
    meta_path = _write_metadata(out_dir, name, result["parameters"], result["files"])
    return [out_dir / filename for filename in result["files"]] + [meta_path]
