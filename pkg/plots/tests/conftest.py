"""Shared fixture: a scaled-down but complete experiment catalog.

The simulator package generates the fixture CSVs; the code under test only
ever reads them.  Grids are shrunk so the whole catalog takes seconds, which
keeps every file family and header identical to a full run.
"""

from __future__ import annotations

import pytest

SCALED_OVERRIDES = {
    "fig2-spectrum": {"n_points": 12},
    "fig3-dissipative": {"times": (0.1, 1.0, 10.0), "steps": 100, "record_points": 9},
    "fig4-measurement": {"counts": (10, 100), "record_points": 9},
    "fig5-spectra": {"n_points": 8},
    "fig6-adiabatic": {
        "times": (1.0, 10.0),
        "times_offset": (10.0,),
        "steps": 100,
        "record_points": 9,
    },
    "fig7-scan": {"strengths": (1.0, 100.0), "times": (1.0, 10.0), "steps": 100},
    "figE-dw4": {
        "times": (0.1, 1.0),
        "steps": 100,
        "spectrum_points": 10,
        "record_points": 9,
    },
    "figE-oh5": {
        "times": (0.1, 1.0),
        "steps": 100,
        "spectrum_points": 10,
        "record_points": 9,
    },
    "figE-g2": {
        "times": (0.1, 1.0),
        "steps": 100,
        "spectrum_points": 10,
        "record_points": 9,
    },
    "stirap-check": {"n_points": 21},
    "appxA-identities": {},
}


@pytest.fixture(scope="session")
def catalog_dir(tmp_path_factory):
    zenopt_experiments = pytest.importorskip(
        "zenopt.experiments", reason="fixture CSVs come from the simulator package"
    )
    data_dir = tmp_path_factory.mktemp("catalog")
    assert sorted(SCALED_OVERRIDES) == sorted(zenopt_experiments.CATALOG)
    for name, overrides in SCALED_OVERRIDES.items():
        zenopt_experiments.run_experiment(name, data_dir, **overrides)
    return data_dir
