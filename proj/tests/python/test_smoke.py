import math
from pathlib import Path

import numpy as np
import pytest

dilab = pytest.importorskip("dilab")

HERE = Path(__file__).resolve().parent


def test_grid_and_mass():
    g = dilab.Grid("radial", 3, 10.0, 1000)
    f = np.exp(-g.radius**2 / 2)
    assert g.size == 1000
    assert dilab.mass(g, f) == pytest.approx(math.pi**1.5, rel=1e-9)


def test_free_gaussian_closed_form():
    g = dilab.Grid("cartesian", 1, 40.0, 512)
    h = dilab.Hamiltonian(g)
    x = g.axis
    f = np.exp(-x**2 / 2)
    t = 1.25
    d = 1 - 2j * t
    exact = np.exp(-0.5 * x**2 / d) / np.sqrt(d)
    assert np.max(np.abs(h.propagate(f, t) - exact)) < 1e-10
    assert np.max(np.abs(dilab.propagate_free(g, f, t) - exact)) < 1e-10


def test_perturbed_propagation_is_unitary():
    g = dilab.Grid("radial", 3, 30.0, 300)
    h = dilab.Hamiltonian(g, "inverse_power", {"c": 1.0, "p": 1.0})
    assert h.hypotheses["sr0"]
    f = dilab.initial_data(g, "gaussian", {"width": 2.0})
    u = h.propagate(f, 2.5)
    assert dilab.mass(g, u) == pytest.approx(dilab.mass(g, f), rel=1e-13)
    assert h.sobolev_norm(u, 0.5) == pytest.approx(h.sobolev_norm(f, 0.5), rel=1e-12)


def test_identity_terms():
    g = dilab.Grid("cartesian", 1, 40.0, 256)
    h = dilab.Hamiltonian(g, "inverse_power")
    f = np.exp(-g.axis**2 / 4).astype(complex)
    t = dilab.finite_T_terms(h, "japanese_bracket", {}, f, 2.0, 0.025)
    assert t["residual"] < 1e-4
    assert dilab.finite_T_terms(h, "constant", {}, f, 1.0, 0.05)["lhs"] == 0.0


def test_errors_are_raised():
    with pytest.raises(dilab.DilabError, match="unknown-family"):
        dilab.Hamiltonian(dilab.Grid("radial", 3, 10.0, 50), "coulomb")
    g = dilab.Grid("radial", 3, 10.0, 50)
    with pytest.raises(dilab.DilabError):
        dilab.mass(g, np.zeros(10))


def test_run_small_config():
    code, report, _ = dilab.run(HERE.parent / "cli" / "small_identity.toml")
    assert code == 0
    assert report["status"] == "ok"
    assert report["scalars"]["residual"] < 1e-3
    names = [name for name, _ in dilab.experiments()]
    assert "finite_T_identity" in names


def test_schema_error_has_no_report():
    code, report, message = dilab.run('[potental]\nfamily = "zero"\n', text=True)
    assert code == 2
    assert report is None
    assert "potental" in message
