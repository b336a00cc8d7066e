import math

import numpy as np
import pytest

import polariton as pl

OMEGA = 1.98451e-4


def test_unit_round_trip():
    assert pl.hartree_to_kelvin(pl.kelvin_to_hartree(300.0)) == pytest.approx(300.0, rel=1e-14)


def test_photon_operators_are_hermitian():
    mode = pl.CavityMode(OMEGA, 0.01, 6)
    q = pl.photon_q(mode)
    p = pl.photon_p(mode)
    assert np.allclose(q, q.conj().T)
    assert np.allclose(p, p.conj().T)


def test_normal_mode_spectrum():
    model = pl.harmonic_model(1.0, 1.0, 1.0, 30)
    block = pl.assemble_block(model, pl.CavityMode(1.0, 0.1, 30))
    e = block.eigenvalues
    assert e[0] == pytest.approx(1.001249, abs=5e-7)
    assert e[1] - e[0] == pytest.approx(0.951249, abs=5e-7)
    assert e[2] - e[0] == pytest.approx(1.051249, abs=5e-7)


def test_gauss_hermite_weights_sum_to_sqrt_pi():
    nodes, weights = pl.gauss_hermite_nodes(9)
    assert len(nodes) == 9
    assert sum(weights) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_decoupled_fluctuations_match_closed_form():
    model = pl.two_level_model(OMEGA, 1.0)
    mode = pl.CavityMode(OMEGA, 0.0, 40)
    ens = pl.build_ensemble(model, mode, 10.0, order=5)
    r = pl.fluctuations(ens, model, observable_coupling=0.01)
    assert r.dD2 == pytest.approx(r.bare_D, rel=1e-8)
    assert r.dA2 == pytest.approx(r.bare_A, rel=1e-8)


def test_rotor_ensemble_properties():
    model = pl.rotor_model(1.0 / (2.0 * OMEGA), 1.0, 3).with_com(pl.HD_PLUS_TOTAL_MASS, 1.0)
    mode = pl.CavityMode(OMEGA, 0.005, 3)
    ens = pl.build_ensemble(model, mode, 0.0)
    assert ens.total_weight() == pytest.approx(1.0, abs=1e-14)
    temps = pl.subsystem_temperatures(ens, model)
    assert temps["tau_m_K"] > 0.0
    assert temps["tau_pt_K"] > 0.0
    assert pl.parity_check(ens, model) < 1e-10
    rho_m = pl.partial_trace(ens, "m")
    assert np.trace(rho_m).real == pytest.approx(1.0, abs=1e-12)
    assert pl.log_negativity(ens, "m") == pytest.approx(pl.log_negativity(ens, "pt"), abs=1e-10)


def test_jc_negativity_agrees():
    spec = pl.JCSpectrum(0.0, OMEGA, 1.5 * OMEGA)
    for t in (0.5, 5.0, 50.0):
        assert pl.jc_negativity_analytic(spec, t) == pytest.approx(pl.jc_negativity_numeric(spec, t), abs=1e-12)


def test_run_spectrum_and_config_errors():
    text = "[model]\nkind = harmonic\nmass = 1\nomega = 1 Ha\ncharge = 1\nn_basis = 10\n" \
           "[cavity]\nomega = 1 Ha\nlambda = 0\nn_fock = 10\n"
    lines = pl.run("spectrum", text).splitlines()
    assert lines[0] == "k_z,n,energy_ha"
    assert float(lines[1].split(",")[2]) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        pl.run("spectrum", "[cavity]\nomgea = 1\n")


def test_invalid_input_raises():
    with pytest.raises(Exception):
        pl.CavityMode(-1.0, 0.0, 4)
