import numpy as np
import pytest

import dynmap

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SM = np.array([[0, 0], [1, 0]], dtype=complex)


def lindblad_maps(steps, dt=0.1):
    gen = dynmap.commutator_superop(0.5 * SX) + 0.2 * dynmap.dissipator_superop(SM)
    return gen, [dynmap.expm(gen, dt * n) for n in range(1, steps + 1)]


def test_vectorization_is_column_stacking():
    rho = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.allclose(dynmap.vectorize(rho), [1, 3, 2, 4])
    assert np.allclose(dynmap.devectorize(dynmap.vectorize(rho)), rho)


def test_decompose_resum_round_trip():
    rng = np.random.default_rng(0)
    maps = [np.eye(4) + 0.1 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))) for _ in range(6)]
    back = dynmap.resum(dynmap.decompose(maps))
    for a, b in zip(maps, back):
        assert np.linalg.norm(a - b) < 1e-12 * np.linalg.norm(a)


def test_markovian_extrapolation_is_exact():
    gen, maps = lindblad_maps(10)
    rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    exact = dynmap.devectorize(dynmap.expm(gen, 20.0) @ dynmap.vectorize(rho0))
    ttm = dynmap.extrapolate_ttm(maps, rho0, 5, 200)[-1]
    tl = dynmap.extrapolate_tl(maps, rho0, 5, 200)[-1]
    assert np.linalg.norm(ttm - exact) < 1e-10
    assert np.linalg.norm(tl - exact) < 1e-10
    local, flags = dynmap.local_maps(maps)
    assert not any(flags)
    assert np.allclose(local[3], maps[0])


def test_canonical_form_of_dephasing():
    form = dynmap.canonical_decompose(0.3 * dynmap.dissipator_superop(SZ))
    assert form["rates"][0] == pytest.approx(0.3, abs=1e-10)


def test_dmap_round_trip(tmp_path):
    _, maps = lindblad_maps(3)
    path = tmp_path / "maps.dmap"
    dynmap.write_dmap(path, maps, 0.1)
    back, dt, t0 = dynmap.read_dmap(path)
    assert dt == 0.1 and t0 == 0.0
    assert all(np.array_equal(a, b) for a, b in zip(maps, back))


def test_compare_preset_and_errors():
    result = dynmap.compare_preset("embedding_mode", tau_c=[5.0, 10.0], t_ref=60.0)
    assert [row["tau_c"] for row in result["rows"]] == [5.0, 10.0]
    assert len(result["reference"]) == 601
    with pytest.raises(dynmap.ConfigError):
        dynmap.compare_preset("no_such_model")
    with pytest.raises(dynmap.NumericalError):
        dynmap.logm(np.diag([1.0, 1.0, 1.0, -0.5]).astype(complex), 1.0)


def test_eta_coefficients():
    eta = dynmap.eta_coefficients("drude_lorentz", [0.1, 1.0], 0.0, 0.05, 3)
    assert len(eta) == 4
    assert eta[0].real > 0
