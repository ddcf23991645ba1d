"""Smoke tests for the python module: import, numpy interop, and a few
spot checks of the operations exposed from the core library."""

import math

import numpy as np
import pytest

ml = pytest.importorskip("_machlimit")


@pytest.fixture(scope="module")
def grid():
    return ml.Grid(d=2, n=32)


@pytest.fixture(scope="module")
def bank(grid):
    return ml.LPFilterBank(grid)


def cosine_field(grid, kx, ky, amp=1.0):
    coeffs = np.zeros((grid.n, grid.n), dtype=complex)
    coeffs[kx % grid.n, ky % grid.n] = amp / 2.0
    coeffs[(-kx) % grid.n, (-ky) % grid.n] = amp / 2.0
    return ml.SpectralField.from_coeffs(grid, coeffs)


def test_field_roundtrip(grid):
    rng = np.random.default_rng(5)
    values = rng.standard_normal((grid.n, grid.n))
    f = ml.SpectralField.from_physical(grid, values)
    assert f.hermitian_error() <= 1e-12
    np.testing.assert_allclose(f.to_physical(), values, atol=1e-12)


def test_partition_of_unity(grid, bank):
    f = cosine_field(grid, 3, 1)
    total = ml.SpectralField(grid)
    for j in range(bank.j_min, bank.j_max + 1):
        total = total + bank.dyadic_block(f, j)
    assert (total - f).max_abs_coeff() <= 1e-13


def test_besov_single_mode(grid, bank):
    f = cosine_field(grid, 4, 0)
    l2 = ml.lp_norm(f, 2.0)
    assert l2 == pytest.approx(math.sqrt(0.5) * 2.0 * math.pi, rel=1e-12)
    assert ml.besov_norm(f, bank, p=2.0, sigma=1.0, s=0.0) == pytest.approx(l2, rel=1e-12)
    assert ml.besov_norm(f, bank, p=2.0, sigma=1.0, s=0.0, band="high", beta=16.0) == 0.0


def test_helmholtz_projections(grid):
    a0, u0 = ml.gen_initial_data("random_band", grid, seed=3, amplitude_u=0.5,
                                 solenoidal_u=False)
    p = ml.helmholtz_p(u0)
    q = ml.helmholtz_q(u0)
    assert ml.divergence(p).max_abs_coeff() <= 1e-13
    for pq in ml.helmholtz_p(q):
        assert pq.max_abs_coeff() <= 1e-13
    recon = [pc + qc for pc, qc in zip(p, q)]
    for rc, uc in zip(recon, u0):
        assert (rc - uc).max_abs_coeff() <= 1e-13


def test_taylor_green_decay(grid):
    a0, u0 = ml.gen_initial_data("taylor_green", grid, seed=0)
    mu, dt, steps = 0.5, 0.02, 10
    w = u0
    for _ in range(steps):
        w = ml.step_incompressible(w, mu, dt)
    decay = math.exp(-2.0 * mu * dt * steps)
    for wc, uc in zip(w, u0):
        assert (wc - uc.scaled(decay)).max_abs_coeff() <= 1e-10


def test_compressible_step_runs(grid):
    a0, u0 = ml.gen_initial_data("random_band", grid, seed=11, amplitude_a=0.1,
                                 amplitude_u=0.3, solenoidal_u=False)
    a1, u1 = ml.step_compressible(a0, u0, eps=0.2, dt=5e-3)
    assert a1.hermitian_error() <= 1e-10
    assert abs(a1.mean() - a0.mean()) <= 1e-14


def test_validate_exponents():
    good = ml.validate_exponents(d=2, q=3.0, r=12.0)
    assert good["admissible"]
    bad = ml.validate_exponents(d=2, q=3.0, r=6.0)
    assert not bad["admissible"]
    assert any(not c["ok"] for c in bad["checks"])


def test_rate_fit():
    eps = [0.2, 0.1, 0.05, 0.025]
    err = [3.0 * e ** (1.0 / 12.0) for e in eps]
    fit = ml.convergence_rate_fit(eps, err)
    assert fit["slope"] == pytest.approx(1.0 / 12.0, abs=1e-12)
    assert fit["r_squared"] == pytest.approx(1.0, abs=1e-12)


def test_interval_splitter():
    times = [i / 1000.0 for i in range(1001)]
    values = [1.0] * len(times)
    cuts = ml.split_time_intervals(times, values, 2.0, 0.5)
    assert cuts[1] == pytest.approx(0.25, abs=1e-8)
    assert cuts[2] == pytest.approx(0.50, abs=1e-8)
    assert cuts[3] == pytest.approx(0.75, abs=1e-8)
    assert math.isinf(cuts[-1])


def test_probe_runs():
    grid = ml.Grid(d=2, n=32)
    result = ml.estimate_probe("prod-1", 3, grid, seed=9)
    assert result["trials"] == 3
    assert result["max_ratio"] > 0.0


def test_run_experiment(tmp_path):
    config = "\n".join([
        "n = 16",
        "t_end = 0.05",
        "dt = 5e-3",
        "eps = 0.2",
        "init_amp_a = 0.1",
        "init_amp_u = 0.3",
        "init_solenoidal = false",
    ])
    out = ml.run_experiment(config, str(tmp_path / "run"))
    assert out["steps"] == 10
    assert (tmp_path / "run" / "manifest.json").exists()
    assert "D_eps" in out["report_json"]
