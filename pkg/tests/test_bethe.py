import numpy as np
import pytest

from tw_thermo.oracle.bethe import (_xxx_residual, bae_free_energy_xxx, bae_solve_su3, bae_solve_xxx,
                                    log_tq_lambda_bar, tq_lambda_bar, xxx_eigen_zeros)
from tw_thermo.oracle.checks import tq_operator_residual, zero_substitution_residual
from tw_thermo.oracle.qtm import TrotterParams, eigen_top, eigenvalue_roots, qtm_build_xxx
from tw_thermo.oracle.rmatrix import ETA
from tw_thermo.xxx import ModelParams, solve_xxx


def closest(a, b):
    return max(np.min(np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :]), axis=1))


@pytest.mark.parametrize("h", [0.0, 0.4])
def test_single_root_closed_form(h):
    p = ModelParams.from_T(2.0, 1.0, h)
    tau = p.J * p.beta
    t = -1j * np.tanh(0.5 * h * p.beta)
    exact = 0.0 if h == 0 else (-1 + np.sqrt(1 + 4 * t * t * tau * (1 - tau))) / (2 * t)
    lam = bae_solve_xxx(1, p).values[0]
    assert abs(lam - exact) < 1e-12


def test_roots_nearly_real_at_m50():
    p = ModelParams.from_T(0.5)
    r = bae_solve_xxx(50, p)
    assert len(r) == 50 and r.kind == "bethe-lambda"
    assert np.max(np.abs(r.values.imag)) < 0.05
    I = np.arange(1, 51) - 25.5
    assert np.max(np.abs(_xxx_residual(r.values, 50, p.J * p.beta / 50, 0.0, I))) < 1e-10


def test_bethe_route_free_energy():
    p = ModelParams.from_T(1.0)
    assert abs(bae_free_energy_xxx(200, p) - solve_xxx(1.0).free_energy) < 1e-3


def test_top_eigenvalue_from_bethe_roots():
    for T, h in ((2.0, 0.0), (0.8, 0.3)):
        p = ModelParams.from_T(T, 1.0, h)
        tp = TrotterParams.from_model(6, p)
        lam0, _ = eigen_top(qtm_build_xxx(0.0, tp, p))
        et = ETA * tp.tau
        norm = ((-et + ETA) * (et - ETA)) ** tp.M
        bar = tq_lambda_bar(0.0, bae_solve_xxx(tp.M, p), p)
        assert abs(lam0 / norm / bar - 1) < 1e-8


def test_log_and_direct_tq_agree():
    p = ModelParams.from_T(1.5, 1.0, 0.2)
    r = bae_solve_xxx(4, p)
    u = 0.3 - 0.2j
    assert abs(np.exp(log_tq_lambda_bar(u, r, p)) - tq_lambda_bar(u, r, p)) < 1e-14


@pytest.mark.parametrize("model", ["xxx", "su3"])
def test_tq_matches_operator(model):
    p = ModelParams.from_T(1.7, 1.0, 0.35)
    tp = TrotterParams.from_model(4, p)
    us = [0.3 + 0.1j, -0.6 + 0.45j, 1.1 - 0.2j]
    assert tq_operator_residual(model, tp, p, us) < 1e-7


def test_zeros_satisfy_bethe_form():
    p = ModelParams.from_T(0.9, 1.0, 0.2)
    assert zero_substitution_residual(TrotterParams.from_model(8, p), p) < 1e-8


def test_eigen_zeros_match_operator_route():
    p = ModelParams.from_T(0.5, 1.0, 0.1)
    tp = TrotterParams.from_model(8, p)
    z, w = xxx_eigen_zeros(bae_solve_xxx(4, p), p)
    assert closest(eigenvalue_roots("xxx", tp, p, "z").values, z.values) < 1e-9
    assert closest(eigenvalue_roots("xxx", tp, p, "w").values, w.values) < 1e-9


@pytest.mark.parametrize("T", [0.5, 5.0])
def test_large_n_root_pattern(T):
    p = ModelParams.from_T(T)
    z, w = xxx_eigen_zeros(bae_solve_xxx(50, p), p)
    assert len(z) == 100 and len(w) == 100
    assert np.all(np.abs(np.abs(z.values.imag) - 1) < 0.3)


def test_su3_roots_conjugate_at_zero_field():
    p = ModelParams.from_T(1.0)
    r1, r2 = bae_solve_su3(TrotterParams.from_model(12, p), p)
    assert len(r1) == 6 and r1.level == 1 and r2.level == 2
    assert closest(r2.values, np.conj(r1.values)) < 1e-10
    assert np.max(np.abs(r1.values.imag)) < 0.3


def test_argument_checks():
    p = ModelParams.from_T(0.2)
    with pytest.raises(ValueError):
        bae_solve_xxx(4, p)
    with pytest.raises(ValueError):
        bae_solve_xxx(401, ModelParams.from_T(1.0))
    with pytest.raises(ValueError):
        bae_solve_su3(TrotterParams.from_model(4, p), p)


def test_odd_root_count_at_zero_field():
    # one root sits at u = 0, where the T-Q form is 0/0
    p = ModelParams.from_T(1.0)
    assert np.any(np.abs(bae_solve_xxx(199, p).values) < 1e-12)
    assert abs(bae_free_energy_xxx(199, p) - bae_free_energy_xxx(200, p)) < 1e-5
