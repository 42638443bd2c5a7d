"""End-to-end checks of the Python bindings against frozen reference values."""

import math
import os
import sys

import pytest


def _load():
    try:
        from mcmccert import _core

        return _core
    except ImportError:
        pass
    mod_dir = os.environ.get("MCMCCERT_PYMODULE_DIR")
    if mod_dir and mod_dir not in sys.path:
        sys.path.insert(0, mod_dir)
    return __import__("_core")


core = _load()


def cn_pipeline():
    dp = core.cn_drift(0.5, 1.6226)
    pin = core.PipelineInputs()
    pin.dp = dp
    pin.cls = core.ChainClass.self_adjoint_positive
    pin.fc_norm = core.centered_fv_bound(1.0, dp, 2.0)
    pin.pi_v = core.pi_v_bound(dp)
    return pin


def test_drift_certificate_of_the_autoregressive_chain():
    dp = core.cn_drift(0.5, 1.6226)
    dp.validate()
    assert not dp.atomic()
    assert core.pi_v_bound(dp) == pytest.approx(5.177432499863444, rel=1e-12)
    dp2 = core.power_transform(dp, 2.0)
    assert dp2.beta_tilde == dp.beta_tilde
    assert dp2.lambda_ == pytest.approx(math.sqrt(dp.lambda_), rel=1e-14)


def test_rate_bound_and_prefactor():
    dp = core.cn_drift(0.5, 1.6226)
    rr = core.rho_bound(dp, core.ChainClass.self_adjoint_positive)
    assert rr.rho == pytest.approx(0.8947064028432496, rel=1e-12)
    gen = core.rho_bound(dp, core.ChainClass.general)
    assert gen.rho > rr.rho
    gamma = rr.rho + 0.5 * (1.0 - rr.rho)
    big = core.big_m(dp, rr, gamma)
    assert big.value > 1.0
    assert big.log_value == pytest.approx(math.log(big.value), rel=1e-12)


def test_certified_plan_reproduces_the_reference_numbers():
    op = core.optimize_plan(cn_pipeline(), 0.1, 0.1)
    assert op.j == 4
    assert op.j_r == 15
    assert op.plan.t == 218.0
    assert op.plan.n == pytest.approx(6463111011.0, abs=1.0)
    med = core.optimize_plan(cn_pipeline(), 0.1, 1e-5, 20, True)
    assert med.plan.m == 27
    assert med.plan.total_cost < core.optimize_plan(cn_pipeline(), 0.1, 1e-5).plan.total_cost


def test_median_walk_count():
    assert core.median_m(1e-5, 0.11969) == 27
    with pytest.raises(ValueError):
        core.median_m(0.0, 0.11969)


def test_additive_drift_conversion():
    rd = core.RosenthalDrift(lambda_R=0.5, K_R=2.0, d_R=25.0, beta_tilde_R=0.4)
    assert core.rt_level(rd, 1.0) == pytest.approx(20.0, rel=1e-14)
    dp = core.rosenthal_to_baxendale(rd, 1.0)
    assert dp.lambda_ == pytest.approx(0.75, rel=1e-14)
    assert dp.K == pytest.approx(17.5, rel=1e-14)
    small = core.RosenthalDrift(lambda_R=0.5, K_R=2.0, d_R=15.0, beta_tilde_R=0.4)
    with pytest.raises(ValueError):
        core.rosenthal_to_baxendale(small, 1.0)


def test_finite_chain_summaries():
    ch = core.five_state_chain()
    pi = ch.stationary()
    assert list(pi) == pytest.approx([0.25, 0.25, 0.25, 0.125, 0.125], rel=1e-12)
    v = ch.asym_var([1.0, 2.0, 3.0, 4.0, 5.0])
    assert v == pytest.approx(0.6953125, rel=1e-12)


def test_estimation_helpers():
    assert core.batch_means_var([1.0, 2.0, 3.0, 4.0]) == pytest.approx(4.0, rel=1e-14)
    assert core.estimate_median([3.0, 1.0, 2.0]) == 2.0
    blocks = core.TourBlocks()
    blocks.s = [2.0, 0.0]
    blocks.N = [1.0, 1.0]
    est = core.regen_estimates(blocks)
    assert est.I_hat == pytest.approx(1.0)
    assert est.xi_sq == pytest.approx(1.0)


def test_hrem_pipeline():
    hy = core.HremHyper()
    hy.m0 = 2.5
    data = core.hrem_data_from_summary([1.5, 2.5, 3.5], [2.0, 2.0, 2.0], 1.5, hy.m0)
    assert data.balanced()
    pl = core.hrem_pipeline(data, hy, "mu")
    assert pl.sampler == core.HremSampler.block
    assert pl.d_R == pytest.approx(71.0625, rel=1e-12)
    assert pl.beta_tilde == pytest.approx(5.96858047556e-08, rel=1e-9)
    with pytest.raises(ArithmeticError):
        core.hrem_pipeline(data, hy, "lambda-e")


def test_seed_derivation_and_adaptive_limit():
    assert core.derive_seed(20260815, 0) == core.derive_seed(20260815, 0)
    assert core.derive_seed(20260815, 0) != core.derive_seed(20260815, 1)
    assert core.trap_stationary_p1(0.1) == pytest.approx(10.0 / 11.0, rel=1e-15)
