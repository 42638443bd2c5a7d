#include <cmath>

#include "doctest.h"
#include "mcmccert/errors.hpp"
#include "mcmccert/hrem.hpp"
#include "mcmccert/rng.hpp"

using namespace mcmccert;

namespace {

HremHyper hyper() {
    HremHyper hy;
    hy.m0 = 2.5;
    return hy;
}

HremData data() { return hrem_data_from_summary({1.5, 2.5, 3.5}, {2, 2, 2}, 1.5, hyper().m0); }

}  // namespace

TEST_CASE("sufficient statistics from raw groups match the summary form") {
    const HremData from_groups =
        hrem_data_from_groups({{1.0, 2.0}, {2.0, 3.0}, {3.0, 4.0}}, 2.5);
    const HremData d = data();
    CHECK(from_groups.ybar_mean == doctest::Approx(d.ybar_mean).epsilon(1e-15));
    CHECK(from_groups.sse == doctest::Approx(d.sse).epsilon(1e-14));
    CHECK(from_groups.s_sq == doctest::Approx(d.s_sq).epsilon(1e-14));
    CHECK(from_groups.delta == doctest::Approx(d.delta).epsilon(1e-14));
    CHECK(from_groups.M == 6.0);
    CHECK(from_groups.balanced());

    CHECK(d.ybar_mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(d.s_sq == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.delta == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("derived constants of the drift calculators") {
    const HremConstants c = hrem_constants(data(), hyper());
    CHECK(c.delta1 == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c.delta2 == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(c.delta3 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.delta4 == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(c.delta5 == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(c.delta6 == doctest::Approx(21.0 / 23.0).epsilon(1e-14));
    CHECK(c.delta7 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.c1 == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(c.c2 == doctest::Approx(0.4375).epsilon(1e-14));
}

TEST_CASE("balanced block drift level") {
    const HremDrift bd = block_drift_balanced(data(), hyper(), 0.8, 0.5);
    CHECK(bd.lambda_R == 0.8);
    CHECK(bd.K_R == doctest::Approx(3.403125).epsilon(1e-13));
    CHECK(bd.phi1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bd.phi2 == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(bool(bd.v));
    HremState st = hrem_default_start(data());
    CHECK(bd.v(st) == doctest::Approx(0.5 * 2.0).epsilon(1e-12));  // phi1 * s_sq at the start
}

TEST_CASE("block minorization against frozen references") {
    const HremData d = data();
    const HremHyper hy = hyper();
    CHECK(block_minorization(0.5, 0.5, 0.5, hy, d) ==
          doctest::Approx(0.556589451085).epsilon(1e-9));
    CHECK(block_minorization(5.0, 0.5, 0.5, hy, d) ==
          doctest::Approx(0.0155186582744).epsilon(1e-9));
    CHECK(block_minorization(71.0625, 0.5, 0.5, hy, d) ==
          doctest::Approx(5.96858047556e-08).epsilon(1e-9));
    // shrinks as the small set grows
    CHECK(block_minorization(0.5, 0.5, 0.5, hy, d) > block_minorization(5.0, 0.5, 0.5, hy, d));
}

TEST_CASE("fixed-scan drift level and defaulted parameters") {
    const HremDrift gd = gibbs_drift(data(), hyper(), 0.99, 0.5);
    CHECK(gd.K_R == doctest::Approx(46.00211429608621).epsilon(1e-12));
    CHECK(gd.c3 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gd.rho1 == doctest::Approx(0.982608695652174).epsilon(1e-13));

    // contraction target must clear every floor
    CHECK_THROWS_AS(gibbs_drift(data(), hyper(), 0.5, 0.5), validation_error);
    // tilt must stay below min(b1, b2)
    CHECK_THROWS_AS(gibbs_drift(data(), hyper(), 0.99, 1.5), validation_error);
}

TEST_CASE("fixed-scan minorization: value, log value, and honest underflow") {
    const GibbsMinorization gm = gibbs_minorization(2.0, 0.5, data(), hyper());
    CHECK_FALSE(gm.underflowed);
    CHECK(gm.value == doctest::Approx(1.05807318146e-05).epsilon(1e-9));
    CHECK(gm.log_value == doctest::Approx(std::log(gm.value)).epsilon(1e-10));

    const GibbsMinorization deep = gibbs_minorization(20000.0, 0.5, data(), hyper());
    CHECK(deep.underflowed);
    CHECK(deep.value == 0.0);
    CHECK(deep.log_value < -1000.0);
    CHECK(std::isfinite(deep.log_value));
}

TEST_CASE("joint conditional of the block sweep matches its precision system") {
    const HremData d = data();
    const HremHyper hy = hyper();
    const double lt = 0.8, le = 1.7;
    const BlockConditional bc = block_conditional(d, hy, lt, le);

    const int K = 3;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(K + 1, K + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(K + 1);
    for (int i = 0; i < K; ++i) {
        Q(i, i) = lt + d.m[i] * le;
        Q(i, K) = Q(K, i) = -lt;
        b(i) = d.m[i] * le * d.ybar[i];
    }
    Q(K, K) = hy.s0 + K * lt;
    b(K) = hy.s0 * hy.m0;

    const Eigen::VectorXd mean = Q.ldlt().solve(b);
    const Eigen::MatrixXd cov = Q.inverse();
    CHECK((bc.mean - mean).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((bc.cov - cov).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("joint conditional covariance stays positive definite") {
    const HremData d = data();
    const HremHyper hy = hyper();
    Rng rng(derive_seed(20260815ULL, 6001));
    for (int i = 0; i < 10000; ++i) {
        const double lt = std::exp(rng.normal(0.0, 2.0));
        const double le = std::exp(rng.normal(0.0, 2.0));
        const BlockConditional bc = block_conditional(d, hy, lt, le);
        Eigen::LLT<Eigen::MatrixXd> llt(bc.cov);
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("sweeps keep the state in its domain") {
    const HremData d = data();
    const HremHyper hy = hyper();
    Rng rng(derive_seed(20260815ULL, 6002));
    HremState st = hrem_default_start(d);
    for (int i = 0; i < 200; ++i) {
        st = (i % 2 == 0) ? fixed_scan_step(st, d, hy, rng) : block_gibbs_step(st, d, hy, rng);
        CHECK(st.lambda_theta > 0.0);
        CHECK(st.lambda_e > 0.0);
        CHECK(std::isfinite(st.mu));
        REQUIRE(st.theta.size() == 3);
    }
}

TEST_CASE("target parsing and sampler selection") {
    CHECK(hrem_target_from_string("mu").kind == HremTarget::Kind::mu);
    CHECK(hrem_target_from_string("lambda-theta").kind == HremTarget::Kind::lambda_theta);
    CHECK(hrem_target_from_string("lambda_e").kind == HremTarget::Kind::lambda_e);
    const HremTarget t2 = hrem_target_from_string("theta2");
    CHECK(t2.kind == HremTarget::Kind::theta);
    CHECK(t2.index == 1);
    CHECK_THROWS_AS(hrem_target_from_string("theta0"), validation_error);
    CHECK_THROWS_AS(hrem_target_from_string("sigma"), validation_error);

    CHECK(sampler_for(hrem_target_from_string("mu")) == HremSampler::block);
    CHECK(sampler_for(hrem_target_from_string("theta1")) == HremSampler::block);
    CHECK(sampler_for(hrem_target_from_string("lambda-theta")) == HremSampler::fixed_scan);
    CHECK(sampler_for(hrem_target_from_string("lambda-e")) == HremSampler::fixed_scan);
}

TEST_CASE("target extraction") {
    HremState st;
    st.theta = {1.0, 2.0, 3.0};
    st.mu = -4.0;
    st.lambda_theta = 5.0;
    st.lambda_e = 6.0;
    CHECK(target_value(hrem_target_from_string("mu"), st) == -4.0);
    CHECK(target_value(hrem_target_from_string("theta3"), st) == 3.0);
    CHECK(target_value(hrem_target_from_string("lambda-theta"), st) == 5.0);
    CHECK(target_value(hrem_target_from_string("lambda-e"), st) == 6.0);
}

TEST_CASE("location-target pipeline produces a plannable certificate") {
    const HremPipeline pl = hrem_pipeline(data(), hyper(), hrem_target_from_string("mu"));
    CHECK(pl.sampler == HremSampler::block);
    CHECK(pl.beta_tilde == doctest::Approx(5.96858047556e-08).epsilon(1e-9));
    CHECK(pl.d_R == doctest::Approx(71.0625).epsilon(1e-12));
    CHECK(pl.dp.lambda == doctest::Approx(0.9).epsilon(1e-13));
    CHECK(pl.dp.K == doctest::Approx(68.459375).epsilon(1e-12));
    CHECK(pl.cfv == doctest::Approx(4.75).epsilon(1e-12));
    CHECK_NOTHROW(pl.pin.dp.validate());

    const OptimizedPlan op = optimize_plan(pl.pin, 0.1, 0.1);
    CHECK(std::isfinite(op.plan.total_cost));
    CHECK(op.plan.total_cost > 0.0);
    const double mse = mse_bound(op.inputs, pl.pin.start, op.plan.t, op.plan.n);
    CHECK(mse <= 0.1 * 0.1 * 0.1 * (1.0 + 1e-9));
}

TEST_CASE("precision-target pipeline underflows honestly") {
    CHECK_THROWS_AS(hrem_pipeline(data(), hyper(), hrem_target_from_string("lambda-e")),
                    numeric_error);
    CHECK_THROWS_AS(hrem_pipeline(data(), hyper(), hrem_target_from_string("lambda-theta")),
                    numeric_error);
}

TEST_CASE("data validation") {
    CHECK_THROWS_AS(hrem_data_from_summary({1.0}, {2.0}, 1.0, 0.0), validation_error);
    CHECK_THROWS_AS(hrem_data_from_summary({1.0, 2.0}, {2.0}, 1.0, 0.0), validation_error);
    CHECK_THROWS_AS(hrem_data_from_summary({1.0, 2.0, 3.0}, {2.0, 2.0, 0.0}, 1.0, 0.0),
                    validation_error);
    HremHyper hy;
    hy.a1 = 1.0;  // needs a1 > 3/2 for the fixed-scan constants
    CHECK_THROWS_AS(gibbs_drift(data(), hy, 0.99, 0.5), validation_error);
}
