#include <cmath>

#include "doctest.h"
#include "mcmccert/chains.hpp"
#include "mcmccert/drift.hpp"
#include "mcmccert/errors.hpp"

using namespace mcmccert;

namespace {

DriftParams basic() {
    DriftParams dp;
    dp.beta_tilde = 0.4;
    dp.beta = 0.4;
    dp.lambda = 0.5;
    dp.K = 3.0;
    return dp;
}

}  // namespace

TEST_CASE("certificate validation rejects out-of-range constants") {
    DriftParams dp = basic();
    CHECK_NOTHROW(dp.validate());

    dp = basic();
    dp.lambda = 1.0;
    CHECK_THROWS_AS(dp.validate(), validation_error);

    dp = basic();
    dp.beta_tilde = 0.0;
    CHECK_THROWS_AS(dp.validate(), validation_error);

    dp = basic();
    dp.beta = 0.7;  // above beta_tilde * nu(C)
    CHECK_THROWS_AS(dp.validate(), validation_error);

    dp = basic();
    dp.K = 0.4;  // below max(1, lambda)
    CHECK_THROWS_AS(dp.validate(), validation_error);

    dp = basic();
    dp.pi_C = 1.5;
    CHECK_THROWS_AS(dp.validate(), validation_error);
}

TEST_CASE("power transform takes roots of the contraction and the level") {
    DriftParams dp = basic();
    dp.lambda = 0.81;
    dp.K = 4.0;
    const DriftParams half = power_transform(dp, 2.0);
    CHECK(half.lambda == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(half.K == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(half.beta_tilde == dp.beta_tilde);
    CHECK(half.beta == dp.beta);
    CHECK_THROWS_AS(power_transform(dp, 0.5), validation_error);
}

TEST_CASE("stationary drift-function bound") {
    CHECK(pi_v_bound(basic()) == doctest::Approx(5.0).epsilon(1e-15));
    DriftParams dp = basic();
    dp.pi_C = 0.5;
    CHECK(pi_v_bound(dp) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("centering inflation on the autoregressive certificate") {
    const DriftParams dp = cn_drift(0.5, 1.6226);
    CHECK(dp.lambda == doctest::Approx(0.6629011503965574).epsilon(1e-14));
    CHECK(dp.K == doctest::Approx(2.4082076900000002).epsilon(1e-14));
    CHECK(dp.beta_tilde == doctest::Approx(0.3439094461178547).epsilon(1e-14));
    CHECK(pi_v_bound(dp) == doctest::Approx(5.177432499863444).epsilon(1e-13));
    CHECK(centered_fv_bound(1.0, dp, 2.0) == doctest::Approx(24.69965504750199).epsilon(1e-13));
    // (cfv^(1/2) + K_{2,lambda})^2 with the frozen K_{2,lambda}
    const double k2 = (std::sqrt(dp.K) - std::sqrt(dp.lambda)) / (1.0 - std::sqrt(dp.lambda));
    CHECK(k2 == doctest::Approx(3.969874751691635).epsilon(1e-13));
}

TEST_CASE("additive-to-small-set conversion at d = 1") {
    RosenthalDrift rd;
    rd.lambda_R = 0.5;
    rd.K_R = 2.0;
    rd.d_R = 25.0;
    rd.beta_tilde_R = 0.3;
    CHECK_NOTHROW(rd.validate());

    CHECK(rt_level(rd, 1.0) == doctest::Approx(20.0).epsilon(1e-15));
    const RobertsTweedieDrift rt = rosenthal_to_roberts_tweedie(rd, 1.0);
    CHECK(rt.lambda == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(rt.K == doctest::Approx(2.5).epsilon(1e-15));

    const DriftParams dp = rosenthal_to_baxendale(rd, 1.0);
    CHECK(dp.lambda == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(dp.K == doctest::Approx(17.5).epsilon(1e-15));
    CHECK(dp.beta_tilde == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_NOTHROW(dp.validate());
}

TEST_CASE("conversion refuses when the minorization level is too small") {
    RosenthalDrift rd;
    rd.lambda_R = 0.5;
    rd.K_R = 2.0;
    rd.d_R = 15.0;  // below rt_level(rd, 1) = 20
    rd.beta_tilde_R = 0.3;
    CHECK_NOTHROW(rd.validate());
    CHECK_THROWS_AS(rosenthal_to_baxendale(rd, 1.0), validation_error);

    rd.d_R = 7.0;  // below 2 K_R / (1 - lambda_R) = 8
    CHECK_THROWS_AS(rd.validate(), validation_error);
}

TEST_CASE("optimized stationary bound never exceeds the direct cap") {
    RosenthalDrift rd;
    rd.lambda_R = 0.8;
    rd.K_R = 3.403125;
    rd.d_R = 71.0625;
    rd.beta_tilde_R = 5.968580475555597e-08;
    const double cap = rd.K_R / (1.0 - rd.lambda_R) + 1.0;
    const double opt = optimize_pi_v_bound(rd);
    CHECK(opt <= cap * (1.0 + 1e-12));
    CHECK(opt > 1.0);
}
