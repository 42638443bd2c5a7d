#include <cmath>
#include <limits>

#include "doctest.h"
#include "mcmccert/chains.hpp"
#include "mcmccert/drift.hpp"
#include "mcmccert/errors.hpp"
#include "mcmccert/ratebounds.hpp"
#include "mcmccert/rng.hpp"

using namespace mcmccert;

namespace {

const DriftParams kCn = cn_drift(0.5, 1.6226);

double root_residual(double beta, double R, double L, double r) {
    const double lr = std::log(R / r);
    return (r - 1.0) / (r * lr * lr) - std::exp(2.0) * beta * (R - 1.0) / (8.0 * (L - 1.0));
}

}  // namespace

TEST_CASE("chain class names round-trip") {
    CHECK(chain_class_from_string("general") == ChainClass::general);
    CHECK(chain_class_from_string("self-adjoint") == ChainClass::self_adjoint);
    CHECK(chain_class_from_string("sa") == ChainClass::self_adjoint);
    CHECK(chain_class_from_string("self-adjoint-positive") == ChainClass::self_adjoint_positive);
    CHECK(chain_class_from_string("sap") == ChainClass::self_adjoint_positive);
    CHECK_THROWS_AS(chain_class_from_string("nope"), validation_error);
    CHECK(std::string(to_string(ChainClass::general)) == "general");
}

TEST_CASE("geometry of the autoregressive certificate") {
    const Geometry geo = geometry(kCn);
    CHECK(geo.alpha1 == doctest::Approx(3.7880438885804537).epsilon(1e-13));
    CHECK(geo.alpha2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(geo.R0 == doctest::Approx(1.117685082863096).epsilon(1e-13));
    CHECK(geo.D0 == doctest::Approx(geo.R0 - 1.0).epsilon(1e-12));

    const Geometry geo2 = geometry(power_transform(kCn, 2.0));
    CHECK(geo2.alpha1 == doctest::Approx(3.96921192726443).epsilon(1e-13));
    CHECK(geo2.R0 == doctest::Approx(1.112023573903116).epsilon(1e-13));
}

TEST_CASE("rho for all three chain classes, both drift powers") {
    const RhoResult sap = rho_bound(kCn, ChainClass::self_adjoint_positive);
    const RhoResult sa = rho_bound(kCn, ChainClass::self_adjoint);
    const RhoResult gen = rho_bound(kCn, ChainClass::general);
    CHECK(sap.rho == doctest::Approx(0.8947064028432496).epsilon(1e-12));
    CHECK(sa.rho == doctest::Approx(0.9520607196580642).epsilon(1e-12));
    CHECK(gen.rho == doctest::Approx(0.9999264495934338).epsilon(1e-10));
    CHECK(gen.R_used == doctest::Approx(1.077545465922803).epsilon(1e-9));

    // more structure never hurts
    CHECK(sap.rho < sa.rho);
    CHECK(sa.rho < gen.rho);

    const DriftParams dp2 = power_transform(kCn, 2.0);
    CHECK(rho_bound(dp2, ChainClass::self_adjoint_positive).rho ==
          doctest::Approx(0.8992615115973469).epsilon(1e-12));
    CHECK(rho_bound(dp2, ChainClass::self_adjoint).rho ==
          doctest::Approx(0.9541180008414643).epsilon(1e-12));
    CHECK(rho_bound(dp2, ChainClass::general).rho ==
          doctest::Approx(0.9999358320304053).epsilon(1e-10));
}

TEST_CASE("rho and one_minus_rho stay consistent") {
    for (ChainClass cls :
         {ChainClass::general, ChainClass::self_adjoint, ChainClass::self_adjoint_positive}) {
        const RhoResult r = rho_bound(kCn, cls);
        CHECK(r.rho + r.one_minus_rho == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.rho > 0.0);
        CHECK(r.rho < 1.0);
    }
}

TEST_CASE("the root solver lands on a zero of the defining equation") {
    Rng rng(derive_seed(20260815ULL, 4001));
    int done = 0;
    while (done < 50) {
        const double beta = 0.05 + 0.9 * rng.uniform();
        const double R = 1.0 + 0.001 + 2.0 * rng.uniform();
        const double L = 1.0 + 0.01 + 10.0 * rng.uniform();
        R1Result root;
        try {
            root = solve_r1(beta, R, L);
        } catch (const error&) {
            continue;
        }
        ++done;
        CHECK(root.r > 1.0);
        CHECK(root.r < R);
        CHECK(root.r == doctest::Approx(1.0 + root.s).epsilon(1e-12));
        const double res = root_residual(beta, R, L, root.r);
        const double scale = std::abs(std::exp(2.0) * beta * (R - 1.0) / (8.0 * (L - 1.0)));
        CHECK(std::abs(res) <= 1e-9 * std::max(scale, 1e-300));
    }
}

TEST_CASE("the root grows when the level constant shrinks") {
    const double beta = 0.3, R = 1.5;
    const double r_small_L = solve_r1(beta, R, 1.2).r;
    const double r_large_L = solve_r1(beta, R, 8.0).r;
    CHECK(r_small_L > r_large_L);
}

TEST_CASE("decay prefactor at fixed gamma against frozen references") {
    const RhoResult sap = rho_bound(kCn, ChainClass::self_adjoint_positive);
    CHECK(big_m(kCn, sap, 0.915).value == doctest::Approx(35248.2965312).epsilon(1e-9));

    const DriftParams dp2 = power_transform(kCn, 2.0);
    const RhoResult sap2 = rho_bound(dp2, ChainClass::self_adjoint_positive);
    CHECK(big_m(dp2, sap2, 0.971).value == doctest::Approx(754.277193868).epsilon(1e-9));
}

TEST_CASE("prefactor decreases in gamma and rejects gamma at or below rho") {
    const RhoResult sap = rho_bound(kCn, ChainClass::self_adjoint_positive);
    double prev = std::numeric_limits<double>::infinity();
    for (double g : {0.90, 0.92, 0.95, 0.99}) {
        const double m = big_m(kCn, sap, g).value;
        CHECK(m > 1.0);
        CHECK(m < prev);
        prev = m;
    }
    CHECK_THROWS_AS(big_m(kCn, sap, sap.rho * 0.999), error);
    CHECK_THROWS_AS(big_m(kCn, sap, 1.0), error);
}

TEST_CASE("log-domain prefactor survives where the direct value overflows") {
    RosenthalDrift rd;
    rd.lambda_R = 0.8;
    rd.K_R = 3.403125;
    rd.d_R = 71.0625;
    rd.beta_tilde_R = 5.968580475555597e-08;
    const DriftParams dp = rosenthal_to_baxendale(rd, 1.0);
    CHECK(dp.lambda == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(dp.K == doctest::Approx(68.459375).epsilon(1e-13));
    const RhoResult rho = rho_bound(dp, ChainClass::self_adjoint_positive);
    CHECK(rho.one_minus_rho == doctest::Approx(1.451778969530501e-09).epsilon(1e-6));

    const BigM mid = big_m_omg(dp, rho, rho.one_minus_rho * 0.1);
    CHECK(std::isfinite(mid.value));
    CHECK(mid.log_value == doctest::Approx(std::log(mid.value)).epsilon(1e-10));

    // a far weaker minorization drives D^2 below the subnormal range: the
    // direct sum hits 1/0 while every log factor stays finite
    DriftParams deep = dp;
    deep.beta_tilde = 1e-220;
    deep.beta = 1e-220;
    const RhoResult drho = rho_bound(deep, ChainClass::self_adjoint_positive);
    CHECK(drho.one_minus_rho / deep.beta_tilde ==
          doctest::Approx(1.0 / drho.geo.alpha1).epsilon(1e-6));
    const BigM near = big_m_omg(deep, drho, drho.one_minus_rho * 0.5);
    CHECK(std::isinf(near.value));
    CHECK(std::isfinite(near.log_value));
}

TEST_CASE("atomic certificates use the atomic branches") {
    DriftParams dp;
    dp.beta_tilde = 1.0;
    dp.beta = 0.8;
    dp.nu_on_C = 0.8;
    dp.lambda = 0.5;
    dp.K = 2.0;
    CHECK(dp.atomic());

    const RhoResult sap = rho_bound(dp, ChainClass::self_adjoint_positive);
    CHECK(sap.rho == doctest::Approx(dp.lambda).epsilon(1e-14));

    const RhoResult gen = rho_bound(dp, ChainClass::general);
    CHECK(gen.rho > sap.rho);
    CHECK(gen.rho < 1.0);

    const BigM m = big_m(dp, gen, 0.5 * (1.0 + gen.rho));
    CHECK(m.value > 0.0);
    CHECK(std::isfinite(m.log_value));
}
