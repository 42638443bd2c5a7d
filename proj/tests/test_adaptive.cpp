#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mcmccert/adaptive.hpp"
#include "mcmccert/errors.hpp"
#include "mcmccert/rng.hpp"

using namespace mcmccert;

namespace {
constexpr std::uint64_t kSeed = 20260815ULL;
}

TEST_CASE("component kernels") {
    const Eigen::Matrix2d P1 = kernel_p1();
    CHECK(P1(0, 0) == 0.5);
    CHECK(P1(0, 1) == 0.5);
    CHECK(P1(1, 0) == 0.5);
    CHECK(P1(1, 1) == 0.5);

    const Eigen::Matrix2d P2 = kernel_p2(0.25);
    CHECK(P2(0, 0) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(P2(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(P2(1, 0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(P2(1, 1) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK((kernel_p2(1.0) - P1).cwiseAbs().maxCoeff() == 0.0);

    // both kernels leave the uniform law invariant
    const Eigen::RowVector2d u(0.5, 0.5);
    CHECK(((u * P1) - u).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(((u * P2) - u).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(kernel_p2(0.0), validation_error);
    CHECK_THROWS_AS(kernel_p2(1.5), validation_error);
}

TEST_CASE("adaptive run shape and input validation") {
    Rng rng(derive_seed(kSeed, 8001));
    const AdaptivePolicy pol = policy_trap(0.25);
    const std::vector<int> path = run_adaptive(pol, 1, 100, rng);
    REQUIRE(path.size() == 101);
    CHECK(path[0] == 1);
    for (int s : path) CHECK((s == 0 || s == 1));

    CHECK_THROWS_AS(run_adaptive(pol, 2, 10, rng), validation_error);
    CHECK_THROWS_AS(run_adaptive(pol, 0, 0, rng), validation_error);
    AdaptivePolicy empty;
    CHECK_THROWS_AS(run_adaptive(empty, 0, 10, rng), validation_error);
}

TEST_CASE("the rule sees every prefix of the path, in order") {
    std::vector<std::size_t> seen;
    AdaptivePolicy probe;
    probe.initial = kernel_p1();
    probe.update = [&seen](const std::vector<int>& path) {
        seen.push_back(path.size());
        return kernel_p1();
    };
    Rng rng(derive_seed(kSeed, 8002));
    run_adaptive(probe, 0, 50, rng);
    REQUIRE(seen.size() == 50);
    for (std::size_t k = 0; k < 50; ++k) CHECK(seen[k] == k + 1);
}

TEST_CASE("a rule returning a malformed kernel is rejected mid-run") {
    AdaptivePolicy broken;
    broken.initial = kernel_p1();
    broken.update = [](const std::vector<int>&) {
        Eigen::Matrix2d P;
        P << 0.9, 0.2, 0.5, 0.5;
        return P;
    };
    Rng rng(derive_seed(kSeed, 8003));
    CHECK_THROWS_AS(run_adaptive(broken, 0, 5, rng), validation_error);
}

TEST_CASE("state-feedback rule: transition frequencies and occupation") {
    const double eps = 0.25;
    const AdaptivePolicy pol = policy_trap(eps);
    Rng rng(derive_seed(kSeed, 8004));
    const std::size_t n = 200000;
    const std::vector<int> path = run_adaptive(pol, 0, n, rng);

    std::size_t from0 = 0, from0_to1 = 0, from1 = 0, from1_to1 = 0, ones = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (path[k] == 0) {
            ++from0;
            from0_to1 += (path[k + 1] == 1);
        } else {
            ++from1;
            from1_to1 += (path[k + 1] == 1);
        }
        ones += (path[k + 1] == 1);
    }
    const double f0 = double(from0_to1) / double(from0);
    const double f1 = double(from1_to1) / double(from1);
    CHECK(std::abs(f0 - 0.5) < 4.0 * std::sqrt(0.25 / double(from0)));
    CHECK(std::abs(f1 - (1.0 - eps / 2.0)) <
          4.0 * std::sqrt((1.0 - eps / 2.0) * (eps / 2.0) / double(from1)));

    // occupation drifts to the induced chain's law, not the uniform one
    const double occ = double(ones) / double(n);
    CHECK(std::abs(occ - trap_stationary_p1(eps)) < 0.01);
    CHECK(std::abs(occ - 0.5) > 0.25);
}

TEST_CASE("induced occupation law of the feedback rule") {
    CHECK(trap_stationary_p1(0.1) == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
    CHECK(trap_stationary_p1(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(trap_stationary_p1(0.0), validation_error);
    CHECK_THROWS_AS(trap_stationary_p1(1.5), validation_error);
}

TEST_CASE("pre-sampled kernel schedule") {
    const AdaptivePolicy pol = policy_inhomogeneous(0.5, 0.25, 100, derive_seed(kSeed, 8005));
    Rng rng(derive_seed(kSeed, 8006));
    const std::vector<int> path = run_adaptive(pol, 0, 100, rng);
    CHECK(path.size() == 101);
    // the schedule covers exactly `horizon` steps
    Rng rng2(derive_seed(kSeed, 8006));
    CHECK_THROWS_AS(run_adaptive(pol, 0, 101, rng2), validation_error);

    // degenerate mixing weights pin the schedule to one kernel
    const AdaptivePolicy all1 = policy_inhomogeneous(1.0, 0.25, 10, 42);
    CHECK((all1.initial - kernel_p1()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((all1.update({0}) - kernel_p1()).cwiseAbs().maxCoeff() == 0.0);
    const AdaptivePolicy all2 = policy_inhomogeneous(0.0, 0.25, 10, 42);
    CHECK((all2.initial - kernel_p2(0.25)).cwiseAbs().maxCoeff() == 0.0);

    // same seed, same schedule, same path
    Rng ra(derive_seed(kSeed, 8007));
    Rng rb(derive_seed(kSeed, 8007));
    const AdaptivePolicy pa = policy_inhomogeneous(0.3, 0.5, 50, 7);
    const AdaptivePolicy pb = policy_inhomogeneous(0.3, 0.5, 50, 7);
    CHECK(run_adaptive(pa, 1, 50, ra) == run_adaptive(pb, 1, 50, rb));

    CHECK_THROWS_AS(policy_inhomogeneous(-0.1, 0.25, 10, 1), validation_error);
    CHECK_THROWS_AS(policy_inhomogeneous(0.5, 0.25, 0, 1), validation_error);
}

TEST_CASE("best-split bound equals its brute-force counterpart") {
    Rng rng(derive_seed(kSeed, 8008));
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.below(100));
        BoundSequences s;
        s.tau.resize(n);
        s.a.resize(n);
        s.R.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.tau[i] = std::exp(rng.normal());
            s.a[i] = std::abs(rng.normal());
            s.R[i] = std::exp(rng.normal(0.0, 2.0));
        }
        const double c1 = std::abs(rng.normal());
        const double c2 = std::abs(rng.normal());

        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= n; ++k) {
            double phi = 0.0;
            for (std::size_t j = 0; j < k; ++j) phi += s.a[j];
            best = std::min(best, c1 * phi * s.tau[n - k] + c2 * s.R[k - 1]);
        }
        CHECK(bound_B(c1, c2, n, s) == doctest::Approx(best).epsilon(1e-12));

        // without the first term the bound is the running minimum of c2 R
        double rmin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) rmin = std::min(rmin, c2 * s.R[k]);
        CHECK(bound_B(0.0, c2, n, s) == doctest::Approx(rmin).epsilon(1e-12));
    }
}

TEST_CASE("best-split bound validation") {
    BoundSequences s;
    s.tau = {1.0, 1.0};
    s.a = {1.0, 1.0};
    s.R = {1.0, 1.0};
    CHECK_THROWS_AS(bound_B(1.0, 1.0, 0, s), validation_error);
    CHECK_THROWS_AS(bound_B(-1.0, 1.0, 2, s), validation_error);
    CHECK_THROWS_AS(bound_B(1.0, 1.0, 3, s), validation_error);
    s.a[0] = -1.0;
    CHECK_THROWS_AS(bound_B(1.0, 1.0, 2, s), validation_error);
}
