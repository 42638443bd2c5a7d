#include "mcmccert/adaptive.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "mcmccert/errors.hpp"

namespace mcmccert {

namespace {

void check_kernel(const Eigen::Matrix2d& P) {
    for (int i = 0; i < 2; ++i) {
        if (P(i, 0) < 0.0 || P(i, 1) < 0.0 || std::abs(P.row(i).sum() - 1.0) > 1e-9)
            throw validation_error("adaptive kernel rows must be probability vectors");
    }
}

}  // namespace

Eigen::Matrix2d kernel_p1() {
    Eigen::Matrix2d P;
    P << 0.5, 0.5, 0.5, 0.5;
    return P;
}

Eigen::Matrix2d kernel_p2(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw validation_error("kernel_p2: eps must lie in (0, 1]");
    return (1.0 - eps) * Eigen::Matrix2d::Identity() + eps * kernel_p1();
}

std::vector<int> run_adaptive(const AdaptivePolicy& policy, int x0, std::size_t n, Rng& rng) {
    if (x0 != 0 && x0 != 1) throw validation_error("run_adaptive: start state must be 0 or 1");
    if (n < 1) throw validation_error("run_adaptive: need at least one step");
    if (!policy.update) throw validation_error("run_adaptive: policy has no update rule");
    std::vector<int> path;
    path.reserve(n + 1);
    path.push_back(x0);
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Matrix2d P = policy.update(path);
        check_kernel(P);
        const int x = path.back();
        path.push_back(rng.uniform() < P(x, 1) ? 1 : 0);
    }
    return path;
}

AdaptivePolicy policy_inhomogeneous(double phi_p1, double eps, std::size_t horizon,
                                    std::uint64_t seed) {
    if (!(phi_p1 >= 0.0 && phi_p1 <= 1.0))
        throw validation_error("policy_inhomogeneous: phi_p1 must lie in [0, 1]");
    if (horizon == 0) throw validation_error("policy_inhomogeneous: horizon must be positive");
    const Eigen::Matrix2d P1 = kernel_p1();
    const Eigen::Matrix2d P2 = kernel_p2(eps);
    auto ids = std::make_shared<std::vector<std::uint8_t>>();
    ids->reserve(horizon);
    Rng rng(seed);
    for (std::size_t k = 0; k < horizon; ++k)
        ids->push_back(rng.uniform() < phi_p1 ? 0 : 1);
    AdaptivePolicy pol;
    pol.initial = (*ids)[0] == 0 ? P1 : P2;
    pol.update = [ids, P1, P2](const std::vector<int>& path) {
        const std::size_t k = path.size() - 1;
        if (k >= ids->size()) {
            std::ostringstream msg;
            msg << "policy_inhomogeneous: kernel schedule covers " << ids->size()
                << " steps but step " << k << " was requested";
            throw validation_error(msg.str());
        }
        return (*ids)[k] == 0 ? P1 : P2;
    };
    return pol;
}

AdaptivePolicy policy_trap(double eps) {
    const Eigen::Matrix2d P1 = kernel_p1();
    const Eigen::Matrix2d P2 = kernel_p2(eps);
    AdaptivePolicy pol;
    pol.initial = P1;
    pol.update = [P1, P2](const std::vector<int>& path) {
        return path.back() == 0 ? P1 : P2;
    };
    return pol;
}

double trap_stationary_p1(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw validation_error("trap_stationary_p1: eps must lie in (0, 1]");
    return 1.0 / (1.0 + eps);
}

double bound_B(double c1, double c2, std::size_t n, const BoundSequences& seqs) {
    if (n < 1) throw validation_error("bound_B: n must be >= 1");
    if (!(c1 >= 0.0) || !(c2 >= 0.0))
        throw validation_error("bound_B: constants must be nonnegative");
    if (seqs.tau.size() < n || seqs.a.size() < n || seqs.R.size() < n)
        throw validation_error("bound_B: sequences shorter than n");
    for (std::size_t j = 0; j < n; ++j)
        if (!(seqs.a[j] >= 0.0)) throw validation_error("bound_B: a must be nonnegative");
    double best = std::numeric_limits<double>::infinity();
    double phi = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        phi += seqs.a[k - 1];
        const double cand = c1 * phi * seqs.tau[n - k] + c2 * seqs.R[k - 1];
        if (cand < best) best = cand;
    }
    return best;
}

}  // namespace mcmccert
