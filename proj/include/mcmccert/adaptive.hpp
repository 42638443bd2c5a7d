#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mcmccert/rng.hpp"

namespace mcmccert {

// Two-state kernels: P1 jumps to the uniform law in one step, P2 lazily mixes
// it with staying put.  Both leave the uniform law invariant.
Eigen::Matrix2d kernel_p1();
Eigen::Matrix2d kernel_p2(double eps);

// A rule that picks the kernel driving the next transition from the path
// realised so far.  update must be a pure function of the path.
struct AdaptivePolicy {
    Eigen::Matrix2d initial;  // kernel the rule uses before any history accrues
    std::function<Eigen::Matrix2d(const std::vector<int>&)> update;
};

// Runs n adaptive transitions from x0; the kernel for step k is
// policy.update(path[0..k]).  Returns the path of length n+1.
std::vector<int> run_adaptive(const AdaptivePolicy& policy, int x0, std::size_t n, Rng& rng);

// Kernel schedule drawn once up front: each of the first `horizon` steps uses
// P1 with probability phi_p1 and P2 otherwise, independently of the path.
// Running past the pre-sampled horizon is an error.
AdaptivePolicy policy_inhomogeneous(double phi_p1, double eps, std::size_t horizon,
                                    std::uint64_t seed);

// State-feedback rule: P1 from state 0, P2 from state 1.  Both kernels
// preserve the uniform law, yet the induced process is a two-state chain with
// stationary mass 1/(1+eps) on state 1.
AdaptivePolicy policy_trap(double eps);

// Exact occupation law of state 1 under the trap rule's induced chain.
double trap_stationary_p1(double eps);

struct BoundSequences {
    std::vector<double> tau;  // tau[i] = tau_i, i >= 0
    std::vector<double> a;    // a[j] = a_{j+1} >= 0
    std::vector<double> R;    // R[k] = R_{k+1}
};

// min over k in [1, n] of c1 * (a_1 + ... + a_k) * tau_{n-k} + c2 * R_k.
double bound_B(double c1, double c2, std::size_t n, const BoundSequences& seqs);

}  // namespace mcmccert
