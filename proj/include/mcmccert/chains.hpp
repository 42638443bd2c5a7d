#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "mcmccert/drift.hpp"
#include "mcmccert/rng.hpp"

namespace mcmccert {

// Autoregressive Gaussian kernel x -> N(theta x, 1 - theta^2); stationary law
// is N(0,1) for |theta| < 1.
struct ContractingNormals {
    double theta = 0.0;
    explicit ContractingNormals(double theta_);
    double sigma() const { return std::sqrt(1.0 - theta * theta); }
    double step(double x, Rng& rng) const;
    double log_density(double y, double x) const;  // transition density k(y|x)
};

// Small set C = [-c, c]; residual-normal minorization with nu concentrated on C.
struct CnMinorization {
    double theta = 0.0;
    double c = 0.0;
    double sigma = 0.0;
    double beta_tilde = 0.0;
    double s(double x) const;               // minorization weight at x
    double log_nu_density(double y) const;  // density of nu on C (0 mass outside)
};

CnMinorization cn_minorization(double theta, double c);

// Drift certificate for V(x) = 1 + x^2 with small set [-c, c]; needs c > 1.
DriftParams cn_drift(double theta, double c);

// Dense transition matrix on a finite state space.
class FiniteChain {
  public:
    explicit FiniteChain(Eigen::MatrixXd P);
    int size() const { return static_cast<int>(P_.rows()); }
    const Eigen::MatrixXd& P() const { return P_; }
    Eigen::VectorXd stationary() const;
    // Z = (I - P + 1 pi^T)^{-1}
    Eigen::MatrixXd fundamental(const Eigen::VectorXd& pi) const;
    // Limiting variance of n^{-1/2} sum f(X_i) under stationarity.
    double asym_var(const Eigen::VectorXd& f) const;
    int step(int x, Rng& rng) const;

  private:
    Eigen::MatrixXd P_;
};

// Five-state demo chain (states a..e = 0..4): a splits to b/c, b loops or
// exits to d, c loops or exits to e, d and e return to a.  Its 4-step kernel
// dominates (1/8) nu4 with nu4 = (0,0,0,1/2,1/2) on the whole space.
FiniteChain five_state_chain();
Eigen::VectorXd five_state_nu4();

// Two-state demo chain with a whole-space one-step minorization:
// P = [[.7,.3],[.4,.6]] >= 0.7 * (4/7, 3/7).
FiniteChain two_state_chain();
Eigen::VectorXd two_state_nu();

}  // namespace mcmccert
