#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcmccert/drift.hpp"
#include "mcmccert/planner.hpp"
#include "mcmccert/rng.hpp"

namespace mcmccert {

// Two-level normal random effects posterior.  Priors: mu ~ N(m0, 1/s0),
// lambda_theta ~ Gamma(a1, b1), lambda_e ~ Gamma(a2, b2) (shape/rate).
struct HremHyper {
    double m0 = 0.0;
    double s0 = 1.0;
    double a1 = 2.0;
    double b1 = 1.0;
    double a2 = 2.0;
    double b2 = 1.0;
    void validate() const;
};

// Sufficient statistics of the grouped observations.  delta depends on the
// prior mean m0, so construction takes the hyperparameters into account.
struct HremData {
    std::vector<double> ybar;  // per-group means
    std::vector<double> m;     // per-group observation counts
    double M = 0.0;            // total observation count
    double sse = 0.0;          // within-group sum of squares
    double ybar_mean = 0.0;    // grand mean of the group means
    double s_sq = 0.0;         // between-group sum of squares
    double delta = 0.0;        // spread of {group means, m0}

    std::size_t groups() const { return ybar.size(); }
    double min_m() const;
    double max_m() const;
    bool balanced() const;
    void validate() const;
};

HremData hrem_data_from_groups(const std::vector<std::vector<double>>& groups, double m0);
HremData hrem_data_from_summary(std::vector<double> ybar, std::vector<double> m,
                                double sse, double m0);

struct HremState {
    std::vector<double> theta;
    double mu = 0.0;
    double lambda_theta = 1.0;
    double lambda_e = 1.0;
    void validate(std::size_t groups) const;
};

// theta_i = ybar_i, mu = grand mean, unit precisions.
HremState hrem_default_start(const HremData& data);

// One sweep of the coordinate-by-coordinate sampler: mu, then every theta_i,
// then lambda_theta and lambda_e, each from its full conditional.
HremState fixed_scan_step(const HremState& st, const HremData& data, const HremHyper& hy,
                          Rng& rng);

// One sweep of the two-block sampler: (lambda_theta, lambda_e) given
// (theta, mu), then (theta_1..theta_K, mu) jointly from its normal
// conditional.
HremState block_gibbs_step(const HremState& st, const HremData& data, const HremHyper& hy,
                           Rng& rng);

// Mean and covariance of the joint (theta_1..theta_K, mu) conditional used by
// the block sampler, exposed for direct verification.
struct BlockConditional {
    Eigen::VectorXd mean;  // ordered theta_1..theta_K, mu
    Eigen::MatrixXd cov;
};
BlockConditional block_conditional(const HremData& data, const HremHyper& hy,
                                   double lambda_theta, double lambda_e);

// Shared derived constants of the drift calculators.
struct HremConstants {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double delta4 = 0.0;
    double delta5 = 0.0;
    double delta6 = 0.0;
    double delta7 = 0.0;  // requires a1 > 3/2 to lie in (0,1)
    double c1 = 0.0;
    double c2 = 0.0;
};
HremConstants hrem_constants(const HremData& data, const HremHyper& hy);

// Global additive drift certificate P V <= lambda_R V + K_R with the drift
// function attached so the inequality can be checked empirically.
struct HremDrift {
    enum class Kind { block_unbalanced, block_balanced, fixed_scan };
    Kind kind = Kind::block_balanced;
    double lambda_R = 0.0;
    double K_R = 0.0;
    // Block drifts: V(theta, mu) = sum_i [phi1 (theta_i - mu)^2
    //                                     + phi2 m_i (theta_i - ybar_i)^2];
    // the balanced calculator stores phi2 = 1/m so both share the form.
    double phi1 = 0.0;
    double phi2 = 0.0;
    // Fixed-scan drift: V(theta, lambda) = e^{c3 lambda_theta} + e^{c3 lambda_e}
    //   + delta7 / (K delta1 lambda_theta) + K lambda_theta / (s0 + K lambda_theta)
    //     * (theta_bar - ybar_mean)^2.
    double c3 = 0.0;
    double rho1 = 0.0;
    std::function<double(const HremState&)> v;

    RosenthalDrift rosenthal(double d_R, double beta_tilde_R) const;
};

HremDrift block_drift(const HremData& data, const HremHyper& hy, double lambda_R,
                      double phi1, double phi2);
HremDrift block_drift_balanced(const HremData& data, const HremHyper& hy, double lambda_R,
                               double phi);

// Minorization constant for the block sampler on {V <= d_R}: product of the
// two truncated-Gamma overlap integrals, evaluated with regularized
// incomplete-gamma functions.
double block_minorization(double d_R, double phi1, double phi2, const HremHyper& hy,
                          const HremData& data);

// rho1 <= 0 requests the default midpoint of ((K + delta6/delta7) delta1, 1).
HremDrift gibbs_drift(const HremData& data, const HremHyper& hy, double lambda_R, double c3,
                      double rho1 = 0.0);

// Minorization constant for the fixed-scan sampler on {V <= d_R}.  The closed
// form is evaluated in the log domain; `value` is 0 when it underflows.
struct GibbsMinorization {
    double value = 0.0;
    double log_value = 0.0;
    bool underflowed = false;
};
GibbsMinorization gibbs_minorization(double d_R, double c3, const HremData& data,
                                     const HremHyper& hy);

// Target coordinate of a certified run.
struct HremTarget {
    enum class Kind { mu, theta, lambda_theta, lambda_e };
    Kind kind = Kind::mu;
    std::size_t index = 0;  // which theta component
};
HremTarget hrem_target_from_string(const std::string& s);
std::string to_string(const HremTarget& t);
double target_value(const HremTarget& t, const HremState& st);

enum class HremSampler { block, fixed_scan };
// mu / theta targets need a drift that dominates their square, which only the
// block drift provides; lambda targets likewise force the fixed-scan drift.
HremSampler sampler_for(const HremTarget& t);

struct HremPipelineConfig {
    double lambda_R_block = 0.8;
    double phi = 0.5;    // balanced block weight
    double phi1 = 0.5;   // unbalanced block weights
    double phi2 = 0.5;
    double lambda_R_gibbs = 0.99;
    double c3_fraction = 0.5;  // c3 = fraction * min(b1, b2)
    double d = 1.0;            // additive-to-small-set conversion parameter
    double p = 2.0;
    double r = 2.0;
    std::optional<ChainClass> chain_class;  // default: block SAP, fixed-scan general
    StartKind start = StartKind::deterministic;
};

// Everything needed to plan a certified run for one target coordinate.
struct HremPipeline {
    HremSampler sampler = HremSampler::block;
    HremDrift drift;
    double d_R = 0.0;
    double beta_tilde = 0.0;
    double log_beta_tilde = 0.0;
    DriftParams dp;
    ChainClass cls = ChainClass::general;
    double cfv = 0.0;  // sup (f - shift)^2 / V before full centering
    PipelineInputs pin;
};

HremPipeline hrem_pipeline(const HremData& data, const HremHyper& hy, const HremTarget& target,
                           const HremPipelineConfig& cfg = {});

}  // namespace mcmccert
