#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace mcmccert {

// One-step contraction certificate for a Markov kernel: on the small set C the
// kernel dominates beta_tilde * nu; off C the weight function V contracts by
// lambda, and PV <= K on C.  beta <= beta_tilde * nu(C) is the aperiodicity
// constant.  v_floor = inf V, pi_C bounds the stationary mass of C.
struct DriftParams {
    double beta_tilde = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double K = 0.0;
    double v_floor = 1.0;
    double nu_on_C = 1.0;
    double pi_C = 1.0;
    std::optional<double> K_tilde;          // optional bound on nu(C) + int_{C^c} V dnu
    std::function<double(double)> v_eval;   // optional pointwise V evaluator

    bool atomic() const { return beta_tilde >= 1.0; }
    void validate() const;
};

// Certificate for V^{1/r}: same small set and minorization, contraction and
// level bounds taken to the 1/r power (Jensen).
DriftParams power_transform(const DriftParams& dp, double r);

// Upper bound for pi(V): pi_C (K - lambda) / (1 - lambda).
double pi_v_bound(const DriftParams& dp);

// Given a bound cfv on |f - g|^p-style seminorm against V, bound the fully
// centered version: (cfv^{1/p} + pi_C K_{p,lambda} / v_floor^{1/p})^p with
// K_{p,lambda} = (K^{1/p} - lambda^{1/p}) / (1 - lambda^{1/p}).
double centered_fv_bound(double cfv, const DriftParams& dp, double p);

// Drift certificate in the Rosenthal normalization: P V_R <= lambda_R V_R + K_R
// globally, minorization beta_tilde_R on {V_R <= d_R}, d_R > 2 K_R/(1-lambda_R).
struct RosenthalDrift {
    double lambda_R = 0.0;
    double K_R = 0.0;
    double d_R = 0.0;
    double beta_tilde_R = 0.0;
    void validate() const;
};

// Intermediate normalization with V >= 1: P V <= lambda V outside {V <= d},
// P V <= K on it.
struct RobertsTweedieDrift {
    double lambda = 0.0;
    double K = 0.0;
    double d = 0.0;
    double beta_tilde = 0.0;
    void validate() const;
};

// Small-set level required on the Rosenthal side when converting with free
// parameter d: (d+1)^2 (K_R + 1 - lambda_R) / (d (1 - lambda_R)).
double rt_level(const RosenthalDrift& rd, double d);

RobertsTweedieDrift rosenthal_to_roberts_tweedie(const RosenthalDrift& rd, double d);

// Full conversion to the small-set certificate consumed by the rate-bound
// machinery.  Requires rt_level(rd, d) - 1 <= d_R so the minorization applies
// on the converted small set.
DriftParams rosenthal_to_baxendale(const RosenthalDrift& rd, double d);

std::vector<double> default_d_grid();

// min over feasible d of (K_R + 1 - lambda_R)(d+1)/(1-lambda_R), also capped by
// K_R/(1-lambda_R) + 1.
double optimize_pi_v_bound(const RosenthalDrift& rd,
                           const std::vector<double>& d_grid = default_d_grid());

}  // namespace mcmccert
