#pragma once

#include <optional>
#include <string>

#include "mcmccert/ratebounds.hpp"

namespace mcmccert {

// A geometric-decay certificate (M, gamma); one_minus_gamma and log_M kept
// separately for slow chains / huge prefactors.
struct RateBoundPair {
    double M = 0.0;
    double log_M = 0.0;
    double gamma = 0.0;
    double one_minus_gamma = 0.0;
};

enum class StartKind { stationary, distribution_gap, deterministic };

// Everything the mean-square-error bound needs.
struct MseInputs {
    double fc_norm = 0.0;    // bound on the centered |f|^2-against-V seminorm
    double pi_v = 0.0;       // bound on pi(V)
    double init_gap = 0.0;   // V-weighted gap of the start distribution
    double v_x0 = 1.0;       // V(x0) for a deterministic start
    RateBoundPair rate_v;    // certificate for the V drift
    RateBoundPair rate_vr;   // certificate for the V^{1/r} drift
    double p = 2.0;
    double r = 2.0;
    void validate() const;
};

// A = 1 + 2 M_r gamma_r / (1 - gamma_r): stationary-phase variance inflation.
double asym_var_factor(const MseInputs& in);

// Bound on E(estimate - integral)^2 for a length-n average after burn-in t.
double mse_bound(const MseInputs& in, StartKind start, double t, double n);

// n * limiting variance bound: pi_v * fc_norm * A, improved for reversible
// chains to min(A, (1+rho)/(1-rho)) * pi_v * fc_norm.
double asymptotic_var_bound(const MseInputs& in, const RhoResult* reversible = nullptr);

struct Plan {
    double t = 0.0;          // burn-in length
    double n = 0.0;          // averaging length per walk
    int m = 1;               // number of walks (median scheme)
    double total_cost = 0.0; // m * (t + n)
    double b = 0.0;          // quadratic coefficient (may overflow; see log_b)
    double c_tilde = 0.0;
    double log_b = 0.0;
    double log_c_tilde = 0.0;
    double A = 0.0;
    double eps = 0.0;
    double alpha = 0.0;
    StartKind start = StartKind::deterministic;
};

// Single-walk plan guaranteeing P(|estimate - integral| > eps) <= alpha.
Plan plan_one_walk(const MseInputs& in, double eps, double alpha,
                   StartKind start = StartKind::deterministic);

// Smallest odd number of independent walks so that a median of per-walk
// estimates, each failing with probability at most a < 1/2, fails with
// probability at most alpha.
int median_m(double alpha, double a);

// Median-of-walks plan: each walk planned at failure level a.
Plan plan_median(const MseInputs& in, double eps, double alpha, double a = 0.11969,
                 StartKind start = StartKind::deterministic);

// Drift-level description of a certification problem; optimize_plan builds the
// MseInputs for each candidate (gamma, gamma_r) pair itself.
struct PipelineInputs {
    DriftParams dp;
    ChainClass cls = ChainClass::general;
    double p = 2.0;
    double r = 2.0;
    double fc_norm = 0.0;
    double pi_v = 0.0;
    double v_x0 = 1.0;
    double init_gap = 0.0;
    StartKind start = StartKind::deterministic;
};

struct OptimizedPlan {
    Plan plan;
    int j = 0;    // index on the gamma grid for the V drift
    int j_r = 0;  // index on the gamma grid for the V^{1/r} drift
    RhoResult rho_v;
    RhoResult rho_vr;
    MseInputs inputs;  // at the chosen pair
};

// Scan gamma_j = rho + (j/(grid_n+1)) (1-rho), j = 1..grid_n, for both drifts;
// keep the cheapest feasible plan.  Ties prefer smaller gamma, then smaller
// gamma_r.  Throws numeric_error when no pair is feasible.
OptimizedPlan optimize_plan(const PipelineInputs& pin, double eps, double alpha,
                            int grid_n = 20, bool median = false, double a = 0.11969);

}  // namespace mcmccert
