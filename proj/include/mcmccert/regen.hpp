#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mcmccert/chains.hpp"
#include "mcmccert/rng.hpp"

namespace mcmccert {

// One-step kernel bundled with a small-set minorization, enough to attach
// regeneration indicators retrospectively: after each transition x -> y the
// bell fires with probability s(x) nu(y) / k(y|x).
struct SplitKernelM1 {
    std::function<double(double, Rng&)> step;
    std::function<double(double)> s;               // minorization weight, 0 off the small set
    std::function<double(double)> log_nu_density;  // -inf outside the support of nu
    std::function<double(double, double)> log_density;  // (y, x) -> log k(y|x)
};

SplitKernelM1 cn_split_kernel(const ContractingNormals& kernel, const CnMinorization& mn);

struct SplitTraceReal {
    std::vector<double> states;       // length n+1
    std::vector<std::uint8_t> bells;  // length n; bells[i] pairs (states[i], states[i+1])
    std::vector<std::size_t> regens;  // indices i with bells[i] == 1
};

// Simulates the chain and draws each regeneration indicator from the
// transition actually realised, leaving the state marginal untouched.
SplitTraceReal split_run_m1(const SplitKernelM1& kernel, double x0, std::size_t n, Rng& rng);

struct SplitTraceFinite {
    std::vector<int> states;          // full-chain path, length n_skel * m + 1
    std::vector<std::uint8_t> bells;  // one per skeleton transition, length n_skel
    std::vector<std::size_t> regens;  // skeleton indices with bells == 1
    int m = 1;
    double epsilon = 0.0;
};

// Exact split of the m-skeleton of a finite chain: the bell is drawn first
// from the current skeleton state, the block endpoint from nu_m or the
// residual kernel, and the m-1 interior states from the conditional path
// distribution given both endpoints.  in_C[x] == 0 marks states outside the
// small set.  Requires P^m(x,.) >= epsilon nu_m elementwise on the small set.
SplitTraceFinite split_run_finite(const FiniteChain& chain, int m, double epsilon,
                                  const Eigen::VectorXd& nu_m, const std::vector<int>& in_C,
                                  int x0, std::size_t n_skel, Rng& rng);

// Per-tour sums of f and tour lengths.  Lengths are counted in skeleton steps
// (equal to time steps when m == 1), so sum(s)/sum(N) estimates m * pi(f).
struct TourBlocks {
    std::vector<double> s;
    std::vector<double> N;
    std::size_t count() const { return s.size(); }
};

TourBlocks tours(const SplitTraceReal& trace, const std::function<double(double)>& f);
TourBlocks tours(const SplitTraceFinite& trace, const std::function<double(int)>& f);

struct RegenEstimates {
    double I_hat = 0.0;   // sum(s) / sum(N)
    double xi_sq = 0.0;   // normalised tour variance, sum((s - I_hat N)^2) / (R Nbar^2)
    double N_bar = 0.0;
    std::size_t R = 0;
};

RegenEstimates regen_estimates(const TourBlocks& blocks);

// Asymptotic-variance plug-in built from centred tour sums, including the
// lag-one cross term that the split of an m-skeleton leaves behind.
double regen_sigma2(const TourBlocks& blocks, double epsilon, double pi_C, int m);

// Point estimators over precomputed f-values.
double estimate_one_walk(const std::vector<double>& fx, std::size_t t, std::size_t n);
double estimate_spaced(const std::vector<double>& fx, std::size_t t, std::size_t n,
                       std::size_t spacing);
double estimate_multi_run(const std::vector<std::vector<double>>& runs, std::size_t t);
double estimate_median(std::vector<double> walk_estimates);

// Non-overlapping batch means with b = floor(n^theta_b) and a = floor(n/b)
// batches over the first a*b samples.
double batch_means_var(const std::vector<double>& samples, double theta_b = 0.5);

struct FixedWidthOptions {
    double eps = 0.05;
    double delta = 0.1;
    std::function<double(double)> p;  // bias allowance; defaults to 1/n
    double theta_b = 0.5;
    std::size_t n0 = 16;
    double growth = 1.05;
    std::size_t budget = 10'000'000;
    std::size_t min_tours = 10;  // regenerative variant only
};

struct FixedWidthResult {
    double estimate = 0.0;
    double half_width = 0.0;  // final eps when stopped, last achieved width when capped
    double sigma_sq = 0.0;
    std::size_t n = 0;  // chain steps consumed
    std::size_t tours = 0;
    bool capped = false;
    double lower() const { return estimate - half_width; }
    double upper() const { return estimate + half_width; }
};

// Sequential fixed-width procedure: grow the run along geometric checkpoints
// and stop once z_{1-delta/2} sigma_hat / sqrt(n) + p(n) <= eps.
FixedWidthResult fixed_width_run_bm(const std::function<double(double, Rng&)>& step,
                                    const std::function<double(double)>& f, double x0,
                                    const FixedWidthOptions& opt, Rng& rng);

// Same stopping rule with the variance estimated from regeneration tours.
FixedWidthResult fixed_width_run_rs(const SplitKernelM1& kernel,
                                    const std::function<double(double)>& f, double x0,
                                    const FixedWidthOptions& opt, Rng& rng);

// Boundary states of each tour: the state just before the regeneration that
// closes it and the state that opens it.
struct BoundaryPairs {
    std::vector<int> last_of_tour;
    std::vector<int> first_of_tour;
};

BoundaryPairs boundary_pairs(const SplitTraceFinite& trace);

struct DependenceReport {
    Eigen::Matrix2d table = Eigen::Matrix2d::Zero();  // observed boundary-pair counts
    double chi_sq = 0.0;
    double p_value = 1.0;
    double exact_cond = 0.0;  // exact P(next tour opens in d | tour closed in b)
    double exact_marg = 0.0;  // exact P(next tour opens in d)
    std::size_t tours = 0;
};

// Crosstabulates closing and opening states of adjacent tours on the
// five-state chain split at m = 4; the exact conditional/marginal gap shows
// the tours are identically distributed but not independent.
DependenceReport tour_dependence_probe(std::size_t n_tours, Rng& rng);

// Control experiment: the two-state chain split at m = 1, where adjacent
// tours are independent and the same table shows no association.
DependenceReport two_state_control_probe(std::size_t n_tours, Rng& rng);

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

}  // namespace mcmccert
