#include "mcmccert/regen.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

#include "mcmccert/errors.hpp"
#include "mcmccert/special.hpp"

namespace mcmccert {

namespace {

constexpr double kBellSlack = 1e-9;

int sample_vec(const Eigen::VectorXd& p, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        acc += p(j);
        if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(p.size()) - 1;
}

double draw_bell_prob(const SplitKernelM1& kernel, double x, double y) {
    const double sx = kernel.s(x);
    if (sx <= 0.0) return 0.0;
    const double log_ratio = std::log(sx) + kernel.log_nu_density(y) - kernel.log_density(y, x);
    if (log_ratio > std::log1p(kBellSlack)) {
        std::ostringstream msg;
        msg << "split bell probability " << std::exp(log_ratio) << " exceeds one at x=" << x
            << ", y=" << y << ": the declared minorization does not hold";
        throw verification_error(msg.str());
    }
    return std::exp(std::min(log_ratio, 0.0));
}

double vec_mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

void validate_bias_allowance(const std::function<double(double)>& p) {
    double prev = std::numeric_limits<double>::infinity();
    for (double n = 1.0; n <= 1.1e9; n *= 2.0) {
        const double v = p(n);
        if (!std::isfinite(v) || v <= 0.0)
            throw validation_error("fixed-width bias allowance p(n) must be positive and finite");
        if (v > prev * (1.0 + 1e-12))
            throw validation_error("fixed-width bias allowance p(n) must be nonincreasing");
        prev = v;
    }
}

void validate_fixed_width(const FixedWidthOptions& opt) {
    if (!(opt.eps > 0.0)) throw validation_error("fixed-width run: eps must be positive");
    if (!(opt.delta > 0.0 && opt.delta < 1.0))
        throw validation_error("fixed-width run: delta must lie in (0, 1)");
    if (opt.n0 < 4) throw validation_error("fixed-width run: initial sample size below 4");
    if (opt.budget < opt.n0)
        throw validation_error("fixed-width run: budget smaller than the initial sample size");
    if (!(opt.growth > 1.0)) throw validation_error("fixed-width run: growth factor must exceed 1");
}

// Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
    double fac = 2.0;
    double sum = 0.0;
    double prev_term = 0.0;
    const double a2 = -2.0 * lambda * lambda;
    for (int j = 1; j <= 100; ++j) {
        const double term = fac * std::exp(a2 * j * j);
        sum += term;
        if (std::abs(term) <= 0.001 * prev_term || std::abs(term) <= 1e-12 * std::abs(sum))
            return std::clamp(sum, 0.0, 1.0);
        fac = -fac;
        prev_term = std::abs(term);
    }
    return 1.0;
}

struct PairTable {
    Eigen::Matrix2d table = Eigen::Matrix2d::Zero();
    double chi_sq = 0.0;
    double p_value = 1.0;
    std::size_t pairs = 0;
};

// Chi-square test of independence on a 2x2 table, df = 1.
PairTable crosstab(const std::vector<int>& rows, const std::vector<int>& cols) {
    PairTable out;
    for (std::size_t i = 0; i < rows.size(); ++i) out.table(rows[i], cols[i]) += 1.0;
    out.pairs = rows.size();
    const double total = out.table.sum();
    const Eigen::Vector2d rs = out.table.rowwise().sum();
    const Eigen::Vector2d cs = out.table.colwise().sum();
    if (total <= 0.0 || rs.minCoeff() <= 0.0 || cs.minCoeff() <= 0.0) return out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double expd = rs(i) * cs(j) / total;
            const double d = out.table(i, j) - expd;
            out.chi_sq += d * d / expd;
        }
    out.p_value = gamma_q(0.5, out.chi_sq / 2.0);
    return out;
}

}  // namespace

SplitKernelM1 cn_split_kernel(const ContractingNormals& kernel, const CnMinorization& mn) {
    SplitKernelM1 k;
    k.step = [kernel](double x, Rng& rng) { return kernel.step(x, rng); };
    k.s = [mn](double x) { return mn.s(x); };
    k.log_nu_density = [mn](double y) { return mn.log_nu_density(y); };
    k.log_density = [kernel](double y, double x) { return kernel.log_density(y, x); };
    return k;
}

SplitTraceReal split_run_m1(const SplitKernelM1& kernel, double x0, std::size_t n, Rng& rng) {
    if (n == 0) throw validation_error("split_run_m1: run length must be positive");
    SplitTraceReal tr;
    tr.states.reserve(n + 1);
    tr.bells.reserve(n);
    tr.states.push_back(x0);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = kernel.step(x, rng);
        const double pr = draw_bell_prob(kernel, x, y);
        const bool bell = pr > 0.0 && rng.bernoulli(pr);
        tr.bells.push_back(bell ? 1 : 0);
        if (bell) tr.regens.push_back(i);
        tr.states.push_back(y);
        x = y;
    }
    return tr;
}

SplitTraceFinite split_run_finite(const FiniteChain& chain, int m, double epsilon,
                                  const Eigen::VectorXd& nu_m, const std::vector<int>& in_C,
                                  int x0, std::size_t n_skel, Rng& rng) {
    const int S = chain.size();
    if (m < 1) throw validation_error("split_run_finite: block length m must be >= 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw validation_error("split_run_finite: epsilon must lie in (0, 1]");
    if (nu_m.size() != S || static_cast<int>(in_C.size()) != S)
        throw validation_error("split_run_finite: nu_m and in_C must match the state count");
    if (nu_m.minCoeff() < 0.0 || std::abs(nu_m.sum() - 1.0) > 1e-9)
        throw validation_error("split_run_finite: nu_m is not a probability vector");
    if (x0 < 0 || x0 >= S) throw validation_error("split_run_finite: start state out of range");
    if (n_skel == 0) throw validation_error("split_run_finite: run length must be positive");

    std::vector<Eigen::MatrixXd> pw(static_cast<std::size_t>(m) + 1);
    pw[0] = Eigen::MatrixXd::Identity(S, S);
    for (int k = 1; k <= m; ++k) pw[k] = pw[k - 1] * chain.P();
    const Eigen::MatrixXd& Pm = pw[static_cast<std::size_t>(m)];

    for (int x = 0; x < S; ++x) {
        if (!in_C[x]) continue;
        for (int z = 0; z < S; ++z) {
            if (Pm(x, z) < epsilon * nu_m(z) - 1e-12) {
                std::ostringstream msg;
                msg << "split_run_finite: P^" << m << "(" << x << "," << z << ") = " << Pm(x, z)
                    << " < epsilon * nu_m = " << epsilon * nu_m(z)
                    << "; the block minorization does not hold";
                throw validation_error(msg.str());
            }
        }
    }

    Eigen::MatrixXd resid(S, S);
    for (int x = 0; x < S; ++x) {
        if (in_C[x] && epsilon < 1.0) {
            Eigen::VectorXd row = (Pm.row(x).transpose() - epsilon * nu_m).cwiseMax(0.0);
            resid.row(x) = row.transpose() / row.sum();
        } else {
            resid.row(x) = Pm.row(x);
        }
    }

    SplitTraceFinite tr;
    tr.m = m;
    tr.epsilon = epsilon;
    tr.states.reserve(n_skel * static_cast<std::size_t>(m) + 1);
    tr.bells.reserve(n_skel);
    tr.states.push_back(x0);
    int x = x0;
    Eigen::VectorXd probs(S);
    for (std::size_t i = 0; i < n_skel; ++i) {
        const bool bell = in_C[x] != 0 && rng.bernoulli(epsilon);
        const int z = bell ? sample_vec(nu_m, rng) : sample_vec(resid.row(x).transpose(), rng);
        int w = x;
        for (int k = 1; k < m; ++k) {
            for (int v = 0; v < S; ++v)
                probs(v) = chain.P()(w, v) * pw[static_cast<std::size_t>(m - k)](v, z);
            const double tot = probs.sum();
            if (!(tot > 0.0))
                throw numeric_error("split_run_finite: degenerate bridge distribution");
            w = sample_vec(probs / tot, rng);
            tr.states.push_back(w);
        }
        tr.states.push_back(z);
        tr.bells.push_back(bell ? 1 : 0);
        if (bell) tr.regens.push_back(i);
        x = z;
    }
    return tr;
}

TourBlocks tours(const SplitTraceReal& trace, const std::function<double(double)>& f) {
    if (trace.regens.size() < 2)
        throw validation_error("tours: need at least two regenerations to form a tour");
    TourBlocks out;
    out.s.reserve(trace.regens.size() - 1);
    out.N.reserve(trace.regens.size() - 1);
    for (std::size_t j = 0; j + 1 < trace.regens.size(); ++j) {
        const std::size_t lo = trace.regens[j] + 1;
        const std::size_t hi = trace.regens[j + 1] + 1;
        double acc = 0.0;
        for (std::size_t t = lo; t < hi; ++t) acc += f(trace.states[t]);
        out.s.push_back(acc);
        out.N.push_back(static_cast<double>(hi - lo));
    }
    return out;
}

TourBlocks tours(const SplitTraceFinite& trace, const std::function<double(int)>& f) {
    if (trace.regens.size() < 2)
        throw validation_error("tours: need at least two regenerations to form a tour");
    TourBlocks out;
    out.s.reserve(trace.regens.size() - 1);
    out.N.reserve(trace.regens.size() - 1);
    const std::size_t m = static_cast<std::size_t>(trace.m);
    for (std::size_t j = 0; j + 1 < trace.regens.size(); ++j) {
        const std::size_t b0 = trace.regens[j];
        const std::size_t b1 = trace.regens[j + 1];
        double acc = 0.0;
        for (std::size_t t = (b0 + 1) * m; t < (b1 + 1) * m; ++t) acc += f(trace.states[t]);
        out.s.push_back(acc);
        out.N.push_back(static_cast<double>(b1 - b0));
    }
    return out;
}

RegenEstimates regen_estimates(const TourBlocks& blocks) {
    const std::size_t R = blocks.count();
    if (R < 2) throw validation_error("regen_estimates: need at least two tours");
    double S = 0.0;
    double N = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        S += blocks.s[i];
        N += blocks.N[i];
    }
    RegenEstimates e;
    e.R = R;
    e.I_hat = S / N;
    e.N_bar = N / static_cast<double>(R);
    double q = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        const double d = blocks.s[i] - e.I_hat * blocks.N[i];
        q += d * d;
    }
    e.xi_sq = q / (static_cast<double>(R) * e.N_bar * e.N_bar);
    return e;
}

double regen_sigma2(const TourBlocks& blocks, double epsilon, double pi_C, int m) {
    const std::size_t R = blocks.count();
    if (R < 3) throw validation_error("regen_sigma2: need at least three tours");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw validation_error("regen_sigma2: epsilon must lie in (0, 1]");
    if (!(pi_C > 0.0 && pi_C <= 1.0))
        throw validation_error("regen_sigma2: pi_C must lie in (0, 1]");
    if (m < 1) throw validation_error("regen_sigma2: block length m must be >= 1");
    double S = 0.0;
    double N = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        S += blocks.s[i];
        N += blocks.N[i];
    }
    const double I_hat = S / N;
    double m2 = 0.0;
    double cross = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        const double sc = blocks.s[i] - I_hat * blocks.N[i];
        m2 += sc * sc;
        if (i > 0) cross += prev * sc;
        prev = sc;
    }
    m2 /= static_cast<double>(R);
    cross /= static_cast<double>(R - 1);
    return (epsilon * pi_C / static_cast<double>(m)) * (m2 + 2.0 * cross);
}

double estimate_one_walk(const std::vector<double>& fx, std::size_t t, std::size_t n) {
    if (n == 0) throw validation_error("estimate: sample count must be positive");
    if (t + n > fx.size()) throw validation_error("estimate: walk shorter than t + n");
    double acc = 0.0;
    for (std::size_t i = t; i < t + n; ++i) acc += fx[i];
    return acc / static_cast<double>(n);
}

double estimate_spaced(const std::vector<double>& fx, std::size_t t, std::size_t n,
                       std::size_t spacing) {
    if (n == 0) throw validation_error("estimate: sample count must be positive");
    if (spacing == 0) throw validation_error("estimate: spacing must be positive");
    if (t + (n - 1) * spacing >= fx.size())
        throw validation_error("estimate: walk shorter than t + (n-1) * spacing");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += fx[t + i * spacing];
    return acc / static_cast<double>(n);
}

double estimate_multi_run(const std::vector<std::vector<double>>& runs, std::size_t t) {
    if (runs.empty()) throw validation_error("estimate: no runs supplied");
    double acc = 0.0;
    for (const auto& r : runs) {
        if (t >= r.size()) throw validation_error("estimate: run shorter than t");
        acc += r[t];
    }
    return acc / static_cast<double>(runs.size());
}

double estimate_median(std::vector<double> walk_estimates) {
    if (walk_estimates.empty()) throw validation_error("estimate: no walk estimates supplied");
    const std::size_t n = walk_estimates.size();
    const std::size_t mid = n / 2;
    std::nth_element(walk_estimates.begin(), walk_estimates.begin() + mid, walk_estimates.end());
    const double hi = walk_estimates[mid];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(walk_estimates.begin(), walk_estimates.begin() + mid);
    return 0.5 * (lo + hi);
}

double batch_means_var(const std::vector<double>& samples, double theta_b) {
    if (!(theta_b > 0.0 && theta_b < 1.0))
        throw validation_error("batch_means_var: theta_b must lie in (0, 1)");
    const std::size_t n = samples.size();
    const std::size_t b = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), theta_b))));
    const std::size_t a = n / b;
    if (a < 2) throw validation_error("batch_means_var: fewer than two batches");
    const std::size_t used = a * b;
    double gmean = 0.0;
    for (std::size_t i = 0; i < used; ++i) gmean += samples[i];
    gmean /= static_cast<double>(used);
    double q = 0.0;
    for (std::size_t i = 0; i < a; ++i) {
        double bm = 0.0;
        for (std::size_t j = i * b; j < (i + 1) * b; ++j) bm += samples[j];
        bm /= static_cast<double>(b);
        const double d = bm - gmean;
        q += d * d;
    }
    return static_cast<double>(b) * q / static_cast<double>(a - 1);
}

FixedWidthResult fixed_width_run_bm(const std::function<double(double, Rng&)>& step,
                                    const std::function<double(double)>& f, double x0,
                                    const FixedWidthOptions& opt, Rng& rng) {
    validate_fixed_width(opt);
    const auto p = opt.p ? opt.p : [](double n) { return 1.0 / n; };
    validate_bias_allowance(p);
    const double q = normal_ppf(1.0 - opt.delta / 2.0);

    std::vector<double> fx;
    fx.reserve(opt.n0 * 4);
    double x = x0;
    std::size_t target = opt.n0;
    FixedWidthResult res;
    for (;;) {
        target = std::min(target, opt.budget);
        while (fx.size() < target) {
            x = step(x, rng);
            fx.push_back(f(x));
        }
        const double n = static_cast<double>(fx.size());
        const double s2 = std::max(batch_means_var(fx, opt.theta_b), 0.0);
        const double width = q * std::sqrt(s2 / n) + p(n);
        res.n = fx.size();
        res.sigma_sq = s2;
        res.estimate = vec_mean(fx);
        res.half_width = width;
        if (width <= opt.eps) {
            res.half_width = opt.eps;
            return res;
        }
        if (fx.size() >= opt.budget) {
            res.capped = true;
            return res;
        }
        target = static_cast<std::size_t>(std::ceil(static_cast<double>(target) * opt.growth));
    }
}

FixedWidthResult fixed_width_run_rs(const SplitKernelM1& kernel,
                                    const std::function<double(double)>& f, double x0,
                                    const FixedWidthOptions& opt, Rng& rng) {
    validate_fixed_width(opt);
    const auto p = opt.p ? opt.p : [](double n) { return 1.0 / n; };
    validate_bias_allowance(p);
    const double q = normal_ppf(1.0 - opt.delta / 2.0);

    TourBlocks blocks;
    bool open = false;
    double cur_s = 0.0;
    std::size_t cur_n = 0;
    double fsum = 0.0;
    std::size_t n = 0;
    double x = x0;
    std::size_t target = opt.n0;
    FixedWidthResult res;
    for (;;) {
        target = std::min(target, opt.budget);
        while (n < target) {
            const double y = kernel.step(x, rng);
            const double pr = draw_bell_prob(kernel, x, y);
            const bool bell = pr > 0.0 && rng.bernoulli(pr);
            if (bell) {
                if (open) {
                    blocks.s.push_back(cur_s);
                    blocks.N.push_back(static_cast<double>(cur_n));
                }
                open = true;
                cur_s = 0.0;
                cur_n = 0;
            }
            if (open) {
                cur_s += f(y);
                ++cur_n;
            }
            fsum += f(y);
            ++n;
            x = y;
        }
        res.n = n;
        res.tours = blocks.count();
        const bool enough = blocks.count() >= std::max<std::size_t>(opt.min_tours, 2);
        if (enough) {
            const RegenEstimates e = regen_estimates(blocks);
            const double s2 = std::max(e.xi_sq * e.N_bar, 0.0);
            const double width = q * std::sqrt(s2 / static_cast<double>(n)) +
                                 p(static_cast<double>(n));
            res.sigma_sq = s2;
            res.estimate = e.I_hat;
            res.half_width = width;
            if (width <= opt.eps) {
                res.half_width = opt.eps;
                return res;
            }
        } else {
            res.estimate = fsum / static_cast<double>(n);
            res.half_width = std::numeric_limits<double>::infinity();
        }
        if (n >= opt.budget) {
            res.capped = true;
            return res;
        }
        target = static_cast<std::size_t>(std::ceil(static_cast<double>(target) * opt.growth));
    }
}

BoundaryPairs boundary_pairs(const SplitTraceFinite& trace) {
    if (trace.regens.size() < 2)
        throw validation_error("boundary_pairs: need at least two regenerations");
    BoundaryPairs bp;
    const std::size_t m = static_cast<std::size_t>(trace.m);
    bp.last_of_tour.reserve(trace.regens.size() - 1);
    bp.first_of_tour.reserve(trace.regens.size() - 1);
    for (std::size_t j = 0; j + 1 < trace.regens.size(); ++j) {
        const std::size_t lo = (trace.regens[j] + 1) * m;
        const std::size_t hi = (trace.regens[j + 1] + 1) * m;
        bp.first_of_tour.push_back(trace.states[lo]);
        bp.last_of_tour.push_back(trace.states[hi - 1]);
    }
    return bp;
}

DependenceReport tour_dependence_probe(std::size_t n_tours, Rng& rng) {
    if (n_tours < 10) throw validation_error("tour_dependence_probe: request at least 10 tours");
    const FiniteChain chain = five_state_chain();
    const Eigen::VectorXd nu = five_state_nu4();
    const std::vector<int> in_C(5, 1);
    const double eps = 0.125;
    const int m = 4;

    std::size_t n_skel = static_cast<std::size_t>(
        std::ceil(1.25 * static_cast<double>(n_tours + 2) / eps)) + 1000;
    SplitTraceFinite tr = split_run_finite(chain, m, eps, nu, in_C, 0, n_skel, rng);
    while (tr.regens.size() < n_tours + 1) {
        n_skel *= 2;
        tr = split_run_finite(chain, m, eps, nu, in_C, 0, n_skel, rng);
    }

    const BoundaryPairs bp = boundary_pairs(tr);
    std::vector<int> rows;
    std::vector<int> cols;
    const std::size_t pairs = std::min(bp.last_of_tour.size() - 1, n_tours - 1);
    rows.reserve(pairs);
    cols.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const int last = bp.last_of_tour[i];
        const int first = bp.first_of_tour[i + 1];
        if ((last != 1 && last != 2) || (first != 3 && first != 4))
            throw verification_error("tour_dependence_probe: boundary state outside b/c x d/e");
        rows.push_back(last == 1 ? 0 : 1);
        cols.push_back(first == 3 ? 0 : 1);
    }
    const PairTable pt = crosstab(rows, cols);

    // Exact joint law of (closing state, opening state) across a regeneration,
    // with the pre-block state drawn from the stationary law.
    const Eigen::MatrixXd& P = chain.P();
    const Eigen::MatrixXd P3 = P * P * P;
    const Eigen::MatrixXd P4 = P3 * P;
    const Eigen::VectorXd pi = chain.stationary();
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(5, 5);
    for (int x = 0; x < 5; ++x)
        for (int w = 0; w < 5; ++w)
            for (int z = 0; z < 5; ++z)
                if (nu(z) > 0.0 && P4(x, z) > 0.0)
                    joint(w, z) += pi(x) * P3(x, w) * P(w, z) * nu(z) / P4(x, z);

    DependenceReport rep;
    rep.table = pt.table;
    rep.chi_sq = pt.chi_sq;
    rep.p_value = pt.p_value;
    rep.tours = pt.pairs + 1;
    rep.exact_cond = joint(1, 3) / joint.row(1).sum();
    rep.exact_marg = joint.col(3).sum();
    return rep;
}

DependenceReport two_state_control_probe(std::size_t n_tours, Rng& rng) {
    if (n_tours < 10) throw validation_error("two_state_control_probe: request at least 10 tours");
    const FiniteChain chain = two_state_chain();
    const Eigen::VectorXd nu = two_state_nu();
    const std::vector<int> in_C(2, 1);
    const double eps = 0.7;

    std::size_t n_skel = static_cast<std::size_t>(
        std::ceil(1.25 * static_cast<double>(n_tours + 2) / eps)) + 1000;
    SplitTraceFinite tr = split_run_finite(chain, 1, eps, nu, in_C, 0, n_skel, rng);
    while (tr.regens.size() < n_tours + 1) {
        n_skel *= 2;
        tr = split_run_finite(chain, 1, eps, nu, in_C, 0, n_skel, rng);
    }

    const BoundaryPairs bp = boundary_pairs(tr);
    std::vector<int> rows;
    std::vector<int> cols;
    const std::size_t pairs = std::min(bp.last_of_tour.size() - 1, n_tours - 1);
    rows.reserve(pairs);
    cols.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        rows.push_back(bp.last_of_tour[i]);
        cols.push_back(bp.first_of_tour[i + 1]);
    }
    const PairTable pt = crosstab(rows, cols);

    DependenceReport rep;
    rep.table = pt.table;
    rep.chi_sq = pt.chi_sq;
    rep.p_value = pt.p_value;
    rep.tours = pt.pairs + 1;
    // At a one-step regeneration the opening state is drawn from nu regardless
    // of the closing state, so the conditional equals the marginal exactly.
    rep.exact_cond = nu(0);
    rep.exact_marg = nu(0);
    return rep;
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw validation_error("ks_two_sample_p: need at least two points per sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double ai = a[i];
        const double bj = b[j];
        if (ai <= bj) ++i;
        if (bj <= ai) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return kolmogorov_q(lambda);
}

}  // namespace mcmccert
