#include "mcmccert/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "mcmccert/adaptive.hpp"
#include "mcmccert/chains.hpp"
#include "mcmccert/drift.hpp"
#include "mcmccert/errors.hpp"
#include "mcmccert/hrem.hpp"
#include "mcmccert/parallel.hpp"
#include "mcmccert/planner.hpp"
#include "mcmccert/ratebounds.hpp"
#include "mcmccert/regen.hpp"
#include "mcmccert/rng.hpp"
#include "mcmccert/special.hpp"

namespace mcmccert {

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Ctx {
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool quick = false;
};

template <typename Body>
CheckResult timed_check(const std::string& name, double limit_s, Body&& body) {
    CheckResult res;
    res.name = name;
    std::ostringstream detail;
    detail << std::setprecision(6);
    const auto t0 = std::chrono::steady_clock::now();
    bool ok;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail << " threw: " << e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0.0 && res.seconds >= limit_s) {
        ok = false;
        detail << " [over time limit " << limit_s << "s]";
    }
    res.pass = ok;
    res.detail = detail.str();
    return res;
}

PipelineInputs cn_pipeline_inputs() {
    PipelineInputs pin;
    pin.dp = cn_drift(0.5, 1.6226);
    // The autoregressive kernel is reversible with a positive spectrum.
    pin.cls = ChainClass::self_adjoint_positive;
    pin.p = 2.0;
    pin.r = 2.0;
    // f(x) = x against V = 1 + x^2: sup f^2/V = 1 before centering.
    pin.fc_norm = centered_fv_bound(1.0, pin.dp, 2.0);
    pin.pi_v = pi_v_bound(pin.dp);
    pin.v_x0 = 1.0;  // V at the origin
    pin.init_gap = 0.0;
    pin.start = StartKind::deterministic;
    return pin;
}

CheckResult check_table_row1(const Ctx&) {
    return timed_check("certified plan, reference row 1", 1.0, [&](std::ostringstream& d) {
        const OptimizedPlan op = optimize_plan(cn_pipeline_inputs(), 0.1, 0.1);
        d << "rho=" << op.rho_v.rho << " rho2=" << op.rho_vr.rho
          << " M=" << op.inputs.rate_v.M << " M2=" << op.inputs.rate_vr.M << " t=" << op.plan.t
          << " n=" << op.plan.n;
        bool ok = std::abs(op.rho_v.rho - 0.895) <= 0.001;
        ok = ok && std::abs(op.rho_vr.rho - 0.899) <= 0.001;
        ok = ok && rel_err(op.inputs.rate_v.M, 36436.0) <= 0.01;
        ok = ok && rel_err(op.inputs.rate_vr.M, 748.0) <= 0.01;
        ok = ok && std::abs(op.plan.t - 218.0) <= 1.0;
        ok = ok && rel_err(op.plan.n, 6.46e9) <= 0.02;
        return ok;
    });
}

CheckResult check_table_rows23(const Ctx&) {
    return timed_check("certified plan, reference rows 2-3", 1.0, [&](std::ostringstream& d) {
        const PipelineInputs pin = cn_pipeline_inputs();
        const OptimizedPlan row2 = optimize_plan(pin, 0.1, 1e-5);
        const OptimizedPlan row3 = optimize_plan(pin, 0.1, 1e-5, 20, true, 0.11969);
        d << "single-walk n=" << row2.plan.n << "; median m=" << row3.plan.m
          << " n=" << row3.plan.n << " cost=" << row3.plan.total_cost;
        bool ok = rel_err(row2.plan.n, 6.46e13) <= 0.02;
        ok = ok && row3.plan.m == 27;
        ok = ok && rel_err(row3.plan.n, 5.39e9) <= 0.02;
        ok = ok && rel_err(row3.plan.total_cost, 1.46e11) <= 0.02;
        return ok;
    });
}

// Monotone-in-s residual of the root equation at fixed (beta, D, L).
double root_eq(double beta, double D, double Lm1, double s) {
    const double C = std::exp(2.0) * beta * D / (8.0 * Lm1);
    const double lr = std::log1p((D - s) / (1.0 + s));
    return s / ((1.0 + s) * lr * lr) - C;
}

// Dense referee: locate the sign change on a 2^20-cell log grid (binary
// search is valid because the residual is increasing in s), then plain
// bisection inside the cell.
double referee_root(double beta, double D, double Lm1) {
    const int cells = 1 << 20;
    const double la = std::log(D * 1e-13);
    const double lb = std::log(D * (1.0 - 1e-12));
    auto grid = [&](int i) { return std::exp(la + (lb - la) * i / static_cast<double>(cells)); };
    int lo = 0;
    int hi = cells;
    if (!(root_eq(beta, D, Lm1, grid(0)) < 0.0) || !(root_eq(beta, D, Lm1, grid(cells)) > 0.0))
        throw numeric_error("referee_root: no sign change on the grid");
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (root_eq(beta, D, Lm1, grid(mid)) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double slo = grid(lo);
    double shi = grid(hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (slo + shi);
        if (root_eq(beta, D, Lm1, mid) < 0.0)
            slo = mid;
        else
            shi = mid;
    }
    return 0.5 * (slo + shi);
}

// The chosen root location must dominate (to 1e-6 relative) the root at every
// R on a dense grid: the residual is increasing in s, so root(D') <= s_test
// exactly when the residual at s_test is nonnegative.
bool dominates_dense_grid(const DriftParams& dp, const Geometry& geo, double s_star) {
    const double s_test = s_star * (1.0 + 1e-6);
    const int grid = 1'000'000;
    const double la = std::log(geo.D0 * 1e-12);
    const double lb = std::log(geo.D0 * (1.0 - 1e-9));
    for (int i = 0; i < grid; ++i) {
        const double Dp = std::exp(la + (lb - la) * i / (grid - 1.0));
        if (s_test >= Dp) continue;  // any root here lies below s_test
        const double L = L_of_D(dp, geo, Dp);
        if (!std::isfinite(L) || !(L > 1.0)) continue;
        if (root_eq(dp.beta, Dp, L - 1.0, s_test) < 0.0) return false;
    }
    return true;
}

CheckResult check_root_argmax(const Ctx& ctx) {
    return timed_check("root finder and rate argmax vs dense referees", 10.0,
                       [&](std::ostringstream& d) {
        Rng rng(derive_seed(ctx.seed, 301));
        int done = 0;
        int attempts = 0;
        double worst_root = 0.0;
        while (done < 100 && attempts < 2000) {
            ++attempts;
            DriftParams dp;
            dp.beta_tilde = 0.05 + 0.90 * rng.uniform();
            dp.lambda = 0.1 + 0.8 * rng.uniform();
            dp.K = std::max(1.05, dp.lambda + 0.05 + 0.5 * rng.uniform()) *
                   (1.0 + 3.0 * rng.uniform());
            dp.beta = dp.beta_tilde * (0.2 + 0.8 * rng.uniform());
            const Geometry geo = geometry(dp);
            const double D = geo.D0 * (0.05 + 0.90 * rng.uniform());
            const double L = L_of_D(dp, geo, D);
            if (!std::isfinite(L) || !(L > 1.0)) continue;
            R1Result r1;
            try {
                r1 = solve_r1(dp.beta, 1.0 + D, L);
            } catch (const error&) {
                continue;
            }
            const double s_ref = referee_root(dp.beta, D, L - 1.0);
            worst_root = std::max(worst_root, rel_err(r1.s, s_ref));
            if (rel_err(r1.s, s_ref) > 1e-9) {
                d << "root mismatch: got s=" << r1.s << " referee=" << s_ref;
                return false;
            }
            const RhoResult rr = rho_bound(dp, ChainClass::general);
            const double s_star = rr.one_minus_rho / (1.0 - rr.one_minus_rho);
            if (!dominates_dense_grid(dp, geo, s_star)) {
                d << "argmax not dominant at instance " << done;
                return false;
            }
            ++done;
        }
        d << done << " instances, worst root rel err " << worst_root;
        return done == 100;
    });
}

CheckResult check_drift_soundness(const Ctx& ctx) {
    return timed_check("drift bound soundness on the autoregressive chain", 60.0,
                       [&](std::ostringstream& d) {
        const ContractingNormals cn(0.5);
        const DriftParams dp = cn_drift(0.5, 1.6226);

        Rng rng(derive_seed(ctx.seed, 401));
        double x = rng.normal();
        double mean_v = 0.0;
        const std::size_t n_v = 1'000'000;
        for (std::size_t i = 0; i < n_v; ++i) {
            x = cn.step(x, rng);
            mean_v += (1.0 + x * x - mean_v) / static_cast<double>(i + 1);
        }
        const double piv = pi_v_bound(dp);

        const std::size_t reps = 1000;
        const std::size_t n = 10'000;
        std::vector<double> sq(reps);
        parallel_for(reps, ctx.workers, [&](std::size_t i) {
            Rng rr(derive_seed(ctx.seed, 410'000 + i));
            double y = rr.normal();
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                y = cn.step(y, rr);
                acc += y;
            }
            const double est = acc / static_cast<double>(n);
            sq[i] = est * est;
        });
        double mse = 0.0;
        for (double v : sq) mse += v;
        mse /= static_cast<double>(reps);

        const OptimizedPlan op = optimize_plan(cn_pipeline_inputs(), 0.1, 0.1);
        const double bound = mse_bound(op.inputs, StartKind::stationary, 0.0,
                                       static_cast<double>(n));
        d << "mean V=" << mean_v << " (cap " << piv << "); mse=" << mse
          << " vs 3/n=" << 3.0 / static_cast<double>(n) << ", bound=" << bound;
        bool ok = std::abs(mean_v - 2.0) <= 0.02 && mean_v < piv;
        ok = ok && rel_err(mse, 3.0 / static_cast<double>(n)) <= 0.10;
        ok = ok && mse <= bound;
        return ok;
    });
}

CheckResult check_variance_estimators(const Ctx& ctx) {
    return timed_check("batch-means and regenerative variance estimators", 60.0,
                       [&](std::ostringstream& d) {
        const ContractingNormals cn(0.5);
        const std::size_t n = 1'000'000;

        Rng rng(derive_seed(ctx.seed, 501));
        std::vector<double> fx;
        fx.reserve(n);
        double x = rng.normal();
        for (std::size_t i = 0; i < n; ++i) {
            x = cn.step(x, rng);
            fx.push_back(x);
        }
        const double bm = batch_means_var(fx);

        Rng rng2(derive_seed(ctx.seed, 502));
        const SplitKernelM1 sk = cn_split_kernel(cn, cn_minorization(0.5, 1.6226));
        const SplitTraceReal tr = split_run_m1(sk, rng2.normal(), n, rng2);
        const TourBlocks tb = tours(tr, [](double y) { return y; });
        const RegenEstimates re = regen_estimates(tb);
        const double rs = re.xi_sq * re.N_bar;

        d << "bm=" << bm << " rs=" << rs << " (tours " << re.R << ")";
        return std::abs(bm - 3.0) <= 0.3 && std::abs(rs - 3.0) <= 0.45 &&
               std::abs(bm - rs) / rs <= 0.15;
    });
}

CheckResult check_fixed_width_coverage(const Ctx& ctx) {
    return timed_check("fixed-width stopping rule coverage", 600.0,
                       [&](std::ostringstream& d) {
        const ContractingNormals cn(0.5);
        const std::size_t reps = ctx.quick ? 50 : 200;
        std::vector<std::uint8_t> cover(reps, 0);
        FixedWidthOptions opt;
        opt.eps = 0.05;
        opt.delta = 0.1;
        opt.budget = 1'000'000;
        parallel_for(reps, ctx.workers, [&](std::size_t i) {
            Rng rr(derive_seed(ctx.seed, 600'000 + i));
            const double x0 = rr.normal();
            const FixedWidthResult res = fixed_width_run_bm(
                [&cn](double y, Rng& g) { return cn.step(y, g); },
                [](double y) { return y; }, x0, opt, rr);
            cover[i] = (!res.capped && std::abs(res.estimate) <= opt.eps) ? 1 : 0;
        });
        double cov = 0.0;
        for (auto c : cover) cov += c;
        cov /= static_cast<double>(reps);
        d << "coverage " << cov << " over " << reps << " replications"
          << (ctx.quick ? " (quick)" : "");
        return cov >= 0.86;
    });
}

CheckResult check_split_fidelity(const Ctx& ctx) {
    return timed_check("one-step split-chain fidelity", 60.0, [&](std::ostringstream& d) {
        const ContractingNormals cn(0.5);
        const CnMinorization mn = cn_minorization(0.5, 1.6226);
        const SplitKernelM1 sk = cn_split_kernel(cn, mn);
        const std::size_t n = 200'000;

        Rng rng(derive_seed(ctx.seed, 701));
        const SplitTraceReal tr = split_run_m1(sk, rng.normal(), n, rng);
        const double freq =
            static_cast<double>(tr.regens.size()) / static_cast<double>(n);
        const double pbar =
            mn.beta_tilde * (normal_cdf(mn.c) - normal_cdf(-mn.c));
        const double sd = std::sqrt(pbar * (1.0 - pbar) / static_cast<double>(n));

        Rng rng2(derive_seed(ctx.seed, 702));
        std::vector<double> raw;
        raw.reserve(n);
        double x = rng2.normal();
        for (std::size_t i = 0; i < n; ++i) {
            x = cn.step(x, rng2);
            raw.push_back(x);
        }
        std::vector<double> a;
        std::vector<double> b;
        for (std::size_t i = 19; i < n; i += 20) {
            a.push_back(tr.states[i + 1]);
            b.push_back(raw[i]);
        }
        const double p = ks_two_sample_p(a, b);
        d << "bell freq " << freq << " vs " << pbar << " (3sd " << 3.0 * sd << "); KS p=" << p;
        return std::abs(freq - pbar) <= 3.0 * sd && p >= 0.01;
    });
}

CheckResult check_tour_dependence(const Ctx& ctx) {
    return timed_check("dependent-tours pathology and control", 120.0,
                       [&](std::ostringstream& d) {
        Rng rng(derive_seed(ctx.seed, 801));
        const DependenceReport dep = tour_dependence_probe(100'000, rng);
        Rng rng2(derive_seed(ctx.seed, 802));
        const DependenceReport ctl = two_state_control_probe(100'000, rng2);
        d << "exact cond=" << dep.exact_cond << " vs marg=" << dep.exact_marg
          << "; chi2 p=" << dep.p_value << "; control p=" << ctl.p_value;
        return std::abs(dep.exact_cond - dep.exact_marg) > 0.1 && dep.p_value < 1e-3 &&
               ctl.p_value >= 0.01;
    });
}

CheckResult check_regen_sigma2(const Ctx& ctx) {
    return timed_check("tour-based variance plug-in vs exact", 120.0,
                       [&](std::ostringstream& d) {
        const FiniteChain chain = five_state_chain();
        Eigen::VectorXd f(5);
        f << 1, 2, 3, 4, 5;
        const double exact = chain.asym_var(f);

        Rng rng(derive_seed(ctx.seed, 901));
        const std::vector<int> in_C(5, 1);
        const SplitTraceFinite tr =
            split_run_finite(chain, 4, 0.125, five_state_nu4(), in_C, 0, 250'000, rng);
        const TourBlocks tb = tours(tr, [](int s) { return static_cast<double>(s + 1); });
        const double got = regen_sigma2(tb, 0.125, 1.0, 4);
        d << "plug-in " << got << " vs exact " << exact;
        return rel_err(got, exact) <= 0.05;
    });
}

CheckResult check_adaptive_dichotomy(const Ctx& ctx) {
    return timed_check("adaptive convergence vs trap dichotomy", 300.0,
                       [&](std::ostringstream& d) {
        const std::size_t reps = 100'000;
        std::vector<std::uint8_t> last(reps, 0);
        parallel_for(reps, ctx.workers, [&](std::size_t i) {
            const AdaptivePolicy pol = policy_inhomogeneous(
                0.5, 0.1, 100, derive_seed(ctx.seed, 1'000'000 + 2 * i));
            Rng rr(derive_seed(ctx.seed, 1'000'000 + 2 * i + 1));
            last[i] = static_cast<std::uint8_t>(run_adaptive(pol, 0, 100, rr).back());
        });
        double p1 = 0.0;
        for (auto v : last) p1 += v;
        p1 /= static_cast<double>(reps);
        const double tv = std::abs(p1 - 0.5);

        Rng rt(derive_seed(ctx.seed, 1'099));
        const std::vector<int> path = run_adaptive(policy_trap(0.1), 0, 1'000'000, rt);
        double freq = 0.0;
        for (std::size_t i = 1; i < path.size(); ++i) freq += path[i];
        freq /= static_cast<double>(path.size() - 1);
        const double want = trap_stationary_p1(0.1);
        d << "TV=" << tv << "; trap freq " << freq << " vs " << want;
        return tv < 0.01 && std::abs(freq - want) <= 0.01;
    });
}

// ---- quadrature referees for the hierarchical-model minorizations ----

double gl_integrate(const std::function<double(double)>& f, double a, double b, int panels,
                    int nodes) {
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / static_cast<double>(panels);
        const double pb = a + (b - a) * (p + 1) / static_cast<double>(panels);
        for (const auto& [xx, ww] : gauss_legendre(nodes, pa, pb)) acc += ww * f(xx);
    }
    return acc;
}

double gamma_pdf(double x, double shape, double rate) {
    if (!(x > 0.0)) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                    std::lgamma(shape));
}

// Integral of the pointwise-smaller of two gamma densities that cross at
// `split`: rate_lo below the crossing, rate_hi above.
double quad_gamma_min(double shape, double rate_lo, double rate_hi, double split) {
    const double tail = std::max(split * 3.0, (shape + 60.0 * std::sqrt(shape) + 60.0) / rate_hi);
    const double low = gl_integrate([&](double x) { return gamma_pdf(x, shape, rate_lo); }, 0.0,
                                    split, 64, 24);
    const double high = gl_integrate([&](double x) { return gamma_pdf(x, shape, rate_hi); },
                                     split, tail, 64, 24);
    return low + high;
}

double quad_block_minorization(double d_R, double phi1, double phi2, const HremHyper& hy,
                               const HremData& data) {
    const double K = static_cast<double>(data.groups());
    const double A1 = K / 2.0 + hy.a1;
    const double A2 = data.M / 2.0 + hy.a2;
    const double lts =
        (phi1 * (K + 2.0 * hy.a1) / d_R) * std::log1p(d_R / (2.0 * hy.b1 * phi1));
    const double les = (phi2 * (data.M + 2.0 * hy.a2) / d_R) *
                       std::log1p(d_R / (phi2 * (2.0 * hy.b2 + data.sse)));
    const double I1 = quad_gamma_min(A1, hy.b1, d_R / (2.0 * phi1) + hy.b1, lts);
    const double I2 = quad_gamma_min(A2, data.sse / 2.0 + hy.b2,
                                     (d_R + phi2 * data.sse) / (2.0 * phi2) + hy.b2, les);
    return I1 * I2;
}

double quad_gibbs_minorization(double d_R, double c3, const HremData& data,
                               const HremHyper& hy) {
    constexpr double kTwoPi = 6.283185307179586;
    const HremConstants c = hrem_constants(data, hy);
    const double K = static_cast<double>(data.groups());
    const double c4 = c.delta7 / (K * c.delta1 * d_R);
    const double gap = hy.m0 - data.ybar_mean;
    const double root = std::sqrt(gap * gap + d_R);
    const double cl = data.ybar_mean - root;
    const double cu = data.ybar_mean + root;
    const double ld = std::log(d_R) / c3;
    const double sg2 = 1.0 / (hy.s0 + K * ld);
    auto inner = [&](double mu, std::size_t i) {
        const double mi = data.m[i];
        const double yi = data.ybar[i];
        const double cen = (mu + mi * yi) / (1.0 + mi);
        const double half = 12.0 / std::sqrt(ld);
        return gl_integrate(
            [&](double th) {
                return std::exp(-(ld / 2.0) *
                                ((th - mu) * (th - mu) + mi * (th - yi) * (th - yi)));
            },
            cen - half, cen + half, 24, 16);
    };
    auto npdf = [&](double v, double m, double s2) {
        return std::exp(-(v - m) * (v - m) / (2.0 * s2)) / std::sqrt(kTwoPi * s2);
    };
    auto outer = [&](double mu) {
        const double g2 = mu <= data.ybar_mean ? npdf(mu, cu, sg2) : npdf(mu, cl, sg2);
        double prod = std::pow(c4 / kTwoPi, K / 2.0);
        for (std::size_t i = 0; i < data.groups(); ++i) prod *= inner(mu, i);
        return prod * g2;
    };
    const double ylo = *std::min_element(data.ybar.begin(), data.ybar.end());
    const double yhi = *std::max_element(data.ybar.begin(), data.ybar.end());
    const double lo = std::min(cl, ylo) - 10.0;
    const double hi = std::max(cu, yhi) + 10.0;
    const double I = gl_integrate(outer, lo, data.ybar_mean, 96, 16) +
                     gl_integrate(outer, data.ybar_mean, hi, 96, 16);
    return std::sqrt((hy.s0 + K * c4) / (hy.s0 + K * ld)) * I;
}

CheckResult check_hrem(const Ctx& ctx) {
    return timed_check("hierarchical model end-to-end", 300.0, [&](std::ostringstream& d) {
        const HremData data = hrem_data_from_summary({1.5, 2.5, 3.5}, {2.0, 2.0, 2.0}, 1.5, 2.5);
        HremHyper hy;
        hy.m0 = 2.5;

        // drift calculators must accept their reference configurations
        const HremDrift bd = block_drift_balanced(data, hy, 0.8, 0.5);
        const HremDrift gd = gibbs_drift(data, hy, 0.99, 0.5);
        (void)gd;

        const HremPipeline pl = hrem_pipeline(data, hy, hrem_target_from_string("mu"));
        bool ok = pl.beta_tilde > 0.0 && pl.beta_tilde < 1.0;
        const GibbsMinorization gm = gibbs_minorization(2.0, 0.5, data, hy);
        ok = ok && gm.value > 0.0 && gm.value < 1.0;

        const double closed5 = block_minorization(5.0, bd.phi1, bd.phi2, hy, data);
        const double quad5 = quad_block_minorization(5.0, bd.phi1, bd.phi2, hy, data);
        const double quad_g = quad_gibbs_minorization(2.0, 0.5, data, hy);
        ok = ok && rel_err(closed5, quad5) <= 1e-6 && rel_err(gm.value, quad_g) <= 1e-6;

        const OptimizedPlan op = optimize_plan(pl.pin, 0.1, 0.1);
        ok = ok && std::isfinite(op.plan.total_cost) && op.plan.total_cost > 0.0;

        // sampler agreement on posterior means
        const std::size_t burn = 1'000;
        const std::size_t sweeps = 100'000;
        std::vector<double> fs_mu, fs_lt, fs_le, bl_mu, bl_lt, bl_le;
        fs_mu.reserve(sweeps);
        fs_lt.reserve(sweeps);
        fs_le.reserve(sweeps);
        bl_mu.reserve(sweeps);
        bl_lt.reserve(sweeps);
        bl_le.reserve(sweeps);
        Rng ra(derive_seed(ctx.seed, 1'101));
        Rng rb(derive_seed(ctx.seed, 1'102));
        HremState sa = hrem_default_start(data);
        HremState sb = hrem_default_start(data);
        for (std::size_t i = 0; i < burn + sweeps; ++i) {
            sa = fixed_scan_step(sa, data, hy, ra);
            sb = block_gibbs_step(sb, data, hy, rb);
            if (i >= burn) {
                fs_mu.push_back(sa.mu);
                fs_lt.push_back(sa.lambda_theta);
                fs_le.push_back(sa.lambda_e);
                bl_mu.push_back(sb.mu);
                bl_lt.push_back(sb.lambda_theta);
                bl_le.push_back(sb.lambda_e);
            }
        }
        auto agree = [&](const std::vector<double>& u, const std::vector<double>& v,
                         const char* tag) {
            double mu_u = 0.0, mu_v = 0.0;
            for (double w : u) mu_u += w;
            for (double w : v) mu_v += w;
            mu_u /= static_cast<double>(u.size());
            mu_v /= static_cast<double>(v.size());
            const double se =
                std::sqrt(std::max(batch_means_var(u), 0.0) / static_cast<double>(u.size()) +
                          std::max(batch_means_var(v), 0.0) / static_cast<double>(v.size()));
            d << " " << tag << ":|d|=" << std::abs(mu_u - mu_v) << " 3se=" << 3.0 * se;
            return std::abs(mu_u - mu_v) <= 3.0 * se;
        };
        d << "btil=" << pl.beta_tilde << " quad rel " << rel_err(closed5, quad5) << "/"
          << rel_err(gm.value, quad_g) << " cost=" << op.plan.total_cost << ";";
        ok = agree(fs_mu, bl_mu, "mu") && ok;
        ok = agree(fs_lt, bl_lt, "lt") && ok;
        ok = agree(fs_le, bl_le, "le") && ok;
        return ok;
    });
}

}  // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt) {
    Ctx ctx;
    ctx.seed = opt.seed;
    ctx.workers = opt.workers == 0 ? default_workers() : opt.workers;
    ctx.quick = opt.quick;
    std::vector<CheckResult> out;
    out.push_back(check_table_row1(ctx));
    out.push_back(check_table_rows23(ctx));
    out.push_back(check_root_argmax(ctx));
    out.push_back(check_drift_soundness(ctx));
    out.push_back(check_variance_estimators(ctx));
    out.push_back(check_fixed_width_coverage(ctx));
    out.push_back(check_split_fidelity(ctx));
    out.push_back(check_tour_dependence(ctx));
    out.push_back(check_regen_sigma2(ctx));
    out.push_back(check_adaptive_dichotomy(ctx));
    out.push_back(check_hrem(ctx));
    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace mcmccert
