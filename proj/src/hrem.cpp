#include "mcmccert/hrem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mcmccert/errors.hpp"
#include "mcmccert/special.hpp"

namespace mcmccert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp2(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// sup over real x of x^2 / (q0 + q1 x + q2 x^2) for a quadratic that is
// positive on all of R (q0 >= 1, q2 > 0 here).  The only interior critical
// point of the ratio besides x=0 is x = -2 q0 / q1; the limit at infinity is
// 1/q2.
double sup_sq_over_quadratic(double q0, double q1, double q2) {
    const double tail = 1.0 / q2;
    if (q1 == 0.0) return tail;
    const double x = -2.0 * q0 / q1;
    const double den = q0 + x * (q1 + q2 * x);
    if (!(den > 0.0)) return tail;
    return std::max(tail, x * x / den);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iters; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

// Maximize x^2 / den(x) over x in (0, xmax] by a log-spaced scan plus local
// golden-section refinement.
double sup_sq_over_fn(const std::function<double(double)>& den, double xmax) {
    auto ratio = [&](double lx) {
        const double x = std::exp(lx);
        const double d = den(x);
        return std::isfinite(d) && d > 0.0 ? x * x / d : 0.0;
    };
    const double llo = std::log(1e-8), lhi = std::log(xmax);
    const int n = 512;
    int best = 0;
    double best_val = -kInf;
    for (int i = 0; i <= n; ++i) {
        const double lx = llo + (lhi - llo) * i / n;
        const double v = ratio(lx);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double la = llo + (lhi - llo) * std::max(0, best - 1) / n;
    const double lb = llo + (lhi - llo) * std::min(n, best + 1) / n;
    return std::max(best_val, golden_max(ratio, la, lb, 200));
}

}  // namespace

void HremHyper::validate() const {
    if (!std::isfinite(m0)) throw validation_error("HremHyper: m0 must be finite");
    if (!(s0 > 0.0)) throw validation_error("HremHyper: s0 must be > 0");
    if (!(a1 > 0.0 && b1 > 0.0)) throw validation_error("HremHyper: a1, b1 must be > 0");
    if (!(a2 > 0.0 && b2 > 0.0)) throw validation_error("HremHyper: a2, b2 must be > 0");
}

double HremData::min_m() const { return *std::min_element(m.begin(), m.end()); }
double HremData::max_m() const { return *std::max_element(m.begin(), m.end()); }

bool HremData::balanced() const {
    return std::all_of(m.begin(), m.end(), [&](double mi) { return mi == m.front(); });
}

void HremData::validate() const {
    if (groups() < 3)
        throw validation_error("HremData: at least 3 groups required (K >= 3)");
    if (m.size() != ybar.size())
        throw validation_error("HremData: per-group sizes and means must align");
    for (double mi : m)
        if (!(mi >= 2.0))
            throw validation_error("HremData: every group needs at least 2 observations");
    if (!(sse >= 0.0)) throw validation_error("HremData: SSE must be >= 0");
}

static HremData finish_data(HremData d, double m0) {
    d.M = std::accumulate(d.m.begin(), d.m.end(), 0.0);
    d.ybar_mean = std::accumulate(d.ybar.begin(), d.ybar.end(), 0.0) / d.ybar.size();
    d.s_sq = 0.0;
    for (double y : d.ybar) d.s_sq += (y - d.ybar_mean) * (y - d.ybar_mean);
    double lo = m0, hi = m0;
    for (double y : d.ybar) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    d.delta = hi - lo;
    d.validate();
    return d;
}

HremData hrem_data_from_groups(const std::vector<std::vector<double>>& groups, double m0) {
    HremData d;
    for (const auto& g : groups) {
        if (g.size() < 2)
            throw validation_error("HremData: every group needs at least 2 observations");
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
        d.ybar.push_back(mean);
        d.m.push_back(static_cast<double>(g.size()));
        for (double y : g) d.sse += (y - mean) * (y - mean);
    }
    return finish_data(std::move(d), m0);
}

HremData hrem_data_from_summary(std::vector<double> ybar, std::vector<double> m, double sse,
                                double m0) {
    HremData d;
    d.ybar = std::move(ybar);
    d.m = std::move(m);
    d.sse = sse;
    return finish_data(std::move(d), m0);
}

void HremState::validate(std::size_t groups) const {
    if (theta.size() != groups)
        throw validation_error("HremState: theta dimension must match the group count");
    if (!(lambda_theta > 0.0 && lambda_e > 0.0))
        throw validation_error("HremState: precisions must be positive");
}

HremState hrem_default_start(const HremData& data) {
    HremState st;
    st.theta = data.ybar;
    st.mu = data.ybar_mean;
    st.lambda_theta = 1.0;
    st.lambda_e = 1.0;
    return st;
}

HremState fixed_scan_step(const HremState& st, const HremData& data, const HremHyper& hy,
                          Rng& rng) {
    st.validate(data.groups());
    const std::size_t K = data.groups();
    HremState out = st;
    // mu | theta, lambda
    const double theta_mean =
        std::accumulate(out.theta.begin(), out.theta.end(), 0.0) / static_cast<double>(K);
    const double prec_mu = hy.s0 + static_cast<double>(K) * out.lambda_theta;
    out.mu = rng.normal(
        (hy.s0 * hy.m0 + static_cast<double>(K) * out.lambda_theta * theta_mean) / prec_mu,
        std::sqrt(1.0 / prec_mu));
    // theta_i | mu, lambda
    for (std::size_t i = 0; i < K; ++i) {
        const double prec = out.lambda_theta + data.m[i] * out.lambda_e;
        out.theta[i] =
            rng.normal((out.lambda_theta * out.mu + data.m[i] * out.lambda_e * data.ybar[i]) / prec,
                       std::sqrt(1.0 / prec));
    }
    // lambda_theta | theta, mu and lambda_e | theta
    double nu1 = 0.0, nu2 = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        nu1 += (out.theta[i] - out.mu) * (out.theta[i] - out.mu);
        nu2 += data.m[i] * (out.theta[i] - data.ybar[i]) * (out.theta[i] - data.ybar[i]);
    }
    out.lambda_theta = rng.gamma(static_cast<double>(K) / 2.0 + hy.a1, nu1 / 2.0 + hy.b1);
    out.lambda_e = rng.gamma(data.M / 2.0 + hy.a2, (nu2 + data.sse) / 2.0 + hy.b2);
    return out;
}

BlockConditional block_conditional(const HremData& data, const HremHyper& hy,
                                   double lambda_theta, double lambda_e) {
    if (!(lambda_theta > 0.0 && lambda_e > 0.0))
        throw validation_error("block_conditional: precisions must be positive");
    const std::size_t K = data.groups();
    const double lt = lambda_theta, le = lambda_e;
    std::vector<double> pr(K);
    double tau = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        pr[i] = lt + data.m[i] * le;
        tau += data.m[i] * lt * le / pr[i];
        wsum += data.m[i] * lt * le * data.ybar[i] / pr[i];
    }
    const double var_mu = 1.0 / (hy.s0 + tau);
    const double e_mu = (wsum + hy.m0 * hy.s0) * var_mu;
    BlockConditional bc;
    bc.mean.resize(static_cast<Eigen::Index>(K) + 1);
    bc.cov.resize(static_cast<Eigen::Index>(K) + 1, static_cast<Eigen::Index>(K) + 1);
    for (std::size_t i = 0; i < K; ++i)
        bc.mean[static_cast<Eigen::Index>(i)] =
            lt * e_mu / pr[i] + data.m[i] * le * data.ybar[i] / pr[i];
    bc.mean[static_cast<Eigen::Index>(K)] = e_mu;
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            bc.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                i == j ? (1.0 / pr[i]) * (1.0 + lt * lt * var_mu / pr[i])
                       : lt * lt * var_mu / (pr[i] * pr[j]);
        }
        const double c = lt * var_mu / pr[i];
        bc.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(K)) = c;
        bc.cov(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(i)) = c;
    }
    bc.cov(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K)) = var_mu;
    return bc;
}

HremState block_gibbs_step(const HremState& st, const HremData& data, const HremHyper& hy,
                           Rng& rng) {
    st.validate(data.groups());
    const std::size_t K = data.groups();
    HremState out = st;
    double nu1 = 0.0, nu2 = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        nu1 += (out.theta[i] - out.mu) * (out.theta[i] - out.mu);
        nu2 += data.m[i] * (out.theta[i] - data.ybar[i]) * (out.theta[i] - data.ybar[i]);
    }
    out.lambda_theta = rng.gamma(static_cast<double>(K) / 2.0 + hy.a1, nu1 / 2.0 + hy.b1);
    out.lambda_e = rng.gamma(data.M / 2.0 + hy.a2, (nu2 + data.sse) / 2.0 + hy.b2);

    BlockConditional bc = block_conditional(data, hy, out.lambda_theta, out.lambda_e);
    Eigen::LLT<Eigen::MatrixXd> llt(bc.cov);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-12 * bc.cov.diagonal().mean();
        Eigen::MatrixXd bumped = bc.cov;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        if (llt.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "block_gibbs_step: joint conditional covariance is not positive definite "
                   "(lambda_theta="
                << out.lambda_theta << ", lambda_e=" << out.lambda_e << ")";
            throw numeric_error(msg.str());
        }
    }
    Eigen::VectorXd z(bc.mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    const Eigen::VectorXd xi = bc.mean + llt.matrixL() * z;
    for (std::size_t i = 0; i < K; ++i) out.theta[i] = xi[static_cast<Eigen::Index>(i)];
    out.mu = xi[static_cast<Eigen::Index>(K)];
    return out;
}

HremConstants hrem_constants(const HremData& data, const HremHyper& hy) {
    const double K = static_cast<double>(data.groups());
    HremConstants c;
    c.delta1 = 1.0 / (2.0 * hy.a1 + K - 2.0);
    c.delta2 = 1.0 / (2.0 * hy.a2 + data.M - 2.0);
    c.delta3 = (K + 1.0) * c.delta2;
    double inv_m = 0.0;
    for (double mi : data.m) inv_m += 1.0 / mi;
    c.delta4 = c.delta2 * inv_m;
    c.delta5 = K * c.delta2;
    c.delta6 = (K * K + 2.0 * K * hy.a1) / (2.0 * hy.s0 + K * K + 2.0 * K * hy.a1);
    c.delta7 = hy.a1 > 1.0 ? 1.0 / (2.0 * (hy.a1 - 1.0)) : kInf;
    c.c1 = 2.0 * hy.b1 / (2.0 * hy.a1 + K - 2.0);
    c.c2 = (2.0 * hy.b2 + data.sse) / (2.0 * hy.a2 + data.M - 2.0);
    return c;
}

RosenthalDrift HremDrift::rosenthal(double d_R, double beta_tilde_R) const {
    RosenthalDrift rd;
    rd.lambda_R = lambda_R;
    rd.K_R = K_R;
    rd.d_R = d_R;
    rd.beta_tilde_R = beta_tilde_R;
    rd.validate();
    return rd;
}

// Shared evaluator for the block drifts; the balanced calculator stores
// phi2 = 1/m so V = sum_i [phi1 (theta_i-mu)^2 + phi2 m_i (theta_i-ybar_i)^2]
// covers both cases.
static std::function<double(const HremState&)> block_v(const HremData& data, double phi1,
                                                       double phi2) {
    return [data, phi1, phi2](const HremState& st) {
        st.validate(data.groups());
        double v = 0.0;
        for (std::size_t i = 0; i < data.groups(); ++i) {
            const double dt = st.theta[i] - st.mu;
            const double dy = st.theta[i] - data.ybar[i];
            v += phi1 * dt * dt + phi2 * data.m[i] * dy * dy;
        }
        return v;
    };
}

HremDrift block_drift(const HremData& data, const HremHyper& hy, double lambda_R, double phi1,
                      double phi2) {
    data.validate();
    hy.validate();
    if (!(phi1 > 0.0 && phi2 > 0.0))
        throw validation_error("block_drift: phi1, phi2 must be positive");
    const HremConstants c = hrem_constants(data, hy);
    const double delta = std::max(c.delta1, c.delta3);
    if (!(lambda_R > delta && lambda_R < 1.0))
        throw validation_error("block_drift: need lambda_R in (max{delta1, delta3}, 1)");
    if (!(phi1 * c.delta4 / phi2 + delta < lambda_R))
        throw validation_error(
            "block_drift: need phi1 * delta4 / phi2 + max{delta1, delta3} < lambda_R");
    const double K = static_cast<double>(data.groups());
    HremDrift dr;
    dr.kind = HremDrift::Kind::block_unbalanced;
    dr.lambda_R = lambda_R;
    dr.K_R = phi1 * (c.c1 + c.c2 * c.delta4 / c.delta2 + K * data.delta * data.delta) +
             phi2 * (c.c2 * (K + 1.0) + data.M * data.delta * data.delta);
    dr.phi1 = phi1;
    dr.phi2 = phi2;
    dr.v = block_v(data, phi1, phi2);
    return dr;
}

HremDrift block_drift_balanced(const HremData& data, const HremHyper& hy, double lambda_R,
                               double phi) {
    data.validate();
    hy.validate();
    if (!data.balanced())
        throw validation_error("block_drift_balanced: group sizes must be equal");
    if (!(phi > 0.0)) throw validation_error("block_drift_balanced: phi must be positive");
    const HremConstants c = hrem_constants(data, hy);
    const double delta = std::max(c.delta1, c.delta3);
    if (!(lambda_R > delta && lambda_R < 1.0))
        throw validation_error("block_drift_balanced: need lambda_R in (max{delta1, delta3}, 1)");
    if (!(phi * c.delta5 + delta < lambda_R))
        throw validation_error(
            "block_drift_balanced: need phi * delta5 + max{delta1, delta3} < lambda_R");
    const double K = static_cast<double>(data.groups());
    const double m = data.m.front();
    double worst = 0.0;
    for (double yi : data.ybar) {
        const double a = (data.ybar_mean - yi) * (data.ybar_mean - yi);
        const double b = (hy.m0 - yi) * (hy.m0 - yi);
        worst += std::max(a, b);
    }
    HremDrift dr;
    dr.kind = HremDrift::Kind::block_balanced;
    dr.lambda_R = lambda_R;
    dr.K_R = phi * c.c1 + (phi * K + K + 1.0) * c.c2 / m + std::max(phi, 1.0) * worst;
    dr.phi1 = phi;
    dr.phi2 = 1.0 / m;
    dr.v = block_v(data, dr.phi1, dr.phi2);
    return dr;
}

double block_minorization(double d_R, double phi1, double phi2, const HremHyper& hy,
                          const HremData& data) {
    data.validate();
    hy.validate();
    if (!(d_R > 0.0)) throw validation_error("block_minorization: need d_R > 0");
    if (!(phi1 > 0.0 && phi2 > 0.0))
        throw validation_error("block_minorization: phi1, phi2 must be positive");
    const double K = static_cast<double>(data.groups());
    const double A1 = K / 2.0 + hy.a1;
    const double A2 = data.M / 2.0 + hy.a2;
    const double lt_star =
        (phi1 * (K + 2.0 * hy.a1) / d_R) * std::log1p(d_R / (2.0 * hy.b1 * phi1));
    const double le_star =
        (phi2 * (data.M + 2.0 * hy.a2) / d_R) * std::log1p(d_R / (phi2 * (2.0 * hy.b2 + data.sse)));
    const double I1 =
        gamma_p(A1, hy.b1 * lt_star) + gamma_q(A1, (d_R / (2.0 * phi1) + hy.b1) * lt_star);
    const double I2 = gamma_p(A2, (data.sse / 2.0 + hy.b2) * le_star) +
                      gamma_q(A2, ((d_R + phi2 * data.sse) / (2.0 * phi2) + hy.b2) * le_star);
    return I1 * I2;
}

HremDrift gibbs_drift(const HremData& data, const HremHyper& hy, double lambda_R, double c3,
                      double rho1) {
    data.validate();
    hy.validate();
    if (!(hy.a1 > 1.5))
        throw validation_error("gibbs_drift: need a1 > 3/2 (so delta7 < 1)");
    if (!(5.0 * data.min_m() > data.max_m()))
        throw validation_error("gibbs_drift: need 5 * min(m_i) > max(m_i)");
    const double bmin = std::min(hy.b1, hy.b2);
    if (!(c3 > 0.0 && c3 < bmin))
        throw validation_error("gibbs_drift: need c3 in (0, min{b1, b2})");
    const HremConstants c = hrem_constants(data, hy);
    const double K = static_cast<double>(data.groups());
    const double lower = (K + c.delta6 / c.delta7) * c.delta1;
    if (rho1 <= 0.0) rho1 = 0.5 * (lower + 1.0);
    if (!(rho1 > lower && rho1 < 1.0))
        throw validation_error("gibbs_drift: need rho1 in ((K + delta6/delta7) delta1, 1)");
    if (!(lambda_R > std::max({rho1, c.delta6, c.delta7}) && lambda_R < 1.0))
        throw validation_error("gibbs_drift: need lambda_R in (max{rho1, delta6, delta7}, 1)");
    const double gap = hy.m0 - data.ybar_mean;
    HremDrift dr;
    dr.kind = HremDrift::Kind::fixed_scan;
    dr.lambda_R = lambda_R;
    dr.K_R = std::pow(hy.b1 / (hy.b1 - c3), hy.a1 + K / 2.0) +
             std::pow(hy.b2 / (hy.b2 - c3), hy.a2 + data.M / 2.0) +
             (c.delta6 + c.delta7) * (1.0 / hy.s0 + gap * gap + data.s_sq / K) +
             2.0 * hy.b1 * c.delta7 / K;
    dr.c3 = c3;
    dr.rho1 = rho1;
    const double d1 = c.delta1, d7 = c.delta7, s0 = hy.s0, ybar = data.ybar_mean;
    dr.v = [K, c3, d1, d7, s0, ybar](const HremState& st) {
        st.validate(static_cast<std::size_t>(K));
        const double tbar =
            std::accumulate(st.theta.begin(), st.theta.end(), 0.0) / K;
        return std::exp(c3 * st.lambda_theta) + std::exp(c3 * st.lambda_e) +
               d7 / (K * d1 * st.lambda_theta) +
               K * st.lambda_theta / (s0 + K * st.lambda_theta) * (tbar - ybar) * (tbar - ybar);
    };
    return dr;
}

GibbsMinorization gibbs_minorization(double d_R, double c3, const HremData& data,
                                     const HremHyper& hy) {
    data.validate();
    hy.validate();
    if (!(c3 > 0.0)) throw validation_error("gibbs_minorization: need c3 > 0");
    const HremConstants c = hrem_constants(data, hy);
    const double K = static_cast<double>(data.groups());
    if (!(d_R > 1.0 && d_R * std::log(d_R) > c3 * c.delta7 / (K * c.delta1)))
        throw validation_error(
            "gibbs_minorization: need d_R log d_R > c3 delta7 / (K delta1)");
    const double ld = std::log(d_R) / c3;
    const double c4 = c.delta7 / (K * c.delta1 * d_R);
    const double root = std::sqrt((hy.m0 - data.ybar_mean) * (hy.m0 - data.ybar_mean) + d_R);
    const double cl = data.ybar_mean - root;
    const double cu = data.ybar_mean + root;
    double sw = 0.0, syw = 0.0, sy2w = 0.0, log_prod = 0.0;
    for (std::size_t i = 0; i < data.groups(); ++i) {
        const double w = data.m[i] / (1.0 + data.m[i]);
        sw += w;
        syw += data.ybar[i] * w;
        sy2w += data.ybar[i] * data.ybar[i] * w;
        log_prod -= std::log1p(data.m[i]);
    }
    const double nu = 1.0 / (hy.s0 + ld * (K + sw));
    const double ml = nu * (cl * hy.s0 + ld * (K * cl + syw));
    const double mu = nu * (cu * hy.s0 + ld * (K * cu + syw));
    const double log_lead = (K / 2.0) * std::log(c4 * c3 / std::log(d_R)) +
                            0.5 * std::log(nu * (hy.s0 + K * c4)) + 0.5 * log_prod -
                            (ld / 2.0) * sy2w;
    const double sqrt_nu = std::sqrt(nu);
    const double log_tu = -cu * cu * hy.s0 / 2.0 - K * cu * cu * ld / 2.0 + mu * mu / (2.0 * nu) +
                          log_normal_cdf((data.ybar_mean - mu) / sqrt_nu);
    const double log_tl = -cl * cl * hy.s0 / 2.0 - K * cl * cl * ld / 2.0 + ml * ml / (2.0 * nu) +
                          log_normal_sf((data.ybar_mean - ml) / sqrt_nu);
    GibbsMinorization out;
    out.log_value = log_lead + logsumexp2(log_tu, log_tl);
    out.value = std::exp(out.log_value);
    out.underflowed = out.value == 0.0 && std::isfinite(out.log_value);
    return out;
}

HremTarget hrem_target_from_string(const std::string& s) {
    HremTarget t;
    if (s == "mu") {
        t.kind = HremTarget::Kind::mu;
        return t;
    }
    if (s == "lambda-theta" || s == "lambda_theta") {
        t.kind = HremTarget::Kind::lambda_theta;
        return t;
    }
    if (s == "lambda-e" || s == "lambda_e") {
        t.kind = HremTarget::Kind::lambda_e;
        return t;
    }
    if (s.rfind("theta", 0) == 0 && s.size() > 5) {
        std::size_t pos = 0;
        const int idx = std::stoi(s.substr(5), &pos);
        if (pos == s.size() - 5 && idx >= 1) {
            t.kind = HremTarget::Kind::theta;
            t.index = static_cast<std::size_t>(idx - 1);
            return t;
        }
    }
    throw validation_error("unknown target '" + s +
                           "' (expected mu, theta<i>, lambda-theta or lambda-e)");
}

std::string to_string(const HremTarget& t) {
    switch (t.kind) {
        case HremTarget::Kind::mu: return "mu";
        case HremTarget::Kind::theta: return "theta" + std::to_string(t.index + 1);
        case HremTarget::Kind::lambda_theta: return "lambda-theta";
        case HremTarget::Kind::lambda_e: return "lambda-e";
    }
    return "?";
}

double target_value(const HremTarget& t, const HremState& st) {
    switch (t.kind) {
        case HremTarget::Kind::mu: return st.mu;
        case HremTarget::Kind::theta: return st.theta.at(t.index);
        case HremTarget::Kind::lambda_theta: return st.lambda_theta;
        case HremTarget::Kind::lambda_e: return st.lambda_e;
    }
    return 0.0;
}

HremSampler sampler_for(const HremTarget& t) {
    switch (t.kind) {
        case HremTarget::Kind::mu:
        case HremTarget::Kind::theta: return HremSampler::block;
        case HremTarget::Kind::lambda_theta:
        case HremTarget::Kind::lambda_e: return HremSampler::fixed_scan;
    }
    return HremSampler::block;
}

// sup (f - shift)^2 / (1 + V) for the block drift, minimizing 1 + V over the
// coordinates f does not touch.  Per group the minimum over theta_i of
// a (theta_i - mu)^2 + b (theta_i - ybar_i)^2 is w (mu - ybar_i)^2 with
// w = a b / (a + b), which makes the reduced denominator a quadratic in the
// remaining coordinate.
static double block_cfv(const HremDrift& dr, const HremData& data, const HremTarget& t) {
    const std::size_t K = data.groups();
    std::vector<double> w(K);
    for (std::size_t j = 0; j < K; ++j) {
        const double a = dr.phi1, b = dr.phi2 * data.m[j];
        w[j] = a * b / (a + b);
    }
    if (t.kind == HremTarget::Kind::mu) {
        double q0 = 1.0, q1 = 0.0, q2 = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            q0 += w[j] * data.ybar[j] * data.ybar[j];
            q1 -= 2.0 * w[j] * data.ybar[j];
            q2 += w[j];
        }
        return sup_sq_over_quadratic(q0, q1, q2);
    }
    // theta_i target: the reduced denominator is a quadratic in theta_i once
    // mu is minimized out; recover its coefficients from three evaluations.
    const std::size_t i = t.index;
    double W = 0.0, Swy = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        if (j == i) continue;
        W += w[j];
        Swy += w[j] * data.ybar[j];
    }
    auto den_at = [&](double th) {
        const double mu = (dr.phi1 * th + Swy) / (dr.phi1 + W);
        double v = 1.0 + dr.phi1 * (th - mu) * (th - mu) +
                   dr.phi2 * data.m[i] * (th - data.ybar[i]) * (th - data.ybar[i]);
        for (std::size_t j = 0; j < K; ++j) {
            if (j == i) continue;
            v += w[j] * (mu - data.ybar[j]) * (mu - data.ybar[j]);
        }
        return v;
    };
    const double q0 = den_at(0.0);
    const double q1 = (den_at(1.0) - den_at(-1.0)) / 2.0;
    const double q2 = (den_at(1.0) + den_at(-1.0)) / 2.0 - q0;
    return sup_sq_over_quadratic(q0, q1, q2);
}

static double gibbs_cfv(const HremDrift& dr, const HremData& data, const HremHyper& hy,
                        const HremTarget& t) {
    const HremConstants c = hrem_constants(data, hy);
    const double K = static_cast<double>(data.groups());
    const double q = c.delta7 / (K * c.delta1);
    const double c3 = dr.c3;
    const double xmax = 700.0 / c3;
    if (t.kind == HremTarget::Kind::lambda_theta) {
        return sup_sq_over_fn(
            [&](double x) { return 2.0 + std::exp(c3 * x) + q / x; }, xmax);
    }
    // lambda_e: the lambda_theta part of V contributes its minimum, a constant.
    double lo = 1e-12, hi = xmax;
    for (int it = 0; it < 200; ++it) {  // bisect the convex part's derivative
        const double mid = 0.5 * (lo + hi);
        (c3 * std::exp(c3 * mid) - q / (mid * mid) > 0.0 ? hi : lo) = mid;
    }
    const double floor_lt = std::exp(c3 * lo) + q / lo;
    return sup_sq_over_fn(
        [&](double x) { return 1.0 + floor_lt + std::exp(c3 * x); }, xmax);
}

HremPipeline hrem_pipeline(const HremData& data, const HremHyper& hy, const HremTarget& target,
                           const HremPipelineConfig& cfg) {
    data.validate();
    hy.validate();
    if (target.kind == HremTarget::Kind::theta && target.index >= data.groups())
        throw validation_error("hrem_pipeline: theta index exceeds the group count");
    HremPipeline out;
    out.sampler = sampler_for(target);
    if (out.sampler == HremSampler::block) {
        out.drift = data.balanced()
                        ? block_drift_balanced(data, hy, cfg.lambda_R_block, cfg.phi)
                        : block_drift(data, hy, cfg.lambda_R_block, cfg.phi1, cfg.phi2);
        RosenthalDrift probe;
        probe.lambda_R = out.drift.lambda_R;
        probe.K_R = out.drift.K_R;
        out.d_R = rt_level(probe, cfg.d) - 1.0;
        out.beta_tilde = block_minorization(out.d_R, out.drift.phi1, out.drift.phi2, hy, data);
        if (!(out.beta_tilde > 0.0)) {
            std::ostringstream msg;
            msg << "hrem_pipeline: block minorization constant underflowed at small-set level "
                << out.d_R;
            throw numeric_error(msg.str());
        }
        out.log_beta_tilde = std::log(out.beta_tilde);
        out.cls = cfg.chain_class.value_or(ChainClass::self_adjoint_positive);
        out.cfv = block_cfv(out.drift, data, target);
    } else {
        const double c3 = cfg.c3_fraction * std::min(hy.b1, hy.b2);
        out.drift = gibbs_drift(data, hy, cfg.lambda_R_gibbs, c3);
        RosenthalDrift probe;
        probe.lambda_R = out.drift.lambda_R;
        probe.K_R = out.drift.K_R;
        out.d_R = rt_level(probe, cfg.d) - 1.0;
        const GibbsMinorization gm = gibbs_minorization(out.d_R, c3, data, hy);
        out.beta_tilde = gm.value;
        out.log_beta_tilde = gm.log_value;
        if (gm.underflowed || !(gm.value > 0.0)) {
            std::ostringstream msg;
            msg << "hrem_pipeline: fixed-scan minorization constant underflows at the required "
                   "small-set level "
                << out.d_R << " (log value " << gm.log_value
                << "); this target is numerically infeasible in double precision";
            throw numeric_error(msg.str());
        }
        out.cls = cfg.chain_class.value_or(ChainClass::general);
        out.cfv = gibbs_cfv(out.drift, data, hy, target);
    }
    const RosenthalDrift rd = out.drift.rosenthal(out.d_R, out.beta_tilde);
    out.dp = rosenthal_to_baxendale(rd, cfg.d);
    out.pin.dp = out.dp;
    out.pin.cls = out.cls;
    out.pin.p = cfg.p;
    out.pin.r = cfg.r;
    out.pin.fc_norm = centered_fv_bound(out.cfv, out.dp, cfg.p);
    out.pin.pi_v = optimize_pi_v_bound(rd);
    out.pin.v_x0 = out.drift.v(hrem_default_start(data)) + 1.0;
    out.pin.init_gap = 0.0;
    out.pin.start = cfg.start;
    return out;
}

}  // namespace mcmccert
