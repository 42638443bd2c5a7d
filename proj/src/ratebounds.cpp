#include "mcmccert/ratebounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcmccert/errors.hpp"

namespace mcmccert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(ChainClass c) {
    switch (c) {
        case ChainClass::general: return "general";
        case ChainClass::self_adjoint: return "self-adjoint";
        case ChainClass::self_adjoint_positive: return "self-adjoint-positive";
    }
    return "?";
}

ChainClass chain_class_from_string(const std::string& s) {
    if (s == "general") return ChainClass::general;
    if (s == "self-adjoint" || s == "sa") return ChainClass::self_adjoint;
    if (s == "self-adjoint-positive" || s == "sap") return ChainClass::self_adjoint_positive;
    throw validation_error("unknown chain class '" + s +
                           "' (expected general | self-adjoint | self-adjoint-positive)");
}

Geometry geometry(const DriftParams& dp) {
    dp.validate();
    Geometry g;
    if (dp.atomic()) {
        g.alpha1 = kInf;
        g.alpha2 = 1.0;
        g.D0 = (1.0 - dp.lambda) / dp.lambda;
        g.R0 = 1.0 + g.D0;
        return g;
    }
    const double log_inv_lambda = -std::log(dp.lambda);
    g.alpha1 = 1.0 + std::log((dp.K - dp.beta_tilde) / (1.0 - dp.beta_tilde)) / log_inv_lambda;
    if (dp.nu_on_C >= 1.0)
        g.alpha2 = 1.0;
    else if (dp.K_tilde)
        g.alpha2 = 1.0 + std::log(*dp.K_tilde) / log_inv_lambda;
    else
        g.alpha2 = 1.0 + std::log(dp.K / dp.beta_tilde) / log_inv_lambda;
    const double D_lambda = (1.0 - dp.lambda) / dp.lambda;
    const double D_beta = std::expm1(-std::log1p(-dp.beta_tilde) / g.alpha1);
    g.D0 = std::min(D_lambda, D_beta);
    g.R0 = 1.0 + g.D0;
    return g;
}

namespace {

// L(1+D) - 1, finite only below D0.
double l_minus_1(const DriftParams& dp, const Geometry& geo, double D) {
    const double l = std::log1p(D);
    const double em1 = std::expm1(geo.alpha1 * l);
    const double em2 = std::expm1(geo.alpha2 * l);
    const double den = dp.beta_tilde - em1 * (1.0 - dp.beta_tilde);
    if (!(den > 0.0)) return kInf;
    return (dp.beta_tilde * em2 + (1.0 - dp.beta_tilde) * em1) / den;
}

R1Result solve_r1_careful(double beta, double D, double Lm1) {
    if (!(beta > 0.0)) throw validation_error("solve_r1: need beta > 0");
    if (!(D > 0.0)) throw validation_error("solve_r1: need R > 1");
    if (!(Lm1 > 0.0) || !std::isfinite(Lm1))
        throw validation_error("solve_r1: need finite L > 1");
    const double C = std::exp(2.0) * beta * D / (8.0 * Lm1);
    auto f = [&](double s) {
        const double lr = std::log1p((D - s) / (1.0 + s));
        return s / ((1.0 + s) * lr * lr) - C;
    };
    double lo = D * 1e-12;
    if (f(lo) >= 0.0) {
        while (lo > D * 1e-290 && f(lo) >= 0.0) lo *= 1e-3;
        if (f(lo) >= 0.0) throw numeric_error("solve_r1: root below representable range");
    }
    double hi = D * (1.0 - 1e-12);
    for (int k = 0; k < 60 && f(hi) <= 0.0; ++k) hi = D - (D - hi) * 1e-3;
    if (f(hi) <= 0.0) throw numeric_error("solve_r1: failed to bracket root near R");
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200 && lhi - llo > 1e-16; ++it) {
        const double lm = 0.5 * (llo + lhi);
        const double m = std::exp(lm);
        if (f(m) < 0.0)
            llo = lm;
        else
            lhi = lm;
    }
    const double s = std::exp(0.5 * (llo + lhi));
    const double resid = std::fabs(f(s)) / C;
    if (resid > 1e-9) throw numeric_error("solve_r1: residual check failed");
    return R1Result{1.0 + s, s};
}

// Root of alpha*log(1+s) = log(1+2*beta*(1+s)) with s > 0 (power-vs-line
// crossing used by the self-adjoint atomic bound).
double solve_power_line(double beta, double alpha) {
    auto g = [&](double s) {
        return alpha * std::log1p(s) - std::log1p(2.0 * beta * (1.0 + s));
    };
    double hi = 1.0;
    int k = 0;
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (++k > 1000 || hi > 1e300)
            throw numeric_error("self-adjoint atomic bound: no crossing found");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 1e-300;
    if (g(lo) >= 0.0) {
        lo = 1e-300;
        if (g(lo) >= 0.0) throw numeric_error("self-adjoint atomic bound: degenerate root");
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200 && lhi - llo > 1e-16; ++it) {
        const double lm = 0.5 * (llo + lhi);
        if (g(std::exp(lm)) < 0.0)
            llo = lm;
        else
            lhi = lm;
    }
    return std::exp(0.5 * (llo + lhi));
}

// Root of L(1+s) = 1 + 2*beta*(1+s) over (0, D0), assuming a sign change.
double solve_sa_nonatomic(const DriftParams& dp, const Geometry& geo, double beta) {
    auto h = [&](double s) { return l_minus_1(dp, geo, s) - 2.0 * beta * (1.0 + s); };
    double hi = geo.D0 * (1.0 - 1e-12);
    if (!(h(hi) > 0.0)) throw numeric_error("self-adjoint nonatomic bound: bracketing failed");
    double lo = geo.D0 * 1e-12;
    if (h(lo) >= 0.0) {
        while (lo > geo.D0 * 1e-290 && h(lo) >= 0.0) lo *= 1e-3;
        if (h(lo) >= 0.0)
            throw numeric_error("self-adjoint nonatomic bound: root below representable range");
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200 && lhi - llo > 1e-16; ++it) {
        const double lm = 0.5 * (llo + lhi);
        if (h(std::exp(lm)) < 0.0)
            llo = lm;
        else
            lhi = lm;
    }
    return std::exp(0.5 * (llo + lhi));
}

}  // namespace

double L_of_D(const DriftParams& dp, const Geometry& geo, double D) {
    if (!(D > 0.0)) throw validation_error("L_of_D: need D = R-1 > 0");
    if (dp.atomic()) throw validation_error("L_of_D: undefined in the atomic case");
    if (D >= geo.D0) return kInf;
    const double lm1 = l_minus_1(dp, geo, D);
    return std::isfinite(lm1) ? 1.0 + lm1 : kInf;
}

R1Result solve_r1(double beta, double R, double L) {
    if (!(R > 1.0)) throw validation_error("solve_r1: need R > 1");
    if (!(L > 1.0)) throw validation_error("solve_r1: need L > 1");
    return solve_r1_careful(beta, R - 1.0, L - 1.0);
}

R1Result solve_r1_d(double beta, double D, double L_minus_1) {
    return solve_r1_careful(beta, D, L_minus_1);
}

RhoResult rho_bound(const DriftParams& dp, ChainClass cls) {
    dp.validate();
    RhoResult out;
    out.chain_class = cls;
    out.atomic = dp.atomic();
    out.geo = geometry(dp);
    const Geometry& geo = out.geo;

    auto set_from_s = [&](double s) {
        out.one_minus_rho = s / (1.0 + s);
        out.rho = 1.0 - out.one_minus_rho;
    };

    switch (cls) {
        case ChainClass::general: {
            if (out.atomic) {
                const double D = (1.0 - dp.lambda) / dp.lambda;
                const double Lm1 = (dp.K - dp.lambda) / dp.lambda;
                const R1Result r1 = solve_r1_careful(dp.beta, D, Lm1);
                out.D_used = D;
                out.R_used = 1.0 + D;
                out.Lm1_used = Lm1;
                out.L_used = 1.0 + Lm1;
                set_from_s(r1.s);
            } else {
                // maximize the root location over R in (1, R0)
                auto eval = [&](double D) -> double {
                    const double Lm1 = l_minus_1(dp, geo, D);
                    if (!std::isfinite(Lm1) || !(Lm1 > 0.0)) return -1.0;
                    try {
                        return solve_r1_careful(dp.beta, D, Lm1).s;
                    } catch (const error&) {
                        return -1.0;
                    }
                };
                const int n_grid = 256;
                const double la = std::log(geo.D0 * 1e-12);
                const double lb = std::log(geo.D0 * (1.0 - 1e-9));
                int best_i = -1;
                double best_s = -1.0;
                for (int i = 0; i < n_grid; ++i) {
                    const double D = std::exp(la + (lb - la) * i / (n_grid - 1.0));
                    const double s = eval(D);
                    if (s > best_s) {
                        best_s = s;
                        best_i = i;
                    }
                }
                if (best_i < 0) throw numeric_error("rho_bound: no feasible R in (1, R0)");
                double glo = la + (lb - la) * std::max(0, best_i - 1) / (n_grid - 1.0);
                double ghi = la + (lb - la) * std::min(n_grid - 1, best_i + 1) / (n_grid - 1.0);
                const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
                double x1 = ghi - invphi * (ghi - glo);
                double x2 = glo + invphi * (ghi - glo);
                double f1 = eval(std::exp(x1));
                double f2 = eval(std::exp(x2));
                for (int it = 0; it < 200 && ghi - glo > 1e-15; ++it) {
                    if (f1 < f2) {
                        glo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = glo + invphi * (ghi - glo);
                        f2 = eval(std::exp(x2));
                    } else {
                        ghi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = ghi - invphi * (ghi - glo);
                        f1 = eval(std::exp(x1));
                    }
                }
                const double D_star = std::exp(0.5 * (glo + ghi));
                const double s_star = eval(D_star);
                const double s_final = std::max(best_s, s_star);
                const double D_final = (s_star >= best_s)
                                           ? D_star
                                           : std::exp(la + (lb - la) * best_i / (n_grid - 1.0));
                out.D_used = D_final;
                out.R_used = 1.0 + D_final;
                out.Lm1_used = l_minus_1(dp, geo, D_final);
                out.L_used = 1.0 + out.Lm1_used;
                set_from_s(s_final);
            }
            break;
        }
        case ChainClass::self_adjoint: {
            if (out.atomic) {
                const double s_lam = (1.0 - dp.lambda) / dp.lambda;
                double s2 = s_lam;
                if (dp.K > dp.lambda + 2.0 * dp.beta) {
                    const double alpha = 1.0 + std::log(dp.K) / std::log(1.0 / dp.lambda);
                    const double s_rs = solve_power_line(dp.beta, alpha);
                    s2 = std::min(s_lam, s_rs);
                }
                out.D_used = s2;
                out.R_used = 1.0 + s2;
                out.L_used = kInf;
                out.Lm1_used = kInf;
                set_from_s(s2);
            } else {
                const double D_edge = geo.D0 * (1.0 - 1e-12);
                const double lm1_edge = l_minus_1(dp, geo, D_edge);
                double s2;
                if (std::isfinite(lm1_edge) && lm1_edge <= 2.0 * dp.beta * (1.0 + D_edge)) {
                    s2 = geo.D0;  // L stays below the line all the way to R0
                } else {
                    s2 = solve_sa_nonatomic(dp, geo, dp.beta);
                }
                out.D_used = s2;
                out.R_used = 1.0 + s2;
                out.Lm1_used = l_minus_1(dp, geo, std::min(s2, D_edge));
                out.L_used = std::isfinite(out.Lm1_used) ? 1.0 + out.Lm1_used : kInf;
                set_from_s(s2);
            }
            break;
        }
        case ChainClass::self_adjoint_positive: {
            if (out.atomic) {
                out.D_used = (1.0 - dp.lambda) / dp.lambda;
                out.R_used = 1.0 + out.D_used;
                out.L_used = kInf;
                out.Lm1_used = kInf;
                out.one_minus_rho = 1.0 - dp.lambda;
                out.rho = dp.lambda;
            } else {
                out.D_used = geo.D0;
                out.R_used = geo.R0;
                out.L_used = kInf;
                out.Lm1_used = kInf;
                set_from_s(geo.D0);
            }
            break;
        }
    }
    return out;
}

namespace {

double k1_factor(double s_r, double beta, double D_R, double Lm1) {
    const double N = Lm1 / D_R;
    const double lr = std::log1p((D_R - s_r) / (1.0 + s_r));
    if (!(lr > 0.0))
        throw numeric_error("big_m: 1/gamma reaches R; increase gamma");
    const double w = 8.0 * N * std::exp(-2.0) * s_r / ((1.0 + s_r) * lr * lr);
    const double den = beta - w;
    if (!(den > 0.0))
        throw numeric_error("big_m: gamma too close to rho for the general-class prefactor");
    const double num = 2.0 * beta + 2.0 * std::log(N) / lr - w;
    if (!(num > 0.0))
        throw numeric_error("big_m: general-class prefactor nonpositive");
    return num / (s_r * den);
}

double logsumexp(const double* v, int n) {
    double m = -kInf;
    for (int i = 0; i < n; ++i) m = std::max(m, v[i]);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(v[i] - m);
    return m + std::log(acc);
}

}  // namespace

BigM big_m_omg(const DriftParams& dp, const RhoResult& rho, double omg) {
    dp.validate();
    if (!(omg > 0.0 && omg < 1.0))
        throw validation_error("big_m: gamma must be in (0,1)");
    const double gm_rho = rho.one_minus_rho - omg;
    if (!(gm_rho > 0.0)) throw numeric_error("big_m: gamma must exceed rho");
    const double g = 1.0 - omg;
    const double lam = dp.lambda;
    const double K = dp.K;
    const double btil = dp.beta_tilde;
    if (!(g > lam)) throw numeric_error("big_m: gamma must exceed lambda");

    double Kterm;
    switch (rho.chain_class) {
        case ChainClass::general: {
            const double s_r = omg / g;  // 1/gamma - 1
            Kterm = k1_factor(s_r, dp.beta, rho.D_used, rho.Lm1_used);
            break;
        }
        case ChainClass::self_adjoint:
        case ChainClass::self_adjoint_positive:
            Kterm = dp.atomic() ? 1.0 + 1.0 / gm_rho : 1.0 + std::sqrt(btil) / gm_rho;
            break;
        default:
            throw validation_error("big_m: unknown chain class");
    }

    if (dp.atomic()) {
        const double t_a = std::max(lam, K - lam / g) / (g - lam);
        const double t_b = K * (K - lam / g) / (g * (g - lam)) * Kterm;
        const double t_c = (K - lam / g) * std::max(lam, K - lam) / ((g - lam) * (1.0 - lam));
        const double t_d = lam * (K - 1.0) / ((g - lam) * (1.0 - lam));
        const double M = t_a + t_b + t_c + t_d;
        if (std::isfinite(M)) return BigM{M, std::log(M)};
        const double logs[4] = {std::log(t_a), std::log(t_b), std::log(t_c), std::log(t_d)};
        const double lv = logsumexp(logs, 4);
        return BigM{std::exp(lv), lv};
    }

    const double lg = std::log1p(-omg);                 // log gamma
    const double em_a1 = std::expm1(-rho.geo.alpha1 * lg);  // gamma^{-a1} - 1
    const double em_a2 = std::expm1(-rho.geo.alpha2 * lg);  // gamma^{-a2} - 1
    const double D = btil - em_a1 * (1.0 - btil);       // 1 - (1-btil) gamma^{-a1}
    if (!(D > 0.0))
        throw numeric_error("big_m: gamma below the finite range of the weighted geometry");
    const double ginv_a1 = 1.0 + em_a1;
    const double ginv_a2 = 1.0 + em_a2;
    (void)ginv_a1;
    const double ginv = std::exp(-lg);
    const double em_g = omg / g;                        // 1/gamma - 1

    const double br1 = btil * std::max(lam, K - lam) / (1.0 - lam) +
                       (1.0 - btil) * em_a1 / em_g;
    const double t1 = (ginv_a2 * ginv * (K * g - lam)) / ((g - lam) * D * D) * br1;
    const double t2 = std::max(lam, K - lam / g) / (g - lam);
    const double t3 = (btil * ginv_a2 * ginv * ginv * K * (K * g - lam)) / ((g - lam) * D * D) * Kterm;
    const double t4 = ginv_a2 * lam * (K - 1.0) / ((1.0 - lam) * (g - lam) * D);
    const double t5 = K * (K * g - lam - btil * (g - lam)) / (g * g * (g - lam) * D);
    const double t6 = (K - lam - btil * (1.0 - lam)) / ((1.0 - lam) * omg) *
                      (em_a2 + (1.0 - btil) * em_a1 / btil);
    const double M = t1 + t2 + t3 + t4 + t5 + t6;
    if (std::isfinite(M)) return BigM{M, std::log(M)};

    // log-domain fallback: every factor above is positive, so each term's log
    // assembles from factor logs even when the linear value overflows
    const double log_D = std::log(D);
    const double log_gml = std::log(g - lam);
    const double log_Kg_lam = std::log(K * g - lam);
    const double l1 = std::log(ginv_a2) - lg + log_Kg_lam - log_gml - 2.0 * log_D + std::log(br1);
    const double l2 = std::log(t2);
    const double l3 = std::log(btil) + std::log(ginv_a2) - 2.0 * lg + std::log(K) + log_Kg_lam -
                      log_gml - 2.0 * log_D + std::log(Kterm);
    const double l4 = std::log(ginv_a2) + std::log(lam) + std::log(K - 1.0) -
                      std::log(1.0 - lam) - log_gml - log_D;
    const double l5 = std::log(K) + std::log(K * g - lam - btil * (g - lam)) - 2.0 * lg -
                      log_gml - log_D;
    const double l6 = std::log(K - lam - btil * (1.0 - lam)) - std::log(1.0 - lam) -
                      std::log(omg) + std::log(em_a2 + (1.0 - btil) * em_a1 / btil);
    const double logs[6] = {l1, l2, l3, l4, l5, l6};
    const double lv = logsumexp(logs, 6);
    return BigM{std::exp(lv), lv};
}

BigM big_m(const DriftParams& dp, const RhoResult& rho, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw validation_error("big_m: gamma must be in (0,1)");
    return big_m_omg(dp, rho, 1.0 - gamma);
}

}  // namespace mcmccert
