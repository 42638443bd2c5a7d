#include "mcmccert/planner.hpp"

#include <cmath>
#include <limits>

#include "mcmccert/errors.hpp"

namespace mcmccert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double check_rate(const RateBoundPair& rb, const char* who) {
    if (!(rb.one_minus_gamma > 0.0 && rb.one_minus_gamma < 1.0))
        throw validation_error(std::string(who) + ": gamma must be in (0,1)");
    if (!(rb.M >= 1.0) && !(rb.log_M >= 0.0))
        throw validation_error(std::string(who) + ": prefactor must be >= 1");
    return rb.one_minus_gamma;
}
}  // namespace

void MseInputs::validate() const {
    if (!(fc_norm > 0.0)) throw validation_error("MseInputs: fc_norm must be > 0");
    if (!(pi_v >= 1.0)) throw validation_error("MseInputs: pi_v must be >= 1");
    if (init_gap < 0.0) throw validation_error("MseInputs: init_gap must be >= 0");
    if (!(v_x0 >= 1.0)) throw validation_error("MseInputs: v_x0 must be >= 1");
    if (!(p >= 2.0)) throw validation_error("MseInputs: p must be >= 2");
    const double lo = p / (p - 1.0);
    if (!(r >= lo - 1e-12 && r <= p + 1e-12))
        throw validation_error("MseInputs: r must lie in [p/(p-1), p]");
    check_rate(rate_v, "MseInputs.rate_v");
    check_rate(rate_vr, "MseInputs.rate_vr");
}

double asym_var_factor(const MseInputs& in) {
    const double omg_r = in.rate_vr.one_minus_gamma;
    const double g_r = 1.0 - omg_r;
    return 1.0 + 2.0 * in.rate_vr.M * g_r / omg_r;
}

namespace {
double log_asym_var_factor(const MseInputs& in) {
    const double omg_r = in.rate_vr.one_minus_gamma;
    const double lg_r = std::log1p(-omg_r);
    const double l = std::log(2.0) + in.rate_vr.log_M + lg_r - std::log(omg_r);
    if (l < 700.0) return std::log1p(std::exp(l));
    return l;
}

double tail_term(const MseInputs& in, StartKind start, double t) {
    const double omg = in.rate_v.one_minus_gamma;
    const double gpow = std::exp(t * std::log1p(-omg));
    switch (start) {
        case StartKind::stationary: return 0.0;
        case StartKind::distribution_gap: return in.rate_v.M * in.init_gap * gpow;
        case StartKind::deterministic:
            return in.rate_v.M * in.rate_v.M * in.v_x0 * gpow;
    }
    return 0.0;
}
}  // namespace

double mse_bound(const MseInputs& in, StartKind start, double t, double n) {
    in.validate();
    if (!(n >= 1.0)) throw validation_error("mse_bound: need n >= 1");
    if (t < 0.0) throw validation_error("mse_bound: need t >= 0");
    const double A = asym_var_factor(in);
    const double omg = in.rate_v.one_minus_gamma;
    return (in.fc_norm / n) * A * (in.pi_v + tail_term(in, start, t) / (n * omg));
}

double asymptotic_var_bound(const MseInputs& in, const RhoResult* reversible) {
    in.validate();
    double factor = asym_var_factor(in);
    if (reversible) {
        const double omr = reversible->one_minus_rho;
        const double rev = (2.0 - omr) / omr;  // (1 + rho) / (1 - rho)
        factor = std::min(factor, rev);
    }
    return in.pi_v * in.fc_norm * factor;
}

Plan plan_one_walk(const MseInputs& in, double eps, double alpha, StartKind start) {
    in.validate();
    if (!(eps > 0.0)) throw validation_error("plan_one_walk: need eps > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("plan_one_walk: need alpha in (0,1)");

    Plan pl;
    pl.eps = eps;
    pl.alpha = alpha;
    pl.start = start;
    pl.m = 1;

    const double omg = in.rate_v.one_minus_gamma;
    const double A = asym_var_factor(in);
    const double log_A = log_asym_var_factor(in);
    pl.A = A;

    const double budget = eps * eps * alpha;
    const double log_budget = 2.0 * std::log(eps) + std::log(alpha);

    pl.b = in.pi_v * in.fc_norm * A / budget;
    pl.log_b = std::log(in.pi_v) + std::log(in.fc_norm) + log_A - log_budget;

    double tail0;     // the t-independent factor of the tail coefficient
    double log_tail0;
    switch (start) {
        case StartKind::stationary:
            tail0 = 0.0;
            log_tail0 = -kInf;
            break;
        case StartKind::distribution_gap:
            tail0 = in.rate_v.M * in.init_gap;
            log_tail0 = in.init_gap > 0.0 ? in.rate_v.log_M + std::log(in.init_gap) : -kInf;
            break;
        case StartKind::deterministic:
        default:
            tail0 = in.rate_v.M * in.rate_v.M * in.v_x0;
            log_tail0 = 2.0 * in.rate_v.log_M + std::log(in.v_x0);
            break;
    }
    pl.c_tilde = tail0 * in.fc_norm * A / (budget * omg);
    pl.log_c_tilde = log_tail0 + std::log(in.fc_norm) + log_A - log_budget - std::log(omg);

    const double lng = std::log1p(-omg);  // log gamma < 0

    // burn-in: smallest integer t with c_tilde * gamma^t below the level where
    // the quadratic in n stops being dominated by its linear coefficient
    double t = 0.0;
    if (start == StartKind::deterministic && tail0 > 0.0) {
        double log_arg;
        const double x = 2.0 * (pl.log_b + std::log(-lng));
        if (std::isfinite(pl.b) && x < 700.0) {
            const double num = 2.0 + std::sqrt(4.0 + pl.b * pl.b * lng * lng);
            log_arg = std::log(num) - (pl.log_c_tilde + 2.0 * std::log(-lng));
        } else {
            log_arg = pl.log_b - pl.log_c_tilde - std::log(-lng);
        }
        t = std::max(0.0, std::ceil(log_arg / lng));
    }
    pl.t = t;

    // averaging length: positive root of n^2 - b n - c_tilde gamma^t = 0
    double n;
    const double log_ct = pl.log_c_tilde + t * lng;
    if (std::isfinite(pl.b) && std::isfinite(pl.c_tilde)) {
        const double ct = std::exp(log_ct);
        n = std::ceil(0.5 * (pl.b + std::sqrt(pl.b * pl.b + 4.0 * ct)));
    } else {
        const double log_q = std::log(4.0) + log_ct - 2.0 * pl.log_b;
        double log_n;
        if (log_q < -36.0)
            log_n = pl.log_b;
        else if (log_q < 700.0)
            log_n = pl.log_b + std::log(0.5 * (1.0 + std::sqrt(1.0 + std::exp(log_q))));
        else
            log_n = 0.5 * log_ct;
        n = std::exp(log_n);
    }
    if (start == StartKind::stationary) n = std::ceil(pl.b);
    pl.n = n;
    pl.total_cost = pl.t + pl.n;
    return pl;
}

int median_m(double alpha, double a) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("median_m: alpha in (0,1)");
    if (!(a > 0.0 && a < 0.5)) throw validation_error("median_m: need a in (0, 1/2)");
    const double bound = 2.0 * std::log(2.0 * alpha) / std::log(4.0 * a * (1.0 - a));
    if (!(bound > 1.0)) return 1;
    int m = static_cast<int>(std::ceil(bound));
    if (m % 2 == 0) m += 1;
    return m;
}

Plan plan_median(const MseInputs& in, double eps, double alpha, double a, StartKind start) {
    Plan pl = plan_one_walk(in, eps, a, start);
    pl.alpha = alpha;
    pl.m = median_m(alpha, a);
    pl.total_cost = pl.m * (pl.t + pl.n);
    return pl;
}

OptimizedPlan optimize_plan(const PipelineInputs& pin, double eps, double alpha, int grid_n,
                            bool median, double a) {
    pin.dp.validate();
    if (grid_n < 1) throw validation_error("optimize_plan: need grid_n >= 1");
    if (!(eps > 0.0)) throw validation_error("optimize_plan: need eps > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("optimize_plan: need alpha in (0,1)");
    if (median && !(a > 0.0 && a < 0.5))
        throw validation_error("optimize_plan: need per-walk level a in (0, 1/2)");
    const DriftParams dp_r = power_transform(pin.dp, pin.r);
    const RhoResult rho_v = rho_bound(pin.dp, pin.cls);
    const RhoResult rho_vr = rho_bound(dp_r, pin.cls);

    OptimizedPlan best;
    bool found = false;

    for (int j = 1; j <= grid_n; ++j) {
        const double omg = rho_v.one_minus_rho * (1.0 - static_cast<double>(j) / (grid_n + 1));
        BigM Mv;
        try {
            Mv = big_m_omg(pin.dp, rho_v, omg);
        } catch (const error&) {
            continue;
        }
        for (int j2 = 1; j2 <= grid_n; ++j2) {
            const double omg2 =
                rho_vr.one_minus_rho * (1.0 - static_cast<double>(j2) / (grid_n + 1));
            BigM Mr;
            try {
                Mr = big_m_omg(dp_r, rho_vr, omg2);
            } catch (const error&) {
                continue;
            }
            MseInputs in;
            in.fc_norm = pin.fc_norm;
            in.pi_v = pin.pi_v;
            in.init_gap = pin.init_gap;
            in.v_x0 = pin.v_x0;
            in.p = pin.p;
            in.r = pin.r;
            in.rate_v = RateBoundPair{Mv.value, Mv.log_value, 1.0 - omg, omg};
            in.rate_vr = RateBoundPair{Mr.value, Mr.log_value, 1.0 - omg2, omg2};
            Plan pl;
            try {
                pl = median ? plan_median(in, eps, alpha, a, pin.start)
                            : plan_one_walk(in, eps, alpha, pin.start);
            } catch (const error&) {
                continue;
            }
            if (!std::isfinite(pl.total_cost)) continue;
            if (!found || pl.total_cost < best.plan.total_cost) {
                best.plan = pl;
                best.j = j;
                best.j_r = j2;
                best.rho_v = rho_v;
                best.rho_vr = rho_vr;
                best.inputs = in;
                found = true;
            }
        }
    }
    if (!found)
        throw numeric_error(
            "optimize_plan: no feasible (gamma, gamma_r) pair; rho = " +
            std::to_string(rho_v.rho) + " (1-rho = " + std::to_string(rho_v.one_minus_rho) +
            "), rho_r = " + std::to_string(rho_vr.rho));
    return best;
}

}  // namespace mcmccert
