#include "mcmccert/drift.hpp"

#include <cmath>

#include "mcmccert/errors.hpp"

namespace mcmccert {

void DriftParams::validate() const {
    if (!(beta_tilde > 0.0 && beta_tilde <= 1.0))
        throw validation_error("DriftParams: beta_tilde must be in (0,1]");
    if (!(beta > 0.0 && beta <= beta_tilde))
        throw validation_error("DriftParams: beta must be in (0, beta_tilde]");
    if (!(nu_on_C > 0.0 && nu_on_C <= 1.0))
        throw validation_error("DriftParams: nu_on_C must be in (0,1]");
    if (beta > beta_tilde * nu_on_C * (1.0 + 1e-12))
        throw validation_error("DriftParams: beta must not exceed beta_tilde * nu_on_C");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("DriftParams: lambda must be in (0,1)");
    if (!(K >= 1.0)) throw validation_error("DriftParams: K must be >= 1");
    if (K <= lambda) throw validation_error("DriftParams: K must exceed lambda");
    if (!(v_floor >= 1.0)) throw validation_error("DriftParams: v_floor must be >= 1");
    if (!(pi_C > 0.0 && pi_C <= 1.0))
        throw validation_error("DriftParams: pi_C must be in (0,1]");
    if (K_tilde && !(*K_tilde >= 1.0))
        throw validation_error("DriftParams: K_tilde must be >= 1");
}

DriftParams power_transform(const DriftParams& dp, double r) {
    dp.validate();
    if (!(r >= 1.0)) throw validation_error("power_transform: need r >= 1");
    DriftParams out = dp;
    out.lambda = std::pow(dp.lambda, 1.0 / r);
    out.K = std::pow(dp.K, 1.0 / r);
    out.v_floor = std::pow(dp.v_floor, 1.0 / r);
    out.K_tilde.reset();
    if (dp.v_eval) {
        auto base = dp.v_eval;
        out.v_eval = [base, r](double x) { return std::pow(base(x), 1.0 / r); };
    }
    out.validate();
    return out;
}

double pi_v_bound(const DriftParams& dp) {
    dp.validate();
    return dp.pi_C * (dp.K - dp.lambda) / (1.0 - dp.lambda);
}

double centered_fv_bound(double cfv, const DriftParams& dp, double p) {
    dp.validate();
    if (!(cfv >= 0.0)) throw validation_error("centered_fv_bound: need cfv >= 0");
    if (!(p >= 1.0)) throw validation_error("centered_fv_bound: need p >= 1");
    const double lp = std::pow(dp.lambda, 1.0 / p);
    const double Kp = std::pow(dp.K, 1.0 / p);
    const double K_p_lambda = (Kp - lp) / (1.0 - lp);
    const double root = std::pow(cfv, 1.0 / p) + dp.pi_C * K_p_lambda / std::pow(dp.v_floor, 1.0 / p);
    return std::pow(root, p);
}

void RosenthalDrift::validate() const {
    if (!(lambda_R > 0.0 && lambda_R < 1.0))
        throw validation_error("RosenthalDrift: lambda_R must be in (0,1)");
    if (!(K_R > 0.0)) throw validation_error("RosenthalDrift: K_R must be > 0");
    if (!(beta_tilde_R > 0.0 && beta_tilde_R <= 1.0))
        throw validation_error("RosenthalDrift: beta_tilde_R must be in (0,1]");
    if (!(d_R > 2.0 * K_R / (1.0 - lambda_R)))
        throw validation_error("RosenthalDrift: need d_R > 2 K_R / (1 - lambda_R)");
}

void RobertsTweedieDrift::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw validation_error("RobertsTweedieDrift: lambda must be in (0,1)");
    if (!(K > 0.0)) throw validation_error("RobertsTweedieDrift: K must be > 0");
    if (!(d > 1.0)) throw validation_error("RobertsTweedieDrift: d must be > 1");
    if (!(beta_tilde > 0.0 && beta_tilde <= 1.0))
        throw validation_error("RobertsTweedieDrift: beta_tilde must be in (0,1]");
}

double rt_level(const RosenthalDrift& rd, double d) {
    if (!(d > 0.0)) throw validation_error("rt_level: need d > 0");
    const double K_RT = rd.K_R + 1.0 - rd.lambda_R;
    return (d + 1.0) * (d + 1.0) * K_RT / (d * (1.0 - rd.lambda_R));
}

RobertsTweedieDrift rosenthal_to_roberts_tweedie(const RosenthalDrift& rd, double d) {
    rd.validate();
    if (!(d > 0.0)) throw validation_error("rosenthal_to_roberts_tweedie: need d > 0");
    RobertsTweedieDrift rt;
    rt.lambda = (d + rd.lambda_R) / (d + 1.0);
    rt.K = rd.K_R + 1.0 - rd.lambda_R;
    rt.d = rt_level(rd, d);
    rt.beta_tilde = rd.beta_tilde_R;
    rt.validate();
    return rt;
}

DriftParams rosenthal_to_baxendale(const RosenthalDrift& rd, double d) {
    rd.validate();
    if (!(d > 0.0)) throw validation_error("rosenthal_to_baxendale: need d > 0");
    const double level = rt_level(rd, d) - 1.0;
    if (level > rd.d_R * (1.0 + 1e-12))
        throw validation_error(
            "rosenthal_to_baxendale: converted small set exceeds the level d_R where "
            "the minorization was established; pick d with rt_level(rd,d)-1 <= d_R");
    const double K_RT = rd.K_R + 1.0 - rd.lambda_R;
    DriftParams dp;
    dp.beta_tilde = rd.beta_tilde_R;
    dp.beta = rd.beta_tilde_R;  // nu normalized with nu(C)=1
    dp.lambda = (d + rd.lambda_R) / (d + 1.0);
    dp.K = K_RT * (d * d + 2.0 * d + rd.lambda_R) / (d * (1.0 - rd.lambda_R));
    dp.v_floor = 1.0;
    dp.nu_on_C = 1.0;
    dp.pi_C = 1.0;
    dp.validate();
    return dp;
}

std::vector<double> default_d_grid() {
    std::vector<double> g(121);
    for (int i = 0; i < 121; ++i) g[i] = std::pow(10.0, -3.0 + 6.0 * i / 120.0);
    return g;
}

double optimize_pi_v_bound(const RosenthalDrift& rd, const std::vector<double>& d_grid) {
    rd.validate();
    if (d_grid.empty()) throw validation_error("optimize_pi_v_bound: empty d grid");
    const double K_RT = rd.K_R + 1.0 - rd.lambda_R;
    double best = rd.K_R / (1.0 - rd.lambda_R) + 1.0;
    for (double d : d_grid) {
        if (!(d > 0.0)) continue;
        if (rt_level(rd, d) - 1.0 > rd.d_R) continue;  // minorization does not cover C(d)
        const double cand = K_RT * (d + 1.0) / (1.0 - rd.lambda_R);
        if (cand < best) best = cand;
    }
    return best;
}

}  // namespace mcmccert
