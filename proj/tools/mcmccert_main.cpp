// Command-line front end: certificate computations, run planning, simulation
// with variance diagnostics, hierarchical-model pipelines, and the self-check
// suite.  Every report is a sequence of records, printed either as JSON lines
// or as one human-readable line per record; identical (config, seed) pairs
// produce bit-identical reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

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
#include "mcmccert/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mcmccert;

constexpr int kSchemaVersion = 1;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Record sink: JSON lines or `name: key=value ...` text, to stdout or --out.
class Report {
  public:
    Report(bool as_json, const std::string& out_path) : json_(as_json) {
        if (!out_path.empty()) {
            file_.open(out_path);
            if (!file_) throw validation_error("cannot open output file: " + out_path);
        }
    }

    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    bool json_mode() const { return json_; }

    void record(const json& j) {
        if (json_) {
            os() << j.dump() << '\n';
            return;
        }
        std::ostream& o = os();
        o << j.value("record", "record") << ':';
        for (const auto& [k, v] : j.items()) {
            if (k == "record") continue;
            o << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
        }
        o << '\n';
    }

    // Raw line for CSV-style payloads (human mode only).
    void text(const std::string& line) { os() << line << '\n'; }

  private:
    bool json_ = false;
    std::ofstream file_;
};

struct Global {
    std::uint64_t seed = 20260815ULL;
    unsigned workers = 1;  // 0 = hardware concurrency
    bool as_json = false;
    std::string out;
    bool force = false;
    bool quick = false;
    double budget = 1e8;

    unsigned resolved_workers() const { return workers == 0 ? default_workers() : workers; }
};

json run_header(const std::string& cmd, const Global& g, std::uint64_t config_hash) {
    json j;
    j["record"] = "run";
    j["schema_version"] = kSchemaVersion;
    j["command"] = cmd;
    j["config_hash"] = hex64(config_hash);
    j["seed"] = g.seed;
    const unsigned wk = g.resolved_workers();
    j["workers"] = wk;
    json ws = json::array();
    for (unsigned w = 0; w < wk; ++w) ws.push_back(derive_seed(g.seed, w));
    j["worker_seeds"] = ws;
    return j;
}

void check_budget(double steps, const Global& g) {
    if (steps > g.budget && !g.force) {
        std::ostringstream m;
        m << "planned simulation cost " << steps << " steps exceeds the budget cap " << g.budget
          << "; rerun with --force or raise --budget";
        throw validation_error(m.str());
    }
}

StartKind start_from_string(const std::string& s) {
    if (s == "deterministic") return StartKind::deterministic;
    if (s == "stationary") return StartKind::stationary;
    if (s == "gap" || s == "distribution-gap") return StartKind::distribution_gap;
    throw validation_error("unknown start kind: " + s +
                           " (expected deterministic, stationary, or gap)");
}

const char* to_string(StartKind s) {
    switch (s) {
        case StartKind::stationary: return "stationary";
        case StartKind::distribution_gap: return "gap";
        default: return "deterministic";
    }
}

json drift_record(const DriftParams& dp) {
    json j;
    j["record"] = "drift";
    j["beta_tilde"] = dp.beta_tilde;
    j["beta"] = dp.beta;
    j["lambda"] = dp.lambda;
    j["K"] = dp.K;
    j["v_floor"] = dp.v_floor;
    j["nu_on_C"] = dp.nu_on_C;
    j["pi_C"] = dp.pi_C;
    j["atomic"] = dp.atomic();
    return j;
}

json rho_record(const char* which, const RhoResult& rr) {
    json j;
    j["record"] = "rho";
    j["drift"] = which;
    j["chain_class"] = to_string(rr.chain_class);
    j["rho"] = rr.rho;
    j["one_minus_rho"] = rr.one_minus_rho;
    j["alpha1"] = rr.geo.alpha1;
    j["alpha2"] = rr.geo.alpha2;
    j["R0"] = rr.geo.R0;
    j["R_used"] = rr.R_used;
    j["L_used"] = rr.L_used;
    return j;
}

json plan_record(const Plan& pl) {
    json j;
    j["record"] = "plan";
    j["mode"] = pl.m > 1 ? "median" : "one-walk";
    j["t"] = pl.t;
    j["n"] = pl.n;
    j["m"] = pl.m;
    j["total_cost"] = pl.total_cost;
    j["b"] = pl.b;
    j["c_tilde"] = pl.c_tilde;
    j["log_b"] = pl.log_b;
    j["log_c_tilde"] = pl.log_c_tilde;
    j["A"] = pl.A;
    j["eps"] = pl.eps;
    j["alpha"] = pl.alpha;
    j["start"] = to_string(pl.start);
    return j;
}

json optimized_records(const OptimizedPlan& op, Report& rep) {
    rep.record(rho_record("V", op.rho_v));
    rep.record(rho_record("V^{1/r}", op.rho_vr));
    json r;
    r["record"] = "rates";
    r["j"] = op.j;
    r["gamma"] = op.inputs.rate_v.gamma;
    r["M"] = op.inputs.rate_v.M;
    r["log_M"] = op.inputs.rate_v.log_M;
    r["j_r"] = op.j_r;
    r["gamma_r"] = op.inputs.rate_vr.gamma;
    r["M_r"] = op.inputs.rate_vr.M;
    r["log_M_r"] = op.inputs.rate_vr.log_M;
    r["fc_norm"] = op.inputs.fc_norm;
    r["pi_v"] = op.inputs.pi_v;
    rep.record(r);
    return plan_record(op.plan);
}

// ---------------------------------------------------------------------------
// rates

struct RatesOpts {
    std::string preset;
    double theta = 0.5;
    double c = 1.6226;
    double beta_tilde = 0.0;
    double beta = -1.0;  // < 0: default to beta_tilde * nu_on_C
    double lambda = 0.0;
    double K = 0.0;
    double v_floor = 1.0;
    double nu_on_c = 1.0;
    double pi_c = 1.0;
    std::string cls;  // empty: positive self-adjoint for the preset, general otherwise
    double r = 2.0;
    int grid = 20;
    std::vector<double> gammas;
    bool drift_given = false;
};

ChainClass class_from(const RatesOpts& o) {
    if (!o.cls.empty()) return chain_class_from_string(o.cls);
    // The autoregressive preset is reversible with a positive spectrum; an
    // arbitrary certificate only supports the general-class bound.
    return o.preset == "contracting-normals" ? ChainClass::self_adjoint_positive
                                             : ChainClass::general;
}

DriftParams drift_from(const RatesOpts& o) {
    if (o.preset == "contracting-normals") return cn_drift(o.theta, o.c);
    if (!o.preset.empty()) throw validation_error("unknown preset: " + o.preset);
    if (!o.drift_given)
        throw validation_error(
            "no chain given: pass --preset contracting-normals or a full certificate "
            "(--beta-tilde, --lambda, --K)");
    DriftParams dp;
    dp.beta_tilde = o.beta_tilde;
    dp.lambda = o.lambda;
    dp.K = o.K;
    dp.v_floor = o.v_floor;
    dp.nu_on_C = o.nu_on_c;
    dp.pi_C = o.pi_c;
    dp.beta = o.beta >= 0.0 ? o.beta : o.beta_tilde * o.nu_on_c;
    dp.validate();
    return dp;
}

int run_rates(const RatesOpts& o, const Global& g, Report& rep) {
    const DriftParams dp = drift_from(o);
    const ChainClass cls = class_from(o);
    const RhoResult rv = rho_bound(dp, cls);
    const DriftParams dpr = power_transform(dp, o.r);
    const RhoResult rvr = rho_bound(dpr, cls);

    if (!o.preset.empty()) {
        json c;
        c["record"] = "chain";
        c["preset"] = o.preset;
        c["theta"] = o.theta;
        c["c"] = o.c;
        rep.record(c);
    }
    rep.record(drift_record(dp));
    rep.record(rho_record("V", rv));
    rep.record(rho_record("V^{1/r}", rvr));

    auto emit = [&](const char* which, const DriftParams& d, const RhoResult& rr, int j,
                    double gamma) {
        const BigM m = big_m(d, rr, gamma);
        json rec;
        rec["record"] = "rate";
        rec["drift"] = which;
        rec["j"] = j;
        rec["gamma"] = gamma;
        rec["M"] = m.value;
        rec["log_M"] = m.log_value;
        rep.record(rec);
    };

    if (!o.gammas.empty()) {
        for (std::size_t i = 0; i < o.gammas.size(); ++i) {
            const double gamma = o.gammas[i];
            if (!(gamma > rv.rho && gamma < 1.0)) {
                std::ostringstream m;
                m << "gamma " << gamma << " is outside (rho, 1): computed rho = " << rv.rho;
                throw validation_error(m.str());
            }
            emit("V", dp, rv, static_cast<int>(i + 1), gamma);
        }
        for (std::size_t i = 0; i < o.gammas.size(); ++i) {
            const double gamma = o.gammas[i];
            if (gamma > rvr.rho && gamma < 1.0)
                emit("V^{1/r}", dpr, rvr, static_cast<int>(i + 1), gamma);
        }
        return 0;
    }
    if (o.grid < 1) throw validation_error("--grid must be >= 1");
    for (int j = 1; j <= o.grid; ++j)
        emit("V", dp, rv, j, rv.rho + (static_cast<double>(j) / (o.grid + 1)) * (1.0 - rv.rho));
    for (int j = 1; j <= o.grid; ++j)
        emit("V^{1/r}", dpr, rvr, j,
             rvr.rho + (static_cast<double>(j) / (o.grid + 1)) * (1.0 - rvr.rho));
    (void)g;
    return 0;
}

// ---------------------------------------------------------------------------
// plan

struct PlanOpts {
    RatesOpts chain;  // shares the preset / explicit-certificate flags
    int row = 0;
    std::string mode = "one-walk";
    double eps = 0.1;
    double alpha = 0.1;
    double a = 0.11969;
    int grid = 20;
    double cfv = 1.0;
    double p = 2.0;
    double r = 2.0;
    double v_x0 = 1.0;
    double init_gap = 0.0;
    std::string start = "deterministic";
    bool eps_given = false;
    bool alpha_given = false;
    bool mode_given = false;
};

int run_plan(PlanOpts o, const Global& g, Report& rep) {
    if (o.chain.preset == "table55") {
        o.chain.preset = "contracting-normals";
        if (o.row != 0) {
            if (o.row < 1 || o.row > 3) throw validation_error("--row must be 1, 2, or 3");
            if (!o.eps_given) o.eps = 0.1;
            if (!o.alpha_given) o.alpha = o.row == 1 ? 0.1 : 1e-5;
            if (!o.mode_given) o.mode = o.row == 3 ? "median" : "one-walk";
        }
    } else if (o.row != 0) {
        throw validation_error("--row only applies to --preset table55");
    }
    if (o.mode != "one-walk" && o.mode != "median")
        throw validation_error("--mode must be one-walk or median");

    PipelineInputs pin;
    pin.dp = drift_from(o.chain);
    pin.cls = class_from(o.chain);
    pin.p = o.p;
    pin.r = o.r;
    pin.fc_norm = centered_fv_bound(o.cfv, pin.dp, o.p);
    pin.pi_v = pi_v_bound(pin.dp);
    pin.v_x0 = o.v_x0;
    pin.init_gap = o.init_gap;
    pin.start = start_from_string(o.start);

    if (!o.chain.preset.empty()) {
        json c;
        c["record"] = "chain";
        c["preset"] = o.chain.preset;
        c["theta"] = o.chain.theta;
        c["c"] = o.chain.c;
        rep.record(c);
    }
    rep.record(drift_record(pin.dp));
    json inputs;
    inputs["record"] = "inputs";
    inputs["chain_class"] = to_string(pin.cls);
    inputs["p"] = pin.p;
    inputs["r"] = pin.r;
    inputs["cfv"] = o.cfv;
    inputs["fc_norm"] = pin.fc_norm;
    inputs["pi_v"] = pin.pi_v;
    inputs["v_x0"] = pin.v_x0;
    inputs["init_gap"] = pin.init_gap;
    inputs["start"] = to_string(pin.start);
    inputs["eps"] = o.eps;
    inputs["alpha"] = o.alpha;
    rep.record(inputs);

    const OptimizedPlan op =
        optimize_plan(pin, o.eps, o.alpha, o.grid, o.mode == "median", o.a);
    rep.record(optimized_records(op, rep));
    (void)g;
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    std::string chain = "ar1";
    double theta = 0.5;
    double c = 1.6226;
    std::string f = "identity";
    double t = 0.0;
    double n = 1e6;
    int m = 1;
    bool split = false;
    int skeleton = 0;     // 0: chain default
    double epsilon = -1;  // < 0: chain default
    double x0 = 0.0;
    std::string trace_path;
};

struct BatchAccum {
    std::size_t b = 1;
    double cur = 0.0;
    std::size_t in_cur = 0;
    std::vector<double> sums;

    explicit BatchAccum(std::size_t n, double theta_b = 0.5) {
        b = std::max<std::size_t>(1, static_cast<std::size_t>(std::pow(double(n), theta_b)));
    }
    void add(double v) {
        cur += v;
        if (++in_cur == b) {
            sums.push_back(cur);
            cur = 0.0;
            in_cur = 0;
        }
    }
    // b * sum (mean_batch - grand)^2 / (a - 1), grand over the first a*b values.
    std::optional<double> variance() const {
        const std::size_t a = sums.size();
        if (a < 2) return std::nullopt;
        double grand = 0.0;
        for (double s : sums) grand += s;
        grand /= static_cast<double>(a * b);
        double acc = 0.0;
        for (double s : sums) {
            const double d = s / static_cast<double>(b) - grand;
            acc += d * d;
        }
        return static_cast<double>(b) * acc / static_cast<double>(a - 1);
    }
};

std::function<double(double)> f_from_string(const std::string& name) {
    if (name == "identity") return [](double x) { return x; };
    if (name == "square") return [](double x) { return x * x; };
    if (name == "one-plus-square") return [](double x) { return 1.0 + x * x; };
    throw validation_error("unknown function: " + name +
                           " (expected identity, square, or one-plus-square)");
}

struct WalkOutcome {
    double estimate = 0.0;
    std::optional<double> bm;
    std::optional<RegenEstimates> rs;
    std::optional<double> rs_sigma_sq;
    std::size_t tours = 0;
};

WalkOutcome ar1_walk(const SimulateOpts& o, const std::function<double(double)>& f,
                     std::uint64_t walk_seed, std::ofstream* trace) {
    const ContractingNormals kern(o.theta);
    std::optional<SplitKernelM1> sk;
    if (o.split) sk = cn_split_kernel(kern, cn_minorization(o.theta, o.c));

    Rng rng(walk_seed);
    const auto t_steps = static_cast<std::size_t>(o.t);
    const auto n_steps = static_cast<std::size_t>(o.n);
    double x = o.x0;
    for (std::size_t i = 0; i < t_steps; ++i) x = kern.step(x, rng);

    if (trace) *trace << "0," << x << ",0\n";

    WalkOutcome out;
    double fsum = 0.0;
    BatchAccum batches(n_steps);
    TourBlocks blocks;
    bool open = false;
    double tour_s = 0.0, tour_n = 0.0;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double xp = x;
        x = kern.step(x, rng);
        bool bell = false;
        if (sk) {
            const double sx = sk->s(xp);
            if (sx > 0.0) {
                const double lr =
                    std::log(sx) + sk->log_nu_density(x) - sk->log_density(x, xp);
                if (lr > std::log1p(1e-9))
                    throw verification_error("the declared minorization does not hold at the "
                                             "observed transition");
                bell = rng.bernoulli(std::exp(std::min(lr, 0.0)));
            }
        }
        const double fx = f(x);
        fsum += fx;
        batches.add(fx);
        if (bell) {
            if (open) {
                blocks.s.push_back(tour_s);
                blocks.N.push_back(tour_n);
            }
            open = true;
            tour_s = 0.0;
            tour_n = 0.0;
        }
        if (open) {
            tour_s += fx;
            tour_n += 1.0;
        }
        if (trace) *trace << (i + 1) << ',' << x << ',' << (bell ? 1 : 0) << '\n';
    }

    out.estimate = fsum / static_cast<double>(n_steps);
    out.bm = batches.variance();
    if (o.split) {
        out.tours = blocks.count();
        if (blocks.count() >= 2) {
            const RegenEstimates re = regen_estimates(blocks);
            out.rs = re;
            out.rs_sigma_sq = re.xi_sq * re.N_bar;
        }
    }
    return out;
}

WalkOutcome finite_walk(const SimulateOpts& o, const FiniteChain& chain,
                        const Eigen::VectorXd& nu, int mskel, double eps,
                        const std::function<double(double)>& f, std::uint64_t walk_seed,
                        std::ofstream* trace) {
    Rng rng(walk_seed);
    const auto t_steps = static_cast<std::size_t>(o.t);
    const auto n_steps = static_cast<std::size_t>(o.n);
    auto x0 = static_cast<int>(o.x0);
    if (x0 < 0 || x0 >= chain.size()) throw validation_error("--x0 outside the state space");

    WalkOutcome out;
    if (!o.split) {
        int x = x0;
        for (std::size_t i = 0; i < t_steps; ++i) x = chain.step(x, rng);
        if (trace) *trace << "0," << x << ",0\n";
        double fsum = 0.0;
        BatchAccum batches(n_steps);
        for (std::size_t i = 0; i < n_steps; ++i) {
            x = chain.step(x, rng);
            const double fx = f(x);
            fsum += fx;
            batches.add(fx);
            if (trace) *trace << (i + 1) << ',' << x << ",0\n";
        }
        out.estimate = fsum / static_cast<double>(n_steps);
        out.bm = batches.variance();
        return out;
    }

    const std::size_t n_skel = std::max<std::size_t>(1, n_steps / mskel);
    const std::vector<int> in_C(chain.size(), 1);
    const SplitTraceFinite tr =
        split_run_finite(chain, mskel, eps, nu, in_C, x0, n_skel, rng);
    if (trace) {
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            const bool bell =
                i > 0 && i % mskel == 0 && tr.bells[i / mskel - 1] != 0;
            *trace << i << ',' << tr.states[i] << ',' << (bell ? 1 : 0) << '\n';
        }
    }
    double fsum = 0.0;
    BatchAccum batches(tr.states.size() - 1);
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
        const double fx = f(tr.states[i]);
        fsum += fx;
        batches.add(fx);
    }
    out.estimate = fsum / static_cast<double>(tr.states.size() - 1);
    out.bm = batches.variance();
    const TourBlocks blocks = tours(tr, std::function<double(int)>([&](int s) { return f(s); }));
    out.tours = blocks.count();
    if (blocks.count() >= 3) {
        const RegenEstimates re = regen_estimates(blocks);
        out.rs = re;
        out.rs_sigma_sq = regen_sigma2(blocks, eps, 1.0, mskel);
    }
    return out;
}

int run_simulate(const SimulateOpts& o, const Global& g, Report& rep) {
    if (o.m < 1) throw validation_error("--m must be >= 1");
    if (!(o.n >= 1)) throw validation_error("--n must be >= 1");
    if (o.t < 0) throw validation_error("--t must be >= 0");
    check_budget(static_cast<double>(o.m) * (o.t + o.n), g);

    const std::function<double(double)> f = f_from_string(o.f);

    std::ofstream trace;
    if (!o.trace_path.empty()) {
        trace.open(o.trace_path);
        if (!trace) throw validation_error("cannot open trace file: " + o.trace_path);
        trace.precision(17);
        trace << "index,state,bell\n";
    }

    std::optional<FiniteChain> chain;
    Eigen::VectorXd nu;
    int mskel = o.skeleton;
    double eps = o.epsilon;
    if (o.chain == "five-state") {
        chain = five_state_chain();
        nu = five_state_nu4();
        if (mskel == 0) mskel = 4;
        if (eps < 0) eps = 0.125;
    } else if (o.chain == "two-state") {
        chain = two_state_chain();
        nu = two_state_nu();
        if (mskel == 0) mskel = 1;
        if (eps < 0) eps = 0.7;
    } else if (o.chain != "ar1") {
        throw validation_error("unknown chain: " + o.chain +
                               " (expected ar1, five-state, or two-state)");
    }

    std::vector<double> estimates;
    WalkOutcome first;
    for (int w = 0; w < o.m; ++w) {
        const std::uint64_t ws = derive_seed(g.seed, static_cast<std::uint64_t>(w));
        std::ofstream* tp = (w == 0 && trace.is_open()) ? &trace : nullptr;
        const WalkOutcome res = chain ? finite_walk(o, *chain, nu, mskel, eps, f, ws, tp)
                                      : ar1_walk(o, f, ws, tp);
        if (w == 0) first = res;
        estimates.push_back(res.estimate);

        json rec;
        rec["record"] = "walk";
        rec["run"] = w;
        rec["seed"] = ws;
        rec["estimate"] = res.estimate;
        if (res.bm) rec["bm_sigma_sq"] = *res.bm;
        if (o.split) {
            rec["tours"] = res.tours;
            if (res.rs) {
                rec["I_hat"] = res.rs->I_hat;
                rec["xi_sq"] = res.rs->xi_sq;
                rec["N_bar"] = res.rs->N_bar;
            }
            if (res.rs_sigma_sq) rec["rs_sigma_sq"] = *res.rs_sigma_sq;
        }
        rep.record(rec);
    }

    json sum;
    sum["record"] = "estimate";
    sum["chain"] = o.chain;
    sum["f"] = o.f;
    sum["scheme"] = o.m > 1 ? "median" : "one-walk";
    sum["t"] = o.t;
    sum["n"] = o.n;
    sum["m"] = o.m;
    sum["estimate"] = o.m > 1 ? estimate_median(estimates) : estimates.front();
    if (first.bm) sum["bm_sigma_sq"] = *first.bm;
    if (first.rs_sigma_sq) sum["rs_sigma_sq"] = *first.rs_sigma_sq;
    rep.record(sum);
    return 0;
}

// ---------------------------------------------------------------------------
// hrem

struct HremOpts {
    std::string data_path;
    std::string preset;
    std::string target;
    std::string sampler = "auto";
    std::string cls;
    double lambda_r_block = 0.8;
    double phi = 0.5;
    double lambda_r_gibbs = 0.99;
    double c3_fraction = 0.5;
    double d = 1.0;
    double eps = 0.1;
    double alpha = 0.1;
    std::string mode = "one-walk";
    double a = 0.11969;
    int grid = 20;
    double sweeps = 0.0;
    double burn = 1000.0;
    std::string start = "deterministic";
};

struct HyperOpts {
    double m0 = 0.0;
    double s0 = 1.0;
    double a1 = 2.0;
    double b1 = 1.0;
    double a2 = 2.0;
    double b2 = 1.0;
    bool m0_given = false;
};

HremData load_hrem_csv(const std::string& path, double m0, std::vector<std::string>* labels) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open data file: " + path);
    std::string line;
    std::size_t lineno = 0;

    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && s[b] == ' ') ++b;
        return s.substr(b);
    };

    if (!std::getline(in, line))
        throw validation_error("data file " + path + " is empty (expected header group,y)");
    ++lineno;
    if (strip(line) != "group,y")
        throw validation_error("data file " + path + ": line 1 must be the header 'group,y'");

    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> groups;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = strip(line);
        if (row.empty()) continue;
        const std::size_t comma = row.find(',');
        bool ok = comma != std::string::npos && comma > 0;
        double y = 0.0;
        std::string label;
        if (ok) {
            label = strip(row.substr(0, comma));
            const std::string ystr = strip(row.substr(comma + 1));
            std::size_t used = 0;
            try {
                y = std::stod(ystr, &used);
            } catch (const std::exception&) {
                ok = false;
            }
            ok = ok && !label.empty() && used == ystr.size();
        }
        if (!ok) {
            std::ostringstream m;
            m << "data file " << path << ": malformed row at line " << lineno << ": '" << row
              << "'";
            throw validation_error(m.str());
        }
        auto [it, inserted] = groups.try_emplace(label);
        if (inserted) order.push_back(label);
        it->second.push_back(y);
    }

    std::vector<std::vector<double>> by_group;
    for (const std::string& lab : order) by_group.push_back(groups[lab]);
    if (labels) *labels = order;
    return hrem_data_from_groups(by_group, m0);
}

int run_hrem(const HremOpts& o, const HyperOpts& hyo, const Global& g, Report& rep) {
    HremHyper hy;
    hy.s0 = hyo.s0;
    hy.a1 = hyo.a1;
    hy.b1 = hyo.b1;
    hy.a2 = hyo.a2;
    hy.b2 = hyo.b2;
    hy.m0 = hyo.m0;

    HremData data;
    std::vector<std::string> labels;
    if (!o.data_path.empty()) {
        data = load_hrem_csv(o.data_path, hy.m0, &labels);
    } else if (o.preset == "synthetic") {
        if (!hyo.m0_given) hy.m0 = 2.5;
        data = hrem_data_from_summary({1.5, 2.5, 3.5}, {2.0, 2.0, 2.0}, 1.5, hy.m0);
        labels = {"1", "2", "3"};
    } else if (!o.preset.empty()) {
        throw validation_error("unknown preset: " + o.preset);
    } else {
        throw validation_error("no data given: pass --data FILE or --preset synthetic");
    }
    hy.validate();

    if (o.target.empty()) throw validation_error("--target is required");
    const HremTarget target = hrem_target_from_string(o.target);
    const HremSampler need = sampler_for(target);
    if (o.sampler == "block" && need == HremSampler::fixed_scan)
        throw validation_error("target " + to_string(target) +
                               " requires the fixed-scan sampler: the block drift function "
                               "does not dominate the square of a precision coordinate");
    if (o.sampler == "fixed-scan" && need == HremSampler::block)
        throw validation_error("target " + to_string(target) +
                               " requires the block sampler: the fixed-scan drift function "
                               "does not dominate its square");
    if (o.sampler != "auto" && o.sampler != "block" && o.sampler != "fixed-scan")
        throw validation_error("--sampler must be auto, block, or fixed-scan");

    json drec;
    drec["record"] = "data";
    drec["groups"] = labels;
    drec["group_means"] = data.ybar;
    drec["group_sizes"] = data.m;
    drec["M"] = data.M;
    drec["sse"] = data.sse;
    drec["grand_mean"] = data.ybar_mean;
    drec["between_ss"] = data.s_sq;
    drec["spread"] = data.delta;
    drec["balanced"] = data.balanced();
    rep.record(drec);

    HremPipelineConfig cfg;
    cfg.lambda_R_block = o.lambda_r_block;
    cfg.phi = o.phi;
    cfg.phi1 = o.phi;
    cfg.phi2 = o.phi;
    cfg.lambda_R_gibbs = o.lambda_r_gibbs;
    cfg.c3_fraction = o.c3_fraction;
    cfg.d = o.d;
    cfg.start = start_from_string(o.start);
    if (!o.cls.empty()) cfg.chain_class = chain_class_from_string(o.cls);

    const HremPipeline pl = hrem_pipeline(data, hy, target, cfg);

    json prec;
    prec["record"] = "pipeline";
    prec["target"] = to_string(target);
    prec["sampler"] = pl.sampler == HremSampler::block ? "block" : "fixed-scan";
    prec["lambda_R"] = pl.drift.lambda_R;
    prec["K_R"] = pl.drift.K_R;
    prec["d_R"] = pl.d_R;
    prec["beta_tilde"] = pl.beta_tilde;
    prec["log_beta_tilde"] = pl.log_beta_tilde;
    prec["chain_class"] = to_string(pl.cls);
    prec["cfv"] = pl.cfv;
    rep.record(prec);
    rep.record(drift_record(pl.dp));

    auto check = [&](const std::string& name, bool pass, double value) {
        json c;
        c["record"] = "check";
        c["name"] = name;
        c["pass"] = pass;
        c["value"] = value;
        rep.record(c);
        if (!pass) throw verification_error("precondition failed: " + name);
    };
    const HremConstants hc = hrem_constants(data, hy);
    check("shape a1 above 3/2", hy.a1 > 1.5, hy.a1);
    if (pl.sampler == HremSampler::fixed_scan)
        check("group sizes within factor 5", 5.0 * data.min_m() > data.max_m(),
              data.max_m() / data.min_m());
    check("minorization weight positive", pl.beta_tilde > 0.0 && pl.beta_tilde < 1.0,
          pl.beta_tilde);
    check("small-set level above conversion floor",
          pl.d_R > 2.0 * pl.drift.K_R / (1.0 - pl.drift.lambda_R), pl.d_R);
    check("delta7 in (0,1)", hc.delta7 > 0.0 && hc.delta7 < 1.0, hc.delta7);

    if (o.mode != "one-walk" && o.mode != "median")
        throw validation_error("--mode must be one-walk or median");
    const OptimizedPlan op =
        optimize_plan(pl.pin, o.eps, o.alpha, o.grid, o.mode == "median", o.a);
    const double mse = mse_bound(op.inputs, pl.pin.start, op.plan.t, op.plan.n);
    check("mse bound within budget at the planned run length",
          mse <= o.eps * o.eps * (op.plan.m > 1 ? o.a : o.alpha) * (1.0 + 1e-9), mse);
    rep.record(optimized_records(op, rep));

    if (o.sweeps >= 1.0) {
        check_budget(o.burn + o.sweeps, g);
        Rng rng(derive_seed(g.seed, 0));
        HremState st = hrem_default_start(data);
        const bool block = pl.sampler == HremSampler::block;
        const auto burn = static_cast<std::size_t>(o.burn);
        const auto sweeps = static_cast<std::size_t>(o.sweeps);
        for (std::size_t i = 0; i < burn; ++i)
            st = block ? block_gibbs_step(st, data, hy, rng) : fixed_scan_step(st, data, hy, rng);
        const std::size_t dim = data.groups() + 3;
        std::vector<double> mean(dim, 0.0), m2(dim, 0.0);
        double tmean = 0.0, tm2 = 0.0;
        for (std::size_t i = 0; i < sweeps; ++i) {
            st = block ? block_gibbs_step(st, data, hy, rng) : fixed_scan_step(st, data, hy, rng);
            auto upd = [&](std::size_t k, double v) {
                const double d1 = v - mean[k];
                mean[k] += d1 / static_cast<double>(i + 1);
                m2[k] += d1 * (v - mean[k]);
            };
            for (std::size_t k = 0; k < data.groups(); ++k) upd(k, st.theta[k]);
            upd(data.groups(), st.mu);
            upd(data.groups() + 1, st.lambda_theta);
            upd(data.groups() + 2, st.lambda_e);
            const double tv = target_value(target, st);
            const double d1 = tv - tmean;
            tmean += d1 / static_cast<double>(i + 1);
            tm2 += d1 * (tv - tmean);
        }
        json post;
        post["record"] = "posterior";
        post["sampler"] = block ? "block" : "fixed-scan";
        post["burn"] = o.burn;
        post["sweeps"] = o.sweeps;
        json tmeans = json::array(), tvars = json::array();
        for (std::size_t k = 0; k < data.groups(); ++k) {
            tmeans.push_back(mean[k]);
            tvars.push_back(m2[k] / static_cast<double>(sweeps));
        }
        post["theta_mean"] = tmeans;
        post["theta_var"] = tvars;
        post["mu_mean"] = mean[data.groups()];
        post["mu_var"] = m2[data.groups()] / static_cast<double>(sweeps);
        post["lambda_theta_mean"] = mean[data.groups() + 1];
        post["lambda_theta_var"] = m2[data.groups() + 1] / static_cast<double>(sweeps);
        post["lambda_e_mean"] = mean[data.groups() + 2];
        post["lambda_e_var"] = m2[data.groups() + 2] / static_cast<double>(sweeps);
        post["target_mean"] = tmean;
        post["target_var"] = tm2 / static_cast<double>(sweeps);
        rep.record(post);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// adaptive-demo

struct AdaptiveOpts {
    std::string policy = "trap";
    double epsilon = 0.1;
    double phi = 0.5;
    double n = 200.0;
    double reps = 10000.0;
};

int run_adaptive_demo(const AdaptiveOpts& o, const Global& g, Report& rep) {
    if (o.policy != "trap" && o.policy != "schedule")
        throw validation_error("--policy must be trap or schedule");
    if (!(o.n >= 1) || !(o.reps >= 1)) throw validation_error("--n and --reps must be >= 1");
    check_budget(o.n * o.reps, g);

    const auto n = static_cast<std::size_t>(o.n);
    const auto reps = static_cast<std::size_t>(o.reps);
    const unsigned workers = g.resolved_workers();

    const unsigned slots = std::max(1u, workers);
    std::vector<std::vector<std::int64_t>> partial(slots, std::vector<std::int64_t>(n + 1, 0));

    parallel_for(reps, workers, [&](std::size_t rep_i) {
        AdaptivePolicy pol =
            o.policy == "trap"
                ? policy_trap(o.epsilon)
                : policy_inhomogeneous(o.phi, o.epsilon, n, derive_seed(g.seed, 2 * rep_i));
        Rng rng(derive_seed(g.seed, 2 * rep_i + 1));
        const std::vector<int> path = run_adaptive(pol, 0, n, rng);
        std::vector<std::int64_t>& mine = partial[rep_i % slots];
        for (std::size_t i = 0; i <= n; ++i) mine[i] += path[i];
    });

    std::vector<std::int64_t> count1(n + 1, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i <= n; ++i) count1[i] += p[i];

    json sum;
    sum["record"] = "adaptive";
    sum["policy"] = o.policy;
    sum["epsilon"] = o.epsilon;
    if (o.policy == "schedule") sum["phi"] = o.phi;
    sum["n"] = o.n;
    sum["reps"] = o.reps;
    sum["limit_freq1"] = o.policy == "trap" ? trap_stationary_p1(o.epsilon) : 0.5;
    rep.record(sum);

    if (rep.json_mode()) {
        for (std::size_t i = 0; i <= n; ++i) {
            const double f1 = static_cast<double>(count1[i]) / static_cast<double>(reps);
            json rec;
            rec["record"] = "occupation";
            rec["step"] = i;
            rec["freq0"] = 1.0 - f1;
            rec["freq1"] = f1;
            rep.record(rec);
        }
    } else {
        rep.text("step,freq0,freq1");
        std::ostringstream row;
        for (std::size_t i = 0; i <= n; ++i) {
            const double f1 = static_cast<double>(count1[i]) / static_cast<double>(reps);
            row.str("");
            row << i << ',' << json(1.0 - f1).dump() << ',' << json(f1).dump();
            rep.text(row.str());
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const Global& g, Report& rep) {
    AcceptanceOptions opt;
    opt.seed = g.seed;
    opt.workers = g.resolved_workers();
    opt.quick = g.quick;
    const std::vector<CheckResult> results = run_acceptance(opt);

    std::size_t passed = 0;
    for (const CheckResult& r : results) {
        if (r.pass) ++passed;
        if (rep.json_mode()) {
            json rec;
            rec["record"] = "check";
            rec["name"] = r.name;
            rec["pass"] = r.pass;
            rec["detail"] = r.detail;
            rep.record(rec);
        } else {
            rep.text(std::string(r.pass ? "[PASS] " : "[FAIL] ") + r.name +
                     (r.detail.empty() ? "" : " (" + r.detail + ")"));
        }
        std::cerr << r.name << ": " << r.seconds << "s\n";
    }
    json sum;
    sum["record"] = "summary";
    sum["passed"] = passed;
    sum["total"] = results.size();
    sum["pass"] = passed == results.size();
    rep.record(sum);
    return passed == results.size() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified Markov chain Monte Carlo planning and diagnostics"};
    app.option_defaults()->always_capture_default(true);
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file; flags override the file");

    Global g;
    app.add_option("--seed", g.seed, "master seed; every stream seed is derived from it");
    app.add_option("--workers", g.workers, "worker threads (0 = hardware concurrency)");
    app.add_flag("--json", g.as_json, "emit JSON-lines records instead of text");
    app.add_option("--out", g.out, "write the report to this file instead of stdout");
    app.add_flag("--force", g.force, "run even when the planned cost exceeds --budget");
    app.add_flag("--quick", g.quick, "shrink the long self-check simulations");
    app.add_option("--budget", g.budget, "simulation step cap for non-forced runs");

    HyperOpts hyo;
    auto* m0_opt = app.add_option("--m0", hyo.m0, "prior mean of mu");
    app.add_option("--s0", hyo.s0, "prior precision of mu");
    app.add_option("--a1", hyo.a1, "shape of the lambda_theta prior");
    app.add_option("--b1", hyo.b1, "rate of the lambda_theta prior");
    app.add_option("--a2", hyo.a2, "shape of the lambda_e prior");
    app.add_option("--b2", hyo.b2, "rate of the lambda_e prior");

    RatesOpts ro;
    auto* rates = app.add_subcommand(
        "rates", "convergence-rate certificate (rho, M over a gamma grid) from a drift");
    rates->fallthrough();
    rates->add_option("--preset", ro.preset, "named chain: contracting-normals");
    rates->add_option("--theta", ro.theta, "autoregression coefficient");
    rates->add_option("--c", ro.c, "small-set half-width");
    auto* r_bt = rates->add_option("--beta-tilde", ro.beta_tilde, "minorization weight");
    rates->add_option("--beta", ro.beta, "aperiodicity constant (default beta_tilde * nu(C))");
    auto* r_la = rates->add_option("--lambda", ro.lambda, "contraction factor off the small set");
    auto* r_k = rates->add_option("--K", ro.K, "drift level on the small set");
    rates->add_option("--v-floor", ro.v_floor, "infimum of the drift function");
    rates->add_option("--nu-on-c", ro.nu_on_c, "mass the minorization law puts on the small set");
    rates->add_option("--pi-c", ro.pi_c, "stationary mass bound for the small set");
    rates->add_option("--chain-class", ro.cls,
                      "general, self-adjoint, or self-adjoint-positive");
    rates->add_option("--r", ro.r, "secondary drift exponent (V^{1/r})");
    rates->add_option("--grid", ro.grid, "number of automatic gamma grid points");
    rates->add_option("--gamma", ro.gammas, "explicit gamma grid points");

    PlanOpts po;
    auto* plan = app.add_subcommand("plan", "certified run plan (t, n, m) for a target accuracy");
    plan->fallthrough();
    plan->add_option("--preset", po.chain.preset,
                     "named chain: contracting-normals or table55");
    plan->add_option("--row", po.row, "reference row for --preset table55 (1-3)");
    plan->add_option("--theta", po.chain.theta, "autoregression coefficient");
    plan->add_option("--c", po.chain.c, "small-set half-width");
    auto* p_bt = plan->add_option("--beta-tilde", po.chain.beta_tilde, "minorization weight");
    plan->add_option("--beta", po.chain.beta, "aperiodicity constant");
    auto* p_la = plan->add_option("--lambda", po.chain.lambda, "contraction factor");
    auto* p_k = plan->add_option("--K", po.chain.K, "drift level on the small set");
    plan->add_option("--v-floor", po.chain.v_floor, "infimum of the drift function");
    plan->add_option("--nu-on-c", po.chain.nu_on_c, "minorization mass on the small set");
    plan->add_option("--pi-c", po.chain.pi_c, "stationary mass bound for the small set");
    plan->add_option("--chain-class", po.chain.cls,
                     "general, self-adjoint, or self-adjoint-positive");
    auto* p_mode = plan->add_option("--mode", po.mode, "one-walk or median");
    auto* p_eps = plan->add_option("--eps", po.eps, "absolute accuracy target");
    auto* p_alpha = plan->add_option("--alpha", po.alpha, "failure probability");
    plan->add_option("--a", po.a, "per-walk failure level for the median scheme");
    plan->add_option("--grid", po.grid, "gamma grid size for the rate search");
    plan->add_option("--cfv", po.cfv, "bound on sup (f - shift)^p / V before centering");
    plan->add_option("--p", po.p, "moment exponent");
    plan->add_option("--r", po.r, "secondary drift exponent");
    plan->add_option("--v-x0", po.v_x0, "drift value at the start point");
    plan->add_option("--init-gap", po.init_gap, "weighted gap of the start distribution");
    plan->add_option("--start", po.start, "deterministic, stationary, or gap");

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "run a chain and report estimate and variance");
    sim->fallthrough();
    sim->add_option("--chain", so.chain, "ar1, five-state, or two-state");
    sim->add_option("--theta", so.theta, "autoregression coefficient");
    sim->add_option("--c", so.c, "small-set half-width for the split kernel");
    sim->add_option("--f", so.f, "identity, square, or one-plus-square");
    sim->add_option("--t", so.t, "burn-in steps");
    sim->add_option("--n", so.n, "averaging steps per walk");
    sim->add_option("--m", so.m, "independent walks (median of estimates when > 1)");
    sim->add_flag("--split", so.split, "attach regeneration indicators");
    sim->add_option("--skeleton", so.skeleton, "skeleton stride for finite-chain splits");
    sim->add_option("--epsilon", so.epsilon, "skeleton minorization weight");
    sim->add_option("--x0", so.x0, "start state");
    sim->add_option("--dump-trace", so.trace_path, "write the walk-0 path as CSV to this file");

    HremOpts ho;
    auto* hrem = app.add_subcommand(
        "hrem", "drift, minorization, and a certified plan for the random-effects sampler");
    hrem->fallthrough();
    hrem->add_option("--data", ho.data_path, "CSV observations with header group,y");
    hrem->add_option("--preset", ho.preset, "named dataset: synthetic");
    hrem->add_option("--target", ho.target, "mu, theta<i>, lambda-theta, or lambda-e");
    hrem->add_option("--sampler", ho.sampler, "auto, block, or fixed-scan");
    hrem->add_option("--chain-class", ho.cls, "override the chain class");
    hrem->add_option("--lambda-r-block", ho.lambda_r_block, "block drift contraction target");
    hrem->add_option("--phi", ho.phi, "block drift weight");
    hrem->add_option("--lambda-r-gibbs", ho.lambda_r_gibbs,
                     "fixed-scan drift contraction target");
    hrem->add_option("--c3-fraction", ho.c3_fraction,
                     "exponential tilt as a fraction of min(b1, b2)");
    hrem->add_option("--d", ho.d, "free parameter of the small-set conversion");
    hrem->add_option("--eps", ho.eps, "absolute accuracy target");
    hrem->add_option("--alpha", ho.alpha, "failure probability");
    hrem->add_option("--mode", ho.mode, "one-walk or median");
    hrem->add_option("--a", ho.a, "per-walk failure level for the median scheme");
    hrem->add_option("--grid", ho.grid, "gamma grid size for the rate search");
    hrem->add_option("--sweeps", ho.sweeps, "posterior sweeps to simulate (0 = none)");
    hrem->add_option("--burn", ho.burn, "sweeps discarded before averaging");
    hrem->add_option("--start", ho.start, "deterministic, stationary, or gap");

    AdaptiveOpts ao;
    auto* ad = app.add_subcommand("adaptive-demo",
                                  "per-step occupation frequencies of an adaptive rule");
    ad->fallthrough();
    ad->add_option("--policy", ao.policy, "trap or schedule");
    ad->add_option("--epsilon", ao.epsilon, "laziness of the second kernel");
    ad->add_option("--phi", ao.phi, "per-step probability of the first kernel (schedule)");
    ad->add_option("--n", ao.n, "steps per replication");
    ad->add_option("--reps", ao.reps, "independent replications");

    auto* verify = app.add_subcommand("verify", "run the full self-check suite");
    verify->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ro.drift_given = r_bt->count() > 0 && r_la->count() > 0 && r_k->count() > 0;
    po.chain.drift_given = p_bt->count() > 0 && p_la->count() > 0 && p_k->count() > 0;
    po.eps_given = p_eps->count() > 0;
    po.alpha_given = p_alpha->count() > 0;
    po.mode_given = p_mode->count() > 0;
    hyo.m0_given = m0_opt->count() > 0;

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string cmd = sub->get_name();
        const std::uint64_t cfg_hash = fnv1a(cmd + "\n" + app.config_to_str(true, false));

        Report rep(g.as_json, g.out);
        rep.record(run_header(cmd, g, cfg_hash));

        if (cmd == "rates") return run_rates(ro, g, rep);
        if (cmd == "plan") return run_plan(po, g, rep);
        if (cmd == "simulate") return run_simulate(so, g, rep);
        if (cmd == "hrem") return run_hrem(ho, hyo, g, rep);
        if (cmd == "adaptive-demo") return run_adaptive_demo(ao, g, rep);
        if (cmd == "verify") return run_verify(g, rep);
        throw validation_error("unknown command: " + cmd);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const verification_error& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
