#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcmccert/adaptive.hpp"
#include "mcmccert/chains.hpp"
#include "mcmccert/drift.hpp"
#include "mcmccert/errors.hpp"
#include "mcmccert/hrem.hpp"
#include "mcmccert/planner.hpp"
#include "mcmccert/ratebounds.hpp"
#include "mcmccert/regen.hpp"
#include "mcmccert/rng.hpp"
#include "mcmccert/verify.hpp"

namespace py = pybind11;
using namespace mcmccert;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Computable geometric-ergodicity certificates and certified run plans "
              "for Markov chain Monte Carlo";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<verification_error>(m, "VerificationError", PyExc_RuntimeError);

    // drift certificates -----------------------------------------------------
    py::class_<DriftParams>(m, "DriftParams")
        .def(py::init<>())
        .def_readwrite("beta_tilde", &DriftParams::beta_tilde)
        .def_readwrite("beta", &DriftParams::beta)
        .def_readwrite("lambda_", &DriftParams::lambda)
        .def_readwrite("K", &DriftParams::K)
        .def_readwrite("v_floor", &DriftParams::v_floor)
        .def_readwrite("nu_on_C", &DriftParams::nu_on_C)
        .def_readwrite("pi_C", &DriftParams::pi_C)
        .def("atomic", &DriftParams::atomic)
        .def("validate", &DriftParams::validate);

    m.def("power_transform", &power_transform, py::arg("dp"), py::arg("r"));
    m.def("pi_v_bound", &pi_v_bound, py::arg("dp"));
    m.def("centered_fv_bound", &centered_fv_bound, py::arg("cfv"), py::arg("dp"), py::arg("p"));

    py::class_<RosenthalDrift>(m, "RosenthalDrift")
        .def(py::init([](double lambda_R, double K_R, double d_R, double beta_tilde_R) {
                 RosenthalDrift rd;
                 rd.lambda_R = lambda_R;
                 rd.K_R = K_R;
                 rd.d_R = d_R;
                 rd.beta_tilde_R = beta_tilde_R;
                 return rd;
             }),
             py::arg("lambda_R"), py::arg("K_R"), py::arg("d_R"), py::arg("beta_tilde_R"))
        .def_readwrite("lambda_R", &RosenthalDrift::lambda_R)
        .def_readwrite("K_R", &RosenthalDrift::K_R)
        .def_readwrite("d_R", &RosenthalDrift::d_R)
        .def_readwrite("beta_tilde_R", &RosenthalDrift::beta_tilde_R)
        .def("validate", &RosenthalDrift::validate);

    m.def("rt_level", &rt_level, py::arg("rd"), py::arg("d"));
    m.def("rosenthal_to_baxendale", &rosenthal_to_baxendale, py::arg("rd"), py::arg("d"));
    m.def("optimize_pi_v_bound", &optimize_pi_v_bound, py::arg("rd"),
          py::arg("d_grid") = default_d_grid());

    // rate bounds -------------------------------------------------------------
    py::enum_<ChainClass>(m, "ChainClass")
        .value("general", ChainClass::general)
        .value("self_adjoint", ChainClass::self_adjoint)
        .value("self_adjoint_positive", ChainClass::self_adjoint_positive);
    m.def("chain_class_from_string", &chain_class_from_string, py::arg("s"));

    py::class_<Geometry>(m, "Geometry")
        .def_readonly("alpha1", &Geometry::alpha1)
        .def_readonly("alpha2", &Geometry::alpha2)
        .def_readonly("R0", &Geometry::R0)
        .def_readonly("D0", &Geometry::D0);
    m.def("geometry", &geometry, py::arg("dp"));

    py::class_<RhoResult>(m, "RhoResult")
        .def_readonly("chain_class", &RhoResult::chain_class)
        .def_readonly("atomic", &RhoResult::atomic)
        .def_readonly("rho", &RhoResult::rho)
        .def_readonly("one_minus_rho", &RhoResult::one_minus_rho)
        .def_readonly("R_used", &RhoResult::R_used)
        .def_readonly("L_used", &RhoResult::L_used)
        .def_readonly("geo", &RhoResult::geo);
    m.def("rho_bound", &rho_bound, py::arg("dp"), py::arg("chain_class"));

    py::class_<BigM>(m, "BigM")
        .def_readonly("value", &BigM::value)
        .def_readonly("log_value", &BigM::log_value);
    m.def("big_m", &big_m, py::arg("dp"), py::arg("rho"), py::arg("gamma"));

    // planning ----------------------------------------------------------------
    py::enum_<StartKind>(m, "StartKind")
        .value("stationary", StartKind::stationary)
        .value("distribution_gap", StartKind::distribution_gap)
        .value("deterministic", StartKind::deterministic);

    py::class_<RateBoundPair>(m, "RateBoundPair")
        .def(py::init<>())
        .def_readwrite("M", &RateBoundPair::M)
        .def_readwrite("log_M", &RateBoundPair::log_M)
        .def_readwrite("gamma", &RateBoundPair::gamma)
        .def_readwrite("one_minus_gamma", &RateBoundPair::one_minus_gamma);

    py::class_<MseInputs>(m, "MseInputs")
        .def(py::init<>())
        .def_readwrite("fc_norm", &MseInputs::fc_norm)
        .def_readwrite("pi_v", &MseInputs::pi_v)
        .def_readwrite("init_gap", &MseInputs::init_gap)
        .def_readwrite("v_x0", &MseInputs::v_x0)
        .def_readwrite("rate_v", &MseInputs::rate_v)
        .def_readwrite("rate_vr", &MseInputs::rate_vr)
        .def_readwrite("p", &MseInputs::p)
        .def_readwrite("r", &MseInputs::r)
        .def("validate", &MseInputs::validate);

    m.def("asym_var_factor", &asym_var_factor, py::arg("inputs"));
    m.def("mse_bound", &mse_bound, py::arg("inputs"), py::arg("start"), py::arg("t"),
          py::arg("n"));

    py::class_<Plan>(m, "Plan")
        .def_readonly("t", &Plan::t)
        .def_readonly("n", &Plan::n)
        .def_readonly("m", &Plan::m)
        .def_readonly("total_cost", &Plan::total_cost)
        .def_readonly("b", &Plan::b)
        .def_readonly("c_tilde", &Plan::c_tilde)
        .def_readonly("log_b", &Plan::log_b)
        .def_readonly("log_c_tilde", &Plan::log_c_tilde)
        .def_readonly("A", &Plan::A)
        .def_readonly("eps", &Plan::eps)
        .def_readonly("alpha", &Plan::alpha)
        .def_readonly("start", &Plan::start);

    m.def("plan_one_walk", &plan_one_walk, py::arg("inputs"), py::arg("eps"), py::arg("alpha"),
          py::arg("start") = StartKind::deterministic);
    m.def("median_m", &median_m, py::arg("alpha"), py::arg("a"));
    m.def("plan_median", &plan_median, py::arg("inputs"), py::arg("eps"), py::arg("alpha"),
          py::arg("a") = 0.11969, py::arg("start") = StartKind::deterministic);

    py::class_<PipelineInputs>(m, "PipelineInputs")
        .def(py::init<>())
        .def_readwrite("dp", &PipelineInputs::dp)
        .def_readwrite("cls", &PipelineInputs::cls)
        .def_readwrite("p", &PipelineInputs::p)
        .def_readwrite("r", &PipelineInputs::r)
        .def_readwrite("fc_norm", &PipelineInputs::fc_norm)
        .def_readwrite("pi_v", &PipelineInputs::pi_v)
        .def_readwrite("v_x0", &PipelineInputs::v_x0)
        .def_readwrite("init_gap", &PipelineInputs::init_gap)
        .def_readwrite("start", &PipelineInputs::start);

    py::class_<OptimizedPlan>(m, "OptimizedPlan")
        .def_readonly("plan", &OptimizedPlan::plan)
        .def_readonly("j", &OptimizedPlan::j)
        .def_readonly("j_r", &OptimizedPlan::j_r)
        .def_readonly("rho_v", &OptimizedPlan::rho_v)
        .def_readonly("rho_vr", &OptimizedPlan::rho_vr)
        .def_readonly("inputs", &OptimizedPlan::inputs);

    m.def("optimize_plan", &optimize_plan, py::arg("inputs"), py::arg("eps"), py::arg("alpha"),
          py::arg("grid_n") = 20, py::arg("median") = false, py::arg("a") = 0.11969);

    // chains --------------------------------------------------------------
    m.def("cn_drift", &cn_drift, py::arg("theta"), py::arg("c"));

    py::class_<FiniteChain>(m, "FiniteChain")
        .def(py::init<Eigen::MatrixXd>(), py::arg("P"))
        .def("size", &FiniteChain::size)
        .def_property_readonly("P", &FiniteChain::P)
        .def("stationary", &FiniteChain::stationary)
        .def("asym_var", &FiniteChain::asym_var, py::arg("f"));
    m.def("five_state_chain", &five_state_chain);
    m.def("five_state_nu4", &five_state_nu4);
    m.def("two_state_chain", &two_state_chain);
    m.def("two_state_nu", &two_state_nu);

    // estimation ------------------------------------------------------------
    py::class_<TourBlocks>(m, "TourBlocks")
        .def(py::init<>())
        .def_readwrite("s", &TourBlocks::s)
        .def_readwrite("N", &TourBlocks::N)
        .def("count", &TourBlocks::count);

    py::class_<RegenEstimates>(m, "RegenEstimates")
        .def_readonly("I_hat", &RegenEstimates::I_hat)
        .def_readonly("xi_sq", &RegenEstimates::xi_sq)
        .def_readonly("N_bar", &RegenEstimates::N_bar)
        .def_readonly("R", &RegenEstimates::R);

    m.def("regen_estimates", &regen_estimates, py::arg("blocks"));
    m.def("regen_sigma2", &regen_sigma2, py::arg("blocks"), py::arg("epsilon"), py::arg("pi_C"),
          py::arg("m"));
    m.def("batch_means_var", &batch_means_var, py::arg("samples"), py::arg("theta_b") = 0.5);
    m.def("estimate_median", &estimate_median, py::arg("walk_estimates"));
    m.def("ks_two_sample_p", &ks_two_sample_p, py::arg("a"), py::arg("b"));

    // hierarchical random effects --------------------------------------------
    py::class_<HremHyper>(m, "HremHyper")
        .def(py::init<>())
        .def_readwrite("m0", &HremHyper::m0)
        .def_readwrite("s0", &HremHyper::s0)
        .def_readwrite("a1", &HremHyper::a1)
        .def_readwrite("b1", &HremHyper::b1)
        .def_readwrite("a2", &HremHyper::a2)
        .def_readwrite("b2", &HremHyper::b2);

    py::class_<HremData>(m, "HremData")
        .def_readonly("ybar", &HremData::ybar)
        .def_readonly("m", &HremData::m)
        .def_readonly("M", &HremData::M)
        .def_readonly("sse", &HremData::sse)
        .def_readonly("ybar_mean", &HremData::ybar_mean)
        .def_readonly("s_sq", &HremData::s_sq)
        .def_readonly("delta", &HremData::delta)
        .def("balanced", &HremData::balanced);

    m.def("hrem_data_from_groups", &hrem_data_from_groups, py::arg("groups"), py::arg("m0"));
    m.def("hrem_data_from_summary", &hrem_data_from_summary, py::arg("ybar"), py::arg("m"),
          py::arg("sse"), py::arg("m0"));

    py::enum_<HremSampler>(m, "HremSampler")
        .value("block", HremSampler::block)
        .value("fixed_scan", HremSampler::fixed_scan);

    py::class_<HremTarget>(m, "HremTarget")
        .def_property_readonly("name", [](const HremTarget& t) { return to_string(t); });
    m.def("hrem_target", &hrem_target_from_string, py::arg("name"));
    m.def("hrem_sampler_for", &sampler_for, py::arg("target"));

    m.def("block_minorization", &block_minorization, py::arg("d_R"), py::arg("phi1"),
          py::arg("phi2"), py::arg("hyper"), py::arg("data"));

    py::class_<GibbsMinorization>(m, "GibbsMinorization")
        .def_readonly("value", &GibbsMinorization::value)
        .def_readonly("log_value", &GibbsMinorization::log_value)
        .def_readonly("underflowed", &GibbsMinorization::underflowed);
    m.def("gibbs_minorization", &gibbs_minorization, py::arg("d_R"), py::arg("c3"),
          py::arg("data"), py::arg("hyper"));

    py::class_<HremPipeline>(m, "HremPipeline")
        .def_readonly("sampler", &HremPipeline::sampler)
        .def_readonly("d_R", &HremPipeline::d_R)
        .def_readonly("beta_tilde", &HremPipeline::beta_tilde)
        .def_readonly("log_beta_tilde", &HremPipeline::log_beta_tilde)
        .def_readonly("dp", &HremPipeline::dp)
        .def_readonly("cls", &HremPipeline::cls)
        .def_readonly("cfv", &HremPipeline::cfv)
        .def_readonly("pin", &HremPipeline::pin);
    m.def(
        "hrem_pipeline",
        [](const HremData& data, const HremHyper& hy, const std::string& target) {
            return hrem_pipeline(data, hy, hrem_target_from_string(target));
        },
        py::arg("data"), py::arg("hyper"), py::arg("target"));

    // adaptive kernels --------------------------------------------------------
    m.def("trap_stationary_p1", &trap_stationary_p1, py::arg("eps"));

    // misc ----------------------------------------------------------------
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

    m.def(
        "run_acceptance",
        [](std::uint64_t seed, unsigned workers, bool quick) {
            AcceptanceOptions opt;
            opt.seed = seed;
            opt.workers = workers;
            opt.quick = quick;
            py::list out;
            for (const CheckResult& r : run_acceptance(opt))
                out.append(py::make_tuple(r.name, r.pass, r.detail, r.seconds));
            return out;
        },
        py::arg("seed") = 20260815ULL, py::arg("workers") = 1, py::arg("quick") = false,
        "Run the self-check suite; returns (name, pass, detail, seconds) tuples.");
}
