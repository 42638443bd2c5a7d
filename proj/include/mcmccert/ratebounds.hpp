#pragma once

#include <string>

#include "mcmccert/drift.hpp"

namespace mcmccert {

enum class ChainClass { general, self_adjoint, self_adjoint_positive };

const char* to_string(ChainClass c);
ChainClass chain_class_from_string(const std::string& s);

// Derived exponents and the radius of the region where the weighted return
// time generating function is finite.  D0 = R0 - 1 kept separately: for very
// slowly mixing chains R0 - 1 underflows the spacing of doubles near 1.
struct Geometry {
    double alpha1 = 0.0;
    double alpha2 = 1.0;
    double R0 = 0.0;
    double D0 = 0.0;
};

Geometry geometry(const DriftParams& dp);

// L(R) for 1 < R < R0 (infinite at R0).  D = R - 1.
double L_of_D(const DriftParams& dp, const Geometry& geo, double D);

// Unique root r in (1, R) of (r-1) / (r log^2(R/r)) = e^2 beta (R-1) / (8(L-1)).
// Returned both as r and s = r - 1; s stays meaningful when r rounds to 1.
struct R1Result {
    double r = 0.0;
    double s = 0.0;
};
R1Result solve_r1(double beta, double R, double L);
// Careful variant: D = R - 1 and L_minus_1 = L - 1 passed directly so callers
// with nearly-degenerate geometry do not lose precision forming R and L.
R1Result solve_r1_d(double beta, double D, double L_minus_1);

// Convergence-rate bound rho for the chain class, with the quantities the
// M-bound needs downstream.  one_minus_rho is the authoritative value; rho
// itself can round to 1 when the gap is below the double spacing at 1.
struct RhoResult {
    ChainClass chain_class = ChainClass::general;
    bool atomic = false;
    double rho = 0.0;
    double one_minus_rho = 0.0;
    double R_used = 0.0;    // R entering the general-class root (or R2 / R0)
    double D_used = 0.0;    // R_used - 1
    double L_used = 0.0;    // L at R_used (may be +inf)
    double Lm1_used = 0.0;  // L_used - 1, kept separately for precision
    Geometry geo;
};

RhoResult rho_bound(const DriftParams& dp, ChainClass cls);

// Prefactor M(gamma) with ||P^n f - pi f||_V <= M gamma^n ||f||_V for
// gamma in (rho, 1).  log_value is always finite when the bound is
// mathematically finite; value may overflow to +inf.
struct BigM {
    double value = 0.0;
    double log_value = 0.0;
};

BigM big_m(const DriftParams& dp, const RhoResult& rho, double gamma);
// Careful variant: one_minus_gamma is authoritative (gamma = 1 - one_minus_gamma).
BigM big_m_omg(const DriftParams& dp, const RhoResult& rho, double one_minus_gamma);

}  // namespace mcmccert
