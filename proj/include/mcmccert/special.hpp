#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mcmccert {

// Standard normal cdf / complementary cdf / density.
double normal_cdf(double x);
double normal_sf(double x);
double normal_pdf(double x);

// Inverse standard normal cdf, p in (0,1).  Accurate to ~1e-15 over the full
// range (Wichura-style rational approximations).
double normal_ppf(double p);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// a > 0, x >= 0.  P by series for x < a+1, continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// log(P) and log(Q) variants that stay finite when the direct value
// underflows; fall back to log of the direct value when representable.
double log_gamma_q(double a, double x);

// Nodes and weights for n-point Gauss-Legendre quadrature on [a,b].
std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b);

// log(1 - exp(x)) for x < 0, stable near both ends.
double log1mexp(double x);

// log of the normal tail / cdf, finite far into the tail where the direct
// value underflows.
double log_normal_sf(double z);
double log_normal_cdf(double x);

}  // namespace mcmccert
