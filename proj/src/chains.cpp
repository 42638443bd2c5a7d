#include "mcmccert/chains.hpp"

#include <cmath>
#include <limits>

#include "mcmccert/errors.hpp"
#include "mcmccert/special.hpp"

namespace mcmccert {

ContractingNormals::ContractingNormals(double theta_) : theta(theta_) {
    if (!(std::fabs(theta) < 1.0))
        throw validation_error("ContractingNormals: need |theta| < 1");
}

double ContractingNormals::step(double x, Rng& rng) const {
    return theta * x + sigma() * rng.normal();
}

double ContractingNormals::log_density(double y, double x) const {
    const double s = sigma();
    const double z = (y - theta * x) / s;
    return -0.5 * z * z - std::log(s) - 0.9189385332046727;  // log sqrt(2 pi)
}

CnMinorization cn_minorization(double theta, double c) {
    if (!(std::fabs(theta) < 1.0)) throw validation_error("cn_minorization: need |theta| < 1");
    if (!(c > 0.0)) throw validation_error("cn_minorization: need c > 0");
    CnMinorization m;
    m.theta = theta;
    m.c = c;
    m.sigma = std::sqrt(1.0 - theta * theta);
    const double at = std::fabs(theta);
    m.beta_tilde =
        2.0 * (normal_cdf((1.0 + at) * c / m.sigma) - normal_cdf(at * c / m.sigma));
    return m;
}

double CnMinorization::s(double x) const { return std::fabs(x) <= c ? beta_tilde : 0.0; }

double CnMinorization::log_nu_density(double y) const {
    if (std::fabs(y) > c) return -std::numeric_limits<double>::infinity();
    const double z = (std::fabs(y) + std::fabs(theta) * c) / sigma;
    return -0.5 * z * z - 0.9189385332046727 - std::log(sigma) - std::log(beta_tilde);
}

DriftParams cn_drift(double theta, double c) {
    if (!(std::fabs(theta) < 1.0)) throw validation_error("cn_drift: need |theta| < 1");
    if (!(c > 1.0)) throw validation_error("cn_drift: need c > 1");
    DriftParams dp;
    dp.lambda = theta * theta + 2.0 * (1.0 - theta * theta) / (1.0 + c * c);
    dp.K = 2.0 + theta * theta * (c * c - 1.0);
    dp.beta_tilde = cn_minorization(theta, c).beta_tilde;
    dp.nu_on_C = 1.0;
    dp.beta = dp.beta_tilde;
    dp.v_floor = 1.0;
    dp.pi_C = 1.0;
    dp.v_eval = [](double x) { return 1.0 + x * x; };
    dp.validate();
    return dp;
}

FiniteChain::FiniteChain(Eigen::MatrixXd P) : P_(std::move(P)) {
    if (P_.rows() != P_.cols() || P_.rows() < 2)
        throw validation_error("FiniteChain: P must be square with >= 2 states");
    for (int i = 0; i < P_.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < P_.cols(); ++j) {
            if (P_(i, j) < 0.0) throw validation_error("FiniteChain: negative entry");
            row += P_(i, j);
        }
        if (std::fabs(row - 1.0) > 1e-12)
            throw validation_error("FiniteChain: row does not sum to 1");
    }
}

Eigen::VectorXd FiniteChain::stationary() const {
    const int n = size();
    Eigen::MatrixXd A = P_.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    for (int i = 0; i < n; ++i)
        if (pi(i) < -1e-12) throw numeric_error("FiniteChain: stationary solve failed");
    return pi.cwiseMax(0.0);
}

Eigen::MatrixXd FiniteChain::fundamental(const Eigen::VectorXd& pi) const {
    const int n = size();
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(n, n) - P_ + Eigen::VectorXd::Ones(n) * pi.transpose();
    return A.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

double FiniteChain::asym_var(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd pi = stationary();
    const Eigen::MatrixXd Z = fundamental(pi);
    const double mean = pi.dot(f);
    const Eigen::VectorXd fb = f.array() - mean;
    const Eigen::VectorXd g = 2.0 * (Z * fb) - fb;
    return (pi.array() * fb.array() * g.array()).sum();
}

int FiniteChain::step(int x, Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    for (int j = 0; j < size(); ++j) {
        acc += P_(x, j);
        if (u < acc) return j;
    }
    return size() - 1;
}

FiniteChain five_state_chain() {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(5, 5);
    P(0, 1) = 0.5;
    P(0, 2) = 0.5;
    P(1, 1) = 0.5;
    P(1, 3) = 0.5;
    P(2, 2) = 0.5;
    P(2, 4) = 0.5;
    P(3, 0) = 1.0;
    P(4, 0) = 1.0;
    return FiniteChain(P);
}

Eigen::VectorXd five_state_nu4() {
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(5);
    nu(3) = 0.5;
    nu(4) = 0.5;
    return nu;
}

FiniteChain two_state_chain() {
    Eigen::MatrixXd P(2, 2);
    P << 0.7, 0.3, 0.4, 0.6;
    return FiniteChain(P);
}

Eigen::VectorXd two_state_nu() {
    Eigen::VectorXd nu(2);
    nu << 4.0 / 7.0, 3.0 / 7.0;
    return nu;
}

}  // namespace mcmccert
