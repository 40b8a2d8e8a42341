#include "specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace jm {

namespace {
constexpr double pi = std::numbers::pi;

bool near_integer(double v, double tol = 1e-12) { return std::abs(v - std::round(v)) < tol; }
}  // namespace

std::vector<cplx> gegenbauer_seq(int n_max, double a, cplx x) {
    std::vector<cplx> C(n_max + 1);
    C[0] = 1.0;
    if (n_max >= 1) C[1] = 2.0 * a * x;
    for (int n = 1; n < n_max; ++n)
        C[n + 1] = (2.0 * (n + a) * x * C[n] - (n + 2.0 * a - 1.0) * C[n - 1]) / double(n + 1);
    return C;
}

std::vector<cplx> assoc_gegenbauer_seq(int n_max, double a, cplx x) {
    // 2(n+a+1) x C_n = (n+2a) C_{n-1} + (n+2) C_{n+1}, C_{-1} = 0
    std::vector<cplx> C(n_max + 1);
    C[0] = 1.0;
    if (n_max >= 1) C[1] = (a + 1.0) * x;
    for (int n = 1; n < n_max; ++n)
        C[n + 1] = (2.0 * (n + a + 1.0) * x * C[n] - (n + 2.0 * a) * C[n - 1]) / double(n + 2);
    return C;
}

std::vector<cplx> laguerre_seq(int n_max, double beta, cplx y) {
    std::vector<cplx> L(n_max + 1);
    L[0] = 1.0;
    if (n_max >= 1) L[1] = beta + 1.0 - y;
    for (int n = 1; n < n_max; ++n)
        L[n + 1] = ((2.0 * n + beta + 1.0 - y) * L[n] - (n + beta) * L[n - 1]) / double(n + 1);
    return L;
}

std::vector<cplx> assoc_laguerre_seq(int n_max, double nu, cplx x) {
    // (2(n+1)+nu+1-x) L_n = (n+1+nu) L_{n-1} + (n+2) L_{n+1}, L_{-1} = 0
    std::vector<cplx> L(n_max + 1);
    L[0] = 1.0;
    if (n_max >= 1) L[1] = (nu + 3.0 - x) / 2.0;
    for (int n = 1; n < n_max; ++n)
        L[n + 1] = ((2.0 * n + nu + 3.0 - x) * L[n] - (n + 1.0 + nu) * L[n - 1]) / double(n + 2);
    return L;
}

double log_gamma_ratio(double a, double b) { return std::lgamma(a) - std::lgamma(b); }

namespace {

// Integral of sin(phi)^q along the straight segment from theta to pi/2.
// Used only for 1 < q < 3 where the integrand is smooth on the path.
cplx smooth_sine_power_integral(double q, cplx theta) {
    using GL = boost::math::quadrature::gauss<double, 30>;
    const cplx end(pi / 2, 0.0);
    const cplx span = end - theta;
    const int segments = std::max(4, int(std::ceil(4.0 * std::abs(span))));
    const auto& abs_ = GL::abscissa();
    const auto& wts = GL::weights();
    cplx total = 0.0;
    for (int s = 0; s < segments; ++s) {
        const cplx a = theta + span * (double(s) / segments);
        const cplx h = span / double(segments);
        const cplx mid = a + 0.5 * h;
        cplx part = 0.0;
        for (std::size_t i = 0; i < abs_.size(); ++i) {
            const double t = abs_[i];
            const double w = wts[i];
            if (t == 0.0) {
                part += w * std::pow(std::sin(mid), q);
            } else {
                part += w * (std::pow(std::sin(mid + 0.5 * h * t), q) +
                             std::pow(std::sin(mid - 0.5 * h * t), q));
            }
        }
        total += 0.5 * h * part;
    }
    return total;
}

}  // namespace

cplx sine_power_integral(double p, cplx theta, cplx sin_theta, cplx cos_theta) {
    // Reduce to a base order p0 with a closed form or a smooth integrand, then
    // climb with 2p K_{p+1} = cos(theta) sin(theta)^(-2p) + (2p-1) K_p.
    double p0;
    cplx K;
    if (near_integer(p - 0.5)) {
        p0 = 0.5;
        K = pi / 2 - theta;
    } else if (near_integer(p)) {
        p0 = 1.0;
        K = std::log((1.0 + cos_theta) / sin_theta);
    } else {
        p0 = p - std::ceil(p);
        K = smooth_sine_power_integral(1.0 - 2.0 * p0, theta);
    }
    if (p < p0 - 1e-12) throw Error(ErrorCode::InvalidArgument, "sine_power_integral needs p >= 1/2");
    while (p0 < p - 0.5) {
        K = (cos_theta * std::pow(sin_theta, -2.0 * p0) + (2.0 * p0 - 1.0) * K) / (2.0 * p0);
        p0 += 1.0;
    }
    return K;
}

double tau_laguerre_scale(double nu) {
    return 2.0 * std::exp(log_gamma_ratio(nu + 1.0, nu + 0.5)) / std::sqrt(pi);
}

cplx tau_laguerre(double nu, cplx theta, cplx sin_theta, cplx x) {
    if (x == cplx(1.0) || x == cplx(-1.0))
        throw Error(ErrorCode::NonConvergence, "tau is singular at x = +-1");
    return tau_laguerre_scale(nu) * sine_power_integral(nu + 1.0, theta, sin_theta, x);
}

cplx tau_laguerre(double nu, cplx x) {
    const cplx theta = std::acos(x);
    return tau_laguerre(nu, theta, std::sin(theta), x);
}

double tau_oscillator_scale(double nu) { return 2.0 * std::tgamma(nu + 1.0) / pi; }

cplx tau_oscillator(double nu, cplx mu) {
    // tau = (2 Gamma(nu+1)/pi) sum_k mu^(2k-2nu) / (k! (2k-2nu)) + cot(pi nu).
    // For integer nu the k = nu term and the cotangent merge into a logarithm.
    if (mu == cplx(0.0)) throw Error(ErrorCode::SingularKinematics, "mu = 0");
    const cplx z = mu * mu;
    if (std::abs(z) > 600.0)
        throw Error(ErrorCode::NonConvergence, "oscillator tau series: |mu^2| too large");
    const bool integer_order = near_integer(nu, 1e-12);
    const int n_int = int(std::round(nu));
    // nu - n is exact, so near-integer orders keep their small offset intact
    const double eps = nu - n_int;
    cplx sum = 0.0;
    cplx term = 1.0;  // z^k / k!
    for (int k = 0; k < 4000; ++k) {
        if (k > 0) term *= z / double(k);
        if (!(integer_order && k == n_int)) {
            const cplx t = term / (2.0 * (k - n_int) - 2.0 * eps);
            sum += t;
            if (k > std::abs(z) + 2 && std::abs(t) <= 1e-17 * std::abs(sum)) break;
        }
        if (k == 3999) throw Error(ErrorCode::NonConvergence, "oscillator tau series");
    }
    const cplx series = std::exp(-2.0 * nu * std::log(mu)) * sum;
    const double scale = tau_oscillator_scale(nu);
    if (integer_order) {
        const double log_fact = std::lgamma(n_int + 1.0);
        const cplx special = (std::log(mu) - 0.5 * boost::math::digamma(n_int + 1.0)) *
                             std::exp(-log_fact);
        return scale * (series + special);
    }
    return scale * series + std::cos(pi * eps) / std::sin(pi * eps);
}

std::pair<double, double> bessel_jy(double nu, double z) {
    if (!(z > 0.0)) throw Error(ErrorCode::InvalidArgument, "bessel_jy needs z > 0");
    try {
        return {boost::math::cyl_bessel_j(nu, z), boost::math::cyl_neumann(nu, z)};
    } catch (const std::exception& e) {
        throw Error(ErrorCode::NonConvergence, e.what());
    }
}

namespace {

// Christoffel: 1/w_k = sum_j p_j(t_k)^2 over the orthonormal family with Jacobi
// diagonal d and off-diagonal e, accumulated with a running log scale so the
// outer nodes keep full relative accuracy. Golub-Welsch weights do not.
void christoffel_weights(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double mu0,
                         const Eigen::VectorXd& nodes, QuadratureRule& rule) {
    const int N = int(d.size());
    rule.nodes.resize(N);
    rule.weights.resize(N);
    rule.log_weights.resize(N);
    for (int k = 0; k < N; ++k) {
        const double t = nodes[k];
        double qm = 0.0, q0 = 1.0 / std::sqrt(mu0), log_scale = 0.0, sum = 0.0;
        for (int j = 0; j < N; ++j) {
            sum += q0 * q0;
            if (j + 1 == N) break;
            const double qn = ((t - d[j]) * q0 - (j > 0 ? e[j - 1] : 0.0) * qm) / e[j];
            qm = q0;
            q0 = qn;
            const double big = std::max(std::abs(q0), std::abs(qm));
            if (big > 1e100) {
                q0 /= big, qm /= big, sum /= big * big;
                log_scale += 2.0 * std::log(big);
            }
        }
        rule.nodes[k] = t;
        rule.log_weights[k] = -(std::log(sum) + log_scale);
        rule.weights[k] = std::exp(rule.log_weights[k]);
    }
}
}  // namespace

QuadratureRule gauss_rule(int N, double alpha) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs N >= 1");
    if (!(alpha > -1.0)) throw Error(ErrorCode::InvalidArgument, "weight exponent must exceed -1");
    Eigen::VectorXd d(N);
    Eigen::VectorXd e(std::max(N - 1, 0));
    for (int n = 0; n < N; ++n) d[n] = 2.0 * n + alpha + 1.0;
    // Negative off-diagonal: eigenvectors then carry the standard sign of L_n^alpha.
    for (int n = 1; n < N; ++n) e[n - 1] = -std::sqrt(n * (n + alpha));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "Golub-Welsch solve");
    QuadratureRule rule;
    rule.weight_exponent = alpha;
    rule.vectors = solver.eigenvectors();
    for (int k = 0; k < N; ++k)
        if (rule.vectors(0, k) < 0) rule.vectors.col(k) *= -1.0;
    christoffel_weights(d, e, std::tgamma(alpha + 1.0), solver.eigenvalues(), rule);
    return rule;
}

QuadratureRule half_range_rule(int N, double alpha) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs N >= 1");
    if (!(alpha > -1.0)) throw Error(ErrorCode::InvalidArgument, "weight exponent must exceed -1");

    // Discrete measure: composite Gauss-Legendre on [0, R], panels graded toward
    // the origin where t^alpha may be non-smooth. R lies well past the peak of
    // t^(2N+alpha) e^(-t^2), the heaviest integrand the recursion sees.
    using GL = boost::math::quadrature::gauss<double, 40>;
    const double R = std::sqrt(2.0 * N + alpha + 1.0) + 12.0;
    std::vector<double> edges{0.0};
    for (int g = 12; g >= 1; --g) edges.push_back(0.5 * std::pow(0.25, g));
    for (double t = 0.5; t < R; t += 0.5) edges.push_back(t);
    std::vector<double> x, w;
    const auto& abs_ = GL::abscissa();
    const auto& wts = GL::weights();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < abs_.size(); ++i) {
            for (int sgn : {1, -1}) {
                if (abs_[i] == 0.0 && sgn < 0) continue;
                const double t = mid + sgn * half * abs_[i];
                x.push_back(t);
                w.push_back(half * wts[i] * std::exp(alpha * std::log(t) - t * t));
            }
        }
    }

    // Stieltjes with orthonormal vectors q_k(t_i) sqrt(w_i).
    const std::size_t K = x.size();
    Eigen::VectorXd d(N), e(std::max(N - 1, 0));
    std::vector<double> q_prev(K, 0.0), q(K), q_next(K);
    double norm = 0.0;
    for (std::size_t i = 0; i < K; ++i) norm += w[i];
    const double mu0 = norm;
    for (std::size_t i = 0; i < K; ++i) q[i] = std::sqrt(w[i] / norm);
    double b_prev = 0.0;
    for (int k = 0; k < N; ++k) {
        double a = 0.0;
        for (std::size_t i = 0; i < K; ++i) a += x[i] * q[i] * q[i];
        d[k] = a;
        if (k + 1 == N) break;
        double nn = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            q_next[i] = (x[i] - a) * q[i] - b_prev * q_prev[i];
            nn += q_next[i] * q_next[i];
        }
        const double b = std::sqrt(nn);
        e[k] = b;
        for (std::size_t i = 0; i < K; ++i) {
            q_prev[i] = q[i];
            q[i] = q_next[i] / b;
        }
        b_prev = b;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "half-range Golub-Welsch solve");
    QuadratureRule rule;
    rule.weight_exponent = alpha;
    christoffel_weights(d, e, mu0, solver.eigenvalues(), rule);
    return rule;
}

}  // namespace jm
