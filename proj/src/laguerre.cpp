#include <algorithm>
#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "specfun.hpp"

namespace jm {

cplx ordered_sum(std::vector<cplx> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
    cplx total = 0.0;
    for (const auto& t : terms) total += t;
    return total;
}

namespace laguerre {

namespace {

constexpr double pi = std::numbers::pi;

BasisConfig config(double lambda, int N) { return {BasisKind::Laguerre, lambda, N}; }

// sqrt(n! / Gamma(n + beta + 1))
double norm_ratio(int n, double beta) { return std::exp(0.5 * log_gamma_ratio(n + 1.0, n + beta + 1.0)); }

// Orthonormal Laguerre values Lhat_n^beta(y) = L_n^beta(y) sqrt(n!/Gamma(n+beta+1)).
std::vector<double> normalized_laguerre(int n_max, double beta, double y) {
    std::vector<double> L(n_max + 1);
    L[0] = 1.0 / std::sqrt(std::tgamma(beta + 1.0));
    if (n_max >= 1) L[1] = (beta + 1.0 - y) * L[0] / std::sqrt(beta + 1.0);
    for (int n = 1; n < n_max; ++n) {
        L[n + 1] = ((2.0 * n + beta + 1.0 - y) * L[n] - std::sqrt(n * (n + beta)) * L[n - 1]) /
                   std::sqrt((n + 1.0) * (n + beta + 1.0));
    }
    return L;
}

}  // namespace

double basis_function(int n, const ChannelSpec& ch, double lambda, double r) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "basis index must be non-negative");
    if (r <= 0.0) return 0.0;
    const double nu = ch.nu();
    const double y = lambda * r;
    const auto L = normalized_laguerre(n, 2.0 * nu, y);
    return std::sqrt(lambda) * std::exp((nu + 0.5) * std::log(y) - 0.5 * y) * L[n];
}

TridiagonalOperator reference_operator(const ChannelSpec& ch, double lambda, cplx E, int N) {
    const auto p = energy_point(E, config(lambda, N));
    const double nu = ch.nu();
    const double h = lambda * lambda / 8.0;
    const cplx mu2 = p.mu * p.mu;
    TridiagonalOperator J;
    J.diag.resize(N);
    J.off.resize(N - 1);
    for (int n = 0; n < N; ++n) J.diag[n] = h * (2.0 * n + 2.0 * nu + 1.0) * (1.0 - 4.0 * mu2);
    for (int n = 0; n + 1 < N; ++n)
        J.off[n] = h * (1.0 + 4.0 * mu2) * std::sqrt((n + 1.0) * (n + 2.0 * nu + 1.0));
    J.edge_element = edge_element(ch, lambda, E, N);
    return J;
}

cplx edge_element(const ChannelSpec& ch, double lambda, cplx E, int N) {
    return (E + lambda * lambda / 8.0) * std::sqrt(N * (N + 2.0 * ch.nu()));
}

TridiagonalOperator overlap_matrix(const ChannelSpec& ch, int N) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
    const double nu = ch.nu();
    TridiagonalOperator S;
    S.diag.resize(N);
    S.off.resize(N - 1);
    for (int n = 0; n < N; ++n) S.diag[n] = 2.0 * n + 2.0 * nu + 1.0;
    for (int n = 0; n + 1 < N; ++n) S.off[n] = -std::sqrt((n + 1.0) * (n + 2.0 * nu + 1.0));
    S.edge_element = -std::sqrt(N * (N + 2.0 * nu));
    return S;
}

TridiagonalOperator free_hamiltonian(const ChannelSpec& ch, double lambda, int N) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
    const double nu = ch.nu();
    const double h = lambda * lambda / 8.0;
    TridiagonalOperator H;
    H.diag.resize(N);
    H.off.resize(N - 1);
    for (int n = 0; n < N; ++n) H.diag[n] = h * (2.0 * n + 2.0 * nu + 1.0);
    for (int n = 0; n + 1 < N; ++n) H.off[n] = h * std::sqrt((n + 1.0) * (n + 2.0 * nu + 1.0));
    H.edge_element = h * std::sqrt(N * (N + 2.0 * nu));
    return H;
}

std::vector<cplx> sine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N) {
    const auto p = energy_point(E, config(lambda, N));
    const double nu = ch.nu();
    const auto C = gegenbauer_seq(N, nu + 0.5, p.x);
    // Gamma(nu+1/2) (2 sin theta)^(nu+1/2) / sqrt(pi lambda)
    const cplx pref = std::exp(std::lgamma(nu + 0.5) + (nu + 0.5) * std::log(2.0 * p.sin_theta)) /
                      std::sqrt(pi * lambda);
    std::vector<cplx> s(N + 1);
    for (int n = 0; n <= N; ++n) s[n] = pref * norm_ratio(n, 2.0 * nu) * C[n];
    return s;
}

cplx eta(const ChannelSpec& ch, double lambda, const EnergyPoint& p) {
    const double nu = ch.nu();
    const double mag = std::exp((1.5 - nu) * std::log(2.0) + log_gamma_ratio(2.0 * nu + 1.0, nu + 0.5)) /
                       std::sqrt(lambda * pi);
    // (1 - x^2)^(1/4 - nu/2) written through sin(theta), whose argument stays in (-pi/2, pi/2)
    return -mag * std::exp((0.5 - nu) * std::log(p.sin_theta));
}

cplx wronskian(const EnergyPoint& p) { return 4.0 * p.k / pi; }

std::vector<cplx> cosine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N,
                                      Convention conv) {
    return coefficients(ch, lambda, E, N, conv).c;
}

CoefficientTable coefficients(const ChannelSpec& ch, double lambda, cplx E, int N, Convention conv) {
    CoefficientTable t;
    t.energy = energy_point(E, config(lambda, N));
    t.nu = ch.nu();
    t.convention = conv;
    t.s = sine_coefficients(ch, lambda, E, N);
    const double nu = t.nu;
    const auto& p = t.energy;
    const cplx e = eta(ch, lambda, p);
    const auto W = assoc_gegenbauer_seq(std::max(N - 1, 0), nu + 0.5, p.x);
    const cplx tau = conv == Convention::EqNineteen ? tau_laguerre(nu, p.theta, p.sin_theta, p.x) : 1.0;
    const double sign = conv == Convention::EqNineteen ? 1.0 : -1.0;
    t.c.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        const cplx second = n == 0 ? cplx(0.0) : norm_ratio(n, 2.0 * nu) * W[n - 1];
        t.c[n] = tau * t.s[n] + sign * e * second;
    }
    return t;
}

std::vector<cplx> reconstruct(std::span<const cplx> coeffs, const ChannelSpec& ch, double lambda,
                              std::span<const double> r) {
    const double nu = ch.nu();
    const int n_max = int(coeffs.size()) - 1;
    std::vector<cplx> out(r.size());
    std::vector<cplx> terms(coeffs.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] <= 0.0) {
            out[i] = 0.0;
            continue;
        }
        const double y = lambda * r[i];
        const auto L = normalized_laguerre(std::max(n_max, 0), 2.0 * nu, y);
        const double env = std::sqrt(lambda) * std::exp((nu + 0.5) * std::log(y) - 0.5 * y);
        for (int n = 0; n <= n_max; ++n) terms[n] = coeffs[n] * (env * L[n]);
        out[i] = ordered_sum(terms);
    }
    return out;
}

}  // namespace laguerre
}  // namespace jm
