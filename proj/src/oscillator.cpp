#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "specfun.hpp"

namespace jm::oscillator {

namespace {

constexpr double pi = std::numbers::pi;

BasisConfig config(double lambda, int N) { return {BasisKind::Oscillator, lambda, N}; }

// sqrt(n! / Gamma(n + nu + 1)) L_n^nu(y) by a recursion on the scaled values.
std::vector<cplx> normalized_laguerre(int n_max, double nu, cplx y) {
    std::vector<cplx> L(n_max + 1);
    L[0] = 1.0 / std::sqrt(std::tgamma(nu + 1.0));
    if (n_max >= 1) L[1] = (nu + 1.0 - y) * L[0] / std::sqrt(nu + 1.0);
    for (int n = 1; n < n_max; ++n) {
        L[n + 1] = ((2.0 * n + nu + 1.0 - y) * L[n] - std::sqrt(n * (n + nu)) * L[n - 1]) /
                   std::sqrt((n + 1.0) * (n + nu + 1.0));
    }
    return L;
}

}  // namespace

double basis_function(int n, const ChannelSpec& ch, double lambda, double r) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "basis index must be non-negative");
    if (r <= 0.0) return 0.0;
    const double nu = ch.nu();
    const double y = lambda * lambda * r * r;
    const auto L = normalized_laguerre(n, nu, y);
    return std::sqrt(2.0 * lambda) * std::exp(0.5 * (nu + 0.5) * std::log(y) - 0.5 * y) * L[n].real();
}

TridiagonalOperator reference_operator(const ChannelSpec& ch, double lambda, cplx E, int N) {
    const auto p = energy_point(E, config(lambda, N));
    const double nu = ch.nu();
    const double h = lambda * lambda / 2.0;
    TridiagonalOperator J;
    J.diag.resize(N);
    J.off.resize(N - 1);
    for (int n = 0; n < N; ++n) J.diag[n] = h * (2.0 * n + nu + 1.0 - p.x);
    for (int n = 0; n + 1 < N; ++n) J.off[n] = h * std::sqrt((n + 1.0) * (n + nu + 1.0));
    J.edge_element = edge_element(ch, lambda, N);
    return J;
}

TridiagonalOperator free_hamiltonian(const ChannelSpec& ch, double lambda, int N) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
    const double nu = ch.nu();
    const double h = lambda * lambda / 2.0;
    TridiagonalOperator H;
    H.diag.resize(N);
    H.off.resize(N - 1);
    for (int n = 0; n < N; ++n) H.diag[n] = h * (2.0 * n + nu + 1.0);
    for (int n = 0; n + 1 < N; ++n) H.off[n] = h * std::sqrt((n + 1.0) * (n + nu + 1.0));
    H.edge_element = edge_element(ch, lambda, N);
    return H;
}

cplx edge_element(const ChannelSpec& ch, double lambda, int N) {
    return lambda * lambda / 2.0 * std::sqrt(N * (N + ch.nu()));
}

std::vector<cplx> sine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N) {
    const auto p = energy_point(E, config(lambda, N));
    const double nu = ch.nu();
    const auto L = normalized_laguerre(N, nu, p.x);
    // (2/sqrt(lambda)) mu^(nu+1/2) e^(-mu^2/2)
    const cplx pref = 2.0 / std::sqrt(lambda) * std::exp((nu + 0.5) * std::log(p.mu) - 0.5 * p.x);
    std::vector<cplx> s(N + 1);
    for (int n = 0; n <= N; ++n) s[n] = (n % 2 ? -1.0 : 1.0) * pref * L[n];
    return s;
}

cplx eta(const ChannelSpec& ch, double lambda, const EnergyPoint& p) {
    const double nu = ch.nu();
    return -(2.0 / pi) / std::sqrt(lambda) *
           std::exp(std::lgamma(nu + 1.0) + (0.5 - nu) * std::log(p.mu) + 0.5 * p.x);
}

std::vector<cplx> cosine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N) {
    return coefficients(ch, lambda, E, N).c;
}

CoefficientTable coefficients(const ChannelSpec& ch, double lambda, cplx E, int N) {
    CoefficientTable t;
    t.energy = energy_point(E, config(lambda, N));
    t.nu = ch.nu();
    t.s = sine_coefficients(ch, lambda, E, N);
    const double nu = t.nu;
    const auto& p = t.energy;
    const cplx e = eta(ch, lambda, p);
    const cplx tau = tau_oscillator(nu, p.mu);
    const auto W = assoc_laguerre_seq(std::max(N - 1, 0), nu, p.x);
    t.c.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        cplx P = 0.0;  // P_{n-1} = (-1)^(n-1) sqrt(n!/Gamma(n+nu+1)) L_{n-1}^nu(x, 1)
        if (n > 0) {
            const double g = std::exp(0.5 * log_gamma_ratio(n + 1.0, n + nu + 1.0));
            P = ((n - 1) % 2 ? -1.0 : 1.0) * g * W[n - 1];
        }
        t.c[n] = tau * t.s[n] + e * P;
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
        const double y = lambda * lambda * r[i] * r[i];
        const auto L = normalized_laguerre(std::max(n_max, 0), nu, y);
        const double env = std::sqrt(2.0 * lambda) * std::exp(0.5 * (nu + 0.5) * std::log(y) - 0.5 * y);
        for (int n = 0; n <= n_max; ++n) terms[n] = coeffs[n] * (env * L[n].real());
        out[i] = ordered_sum(terms);
    }
    return out;
}

}  // namespace jm::oscillator
