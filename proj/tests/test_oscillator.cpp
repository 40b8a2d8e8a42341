#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "reference.hpp"

using namespace jm;
namespace osc = jm::oscillator;

namespace {

double energy(double mu, double lambda) { return 0.5 * mu * mu * lambda * lambda; }

}  // namespace

TEST_CASE("oscillator basis is orthonormal") {
    for (double A : {-2.0, 0.0, 4.0}) {
        const auto ch = make_channel(1, A);
        const double lambda = 1.3;
        for (int n = 0; n < 7; ++n)
            for (int m = n; m < 7; ++m) {
                const double g = oracle::integrate(
                    [&](double r) { return osc::basis_function(n, ch, lambda, r) * osc::basis_function(m, ch, lambda, r); },
                    0.0, 20.0, 1.0);
                CHECK(std::abs(g - (n == m ? 1.0 : 0.0)) < 1e-12);
            }
    }
}

TEST_CASE("oscillator free Hamiltonian matches quadrature of the kinetic form") {
    const auto ch = make_channel(2, -1.0);
    const double nu = ch.nu(), lambda = 0.9;
    const int N = 5;
    const auto H = osc::free_hamiltonian(ch, lambda, N);
    for (int n = 0; n < N; ++n)
        for (int m = n; m < std::min(N, n + 3); ++m) {
            auto fn = [&](double r) { return osc::basis_function(n, ch, lambda, r); };
            auto fm = [&](double r) { return osc::basis_function(m, ch, lambda, r); };
            const double v = oracle::integrate(
                [&](double r) {
                    const double h = 1e-4 * std::min(1.0, r);
                    return 0.5 * oracle::derivative(fn, r, h) * oracle::derivative(fm, r, h) +
                           (nu * nu - 0.25) / (2.0 * r * r) * fn(r) * fm(r);
                },
                1e-9, 25.0, 1.0);
            const double want = m == n ? H.diag[n].real() : (m == n + 1 ? H.off[n].real() : 0.0);
            CHECK(std::abs(v - want) < 1e-7);
        }
}

TEST_CASE("oscillator reference operator is H0 - E") {
    const auto ch = make_channel(0, 1.0);
    const double lambda = 1.7;
    const cplx E(2.0, -0.6);
    const auto J = osc::reference_operator(ch, lambda, E, 9);
    const auto H = osc::free_hamiltonian(ch, lambda, 9);
    for (int n = 0; n < 9; ++n) CHECK(std::abs(J.diag[n] - (H.diag[n] - E)) < 1e-13 * std::abs(H.diag[n]));
    for (int n = 0; n < 8; ++n) CHECK(std::abs(J.off[n] - H.off[n]) < 1e-15 * std::abs(H.off[n]));
    // no overlap correction at the edge: the element is energy independent
    CHECK(J.edge_element == osc::edge_element(ch, lambda, 9));
    CHECK(std::abs(J.edge_element - lambda * lambda / 2.0 * std::sqrt(9.0 * (9.0 + ch.nu()))) < 1e-14);
}

TEST_CASE("oscillator coefficients obey the three-term recursion") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dnu(0.5, 4.0), dmu(0.05, 5.0), dl(0.5, 4.0);
    const int N = 200;
    for (int trial = 0; trial < 40; ++trial) {
        const double nu = dnu(rng), lambda = dl(rng);
        const auto ch = make_channel(0, nu * nu - 0.25);
        const double E = energy(dmu(rng), lambda);
        const auto J = osc::reference_operator(ch, lambda, E, N + 2);
        const auto t = osc::coefficients(ch, lambda, E, N + 1);
        double worst_s = oracle::row_residual(0.0, 0.0, J.diag[0], t.s[0], J.off[0], t.s[1]);
        double worst_c = 0.0, cancellation = 1.0;
        const cplx tau = t.c[0] / t.s[0];
        for (int n = 1; n <= N; ++n) {
            // c_n is a difference of two pieces that each grow like e^(mu^2/2)
            cancellation = std::max(cancellation, (std::abs(tau * t.s[n]) + std::abs(t.c[n] - tau * t.s[n])) / std::abs(t.c[n]));
            worst_s = std::max(worst_s, oracle::row_residual(J.off[n - 1], t.s[n - 1], J.diag[n], t.s[n], J.off[n], t.s[n + 1]));
            worst_c = std::max(worst_c, oracle::row_residual(J.off[n - 1], t.c[n - 1], J.diag[n], t.c[n], J.off[n], t.c[n + 1]));
        }
        INFO("nu " << nu << " lambda " << lambda << " E " << E);
        CHECK(worst_s <= 1e-11);
        CHECK(worst_c <= 1e-12 * cancellation + 1e-11);
    }
}

TEST_CASE("oscillator cosine-like first row carries the Wronskian source") {
    for (double nu : {0.5, 1.0, 1.5, 2.3})
        for (double mu : {0.3, 1.5, 4.0}) {
            const auto ch = make_channel(0, nu * nu - 0.25);
            const double lambda = 0.7, E = energy(mu, lambda), W = 4.0 * std::sqrt(2.0 * E) / M_PI;
            const auto J = osc::reference_operator(ch, lambda, E, 4);
            const auto t = osc::coefficients(ch, lambda, E, 4);
            const cplx lhs = J.diag[0] * t.c[0] + J.off[0] * t.c[1];
            CHECK(std::abs(lhs + W / (2.0 * t.s[0])) < 1e-10 * std::abs(W / t.s[0]));
        }
}

TEST_CASE("oscillator sine coefficients equal the projection of the regular solution") {
    const double lambda = 1.0;
    for (double nu : {0.5, 1.5, 2.5})
        for (double mu : {0.5, 1.5, 3.0}) {
            const auto ch = make_channel(0, nu * nu - 0.25);
            const double E = energy(mu, lambda), k = std::sqrt(2.0 * E);
            const auto s = osc::sine_coefficients(ch, lambda, E, 20);
            for (int n = 0; n <= 20; ++n) {
                const double q = oracle::integrate(
                    [&](double r) { return osc::basis_function(n, ch, lambda, r) * oracle::regular(nu, k, r); }, 0.0,
                    16.0, 0.5);
                INFO("nu " << nu << " mu " << mu << " n " << n);
                CHECK(std::abs(s[n] - q) <= 1e-8 * std::abs(q));
            }
        }
}

TEST_CASE("oscillator reconstruction tracks both reference solutions") {
    // s_n does not decay in this basis and phi_n(r) shrinks only like n^(-1/4),
    // so partial sums hover around the target at the percent level
    const auto ch = make_channel(1, 2.0);
    const double nu = ch.nu(), lambda = 1.0, E = energy(1.5, lambda), k = std::sqrt(2.0 * E);
    std::vector<double> inner, outer;
    for (double x = 0.05; x <= 6.0; x += 0.05) inner.push_back(x);
    for (double x = 6.0; x <= 9.0; x += 0.1) outer.push_back(x);
    const auto t = osc::coefficients(ch, lambda, E, 200);
    const auto s = osc::reconstruct(t.s, ch, lambda, inner);
    for (std::size_t i = 0; i < inner.size(); ++i) CHECK(std::abs(s[i] - oracle::regular(nu, k, inner[i])) < 5e-2);
    const auto c = osc::reconstruct(t.c, ch, lambda, outer);
    for (std::size_t i = 0; i < outer.size(); ++i) CHECK(std::abs(c[i] - oracle::irregular(nu, k, outer[i])) < 5e-2);
    const std::vector<double> tiny{1e-4};
    CHECK(std::abs(osc::reconstruct(t.c, ch, lambda, tiny)[0]) < 1e-3);
}

TEST_CASE("oscillator coefficients for complex energies stay finite") {
    const auto ch = make_channel(1, -2.0);
    const auto t = osc::coefficients(ch, 1.5, cplx(3.0, -2.0), 60);
    for (const auto& v : t.s) CHECK(std::isfinite(std::abs(v)));
    for (const auto& v : t.c) CHECK(std::isfinite(std::abs(v)));
}

TEST_CASE("eta is the source divided by J01 P0") {
    for (double nu : {0.5, 1.5, 2.7})
        for (double mu : {0.4, 1.2, 2.5}) {
            const auto ch = make_channel(0, nu * nu - 0.25);
            const double lambda = 1.3, E = energy(mu, lambda), W = 4.0 * std::sqrt(2.0 * E) / M_PI;
            const auto t = osc::coefficients(ch, lambda, E, 3);
            const auto J = osc::reference_operator(ch, lambda, E, 3);
            const cplx gamma = -W / (2.0 * t.s[0]);
            const double P0 = 1.0 / std::sqrt(std::tgamma(nu + 2.0));
            const cplx eta = osc::eta(ch, lambda, t.energy);
            CHECK(std::abs(eta - gamma / (J.off[0] * P0)) < 1e-12 * std::abs(eta));
        }
}
