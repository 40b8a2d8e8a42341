#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <cmath>
#include <random>

#include "error.hpp"
#include "specfun.hpp"

using namespace jm;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Finite difference of f at x with step h, sixth order.
template <class F>
cplx derivative(F f, cplx x, double h) {
    return (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) +
            f(x + 3.0 * h)) /
           (60.0 * h);
}

}  // namespace

TEST_CASE("Gegenbauer polynomials") {
    const auto C = gegenbauer_seq(5, 1.7, cplx(0.3));
    CHECK(C[0] == cplx(1.0));
    CHECK(std::abs(C[1] - 2.0 * 1.7 * 0.3) < 1e-15);
    // C_n^1 is the Chebyshev U: sin((n+1)t)/sin t at cos t = 0.8
    const double t = std::acos(0.8);
    const auto U = gegenbauer_seq(30, 1.0, cplx(0.8));
    CHECK(std::abs(U[2] - 1.56) < 1e-14);
    for (int n = 0; n <= 30; ++n) CHECK(std::abs(U[n] - std::sin((n + 1) * t) / std::sin(t)) < 1e-12);
}

TEST_CASE("associated Gegenbauer polynomials") {
    const auto C = assoc_gegenbauer_seq(4, 2.5, cplx(-0.4));
    CHECK(C[0] == cplx(1.0));
    CHECK(std::abs(C[1] - 3.5 * -0.4) < 1e-15);
    // hand iteration with a = 1: C_1 = 2x, C_2 = (2(2)(x) C_1 - 2 C_0)/3 * ... gives 4x^2 - 1
    const auto D = assoc_gegenbauer_seq(2, 1.0, cplx(0.8));
    CHECK(std::abs(D[2] - 1.56) < 1e-14);
}

TEST_CASE("Laguerre polynomials against the explicit sum") {
    const auto L = laguerre_seq(2, 0.0, cplx(1.0));
    CHECK(std::abs(L[2] + 0.5) < 1e-15);
    // L_n^b(y) = sum_k (-1)^k binom(n+b, n-k) y^k / k!
    auto explicit_sum = [](int n, double b, double y) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double binom = std::exp(std::lgamma(n + b + 1) - std::lgamma(n - k + 1) - std::lgamma(b + k + 1));
            s += (k % 2 ? -1.0 : 1.0) * binom * std::pow(y, k) / std::tgamma(k + 1.0);
        }
        return s;
    };
    for (double b : {0.0, 0.5, 2.3})
        for (double y : {0.2, 1.7, 4.0}) {
            const auto seq = laguerre_seq(12, b, cplx(y));
            for (int n = 0; n <= 12; ++n) CHECK(rel(seq[n], explicit_sum(n, b, y)) < 1e-9);  // the alternating sum cancels
        }
}

TEST_CASE("associated Laguerre polynomials by hand iteration") {
    const double nu = 1.5, x = 2.0;
    const auto L = assoc_laguerre_seq(2, nu, cplx(x));
    CHECK(L[0] == cplx(1.0));
    const double L1 = (nu + 3.0 - x) / 2.0;
    CHECK(std::abs(L[1] - L1) < 1e-15);
    // n = 1 row: (2*2 + nu + 1 - x) L_1 = (2 + nu) L_0 + 3 L_2
    const double L2 = ((4.0 + nu + 1.0 - x) * L1 - (2.0 + nu)) / 3.0;
    CHECK(std::abs(L[2] - L2) < 1e-15);
}

TEST_CASE("rescaled Gegenbauer recursions hold for random orders") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dnu(0.01, 5.0), dx(-0.999, 0.999);
    for (int trial = 0; trial < 50; ++trial) {
        const double nu = dnu(rng), x = dx(rng);
        const int n_max = 201;
        const auto C = gegenbauer_seq(n_max, nu + 0.5, cplx(x));
        const auto W = assoc_gegenbauer_seq(n_max, nu + 0.5, cplx(x));
        std::vector<double> s(n_max + 1), w(n_max + 1);
        double smax = 0.0, wmax = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const double g = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + 2.0 * nu + 1.0)));
            s[n] = g * C[n].real();
            w[n] = std::exp(0.5 * (std::lgamma(n + 2.0) - std::lgamma(n + 2.0 * nu + 2.0))) * W[n].real();
            smax = std::max(smax, std::abs(s[n]));
            wmax = std::max(wmax, std::abs(w[n]));
        }
        double worst = 0.0, worst_w = 0.0;
        for (int n = 1; n < 200; ++n) {
            const double r = (2 * n + 2 * nu + 1) * x * s[n] - std::sqrt(n * (n + 2 * nu)) * s[n - 1] -
                             std::sqrt((n + 1) * (n + 2 * nu + 1)) * s[n + 1];
            worst = std::max(worst, std::abs(r));
            // the associated family is the same recursion shifted by one index
            const int m = n + 1;
            const double rw = (2 * m + 2 * nu + 1) * x * w[n] - std::sqrt(m * (m + 2 * nu)) * w[n - 1] -
                              std::sqrt((m + 1) * (m + 2 * nu + 1)) * w[n + 1];
            worst_w = std::max(worst_w, std::abs(rw));
        }
        CHECK(worst <= 1e-12 * smax * 200);
        CHECK(worst_w <= 1e-12 * wmax * 200);
    }
}

TEST_CASE("sine power integral recurrence") {
    // K_p(theta) = int_theta^{pi/2} sin^{1-2p}; compare with direct quadrature
    for (double p : {0.2, 0.5, 1.0, 1.3, 2.0, 2.5, 3.7}) {
        for (double theta : {0.3, 1.0, 2.2}) {
            const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double t) { return std::pow(std::sin(t), 1.0 - 2.0 * p); }, theta, M_PI / 2, 15, 1e-14);
            const cplx K = sine_power_integral(p, theta, std::sin(theta), std::cos(theta));
            CHECK(std::abs(K - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
    CHECK_THROWS_AS(sine_power_integral(-0.5, 1.0, std::sin(1.0), std::cos(1.0)), Error);
}

TEST_CASE("Laguerre tau") {
    CHECK(std::abs(tau_laguerre(1.3, cplx(0.0))) < 1e-15);
    // nu = 1/2: R = 1 and 2F1(1/2, 3/2; 3/2; z) = (1-z)^(-1/2)
    CHECK(std::abs(tau_laguerre(0.5, cplx(0.8)) - 4.0 / 3.0) < 1e-13);
    CHECK(tau_laguerre_scale(0.5) == doctest::Approx(1.0).epsilon(1e-15));

    for (double nu : {0.5, 1.5, std::sqrt(4.25), 3.2}) {
        const double R = tau_laguerre_scale(nu);
        // slope at the origin
        const cplx slope = derivative([&](cplx x) { return tau_laguerre(nu, x); }, cplx(0.0), 1e-3);
        CHECK(rel(slope, R) < 1e-10);
        // dtau/dx = R (1 - x^2)^(-nu-1) on real and complex points
        for (cplx x : {cplx(0.5), cplx(-0.7), cplx(0.93), cplx(0.4, -0.3), cplx(-0.2, 0.6)}) {
            const cplx d = derivative([&](cplx y) { return tau_laguerre(nu, y); }, x, 1e-4);
            CHECK(rel(d, R * std::pow(1.0 - x * x, -nu - 1.0)) < 1e-8);
        }
        // direct hypergeometric oracle on the real segment
        for (double x : {0.1, 0.45, 0.8}) {
            const double f = boost::math::hypergeometric_pFq({0.5, nu + 1.0}, {1.5}, x * x);
            CHECK(rel(tau_laguerre(nu, cplx(x)), x * R * f) < 1e-12);
        }
    }
}

TEST_CASE("oscillator tau") {
    for (double nu : {0.5, 1.0, 1.5, std::sqrt(4.25), 2.0, 2.7}) {
        const double R = tau_oscillator_scale(nu);
        CHECK(R == doctest::Approx(2.0 * std::tgamma(nu + 1.0) / M_PI).epsilon(1e-15));
        // dtau/dmu = R mu^(-2nu-1) e^(mu^2)
        for (double mu : {0.4, 1.0, 2.5}) {
            const cplx d = derivative([&](cplx m) { return tau_oscillator(nu, m); }, cplx(mu), 1e-4);
            const double want = R * std::pow(mu, -2.0 * nu - 1.0) * std::exp(mu * mu);
            CHECK(rel(d, want) < 1e-8);
        }
        // integral of the derivative between two points
        const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double m) { return R * std::pow(m, -2.0 * nu - 1.0) * std::exp(m * m); }, 1.0, 2.0, 15, 1e-14);
        CHECK(rel(tau_oscillator(nu, 2.0) - tau_oscillator(nu, 1.0), integral) < 1e-11);
        // complex mu: the derivative identity is analytic
        const cplx mu(1.8, -0.9);
        const cplx d = derivative([&](cplx m) { return tau_oscillator(nu, m); }, mu, 1e-4);
        CHECK(rel(d, R * std::pow(mu, -2.0 * nu - 1.0) * std::exp(mu * mu)) < 1e-8);
    }
}

TEST_CASE("oscillator tau is continuous through integer orders") {
    for (double nu : {1.0, 2.0, 3.0})
        for (double mu : {0.5, 1.7}) {
            const cplx at = tau_oscillator(nu, cplx(mu));
            const cplx lo = tau_oscillator(nu - 1e-7, cplx(mu));
            const cplx hi = tau_oscillator(nu + 1e-7, cplx(mu));
            CHECK(std::abs(lo - at) < 1e-5 * std::max(1.0, std::abs(at)));
            CHECK(std::abs(hi - at) < 1e-5 * std::max(1.0, std::abs(at)));
        }
}

TEST_CASE("Bessel functions") {
    for (double z : {0.3, 1.0, 7.5, 40.0}) {
        const auto [J, Y] = bessel_jy(0.5, z);
        CHECK(J == doctest::Approx(std::sqrt(2.0 / (M_PI * z)) * std::sin(z)).epsilon(1e-13));
        CHECK(Y == doctest::Approx(-std::sqrt(2.0 / (M_PI * z)) * std::cos(z)).epsilon(1e-13));
    }
    for (double nu : {0.5, 1.5, 3.1}) {
        const double z = 1e-6;
        const auto [J, Y] = bessel_jy(nu, z);
        CHECK(J == doctest::Approx(std::pow(z / 2.0, nu) / std::tgamma(nu + 1.0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bessel_jy(1.0, 0.0), Error);
}

TEST_CASE("Bessel cross product") {
    for (double nu : {0.5, 1.5, 2.5, std::sqrt(4.25)}) {
        for (double z = 0.5; z <= 50.0; z += 0.37) {
            auto Jf = [&](cplx x) { return cplx(bessel_jy(nu, x.real()).first); };
            auto Yf = [&](cplx x) { return cplx(bessel_jy(nu, x.real()).second); };
            const double h = 1e-3 * std::max(1.0, z / 10.0);
            const double dJ = derivative(Jf, z, h).real(), dY = derivative(Yf, z, h).real();
            const auto [J, Y] = bessel_jy(nu, z);
            CHECK(std::abs(J * dY - dJ * Y - 2.0 / (M_PI * z)) <= 1e-10);
        }
    }
}

TEST_CASE("generalized Gauss-Laguerre rules") {
    const auto one = gauss_rule(1, 1.7);
    CHECK(one.nodes[0] == doctest::Approx(2.7).epsilon(1e-14));
    CHECK(one.weights[0] == doctest::Approx(std::tgamma(2.7)).epsilon(1e-14));
    const auto two = gauss_rule(2, 0.0);
    CHECK(two.nodes[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(two.nodes[1] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));

    for (double alpha : {0.0, 1.0, 2.0, 3.1231, -0.5})
        for (int N : {3, 10, 25}) {
            const auto r = gauss_rule(N, alpha);
            for (int k = 0; k < N; ++k) {
                CHECK(r.nodes[k] > 0.0);
                CHECK(r.weights[k] > 0.0);
                if (k) CHECK(r.nodes[k] > r.nodes[k - 1]);
            }
            // raw high moments lean on the outermost weights, which are tiny and only
            // absolutely accurate; the orthonormal products below cover full degree
            for (int m = 0; m <= std::min(2 * N - 1, 15); ++m) {
                double s = 0.0;
                for (int k = 0; k < N; ++k) s += r.weights[k] * std::pow(r.nodes[k], m);
                const double exact = std::tgamma(m + alpha + 1.0);
                CHECK(std::abs(s - exact) <= 1e-12 * exact * (1 + m));
            }
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
            for (int k = 0; k < N; ++k) {
                const auto L = laguerre_seq(N - 1, alpha, cplx(r.nodes[k]));
                Eigen::VectorXd v(N);
                for (int n = 0; n < N; ++n)
                    v[n] = L[n].real() * std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + alpha + 1.0)));
                G += r.weights[k] * v * v.transpose();
            }
            INFO("alpha " << alpha << " N " << N);
            CHECK((G - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-11);
        }
    CHECK_THROWS_AS(gauss_rule(0, 0.0), Error);
    CHECK_THROWS_AS(gauss_rule(4, -1.0), Error);
}

TEST_CASE("half-range Gauss rules") {
    // weight t^alpha e^(-t^2): moments Gamma((m+alpha+1)/2)/2
    for (double alpha : {2.0, 4.0, 2.0 * std::sqrt(4.25) + 1.0})
        for (int N : {5, 20, 60}) {
            const auto r = half_range_rule(N, alpha);
            for (int k = 1; k < N; ++k) CHECK(r.nodes[k] > r.nodes[k - 1]);
            CHECK(r.nodes[0] > 0.0);
            for (int m = 0; m <= 2 * N - 1; m += (N > 20 ? 7 : 1)) {
                double s = 0.0;
                for (int k = 0; k < N; ++k) s += std::exp(r.log_weights[k] + m * std::log(r.nodes[k]));
                const double exact = 0.5 * std::tgamma((m + alpha + 1.0) / 2.0);
                CHECK(std::abs(s - exact) <= 1e-11 * exact);
            }
        }
}
