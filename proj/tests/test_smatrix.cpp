#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smatrix.hpp"

using namespace jm;

namespace {

const PotentialModel eq26{PowExp{7.5, 2.0, 1.0}};

// Phase shift of u'' = (2U + (nu^2 - 1/4)/r^2 - k^2) u by direct integration,
// matched to the Riccati-Bessel pair at r = R.
double ode_phase_shift(double nu, const PotentialModel& U, double E, double R = 45.0) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double k = std::sqrt(2.0 * E);
    auto rhs = [&](const State& y, State& dy, double r) {
        dy[0] = y[1];
        dy[1] = (2.0 * U(r) + (nu * nu - 0.25) / (r * r) - k * k) * y[0];
    };
    const double r0 = 1e-6;
    State y{std::pow(r0, nu + 0.5), (nu + 0.5) * std::pow(r0, nu - 0.5)};
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, y,
                               r0, R, 1e-4);
    const double h = 1e-4;
    auto F = [&](double r) { return oracle::regular(nu, k, r); };
    auto G = [&](double r) { return oracle::irregular(nu, k, r); };
    const double f = F(R), g = G(R), fp = oracle::derivative(F, R, h), gp = oracle::derivative(G, R, h);
    // u = a F - b G with tan(delta) = b / a
    const double W = f * gp - fp * g;
    const double a = (y[0] * gp - y[1] * g) / W;
    const double b = -(f * y[1] - fp * y[0]) / W;
    return std::atan(b / a);
}

double mod_pi_distance(double a, double b) {
    const double d = std::remainder(a - b, M_PI);
    return std::abs(d);
}

}  // namespace

TEST_CASE("kinematic quantities at real energies") {
    const auto ch = make_channel(1, -2.0);
    for (auto kind : {BasisKind::Laguerre, BasisKind::Oscillator}) {
        const Scatterer sc(ch, BasisConfig{kind, 1.5, 40}, eq26);
        for (double E : {0.3, 2.0, 9.0}) {
            const auto t = sc.coefficients(E);
            const auto K = kinematic_quantities(t, 40);
            CHECK(std::abs(std::abs(K.T) - 1.0) < 1e-13);
            CHECK(std::abs(K.Rp - std::conj(K.Rm)) < 1e-13 * std::abs(K.Rp));
            const cplx c = t.c[39], s = t.s[39];
            CHECK(std::abs(K.T - (c - cplx(0, 1) * s) / (c + cplx(0, 1) * s)) < 1e-15);
            CHECK(std::abs(K.Rp - (t.c[40] + cplx(0, 1) * t.s[40]) / (c + cplx(0, 1) * s)) < 1e-13 * std::abs(K.Rp));
        }
    }
}

TEST_CASE("S is unitary on the real axis") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dE(0.01, 30.0);
    const auto ch = make_channel(1, -2.0);
    for (auto kind : {BasisKind::Laguerre, BasisKind::Oscillator}) {
        const Scatterer sc(ch, BasisConfig{kind, 2.0, 100}, eq26);
        for (int i = 0; i < 100; ++i) {
            const double E = dE(rng);
            const auto r = sc.s_matrix(E);
            CHECK(std::abs(std::abs(r.S) - 1.0) <= 1e-10);
            CHECK(std::abs(r.S * r.S_reciprocal - 1.0) <= 1e-12);
            CHECK(std::abs(std::exp(cplx(0, 2.0 * r.phase_shift)) - r.S) <= 1e-12);
            CHECK(r.phase_shift > -M_PI / 2 - 1e-15);
            CHECK(r.phase_shift <= M_PI / 2 + 1e-15);
        }
    }
}

TEST_CASE("zero potential gives S = 1") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dE(0.01, 40.0), dl(0.3, 8.0);
    std::uniform_int_distribution<int> dN(2, 150);
    for (auto kind : {BasisKind::Laguerre, BasisKind::Oscillator})
        for (auto conv : {Convention::EqNineteen, Convention::TableTwo})
            for (int i = 0; i < 20; ++i) {
                const Scatterer sc(make_channel(i % 3, 0.5 * (i % 4)), BasisConfig{kind, dl(rng), dN(rng)},
                                   PotentialModel::zero(), conv);
                const double E = dE(rng);
                CHECK(std::abs(sc.s_matrix(E).S - 1.0) <= 1e-8);
            }
}

TEST_CASE("phase shifts converge to the direct integration") {
    const auto ch = make_channel(1, -2.0);
    const Scatterer sc(ch, BasisConfig{BasisKind::Laguerre, 8.0, 200}, eq26);
    for (double E : {0.5, 3.0, 10.0}) {
        const double ref = ode_phase_shift(ch.nu(), eq26, E);
        const double got = sc.s_matrix(E).phase_shift;
        INFO("E " << E << " ode " << ref << " jm " << got);
        CHECK(mod_pi_distance(got, ref) < 1e-3);
    }
    // the tail truncation error shrinks as the block grows
    const Scatterer small = sc.with_basis(BasisConfig{BasisKind::Laguerre, 8.0, 50});
    const double ref = ode_phase_shift(ch.nu(), eq26, 3.0);
    CHECK(mod_pi_distance(sc.s_matrix(3.0).phase_shift, ref) < mod_pi_distance(small.s_matrix(3.0).phase_shift, ref));
}

TEST_CASE("oscillator and Laguerre phase shifts agree") {
    const auto ch = make_channel(2, -4.0);
    const Scatterer lag(ch, BasisConfig{BasisKind::Laguerre, 6.0, 200}, eq26);
    const Scatterer osc(ch, BasisConfig{BasisKind::Oscillator, 1.5, 200}, eq26);
    for (double E : {1.0, 4.0, 8.0}) CHECK(mod_pi_distance(lag.s_matrix(E).phase_shift, osc.s_matrix(E).phase_shift) < 2e-3);
}

TEST_CASE("phase unwrapping") {
    std::vector<double> smooth;
    for (int i = 0; i < 50; ++i) smooth.push_back(0.15 * i - 1.0);
    std::vector<double> wrapped;
    for (double d : smooth) wrapped.push_back(std::atan(std::tan(d)));
    const auto u = unwrap_phase(wrapped);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - smooth[i]) < 1e-12);
    CHECK(unwrap_phase({}).empty());
}

TEST_CASE("pole function is conjugate-symmetric") {
    const auto ch = make_channel(1, -2.0);
    const Scatterer sc(ch, BasisConfig{BasisKind::Laguerre, 2.0, 60}, eq26);
    const cplx E(3.0, -0.7);
    const auto r = sc.s_matrix(std::conj(E));
    // S(E*) = 1 / conj(S(E)) for a real potential
    CHECK(std::abs(r.S * std::conj(sc.s_matrix(E).S) - 1.0) < 1e-9);
    // the outgoing-wave function vanishes exactly where 1/S does
    const auto pole = polish_root([&](cplx z) { return sc.pole_function(z); }, cplx(3.4265, -0.0128));
    REQUIRE(pole.has_value());
    CHECK(std::abs(sc.s_matrix(pole->E).S_reciprocal) < 1e-8);
}

TEST_CASE("narrow resonance agrees with an independent width estimate") {
    // Breit-Wigner fit of the direct-integration phase and a complex-scaling
    // calculation both give 3.42639 - 0.012774 i
    const auto ch = make_channel(1, -2.0);
    const Scatterer sc(ch, BasisConfig{BasisKind::Laguerre, 4.0, 200}, eq26);
    const auto root = polish_root([&](cplx z) { return sc.pole_function(z); }, cplx(3.4265, -0.0125));
    REQUIRE(root.has_value());
    CHECK(std::abs(root->E.real() - 3.42639) < 1e-4);
    CHECK(std::abs(root->E.imag() + 0.012774) < 1e-4);
    CHECK(root->residual < 1e-10);
}

TEST_CASE("Muller polishing on a known function") {
    auto f = [](cplx z) { return (z - cplx(1.0, -2.0)) * (z + 3.0) * std::exp(z / 10.0); };
    const auto r = polish_root(f, cplx(0.7, -1.5));
    REQUIRE(r.has_value());
    CHECK(std::abs(r->E - cplx(1.0, -2.0)) < 1e-12);
    CHECK(r->iterations > 0);
    CHECK_FALSE(polish_root([](cplx) { return cplx(1.0); }, cplx(0.0), 1e-10, 20).has_value());
}

TEST_CASE("pole search over a region") {
    const auto ch = make_channel(1, -2.0);
    const Scatterer sc(ch, BasisConfig{BasisKind::Laguerre, 4.0, 100}, eq26);
    PoleSearchOptions opts;
    opts.grid_re = 10;
    opts.grid_im = 6;
    opts.spread_fraction = 0.0;
    const auto res = find_poles(sc, Region{3.2, 3.7, -0.1, -0.001}, opts);
    REQUIRE_FALSE(res.roots.empty());
    bool narrow = false;
    for (const auto& r : res.roots) {
        CHECK(r.lambda_used == 4.0);
        CHECK(r.N_used == 100);
        if (std::abs(r.E - cplx(3.4264, -0.0128)) < 1e-3) narrow = true;
    }
    CHECK(narrow);
    for (std::size_t i = 1; i < res.roots.size(); ++i) CHECK(res.roots[i - 1].E.real() <= res.roots[i].E.real());
    CHECK_THROWS_AS(find_poles(sc, Region{1.0, 1.0, -1.0, 0.0}, opts), Error);
}

TEST_CASE("bound states of an exponential well") {
    // -8 e^(-r) in the s wave: bound states satisfy J_(2 kappa)(8) = 0 with E = -kappa^2/2
    auto J = [](double kappa) { return boost::math::cyl_bessel_j(2.0 * kappa, 8.0); };
    std::vector<double> exact;
    for (double lo = 0.05; lo < 4.0; lo += 0.05)
        if (J(lo) * J(lo + 0.05) < 0) {
            boost::uintmax_t it = 100;
            const auto [a, b] = boost::math::tools::bisect(J, lo, lo + 0.05, boost::math::tools::eps_tolerance<double>(50), it);
            const double kappa = 0.5 * (a + b);
            exact.push_back(-0.5 * kappa * kappa);
        }
    std::sort(exact.begin(), exact.end());
    REQUIRE(exact.size() == 2);

    const auto ch = make_channel(0, 0.0);
    const PotentialModel well{PowExp{-8.0, 0.0, 1.0}};
    for (auto [kind, lambda] : {std::pair{BasisKind::Laguerre, 3.0}, std::pair{BasisKind::Oscillator, 1.0}}) {
        const Scatterer sc(ch, BasisConfig{kind, lambda, 100}, well);
        const auto found = find_bound_states(sc, -6.0, -0.01);
        REQUIRE(found.size() == exact.size());
        for (std::size_t i = 0; i < exact.size(); ++i) {
            INFO("kind " << int(kind) << " exact " << exact[i] << " got " << found[i].E.real());
            CHECK(std::abs(found[i].E.real() - exact[i]) < 1e-5);
            CHECK(found[i].E.imag() == 0.0);
        }
    }
}

TEST_CASE("stability scan finds a plateau around a converged pole") {
    const auto ch = make_channel(1, -2.0);
    const ScattererFactory make = [&](double lambda, int N) {
        return Scatterer(ch, BasisConfig{BasisKind::Laguerre, lambda, N}, eq26);
    };
    const std::vector<double> lambdas{3.0, 3.5, 4.0, 4.5, 5.0};
    const auto rep = stability_scan(make, lambdas, {100}, cplx(3.4264, -0.0128), 1e-3);
    REQUIRE(rep.rows.size() == lambdas.size());
    for (const auto& row : rep.rows) {
        CHECK(row.converged);
        CHECK(std::abs(row.E - cplx(3.4264, -0.0128)) < 1e-3);
    }
    CHECK(rep.has_plateau);
    CHECK(rep.plateau_hi > rep.plateau_lo);
    CHECK(rep.plateau_drift <= 1e-3);
}

TEST_CASE("a Scatterer rebuilt at another scale keeps its physics") {
    const auto ch = make_channel(1, 4.0);
    const Scatterer a(ch, BasisConfig{BasisKind::Laguerre, 3.0, 80}, eq26);
    const Scatterer b = a.with_lambda(3.3);
    CHECK(b.basis().lambda == 3.3);
    CHECK(b.basis().N == 80);
    CHECK(mod_pi_distance(a.s_matrix(5.0).phase_shift, b.s_matrix(5.0).phase_shift) < 5e-3);
    CHECK(a.edge(2.0) == laguerre::edge_element(ch, 3.0, 2.0, 80));
}
