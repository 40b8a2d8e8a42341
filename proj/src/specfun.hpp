#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace jm {

using cplx = std::complex<double>;

// Three-term recursions. Each returns values for degrees 0..n_max.
std::vector<cplx> gegenbauer_seq(int n_max, double a, cplx x);
// Associated (Wimp) Gegenbauer polynomials C_n^a(x, 1).
std::vector<cplx> assoc_gegenbauer_seq(int n_max, double a, cplx x);
std::vector<cplx> laguerre_seq(int n_max, double beta, cplx y);
// Associated Laguerre polynomials L_n^nu(x, 1): recursion coefficients shifted by one.
std::vector<cplx> assoc_laguerre_seq(int n_max, double nu, cplx x);

// K_p(theta) = integral from theta to pi/2 of sin(phi)^(1-2p), i.e. the
// integral of (1-t^2)^(-p) from 0 to cos(theta). Requires 0 < Re theta < pi.
cplx sine_power_integral(double p, cplx theta, cplx sin_theta, cplx cos_theta);

// Energy function tau of the cosine-like Laguerre coefficients,
// x R ₂F₁(1/2, nu+1; 3/2; x^2). The first form takes x = cos(theta) and uses
// principal branches; the second reuses an already continued theta.
cplx tau_laguerre(double nu, cplx x);
cplx tau_laguerre(double nu, cplx theta, cplx sin_theta, cplx x);
double tau_laguerre_scale(double nu);

// Energy function tau of the cosine-like oscillator coefficients, matched so
// that the cosine-like series tends to +sqrt(2kr) Y_nu(kr) at large r.
cplx tau_oscillator(double nu, cplx mu);
double tau_oscillator_scale(double nu);

std::pair<double, double> bessel_jy(double nu, double z);

double log_gamma_ratio(double a, double b);  // log(Gamma(a) / Gamma(b))

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double weight_exponent = 0.0;
    std::vector<double> log_weights;  // weights can underflow for large N
    // vectors(n, k) = sqrt(w_k) p_n(y_k) with p_n orthonormal under y^alpha e^-y.
    Eigen::MatrixXd vectors;
};

QuadratureRule gauss_rule(int N, double weight_exponent);

// Gauss rule for t^alpha e^(-t^2) on [0, inf), from a discretized Stieltjes
// procedure. vectors is left empty.
QuadratureRule half_range_rule(int N, double weight_exponent);

}  // namespace jm
