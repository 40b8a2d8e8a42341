#pragma once

#include <complex>
#include <span>
#include <vector>

#include "channel.hpp"

namespace jm {

// Symmetric tridiagonal matrix truncated to N rows, plus the element that
// couples row N-1 to the first row outside the inner block.
struct TridiagonalOperator {
    std::vector<cplx> diag;
    std::vector<cplx> off;
    cplx edge_element;
};

// Which cosine-like coefficient formula to use. EqNineteen is tau s_n + eta P_n;
// TableTwo is s_n - eta P_n.
enum class Convention { EqNineteen, TableTwo };

struct CoefficientTable {
    std::vector<cplx> s;  // s_0..s_N
    std::vector<cplx> c;  // c_0..c_N
    EnergyPoint energy;
    double nu = 0.0;
    Convention convention = Convention::EqNineteen;
};

namespace laguerre {

double basis_function(int n, const ChannelSpec& ch, double lambda, double r);
TridiagonalOperator reference_operator(const ChannelSpec& ch, double lambda, cplx E, int N);
TridiagonalOperator overlap_matrix(const ChannelSpec& ch, int N);
TridiagonalOperator free_hamiltonian(const ChannelSpec& ch, double lambda, int N);
cplx edge_element(const ChannelSpec& ch, double lambda, cplx E, int N);

std::vector<cplx> sine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N);
std::vector<cplx> cosine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N,
                                      Convention conv);
CoefficientTable coefficients(const ChannelSpec& ch, double lambda, cplx E, int N, Convention conv);

cplx eta(const ChannelSpec& ch, double lambda, const EnergyPoint& p);
cplx wronskian(const EnergyPoint& p);  // 4k/pi

std::vector<cplx> reconstruct(std::span<const cplx> coeffs, const ChannelSpec& ch, double lambda,
                              std::span<const double> r);

}  // namespace laguerre

namespace oscillator {

double basis_function(int n, const ChannelSpec& ch, double lambda, double r);
TridiagonalOperator reference_operator(const ChannelSpec& ch, double lambda, cplx E, int N);
TridiagonalOperator free_hamiltonian(const ChannelSpec& ch, double lambda, int N);
cplx edge_element(const ChannelSpec& ch, double lambda, int N);

std::vector<cplx> sine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N);
std::vector<cplx> cosine_coefficients(const ChannelSpec& ch, double lambda, cplx E, int N);
CoefficientTable coefficients(const ChannelSpec& ch, double lambda, cplx E, int N);

cplx eta(const ChannelSpec& ch, double lambda, const EnergyPoint& p);

std::vector<cplx> reconstruct(std::span<const cplx> coeffs, const ChannelSpec& ch, double lambda,
                              std::span<const double> r);

}  // namespace oscillator

// Sum of terms ordered by ascending magnitude.
cplx ordered_sum(std::vector<cplx> terms);

}  // namespace jm
