#pragma once

#include <complex>

#include "error.hpp"

namespace jm {

using cplx = std::complex<double>;

// Angular momentum plus inverse-square strength. The effective Bessel order
// is always recomputed from (ell, A) so it cannot drift out of sync.
class ChannelSpec {
public:
    int ell() const noexcept { return ell_; }
    double A() const noexcept { return A_; }
    double nu() const noexcept;

private:
    friend ChannelSpec make_channel(int ell, double A);
    ChannelSpec(int ell, double A) : ell_(ell), A_(A) {}
    int ell_;
    double A_;
};

ChannelSpec make_channel(int ell, double A);

enum class BasisKind { Laguerre, Oscillator };

struct BasisConfig {
    BasisKind kind = BasisKind::Laguerre;
    double lambda = 1.0;
    int N = 100;
};

void validate(const BasisConfig& basis);

struct EnergyPoint {
    cplx E;
    cplx k;
    cplx mu;
    cplx x;          // cos(theta) for Laguerre, mu^2 for the oscillator
    cplx sin_theta;  // Laguerre only; zero for the oscillator
    cplx theta;      // Laguerre only
};

EnergyPoint energy_point(cplx E, const BasisConfig& basis);

}  // namespace jm
