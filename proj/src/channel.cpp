#include "channel.hpp"

#include <cmath>
#include <string>

namespace jm {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RealRepresentationViolation: return "RealRepresentationViolation";
        case ErrorCode::SingularKinematics: return "SingularKinematics";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::DegenerateOrder: return "DegenerateOrder";
        case ErrorCode::EigenFailure: return "EigenFailure";
        case ErrorCode::QuadratureOrderTooLow: return "QuadratureOrderTooLow";
        case ErrorCode::OutOfTable: return "OutOfTable";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::DivisionDegenerate: return "DivisionDegenerate";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::RegionEmpty: return "RegionEmpty";
        case ErrorCode::OverlapNotPositiveDefinite: return "OverlapNotPositiveDefinite";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

namespace {
double effective_order_squared(int ell, double A) {
    const double h = ell + 0.5;
    return h * h + A;
}
}  // namespace

double ChannelSpec::nu() const noexcept { return std::sqrt(effective_order_squared(ell_, A_)); }

ChannelSpec make_channel(int ell, double A) {
    if (ell < 0) throw Error(ErrorCode::InvalidArgument, "ell must be non-negative");
    if (!std::isfinite(A)) throw Error(ErrorCode::InvalidArgument, "A must be finite");
    const double nu2 = effective_order_squared(ell, A);
    if (!(nu2 > 0.0)) {
        throw Error(ErrorCode::RealRepresentationViolation,
                    "(ell+1/2)^2 + A = " + std::to_string(nu2) + " must be positive");
    }
    return ChannelSpec(ell, A);
}

void validate(const BasisConfig& basis) {
    if (!(basis.lambda > 0.0) || !std::isfinite(basis.lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    if (basis.N < 2) throw Error(ErrorCode::InvalidArgument, "N must be at least 2");
}

EnergyPoint energy_point(cplx E, const BasisConfig& basis) {
    validate(basis);
    if (E == cplx(0.0)) throw Error(ErrorCode::SingularKinematics, "E = 0");
    EnergyPoint p{};
    p.E = E;
    p.k = std::sqrt(2.0 * E);
    p.mu = p.k / basis.lambda;
    const cplx mu2 = p.mu * p.mu;
    if (basis.kind == BasisKind::Oscillator) {
        p.x = mu2;
        return p;
    }
    const cplx den = 4.0 * mu2 + 1.0;
    if (den == cplx(0.0)) throw Error(ErrorCode::SingularKinematics, "4 mu^2 + 1 = 0");
    p.x = (4.0 * mu2 - 1.0) / den;
    if (p.x == cplx(1.0) || p.x == cplx(-1.0))
        throw Error(ErrorCode::SingularKinematics, "cos(theta) = +-1");
    // Analytic forms of sqrt(1 - x^2) and acos(x): both stay continuous when E
    // is continued through the positive real axis into the lower half plane.
    p.sin_theta = 4.0 * p.mu / den;
    const cplx i(0.0, 1.0);
    p.theta = -i * (std::log(2.0 * p.mu + i) - std::log(2.0 * p.mu - i));
    return p;
}

}  // namespace jm
