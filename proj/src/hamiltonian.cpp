#include "hamiltonian.hpp"

#include <cmath>
#include <cstdio>
// pchip.hpp calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fstream>
#include <sstream>

namespace jm {

class TabulatedPotential {
public:
    TabulatedPotential(std::vector<double> r, std::vector<double> u)
        : r_min_(r.front()), r_max_(r.back()), u_min_(u.front()),
          spline_(std::move(r), std::move(u)) {}

    double operator()(double r, bool* out_of_table) const {
        if (r > r_max_) {
            if (out_of_table) *out_of_table = true;
            return 0.0;
        }
        // The potential is regular at the origin; hold the first value below the grid.
        if (r < r_min_) return u_min_;
        return spline_(r);
    }
    double r_max() const noexcept { return r_max_; }

private:
    double r_min_, r_max_, u_min_;
    boost::math::interpolators::pchip<std::vector<double>> spline_;
};

PotentialModel::PotentialModel(PowExp pe) : pe_(pe) {
    if (!(pe.a > 0.0)) throw Error(ErrorCode::InvalidArgument, "powexp needs a > 0");
    if (!(pe.p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "powexp needs p >= 0");
    if (!std::isfinite(pe.v0)) throw Error(ErrorCode::InvalidArgument, "powexp needs finite v0");
}

PotentialModel PotentialModel::tabulated(std::vector<double> r, std::vector<double> u) {
    if (r.size() != u.size()) throw Error(ErrorCode::InvalidArgument, "table columns differ in length");
    if (r.size() < 4) throw Error(ErrorCode::InvalidArgument, "table needs at least 4 rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(u[i]))
            throw Error(ErrorCode::InvalidArgument, "table contains a non-finite value");
        if (r[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "table radius must be non-negative");
        if (i > 0 && !(r[i] > r[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "table radii must be strictly ascending");
    }
    PotentialModel m;
    m.table_ = std::make_shared<const TabulatedPotential>(std::move(r), std::move(u));
    return m;
}

double PotentialModel::table_max_r() const noexcept { return table_ ? table_->r_max() : 0.0; }

double PotentialModel::operator()(double r, bool* out_of_table) const {
    if (table_) return (*table_)(r, out_of_table);
    if (pe_.v0 == 0.0) return 0.0;
    if (r <= 0.0) return pe_.p == 0.0 ? pe_.v0 : 0.0;
    return pe_.v0 * std::exp(pe_.p * std::log(r) - pe_.a * r);
}

double eval_potential(const PotentialModel& model, double r) {
    if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "r must be non-negative");
    return model(r);
}

PotentialModel load_potential_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open potential table " + path);
    std::vector<double> r, u;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a)) continue;
        if (!(ss >> b))
            throw Error(ErrorCode::InvalidArgument,
                        path + ":" + std::to_string(line_no) + ": expected two columns");
        r.push_back(a);
        u.push_back(b);
    }
    return PotentialModel::tabulated(std::move(r), std::move(u));
}

namespace {

// The inner block alone is meaningful down to a single state, even though a
// scattering problem needs N >= 2.
void check_block(const BasisConfig& basis) {
    if (!(basis.lambda > 0.0) || !std::isfinite(basis.lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    if (basis.N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
}

}  // namespace

int default_quadrature_order(const BasisConfig& basis) {
    // Products phi_n phi_m are polynomials of degree 2N-2 in y (Laguerre) but
    // 4N-4 in t (oscillator).
    return basis.kind == BasisKind::Laguerre ? basis.N + 20 : 2 * basis.N + 20;
}

Eigen::MatrixXd potential_matrix(const PotentialModel& model, const ChannelSpec& ch,
                                 const BasisConfig& basis, int M, bool* out_of_table) {
    check_block(basis);
    const int N = basis.N;
    if (M == 0) M = default_quadrature_order(basis);
    if (M < N) throw Error(ErrorCode::QuadratureOrderTooLow, "quadrature order below N");
    const double nu = ch.nu();
    const double lambda = basis.lambda;

    if (basis.kind == BasisKind::Laguerre) {
        // phi_n phi_m dr = y^(2nu+1) e^-y Lhat_n^(2nu) Lhat_m^(2nu) dy with
        // Lhat_n^(2nu) = sqrt(n+2nu+1) p_n - sqrt(n) p_(n-1) in the exponent 2nu+1 family.
        const auto rule = gauss_rule(M, 2.0 * nu + 1.0);
        Eigen::MatrixXd B(N, M);
        for (int n = 0; n < N; ++n) {
            B.row(n) = std::sqrt(n + 2.0 * nu + 1.0) * rule.vectors.row(n);
            if (n > 0) B.row(n) -= std::sqrt(double(n)) * rule.vectors.row(n - 1);
        }
        Eigen::VectorXd u(M);
        for (int k = 0; k < M; ++k) u[k] = model(rule.nodes[k] / lambda, out_of_table);
        return B * u.asDiagonal() * B.transpose();
    }
    // The oscillator integrand is analytic in t = lambda r but not in y = t^2 once U
    // has odd powers of r, so integrate in t with weight t^(2nu+1) e^(-t^2).
    const auto rule = half_range_rule(M, 2.0 * nu + 1.0);
    Eigen::MatrixXd V(N, M);
    for (int k = 0; k < M; ++k) {
        const double t = rule.nodes[k];
        const double y = t * t;
        // sqrt(2 w_k) Lhat_n(y_k), with the weight carried as a log scale through the recursion
        double log_scale = 0.5 * (std::log(2.0) + rule.log_weights[k]);
        double p0 = 1.0 / std::sqrt(std::tgamma(nu + 1.0)), p1 = 0.0;
        for (int n = 0; n < N; ++n) {
            V(n, k) = std::exp(log_scale) * p0;
            const double next = ((2.0 * n + nu + 1.0 - y) * p0 - std::sqrt(n * (n + nu)) * p1) /
                                std::sqrt((n + 1.0) * (n + nu + 1.0));
            p1 = p0;
            p0 = next;
            const double big = std::max(std::abs(p0), std::abs(p1));
            if (big > 1e100) {
                p0 /= big, p1 /= big;
                log_scale += std::log(big);
            }
        }
    }
    Eigen::VectorXd u(M);
    for (int k = 0; k < M; ++k) u[k] = model(rule.nodes[k] / lambda, out_of_table);
    return V * u.asDiagonal() * V.transpose();
}

PotentialMatrixReport checked_potential_matrix(const PotentialModel& model, const ChannelSpec& ch,
                                               const BasisConfig& basis, int M, double tolerance) {
    if (M == 0) M = default_quadrature_order(basis);
    PotentialMatrixReport rep;
    rep.order = M;
    rep.U = potential_matrix(model, ch, basis, M, &rep.out_of_table);
    const Eigen::MatrixXd finer = potential_matrix(model, ch, basis, M + 8);
    const int c = basis.N - 1;
    const double scale = std::max(std::abs(rep.U(c, c)), std::abs(finer(c, c)));
    rep.corner_drift = scale > 0.0 ? std::abs(finer(c, c) - rep.U(c, c)) / scale : 0.0;
    rep.max_drift = (finer - rep.U).cwiseAbs().maxCoeff();
    if (rep.corner_drift > tolerance) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "M=%d and M+8 rules differ by %.3g (relative) on the last diagonal element", M,
                      rep.corner_drift);
        throw Error(ErrorCode::QuadratureOrderTooLow, msg);
    }
    return rep;
}

Eigen::MatrixXd dense(const TridiagonalOperator& t) {
    const int N = int(t.diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
    for (int n = 0; n < N; ++n) m(n, n) = t.diag[n].real();
    for (int n = 0; n + 1 < N; ++n) m(n, n + 1) = m(n + 1, n) = t.off[n].real();
    return m;
}

InnerProblem assemble(const ChannelSpec& ch, const BasisConfig& basis, const Eigen::MatrixXd& U) {
    check_block(basis);
    const int N = basis.N;
    if (U.rows() != N || U.cols() != N) throw Error(ErrorCode::InvalidArgument, "potential matrix size");
    InnerProblem p;
    if (basis.kind == BasisKind::Laguerre) {
        p.H = dense(laguerre::free_hamiltonian(ch, basis.lambda, N)) + U;
        p.S = dense(laguerre::overlap_matrix(ch, N));
    } else {
        p.H = dense(oscillator::free_hamiltonian(ch, basis.lambda, N)) + U;
        p.S = Eigen::MatrixXd::Identity(N, N);
    }
    return p;
}

namespace {

std::vector<double> generalized_eigenvalues(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S,
                                            bool identity_overlap) {
    std::vector<double> out(H.rows());
    if (H.rows() == 0) return out;
    if (identity_overlap) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "symmetric eigensolve");
        for (int i = 0; i < H.rows(); ++i) out[i] = es.eigenvalues()[i];
        return out;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::OverlapNotPositiveDefinite, "Cholesky of the overlap failed");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(H, S, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "generalized eigensolve");
    for (int i = 0; i < H.rows(); ++i) out[i] = es.eigenvalues()[i];
    return out;
}

}  // namespace

FiniteSpectra finite_spectra(const ChannelSpec& ch, const BasisConfig& basis, const InnerProblem& p) {
    const int N = int(p.H.rows());
    const bool ortho = basis.kind == BasisKind::Oscillator;
    FiniteSpectra s;
    s.eps = generalized_eigenvalues(p.H, p.S, ortho);
    s.eps_trunc = generalized_eigenvalues(p.H.topLeftCorner(N - 1, N - 1),
                                          p.S.topLeftCorner(N - 1, N - 1), ortho);
    // det S_(N-1) / det S_N; the Laguerre overlap has det S_N = Gamma(N+2nu+1)/Gamma(2nu+1).
    s.prefactor = ortho ? 1.0 : 1.0 / (N + 2.0 * ch.nu());
    return s;
}

cplx greens_function(const FiniteSpectra& spectra, cplx z) {
    const auto& e = spectra.eps;
    const auto& t = spectra.eps_trunc;
    for (double en : e) {
        if (std::abs(z - en) <= 1e-13 * (1.0 + std::abs(en)))
            throw Error(ErrorCode::PoleHit, "z coincides with an eigenvalue of the inner Hamiltonian");
    }
    cplx g = spectra.prefactor;
    for (std::size_t m = 0; m < t.size(); ++m) g *= (t[m] - z) / (e[m] - z);
    return g / (e.back() - z);
}

}  // namespace jm
