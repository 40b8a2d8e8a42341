#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "channel.hpp"
#include "reference.hpp"
#include "specfun.hpp"

namespace jm {

// U(r) = v0 r^p e^(-a r)
struct PowExp {
    double v0 = 0.0;
    double p = 0.0;
    double a = 1.0;
};

class TabulatedPotential;

class PotentialModel {
public:
    PotentialModel() = default;
    explicit PotentialModel(PowExp pe);
    static PotentialModel tabulated(std::vector<double> r, std::vector<double> u);
    static PotentialModel zero() { return PotentialModel(PowExp{0.0, 0.0, 1.0}); }

    bool is_tabulated() const noexcept { return table_ != nullptr; }
    const PowExp& powexp() const noexcept { return pe_; }
    double table_max_r() const noexcept;

    // Beyond the last tabulated radius U is zero; out_of_table is set when that happens.
    double operator()(double r, bool* out_of_table = nullptr) const;

private:
    PowExp pe_{};
    std::shared_ptr<const TabulatedPotential> table_;
};

double eval_potential(const PotentialModel& model, double r);

// Tabulated potential from two-column text (r, U), ascending r, '#' comments allowed.
PotentialModel load_potential_table(const std::string& path);

struct PotentialMatrixReport {
    Eigen::MatrixXd U;
    int order = 0;             // quadrature points used
    double corner_drift = 0.0;  // relative change of U[N-1][N-1] from M to M+8 points
    double max_drift = 0.0;     // max |U(M) - U(M+8)| over all elements
    bool out_of_table = false;
};

// N + 20 for Laguerre, 2N + 20 for the oscillator.
int default_quadrature_order(const BasisConfig& basis);

// Matrix elements <phi_n|U|phi_m>, n,m < N, with an M-point Gauss rule
// (M = 0 selects the default order).
Eigen::MatrixXd potential_matrix(const PotentialModel& model, const ChannelSpec& ch,
                                 const BasisConfig& basis, int M = 0, bool* out_of_table = nullptr);

// Same, plus the M versus M+8 refinement check on the last diagonal element.
PotentialMatrixReport checked_potential_matrix(const PotentialModel& model, const ChannelSpec& ch,
                                               const BasisConfig& basis, int M = 0,
                                               double tolerance = 1e-10);

Eigen::MatrixXd dense(const TridiagonalOperator& t);

struct FiniteSpectra {
    std::vector<double> eps;        // N eigenvalues, ascending
    std::vector<double> eps_trunc;  // N-1 eigenvalues of the leading block
    double prefactor = 1.0;         // 1/(N+2nu) for Laguerre, 1 for the oscillator
};

// Total Hamiltonian H0 + U on the inner block, with its overlap.
struct InnerProblem {
    Eigen::MatrixXd H;
    Eigen::MatrixXd S;
};

InnerProblem assemble(const ChannelSpec& ch, const BasisConfig& basis, const Eigen::MatrixXd& U);
FiniteSpectra finite_spectra(const ChannelSpec& ch, const BasisConfig& basis, const InnerProblem& p);

// Corner element of (H - z S)^-1 in product form.
cplx greens_function(const FiniteSpectra& spectra, cplx z);

}  // namespace jm
