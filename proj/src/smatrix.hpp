#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hamiltonian.hpp"
#include "reference.hpp"

namespace jm {

struct Kinematics {
    cplx T;   // T_{N-1} = (c - i s)/(c + i s) at n = N-1
    cplx Rp;  // R_N^+ = (c_N + i s_N)/(c_{N-1} + i s_{N-1})
    cplx Rm;  // R_N^-
};

Kinematics kinematic_quantities(const CoefficientTable& t, int N);

struct SMatrixResult {
    cplx S;             // e^{2 i delta}
    cplx S_reciprocal;  // T (1 + g J R-)/(1 + g J R+), the printed-form ratio, equal to 1/S
    double phase_shift = 0.0;
    Kinematics parts;
    cplx g;
    cplx J;
};

struct ResonanceResult {
    cplx E;
    double residual = 0.0;
    int iterations = 0;
    double lambda_used = 0.0;
    int N_used = 0;
    double stability_spread = 0.0;
};

struct Region {
    double re_min, re_max, im_min, im_max;
};

struct PoleSearchOptions {
    int grid_re = 24;
    int grid_im = 24;
    std::vector<cplx> seeds;
    double tolerance = 1e-10;
    double merge_distance = 1e-8;
    int max_iterations = 100;
    double spread_fraction = 0.05;  // relative lambda shift for the stability re-polish; 0 disables
};

struct PoleSearchResult {
    std::vector<ResonanceResult> roots;  // sorted by real part, then imaginary
    std::vector<cplx> failed_seeds;      // seeds whose polish did not converge
};

// One channel + basis + short-range potential, with the inner-block spectra
// precomputed. Every method is const and thread-safe.
class Scatterer {
public:
    Scatterer(ChannelSpec channel, BasisConfig basis, PotentialModel potential,
              Convention convention = Convention::EqNineteen, int quadrature_order = 0);

    const ChannelSpec& channel() const noexcept { return channel_; }
    const BasisConfig& basis() const noexcept { return basis_; }
    const PotentialModel& potential() const noexcept { return potential_; }
    Convention convention() const noexcept { return convention_; }
    const FiniteSpectra& spectra() const noexcept { return spectra_; }
    const PotentialMatrixReport& potential_report() const noexcept { return report_; }
    const InnerProblem& inner() const noexcept { return inner_; }

    CoefficientTable coefficients(cplx E) const;
    cplx edge(cplx E) const;  // J_{N-1,N}
    cplx green(cplx z) const { return greens_function(spectra_, z); }

    SMatrixResult s_matrix(cplx E) const;
    // Vanishes at poles of S: 1 + g J R for the outgoing combination c - i s.
    cplx pole_function(cplx E) const;
    // Ratio f_N/f_{N-1} of the decaying solution of the free recursion (E < 0),
    // by a backward continued fraction.
    double decaying_ratio(double E) const;

    // Same problem in another basis size or scale.
    Scatterer with_basis(BasisConfig basis) const;
    Scatterer with_lambda(double lambda) const;

private:
    ChannelSpec channel_;
    BasisConfig basis_;
    PotentialModel potential_;
    Convention convention_;
    int explicit_order_;
    PotentialMatrixReport report_;
    InnerProblem inner_;
    FiniteSpectra spectra_;
};

double phase_shift(const SMatrixResult& r);
// Removes jumps of pi between neighbouring grid points.
std::vector<double> unwrap_phase(const std::vector<double>& delta);

// Muller iteration from three starting points, then a Newton polish.
std::optional<ResonanceResult> polish_root(const std::function<cplx(cplx)>& f, cplx seed,
                                           double tolerance = 1e-10, int max_iterations = 100);

PoleSearchResult find_poles(const Scatterer& sc, const Region& region,
                                        const PoleSearchOptions& opts = {});
std::vector<ResonanceResult> find_bound_states(const Scatterer& sc, double e_min, double e_max,
                                               double tolerance = 1e-10);

struct StabilityRow {
    double lambda;
    int N;
    cplx E;
    double residual;
    bool converged;
    bool in_plateau;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double plateau_lo = 0.0, plateau_hi = 0.0;  // lambda range of the widest plateau
    double plateau_drift = 0.0;
    bool has_plateau = false;
};

using ScattererFactory = std::function<Scatterer(double lambda, int N)>;

StabilityReport stability_scan(const ScattererFactory& make, const std::vector<double>& lambdas,
                               const std::vector<int>& Ns, cplx target, double plateau_tolerance = 1e-6);

}  // namespace jm
