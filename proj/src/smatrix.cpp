#include "smatrix.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace jm {

namespace {

constexpr cplx I(0.0, 1.0);

cplx checked_ratio(cplx num, cplx den, cplx scale, const char* what) {
    if (std::abs(den) <= 1e-14 * std::abs(scale) || den == cplx(0.0))
        throw Error(ErrorCode::DivisionDegenerate, std::string("vanishing denominator in ") + what);
    return num / den;
}

// (eps_k - z) g(z): the Green's function with its k-th pole divided out.
double reduced_green(const FiniteSpectra& sp, double z, std::size_t k) {
    double g = sp.prefactor;
    const auto& e = sp.eps;
    const auto& t = sp.eps_trunc;
    for (std::size_t m = 0; m < t.size(); ++m) g *= t[m] - z;
    for (std::size_t n = 0; n < e.size(); ++n)
        if (n != k) g /= e[n] - z;
    return g;
}

int quadrature_ceiling(int N) { return 6 * N + 200; }

}  // namespace

Kinematics kinematic_quantities(const CoefficientTable& t, int N) {
    if (N < 1 || int(t.s.size()) < N + 1 || int(t.c.size()) < N + 1)
        throw Error(ErrorCode::InvalidArgument, "coefficient table shorter than N+1");
    const cplx cp = t.c[N - 1] + I * t.s[N - 1];
    const cplx cm = t.c[N - 1] - I * t.s[N - 1];
    const cplx scale = std::abs(t.c[N - 1]) + std::abs(t.s[N - 1]);
    Kinematics k;
    k.T = checked_ratio(cm, cp, scale, "T");
    k.Rp = checked_ratio(t.c[N] + I * t.s[N], cp, scale, "R+");
    k.Rm = checked_ratio(t.c[N] - I * t.s[N], cm, scale, "R-");
    return k;
}

Scatterer::Scatterer(ChannelSpec channel, BasisConfig basis, PotentialModel potential,
                     Convention convention, int quadrature_order)
    : channel_(channel), basis_(basis), potential_(std::move(potential)), convention_(convention),
      explicit_order_(quadrature_order) {
    validate(basis_);
    if (quadrature_order > 0) {
        report_ = checked_potential_matrix(potential_, channel_, basis_, quadrature_order);
    } else {
        // Default policy: start at the default order and add points until the refinement check passes.
        for (int M = default_quadrature_order(basis_);; M += 8) {
            try {
                report_ = checked_potential_matrix(potential_, channel_, basis_, M);
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::QuadratureOrderTooLow || M + 8 > quadrature_ceiling(basis_.N))
                    throw;
            }
        }
    }
    inner_ = assemble(channel_, basis_, report_.U);
    spectra_ = finite_spectra(channel_, basis_, inner_);
}

CoefficientTable Scatterer::coefficients(cplx E) const {
    if (basis_.kind == BasisKind::Laguerre)
        return laguerre::coefficients(channel_, basis_.lambda, E, basis_.N, convention_);
    return oscillator::coefficients(channel_, basis_.lambda, E, basis_.N);
}

cplx Scatterer::edge(cplx E) const {
    if (basis_.kind == BasisKind::Laguerre) return laguerre::edge_element(channel_, basis_.lambda, E, basis_.N);
    return oscillator::edge_element(channel_, basis_.lambda, basis_.N);
}

SMatrixResult Scatterer::s_matrix(cplx E) const {
    SMatrixResult r;
    const auto t = coefficients(E);
    r.parts = kinematic_quantities(t, basis_.N);
    r.g = green(E);
    r.J = edge(E);
    const cplx dp = 1.0 + r.g * r.J * r.parts.Rp;
    const cplx dm = 1.0 + r.g * r.J * r.parts.Rm;
    // The cosine-like solution tends to +sqrt(2kr) Y_nu, so the printed ratio is e^{-2i delta}.
    r.S_reciprocal = r.parts.T * dm / dp;
    r.S = 1.0 / r.S_reciprocal;
    r.phase_shift = phase_shift(r);
    return r;
}

cplx Scatterer::pole_function(cplx E) const {
    // only the outgoing ratio: the incoming combination behind T and R+ can
    // underflow deep in the lower half plane
    const auto t = coefficients(E);
    const int N = basis_.N;
    const cplx om = t.c[N - 1] - I * t.s[N - 1];
    const cplx Rm = checked_ratio(t.c[N] - I * t.s[N], om, std::abs(t.c[N - 1]) + std::abs(t.s[N - 1]), "R-");
    return 1.0 + green(E) * edge(E) * Rm;
}

double Scatterer::decaying_ratio(double E) const {
    if (!(E < 0.0)) throw Error(ErrorCode::InvalidArgument, "decaying solution needs E < 0");
    const int N = basis_.N;
    const double nu = channel_.nu();
    const double l2 = basis_.lambda * basis_.lambda;
    const double mu2 = 2.0 * E / l2;
    const bool lag = basis_.kind == BasisKind::Laguerre;
    auto diag = [&](int n) {
        return lag ? l2 / 8.0 * (2.0 * n + 2.0 * nu + 1.0) * (1.0 - 4.0 * mu2)
                   : l2 / 2.0 * (2.0 * n + nu + 1.0 - mu2);
    };
    auto off = [&](int n) {  // J_{n,n+1}
        return lag ? l2 / 8.0 * (1.0 + 4.0 * mu2) * std::sqrt((n + 1.0) * (n + 2.0 * nu + 1.0))
                   : l2 / 2.0 * std::sqrt((n + 1.0) * (n + nu + 1.0));
    };
    // f_n/f_{n-1} = -J_{n-1,n} / (J_{n,n} + J_{n,n+1} f_{n+1}/f_n), run downward from a deep tail.
    auto tail = [&](int depth) {
        double r = 0.0;
        for (int n = N + depth; n >= N; --n) r = -off(n - 1) / (diag(n) + off(n) * r);
        return r;
    };
    double prev = tail(200);
    for (int depth = 400; depth <= 204800; depth *= 2) {
        const double next = tail(depth);
        if (std::abs(next - prev) <= 1e-15 * std::abs(next)) return next;
        prev = next;
    }
    throw Error(ErrorCode::NonConvergence, "continued fraction for the decaying solution");
}

double phase_shift(const SMatrixResult& r) {
    double d = 0.5 * std::arg(r.S);
    if (d <= -std::numbers::pi / 2) d += std::numbers::pi;
    return d;
}

std::vector<double> unwrap_phase(const std::vector<double>& delta) {
    std::vector<double> out(delta.size());
    double shift = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (i > 0) {
            const double jump = delta[i] + shift - out[i - 1];
            shift -= std::numbers::pi * std::round(jump / std::numbers::pi);
        }
        out[i] = delta[i] + shift;
    }
    return out;
}

std::optional<ResonanceResult> polish_root(const std::function<cplx(cplx)>& f, cplx seed,
                                           double tolerance, int max_iterations) {
    auto safe = [&](cplx z, cplx& out) {
        try {
            out = f(z);
            return std::isfinite(out.real()) && std::isfinite(out.imag());
        } catch (const Error&) {
            return false;
        }
    };
    const double h = 1e-3 * std::max(1.0, std::abs(seed));
    cplx x0 = seed - h, x1 = seed + h * I, x2 = seed;
    cplx f0, f1, f2;
    if (!safe(x0, f0) || !safe(x1, f1) || !safe(x2, f2)) return std::nullopt;

    int it = 0;
    for (; it < max_iterations; ++it) {
        const cplx q = (x2 - x1) / (x1 - x0);
        const cplx A = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
        const cplx B = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
        const cplx C = (1.0 + q) * f2;
        const cplx disc = std::sqrt(B * B - 4.0 * A * C);
        const cplx den = std::abs(B + disc) >= std::abs(B - disc) ? B + disc : B - disc;
        if (den == cplx(0.0)) break;
        cplx x3 = x2 - (x2 - x1) * 2.0 * C / den;
        cplx f3;
        int tries = 0;
        while (!safe(x3, f3) && tries++ < 8) x3 += 1e-9 * (1.0 + std::abs(x3)) * cplx(1.0, 0.7);
        if (tries > 8) return std::nullopt;
        const double step = std::abs(x3 - x2);
        x0 = x1, f0 = f1;
        x1 = x2, f1 = f2;
        x2 = x3, f2 = f3;
        if (step <= 1e-15 * (1.0 + std::abs(x2)) || std::abs(f2) == 0.0) break;
        if (std::abs(x2 - seed) > 1e3 * (1.0 + std::abs(seed))) return std::nullopt;
    }

    // Newton with a central-difference derivative; keep the step only if it helps.
    for (int k = 0; k < 4 && std::abs(f2) > 0.0; ++k) {
        const double d = 1e-6 * (1.0 + std::abs(x2));
        cplx fp, fm;
        if (!safe(x2 + d, fp) || !safe(x2 - d, fm)) break;
        const cplx deriv = (fp - fm) / (2.0 * d);
        if (deriv == cplx(0.0)) break;
        const cplx x3 = x2 - f2 / deriv;
        cplx f3;
        if (!safe(x3, f3) || std::abs(f3) >= std::abs(f2)) break;
        x2 = x3, f2 = f3;
    }

    if (!(std::abs(f2) <= tolerance)) return std::nullopt;
    ResonanceResult r;
    r.E = x2;
    r.residual = std::abs(f2);
    r.iterations = it;
    return r;
}

namespace {

void sort_roots(std::vector<ResonanceResult>& roots) {
    std::sort(roots.begin(), roots.end(), [](const ResonanceResult& a, const ResonanceResult& b) {
        if (a.E.real() != b.E.real()) return a.E.real() < b.E.real();
        return a.E.imag() < b.E.imag();
    });
}

bool inside(const Region& g, cplx z, double pad) {
    return z.real() >= g.re_min - pad && z.real() <= g.re_max + pad && z.imag() >= g.im_min - pad &&
           z.imag() <= g.im_max + pad;
}

}  // namespace

Scatterer Scatterer::with_basis(BasisConfig basis) const {
    return Scatterer(channel_, basis, potential_, convention_, explicit_order_);
}

Scatterer Scatterer::with_lambda(double lambda) const {
    BasisConfig b = basis_;
    b.lambda = lambda;
    return with_basis(b);
}

PoleSearchResult find_poles(const Scatterer& sc, const Region& region, const PoleSearchOptions& opts) {
    if (!(region.re_min < region.re_max) || !(region.im_min <= region.im_max))
        throw Error(ErrorCode::RegionEmpty, "search rectangle has no interior");
    if (region.im_min == 0.0 && region.im_max == 0.0) {
        PoleSearchResult out;
        out.roots = find_bound_states(sc, region.re_min, region.re_max, opts.tolerance);
        return out;
    }

    const int nr = std::max(opts.grid_re, 3);
    const int ni = std::max(opts.grid_im, 3);
    const double dr = (region.re_max - region.re_min) / (nr - 1);
    const double di = region.im_max > region.im_min ? (region.im_max - region.im_min) / (ni - 1) : 0.0;
    std::vector<double> mag(std::size_t(nr) * ni, std::numeric_limits<double>::infinity());
    auto at = [&](int i, int j) -> double& { return mag[std::size_t(i) * ni + j]; };
    auto node = [&](int i, int j) { return cplx(region.re_min + i * dr, region.im_min + j * di); };
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ni; ++j) {
            try {
                at(i, j) = std::abs(sc.pole_function(node(i, j)));
            } catch (const Error&) {
            }
        }

    std::vector<cplx> seeds = opts.seeds;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ni; ++j) {
            const double v = at(i, j);
            if (!std::isfinite(v)) continue;
            bool minimum = true;
            for (int a = -1; a <= 1 && minimum; ++a)
                for (int b = -1; b <= 1; ++b) {
                    if ((a == 0 && b == 0) || i + a < 0 || i + a >= nr || j + b < 0 || j + b >= ni) continue;
                    if (at(i + a, j + b) < v) {
                        minimum = false;
                        break;
                    }
                }
            if (minimum) seeds.push_back(node(i, j));
        }

    // A narrow resonance is a zero of D sitting next to one of its poles, an
    // inner eigenvalue eps, and the grid rarely resolves the pair. With
    // g ~ r/(eps - E) near eps, D vanishes at about E = eps + r J R-(eps).
    for (std::size_t k = 0; k < sc.spectra().eps.size(); ++k) {
        const double e = sc.spectra().eps[k];
        if (e < region.re_min || e > region.re_max || e <= 0.0) continue;
        try {
            const auto t = sc.coefficients(e);
            const int N = sc.basis().N;
            const cplx Rm = (t.c[N] - I * t.s[N]) / (t.c[N - 1] - I * t.s[N - 1]);
            const cplx guess = e + reduced_green(sc.spectra(), e, k) * sc.edge(e) * Rm;
            if (inside(region, guess, 0.0)) seeds.push_back(guess);
        } catch (const Error&) {
        }
    }

    auto f = [&sc](cplx E) { return sc.pole_function(E); };
    PoleSearchResult out;
    const double pad = 0.05 * std::max(region.re_max - region.re_min, region.im_max - region.im_min);
    for (const cplx s : seeds) {
        auto r = polish_root(f, s, opts.tolerance, opts.max_iterations);
        if (!r) {
            out.failed_seeds.push_back(s);
            continue;
        }
        if (!inside(region, r->E, pad)) continue;
        const bool duplicate = std::any_of(out.roots.begin(), out.roots.end(), [&](const ResonanceResult& q) {
            return std::abs(q.E - r->E) <= opts.merge_distance * std::max(1.0, std::abs(q.E));
        });
        if (duplicate) continue;
        r->lambda_used = sc.basis().lambda;
        r->N_used = sc.basis().N;
        out.roots.push_back(*r);
    }

    if (opts.spread_fraction > 0.0) {
        for (double factor : {1.0 - opts.spread_fraction, 1.0 + opts.spread_fraction}) {
            const Scatterer other = sc.with_lambda(sc.basis().lambda * factor);
            auto g = [&other](cplx E) { return other.pole_function(E); };
            for (auto& r : out.roots) {
                const auto moved = polish_root(g, r.E, opts.tolerance, opts.max_iterations);
                const double d = moved ? std::abs(moved->E - r.E) : std::numeric_limits<double>::infinity();
                r.stability_spread = std::max(r.stability_spread, d);
            }
        }
    }
    sort_roots(out.roots);
    return out;
}

std::vector<ResonanceResult> find_bound_states(const Scatterer& sc, double e_min, double e_max,
                                               double tolerance) {
    if (!(e_min < e_max)) throw Error(ErrorCode::RegionEmpty, "empty energy interval");
    e_max = std::min(e_max, 0.0);
    const auto& sp = sc.spectra();
    std::vector<ResonanceResult> out;
    for (std::size_t k = 0; k < sp.eps.size(); ++k) {
        const double ek = sp.eps[k];
        if (!(ek < e_max && ek >= e_min)) continue;
        // D = 1 + g J R has a zero next to each inner eigenvalue whose eigenvector is
        // small at the basis edge; with the pole divided out the root can be bracketed.
        auto F = [&](double E) {
            return (ek - E) + reduced_green(sp, E, k) * sc.edge(E).real() * sc.decaying_ratio(E);
        };
        const double lo_gap = k > 0 ? ek - sp.eps[k - 1] : ek - e_min + 1.0;
        const double hi_gap = (k + 1 < sp.eps.size() ? sp.eps[k + 1] : 0.0) - ek;
        double h = 1e-9 * (1.0 + std::abs(ek));
        double a = ek - h, b = std::min(ek + h, 0.5 * ek);
        double fa = F(a), fb = F(b);
        while (fa * fb > 0.0 && h < 0.25 * std::min(lo_gap, hi_gap)) {
            h *= 4.0;
            a = ek - h, b = std::min(ek + h, 0.5 * ek);
            fa = F(a), fb = F(b);
        }
        if (fa * fb > 0.0) continue;
        boost::uintmax_t iters = 200;
        const auto [lo, hi] = boost::math::tools::bisect(
            F, a, b, [](double x, double y) { return std::abs(x - y) <= 4e-16 * std::abs(x); }, iters);
        ResonanceResult r;
        r.E = 0.5 * (lo + hi);
        r.residual = std::abs(F(r.E.real()));
        r.iterations = int(iters);
        r.lambda_used = sc.basis().lambda;
        r.N_used = sc.basis().N;
        if (r.residual <= tolerance) out.push_back(r);
    }
    sort_roots(out);
    return out;
}

StabilityReport stability_scan(const ScattererFactory& make, const std::vector<double>& lambdas,
                               const std::vector<int>& Ns, cplx target, double plateau_tolerance) {
    if (lambdas.empty() || Ns.empty()) throw Error(ErrorCode::InvalidArgument, "empty stability grid");
    StabilityReport rep;
    for (int N : Ns) {
        for (double lam : lambdas) {
            StabilityRow row{lam, N, target, std::numeric_limits<double>::infinity(), false, false};
            try {
                const Scatterer sc = make(lam, N);
                auto f = [&sc](cplx E) { return sc.pole_function(E); };
                if (auto r = polish_root(f, target)) {
                    row.E = r->E;
                    row.residual = r->residual;
                    row.converged = true;
                }
            } catch (const Error&) {
            }
            rep.rows.push_back(row);
        }
    }

    // Widest run of consecutive converged lambdas, at the first N, whose roots stay
    // within the tolerance of each other.
    const std::size_t n0 = lambdas.size();
    std::size_t best_lo = 0, best_len = 0;
    double best_drift = 0.0;
    for (std::size_t i = 0; i < n0; ++i) {
        if (!rep.rows[i].converged) continue;
        double re_lo = rep.rows[i].E.real(), re_hi = re_lo;
        double im_lo = rep.rows[i].E.imag(), im_hi = im_lo;
        std::size_t j = i;
        double drift = 0.0;
        while (j + 1 < n0 && rep.rows[j + 1].converged) {
            const cplx e = rep.rows[j + 1].E;
            const double nr_lo = std::min(re_lo, e.real()), nr_hi = std::max(re_hi, e.real());
            const double ni_lo = std::min(im_lo, e.imag()), ni_hi = std::max(im_hi, e.imag());
            const double d = std::max(nr_hi - nr_lo, ni_hi - ni_lo);
            if (d > plateau_tolerance) break;
            re_lo = nr_lo, re_hi = nr_hi, im_lo = ni_lo, im_hi = ni_hi;
            drift = d;
            ++j;
        }
        if (j - i + 1 > best_len && j > i) {
            best_len = j - i + 1;
            best_lo = i;
            best_drift = drift;
        }
    }
    if (best_len >= 2) {
        rep.has_plateau = true;
        rep.plateau_lo = lambdas[best_lo];
        rep.plateau_hi = lambdas[best_lo + best_len - 1];
        rep.plateau_drift = best_drift;
        for (std::size_t i = best_lo; i < best_lo + best_len; ++i) rep.rows[i].in_plateau = true;
    }
    return rep;
}

}  // namespace jm
