#include "jmatrix.h"

#include <new>
#include <string>

#include "smatrix.hpp"

struct jm_problem {
    jm::Scatterer scatterer;
};

namespace {

thread_local std::string last_error;

jm_status fail(jm_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
jm_status guarded(F&& f) {
    try {
        return f();
    } catch (const jm::Error& e) {
        return fail(static_cast<jm_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(JM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(JM_ERR_INTERNAL, e.what());
    }
}

jm::cplx from_c(jm_complex z) { return {z.re, z.im}; }
jm_complex to_c(jm::cplx z) { return {z.real(), z.imag()}; }

jm::BasisKind kind_of(jm_basis b) {
    if (b == JM_BASIS_LAGUERRE) return jm::BasisKind::Laguerre;
    if (b == JM_BASIS_OSCILLATOR) return jm::BasisKind::Oscillator;
    throw jm::Error(jm::ErrorCode::InvalidArgument, "unknown basis kind");
}

jm::Convention convention_of(jm_convention c) {
    if (c == JM_CONVENTION_EQ19) return jm::Convention::EqNineteen;
    if (c == JM_CONVENTION_TABLE2) return jm::Convention::TableTwo;
    throw jm::Error(jm::ErrorCode::InvalidArgument, "unknown coefficient convention");
}

jm_root to_c(const jm::ResonanceResult& r) {
    return {to_c(r.E), r.residual, r.iterations, r.lambda_used, r.N_used, r.stability_spread};
}

jm_status create(const jm_setup* setup, jm::PotentialModel model, jm_problem** out) {
    if (!setup || !out) return fail(JM_ERR_NULL_POINTER, "null argument");
    *out = nullptr;
    const auto ch = jm::make_channel(setup->ell, setup->A);
    const jm::BasisConfig basis{kind_of(setup->basis), setup->lambda, setup->N};
    *out = new jm_problem{jm::Scatterer(ch, basis, std::move(model), convention_of(setup->convention),
                                        setup->quadrature_order)};
    return JM_OK;
}

jm_status copy_roots(const std::vector<jm::ResonanceResult>& found, jm_root* roots, size_t capacity,
                     size_t* count) {
    *count = found.size();
    if (found.size() > capacity || (!roots && !found.empty()))
        return fail(JM_ERR_BUFFER_TOO_SMALL, "root buffer holds " + std::to_string(capacity) + ", need " +
                                                 std::to_string(found.size()));
    for (size_t i = 0; i < found.size(); ++i) roots[i] = to_c(found[i]);
    return JM_OK;
}

}  // namespace

extern "C" {

const char* jm_last_error(void) { return last_error.c_str(); }

const char* jm_status_name(jm_status status) {
    switch (status) {
        case JM_OK: return "OK";
        case JM_ERR_NULL_POINTER: return "NullPointer";
        case JM_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
        case JM_ERR_INTERNAL: return "Internal";
        default:
            if (status >= 1 && status <= 13) return jm::error_name(static_cast<jm::ErrorCode>(status));
            return "Unknown";
    }
}

jm_status jm_channel_nu(int ell, double A, double* nu) {
    if (!nu) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        *nu = jm::make_channel(ell, A).nu();
        return JM_OK;
    });
}

jm_status jm_energy_point(jm_complex E, jm_basis basis, double lambda, jm_complex* k, jm_complex* mu,
                          jm_complex* x) {
    return guarded([&] {
        const jm::BasisConfig b{kind_of(basis), lambda, 2};
        const auto p = jm::energy_point(from_c(E), b);
        if (k) *k = to_c(p.k);
        if (mu) *mu = to_c(p.mu);
        if (x) *x = to_c(p.x);
        return JM_OK;
    });
}

jm_status jm_coefficients(int ell, double A, jm_basis basis, double lambda, int N, jm_complex E,
                          jm_convention convention, jm_complex* s, jm_complex* c) {
    if (!s || !c) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto ch = jm::make_channel(ell, A);
        jm::validate({kind_of(basis), lambda, N});
        const auto t = kind_of(basis) == jm::BasisKind::Laguerre
                           ? jm::laguerre::coefficients(ch, lambda, from_c(E), N, convention_of(convention))
                           : jm::oscillator::coefficients(ch, lambda, from_c(E), N);
        for (int n = 0; n <= N; ++n) {
            s[n] = to_c(t.s[n]);
            c[n] = to_c(t.c[n]);
        }
        return JM_OK;
    });
}

jm_status jm_reconstruct(int ell, double A, jm_basis basis, double lambda, const jm_complex* coeffs,
                         size_t n_coeffs, const double* r, size_t n_r, jm_complex* out) {
    if ((!coeffs && n_coeffs) || (!r && n_r) || (!out && n_r)) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto ch = jm::make_channel(ell, A);
        if (!(lambda > 0.0)) throw jm::Error(jm::ErrorCode::InvalidArgument, "lambda must be positive");
        std::vector<jm::cplx> a(n_coeffs);
        for (size_t i = 0; i < n_coeffs; ++i) a[i] = from_c(coeffs[i]);
        const std::span<const double> grid(r, n_r);
        const auto v = kind_of(basis) == jm::BasisKind::Laguerre ? jm::laguerre::reconstruct(a, ch, lambda, grid)
                                                                  : jm::oscillator::reconstruct(a, ch, lambda, grid);
        for (size_t i = 0; i < n_r; ++i) out[i] = to_c(v[i]);
        return JM_OK;
    });
}

jm_status jm_basis_function(int ell, double A, jm_basis basis, double lambda, int n, double r, double* value) {
    if (!value) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto ch = jm::make_channel(ell, A);
        *value = kind_of(basis) == jm::BasisKind::Laguerre ? jm::laguerre::basis_function(n, ch, lambda, r)
                                                            : jm::oscillator::basis_function(n, ch, lambda, r);
        return JM_OK;
    });
}

jm_status jm_bessel_jy(double nu, double z, double* J, double* Y) {
    if (!J || !Y) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        std::tie(*J, *Y) = jm::bessel_jy(nu, z);
        return JM_OK;
    });
}

jm_status jm_problem_create_powexp(const jm_setup* setup, double v0, double p, double a, jm_problem** out) {
    return guarded([&] { return create(setup, jm::PotentialModel(jm::PowExp{v0, p, a}), out); });
}

jm_status jm_problem_create_tabulated(const jm_setup* setup, const double* r, const double* u, size_t n,
                                      jm_problem** out) {
    if (!r || !u) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        return create(setup, jm::PotentialModel::tabulated({r, r + n}, {u, u + n}), out);
    });
}

jm_status jm_problem_create_from_file(const jm_setup* setup, const char* path, jm_problem** out) {
    if (!path) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] { return create(setup, jm::load_potential_table(path), out); });
}

void jm_problem_destroy(jm_problem* problem) { delete problem; }

jm_status jm_problem_info_get(const jm_problem* problem, jm_problem_info* info) {
    if (!problem || !info) return fail(JM_ERR_NULL_POINTER, "null argument");
    const auto& sc = problem->scatterer;
    const auto& rep = sc.potential_report();
    *info = {sc.channel().nu(), rep.order, rep.corner_drift, rep.max_drift, rep.out_of_table ? 1 : 0};
    return JM_OK;
}

jm_status jm_potential_value(const jm_problem* problem, double r, double* u, int* out_of_table) {
    if (!problem || !u) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        bool beyond = false;
        if (r < 0.0) throw jm::Error(jm::ErrorCode::InvalidArgument, "r must be non-negative");
        *u = problem->scatterer.potential()(r, &beyond);
        if (out_of_table) *out_of_table = beyond ? 1 : 0;
        return JM_OK;
    });
}

jm_status jm_spectra(const jm_problem* problem, double* eps, double* eps_trunc) {
    if (!problem) return fail(JM_ERR_NULL_POINTER, "null argument");
    const auto& sp = problem->scatterer.spectra();
    if (eps) std::copy(sp.eps.begin(), sp.eps.end(), eps);
    if (eps_trunc) std::copy(sp.eps_trunc.begin(), sp.eps_trunc.end(), eps_trunc);
    return JM_OK;
}

jm_status jm_green(const jm_problem* problem, jm_complex z, jm_complex* g) {
    if (!problem || !g) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        *g = to_c(problem->scatterer.green(from_c(z)));
        return JM_OK;
    });
}

jm_status jm_smatrix(const jm_problem* problem, jm_complex E, jm_smatrix_result* out) {
    if (!problem || !out) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto r = problem->scatterer.s_matrix(from_c(E));
        *out = {to_c(r.S),       to_c(r.S_reciprocal), r.phase_shift, to_c(r.parts.T), to_c(r.parts.Rp),
                to_c(r.parts.Rm), to_c(r.g),            to_c(r.J)};
        return JM_OK;
    });
}

jm_status jm_pole_function(const jm_problem* problem, jm_complex E, jm_complex* D) {
    if (!problem || !D) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        *D = to_c(problem->scatterer.pole_function(from_c(E)));
        return JM_OK;
    });
}

jm_status jm_unwrap_phase(const double* delta, size_t n, double* out) {
    if ((!delta || !out) && n) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto u = jm::unwrap_phase(std::vector<double>(delta, delta + n));
        std::copy(u.begin(), u.end(), out);
        return JM_OK;
    });
}

jm_status jm_find_poles(const jm_problem* problem, const jm_search* search, jm_root* roots, size_t capacity,
                        size_t* count, size_t* failed_seeds) {
    if (!problem || !search || !count) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        jm::PoleSearchOptions opts;
        if (search->grid_re > 0) opts.grid_re = search->grid_re;
        if (search->grid_im > 0) opts.grid_im = search->grid_im;
        if (search->tolerance > 0.0) opts.tolerance = search->tolerance;
        opts.spread_fraction = search->spread_fraction < 0.0 ? 0.0
                               : search->spread_fraction > 0.0 ? search->spread_fraction
                                                                : opts.spread_fraction;
        for (size_t i = 0; i < search->n_seeds; ++i) opts.seeds.push_back(from_c(search->seeds[i]));
        const jm::Region region{search->re_min, search->re_max, search->im_min, search->im_max};
        const auto res = jm::find_poles(problem->scatterer, region, opts);
        if (failed_seeds) *failed_seeds = res.failed_seeds.size();
        return copy_roots(res.roots, roots, capacity, count);
    });
}

jm_status jm_bound_states(const jm_problem* problem, double e_min, double e_max, jm_root* roots,
                          size_t capacity, size_t* count) {
    if (!problem || !count) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        return copy_roots(jm::find_bound_states(problem->scatterer, e_min, e_max), roots, capacity, count);
    });
}

jm_status jm_polish_root(const jm_problem* problem, jm_complex seed, jm_root* root) {
    if (!problem || !root) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto& sc = problem->scatterer;
        auto r = jm::polish_root([&sc](jm::cplx E) { return sc.pole_function(E); }, from_c(seed));
        if (!r) throw jm::Error(jm::ErrorCode::NoConvergence, "root polish did not converge from the seed");
        r->lambda_used = sc.basis().lambda;
        r->N_used = sc.basis().N;
        *root = to_c(*r);
        return JM_OK;
    });
}

jm_status jm_stability_scan(const jm_problem* problem, const double* lambdas, size_t n_lambdas, const int* Ns,
                            size_t n_N, jm_complex target, double tolerance, jm_stability_row* rows,
                            jm_plateau* plateau) {
    if (!problem || !lambdas || !Ns || !rows) return fail(JM_ERR_NULL_POINTER, "null argument");
    return guarded([&] {
        const auto& base = problem->scatterer;
        const auto kind = base.basis().kind;
        const auto rep = jm::stability_scan(
            [&](double lam, int N) { return base.with_basis({kind, lam, N}); },
            std::vector<double>(lambdas, lambdas + n_lambdas), std::vector<int>(Ns, Ns + n_N), from_c(target),
            tolerance > 0.0 ? tolerance : 1e-6);
        for (size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& r = rep.rows[i];
            rows[i] = {r.lambda, r.N, to_c(r.E), r.residual, r.converged ? 1 : 0, r.in_plateau ? 1 : 0};
        }
        if (plateau) *plateau = {rep.has_plateau ? 1 : 0, rep.plateau_lo, rep.plateau_hi, rep.plateau_drift};
        return JM_OK;
    });
}

}  // extern "C"
