#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "config.hpp"
#include "jmatrix.h"

namespace {

using jmcli::ConfigError;
using jmcli::format_double;
using jmcli::RunConfig;
using nlohmann::ordered_json;

struct ApiError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(jm_status s, const char* what) {
    if (s != JM_OK) throw ApiError(std::string(what) + ": " + jm_last_error());
}

struct ProblemDeleter {
    void operator()(jm_problem* p) const { jm_problem_destroy(p); }
};
using Problem = std::unique_ptr<jm_problem, ProblemDeleter>;

jm_basis basis_of(const RunConfig& cfg) {
    const auto& k = cfg.get("basis.kind");
    if (k == "laguerre") return JM_BASIS_LAGUERRE;
    if (k == "oscillator") return JM_BASIS_OSCILLATOR;
    throw ConfigError("basis.kind: expected laguerre or oscillator, got '" + k + "'");
}

jm_convention convention_of(const RunConfig& cfg) {
    const auto& c = cfg.get("basis.convention");
    if (c == "eq19") return JM_CONVENTION_EQ19;
    if (c == "table2") return JM_CONVENTION_TABLE2;
    throw ConfigError("basis.convention: expected eq19 or table2, got '" + c + "'");
}

jm_setup setup_of(const RunConfig& cfg) {
    return {cfg.integer("channel.ell"), cfg.number("channel.A"),        basis_of(cfg),
            cfg.number("basis.lambda"), cfg.integer("basis.N"),         convention_of(cfg),
            cfg.integer("basis.quadrature_order")};
}

Problem make_problem(const RunConfig& cfg) {
    const jm_setup s = setup_of(cfg);
    jm_problem* p = nullptr;
    const auto& kind = cfg.get("potential.kind");
    if (kind == "powexp") {
        check(jm_problem_create_powexp(&s, cfg.number("potential.v0"), cfg.number("potential.p"),
                                       cfg.number("potential.a"), &p),
              "building the problem");
    } else if (kind == "table") {
        if (cfg.get("potential.file").empty()) throw ConfigError("potential.file: required for a table potential");
        check(jm_problem_create_from_file(&s, cfg.get("potential.file").c_str(), &p), "building the problem");
    } else {
        throw ConfigError("potential.kind: expected powexp or table, got '" + kind + "'");
    }
    Problem prob(p);
    jm_problem_info info{};
    check(jm_problem_info_get(prob.get(), &info), "problem info");
    if (info.out_of_table)
        std::cerr << "warning: quadrature nodes beyond the tabulated range; U taken as 0 there\n";
    return prob;
}

std::string format_of(const RunConfig& cfg, const std::string& fallback) {
    const auto& f = cfg.get("output.format");
    if (f == "auto") return fallback;
    if (f != "csv" && f != "json") throw ConfigError("output.format: expected csv or json, got '" + f + "'");
    return f;
}

// Table with CSV or JSON rendering. The config echo always comes first.
class Output {
public:
    Output(const RunConfig& cfg, std::string format) : cfg_(cfg), format_(std::move(format)) {}

    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(std::vector<double> values) { rows_.push_back(std::move(values)); }
    void footer(const std::string& key, double value) { footer_.emplace_back(key, value); }

    void write() const {
        std::ostringstream out;
        const auto keys = cfg_.keys_for(cfg_.get("command"));
        if (format_ == "csv") {
            for (const auto& k : keys) out << "# " << k << " = " << cfg_.get(k) << "\n";
            for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
            out << "\n";
            for (const auto& r : rows_) {
                for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
                out << "\n";
            }
            for (const auto& [k, v] : footer_) out << "# " << k << ": " << format_double(v) << "\n";
        } else {
            ordered_json doc;
            doc["config"] = ordered_json::object();
            for (const auto& k : keys) doc["config"][k] = cfg_.get(k);
            doc["results"] = ordered_json::array();
            for (const auto& r : rows_) {
                ordered_json rec = ordered_json::object();
                for (std::size_t i = 0; i < r.size(); ++i) rec[columns_[i]] = r[i];
                doc["results"].push_back(rec);
            }
            if (!footer_.empty()) {
                doc["summary"] = ordered_json::object();
                for (const auto& [k, v] : footer_) doc["summary"][k] = v;
            }
            out << doc.dump(2, ' ', false) << "\n";
        }
        const auto& path = cfg_.get("output.path");
        if (path.empty() || path == "-") {
            std::cout << out.str();
        } else {
            std::ofstream f(path);
            if (!f) throw ConfigError("output.path: cannot write '" + path + "'");
            f << out.str();
        }
    }

private:
    const RunConfig& cfg_;
    std::string format_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, double>> footer_;
};

void cmd_phaseshift(const RunConfig& cfg) {
    const auto grid = jmcli::parse_grid(cfg.get("phaseshift.energies"), "phaseshift.energies").points();
    for (double E : grid)
        if (!(E > 0.0)) throw ConfigError("phaseshift.energies: energies must be positive");
    const auto prob = make_problem(cfg);
    std::vector<jm_smatrix_result> res(grid.size());
    std::vector<double> delta(grid.size()), unwrapped(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check(jm_smatrix(prob.get(), {grid[i], 0.0}, &res[i]), "S-matrix");
        delta[i] = res[i].phase_shift;
    }
    check(jm_unwrap_phase(delta.data(), delta.size(), unwrapped.data()), "unwrap");
    Output out(cfg, format_of(cfg, "csv"));
    out.columns({"E", "re_S", "im_S", "abs_S", "delta", "delta_unwrapped"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto S = res[i].S;
        out.row({grid[i], S.re, S.im, std::hypot(S.re, S.im), delta[i], unwrapped[i]});
    }
    out.write();
}

void cmd_resonances(const RunConfig& cfg) {
    const auto rect = jmcli::parse_rect(cfg.get("resonances.region"), "resonances.region");
    const auto seeds = jmcli::parse_complex_list(cfg.get("resonances.seeds"), "resonances.seeds");
    const int grid = cfg.integer("resonances.grid");
    const double spread = cfg.number("resonances.spread");
    const double tol = cfg.number("resonances.tolerance");
    const auto& cap = cfg.get("resonances.max_spread");
    const double max_spread = cap.empty() ? std::numeric_limits<double>::infinity() : cfg.number("resonances.max_spread");
    const auto& mode = cfg.get("resonances.mode");
    if (mode != "resonance" && mode != "bound")
        throw ConfigError("resonances.mode: expected resonance or bound, got '" + mode + "'");
    const auto prob = make_problem(cfg);

    std::vector<jm_root> roots(256);
    size_t count = 0, failed = 0;
    if (mode == "bound") {
        check(jm_bound_states(prob.get(), rect.re_min, rect.re_max, roots.data(), roots.size(), &count),
              "bound-state search");
    } else {
        std::vector<jm_complex> cs;
        for (const auto& s : seeds) cs.push_back({s.re, s.im});
        const jm_search search{rect.re_min, rect.re_max, rect.im_min, rect.im_max, grid, grid,
                               cs.data(),   cs.size(),   tol,         spread > 0.0 ? spread : -1.0};
        jm_status st = jm_find_poles(prob.get(), &search, roots.data(), roots.size(), &count, &failed);
        if (st == JM_ERR_BUFFER_TOO_SMALL) {
            roots.resize(count);
            st = jm_find_poles(prob.get(), &search, roots.data(), roots.size(), &count, &failed);
        }
        check(st, "pole search");
        if (failed) std::cerr << "note: " << failed << " seed(s) did not converge\n";
    }
    roots.resize(count);
    // pseudo-poles of the discretized continuum move with lambda; real ones stay put
    std::erase_if(roots, [&](const jm_root& r) { return r.stability_spread > max_spread; });
    Output out(cfg, format_of(cfg, "json"));
    out.columns({"re", "im", "residual", "lambda_used", "N_used", "stability_spread"});
    for (const auto& r : roots)
        out.row({r.E.re, r.E.im, r.residual, r.lambda_used, double(r.N_used), r.stability_spread});
    out.write();
}

void cmd_wavefun(const RunConfig& cfg) {
    const jm_setup s = setup_of(cfg);
    double E = 0.0;
    if (!cfg.get("wavefun.E").empty()) {
        E = cfg.number("wavefun.E");
    } else {
        const double mu = cfg.number("wavefun.mu");
        E = 0.5 * (mu * s.lambda) * (mu * s.lambda);
    }
    if (!(E > 0.0)) throw ConfigError("wavefun: energy must be positive");
    const auto r = jmcli::parse_grid(cfg.get("wavefun.r"), "wavefun.r").points();
    for (double x : r)
        if (!(x > 0.0)) throw ConfigError("wavefun.r: radii must be positive");

    std::vector<jm_complex> sc(s.N + 1), cc(s.N + 1), chi_s(r.size()), chi_c(r.size());
    check(jm_coefficients(s.ell, s.A, s.basis, s.lambda, s.N, {E, 0.0}, s.convention, sc.data(), cc.data()),
          "coefficients");
    check(jm_reconstruct(s.ell, s.A, s.basis, s.lambda, sc.data(), sc.size(), r.data(), r.size(), chi_s.data()),
          "reconstruct");
    check(jm_reconstruct(s.ell, s.A, s.basis, s.lambda, cc.data(), cc.size(), r.data(), r.size(), chi_c.data()),
          "reconstruct");
    double nu = 0.0;
    check(jm_channel_nu(s.ell, s.A, &nu), "channel");
    const double k = std::sqrt(2.0 * E);
    Output out(cfg, format_of(cfg, "csv"));
    out.columns({"r", "chi_sin", "chi_cos", "regular", "irregular"});
    for (std::size_t i = 0; i < r.size(); ++i) {
        double J = 0.0, Y = 0.0;
        check(jm_bessel_jy(nu, k * r[i], &J, &Y), "Bessel");
        const double amp = std::sqrt(2.0 * k * r[i]);
        out.row({r[i], chi_s[i].re, chi_c[i].re, amp * J, amp * Y});
    }
    out.write();
}

void cmd_stability(const RunConfig& cfg) {
    const auto lambdas = jmcli::parse_grid(cfg.get("stability.lambdas"), "stability.lambdas").points();
    const auto Ns = jmcli::parse_int_list(cfg.get("stability.N"), "stability.N");
    const auto target = jmcli::parse_complex(cfg.get("stability.target"), "stability.target");
    const double tol = cfg.number("stability.tolerance");
    const auto prob = make_problem(cfg);
    std::vector<jm_stability_row> rows(lambdas.size() * Ns.size());
    jm_plateau plateau{};
    check(jm_stability_scan(prob.get(), lambdas.data(), lambdas.size(), Ns.data(), Ns.size(),
                            {target.re, target.im}, tol, rows.data(), &plateau),
          "stability scan");
    Output out(cfg, format_of(cfg, "csv"));
    out.columns({"lambda", "N", "re_E", "im_E", "residual", "converged", "in_plateau"});
    for (const auto& r : rows)
        out.row({r.lambda, double(r.N), r.E.re, r.E.im, r.residual, double(r.converged), double(r.in_plateau)});
    out.footer("plateau_found", plateau.found);
    out.footer("plateau_lambda_lo", plateau.lambda_lo);
    out.footer("plateau_lambda_hi", plateau.lambda_hi);
    out.footer("plateau_drift", plateau.drift);
    out.write();
}

// Flag name, config key, help.
struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

const FlagSpec shared_flags[] = {
    {"--ell", "channel.ell", "angular momentum"},
    {"--A", "channel.A", "inverse-square strength"},
    {"--lambda", "basis.lambda", "basis scale"},
    {"--N", "basis.N", "inner basis size"},
    {"--basis", "basis.kind", "laguerre | oscillator"},
    {"--convention", "basis.convention", "eq19 | table2"},
    {"--quad-order", "basis.quadrature_order", "potential quadrature points (0 = automatic)"},
    {"--potential", "potential.kind", "powexp | table"},
    {"--v0", "potential.v0", "U = v0 r^p e^(-a r)"},
    {"--p", "potential.p", "power of r"},
    {"--a", "potential.a", "decay rate"},
    {"--file", "potential.file", "two-column (r, U) table"},
    {"--out", "output.path", "output file (default stdout)"},
    {"--format", "output.format", "csv | json"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"J-matrix scattering for V(r) = A/2r^2 + U(r)"};
    app.require_subcommand(1);
    app.fallthrough();

    std::map<std::string, std::optional<std::string>> flags;
    std::optional<std::string> config_path, replay_path;
    bool print_config = false;
    for (const auto& f : shared_flags) app.add_option(f.flag, flags[f.key], f.help);
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--replay", replay_path, "reuse the configuration echoed by a previous run");
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    struct Sub {
        CLI::App* app;
        void (*run)(const RunConfig&);
    };
    std::map<std::string, Sub> subs;
    auto add_sub = [&](const char* name, const char* help, void (*run)(const RunConfig&),
                       std::initializer_list<FlagSpec> own) {
        auto* sub = app.add_subcommand(name, help);
        for (const auto& f : own) sub->add_option(f.flag, flags[f.key], f.help);
        subs[name] = {sub, run};
        return sub;
    };
    add_sub("phaseshift", "phase shifts and S on a real energy grid", cmd_phaseshift,
            {{"--energies", "phaseshift.energies", "start:stop:count"}});
    auto* res = add_sub("resonances", "S-matrix poles in a complex rectangle", cmd_resonances,
                        {{"--region", "resonances.region", "remin..remax,immin..immax"},
                         {"--grid", "resonances.grid", "seed grid points per side"},
                         {"--seeds", "resonances.seeds", "extra seeds re,im;re,im"},
                         {"--mode", "resonances.mode", "resonance | bound"},
                         {"--spread", "resonances.spread", "relative lambda shift for the spread estimate"},
                         {"--max-spread", "resonances.max_spread", "drop roots whose spread exceeds this"},
                         {"--tol", "resonances.tolerance", "residual tolerance"}});
    bool bound = false;
    res->add_flag("--bound", bound, "same as --mode bound");
    add_sub("wavefun", "reference solutions on an r grid", cmd_wavefun,
            {{"--mu", "wavefun.mu", "mu = k/lambda"},
             {"--E", "wavefun.E", "energy (overrides --mu)"},
             {"--r", "wavefun.r", "start:stop:count"}});
    add_sub("stability", "root drift over lambda and N", cmd_stability,
            {{"--lambdas", "stability.lambdas", "start:stop:count"},
             {"--Ns", "stability.N", "comma-separated basis sizes"},
             {"--target", "stability.target", "re,im"},
             {"--tol", "stability.tolerance", "plateau tolerance"}});

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (config_path) cfg.merge_file(*config_path);
        if (replay_path) cfg.merge_echo(*replay_path);
        for (const auto& [key, value] : flags)
            if (value) cfg.set(key, *value);
        if (bound) cfg.set("resonances.mode", "bound");
        for (const auto& [name, sub] : subs) {
            if (!sub.app->parsed()) continue;
            cfg.set("command", name);
            if (print_config) {
                for (const auto& k : cfg.keys_for(name)) std::cout << k << " = " << cfg.get(k) << "\n";
                return 0;
            }
            sub.run(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
