#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace jmcli {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
    static const std::vector<std::pair<std::string, std::string>> d = {
        {"command", ""},
        {"channel.ell", "1"},
        {"channel.A", "-2"},
        {"basis.kind", "laguerre"},
        {"basis.lambda", "1"},
        {"basis.N", "100"},
        {"basis.convention", "eq19"},
        {"basis.quadrature_order", "0"},
        {"potential.kind", "powexp"},
        {"potential.v0", "7.5"},
        {"potential.p", "2"},
        {"potential.a", "1"},
        {"potential.file", ""},
        {"output.path", ""},
        {"output.format", "auto"},
        {"phaseshift.energies", "0.1:10:100"},
        {"resonances.region", "0..10,-20..-0.01"},
        {"resonances.grid", "24"},
        {"resonances.seeds", ""},
        {"resonances.mode", "resonance"},
        {"resonances.spread", "0.05"},
        {"resonances.max_spread", ""},
        {"resonances.tolerance", "1e-10"},
        {"wavefun.mu", "1.5"},
        {"wavefun.E", ""},
        {"wavefun.r", "0.01:20:400"},
        {"stability.lambdas", "2:6:21"},
        {"stability.N", "100,150"},
        {"stability.target", "5.064929607,-5.976034787"},
        {"stability.tolerance", "1e-6"},
    };
    return d;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
    return out;
}

}  // namespace

RunConfig::RunConfig() {
    for (const auto& [k, v] : defaults()) values_[k] = v;
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& kv : defaults()) out.push_back(kv.first);
        return out;
    }();
    return k;
}

bool RunConfig::known(const std::string& key) {
    const auto& k = keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
    return it->second;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known(key)) throw ConfigError("unknown configuration key '" + key + "'");
    values_[key] = value;
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (!known(key)) throw ConfigError(where + "unknown key '" + key + "'");
        values_[key] = trim(line.substr(eq + 1));
    }
}

void RunConfig::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str(), path);
}

void RunConfig::merge_echo(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object()) throw ConfigError(path + ": no config object");
        for (const auto& [k, v] : doc["config"].items()) {
            if (!known(k)) throw ConfigError(path + ": unknown key '" + k + "'");
            values_[k] = v.get<std::string>();
        }
        return;
    }
    std::istringstream lines(text);
    std::string line, body;
    while (std::getline(lines, line)) {
        if (line.rfind("# ", 0) != 0 || line.find(" = ") == std::string::npos) break;
        body += line.substr(2) + "\n";
    }
    if (body.empty()) throw ConfigError(path + ": no configuration echo found");
    merge_text(body, path);
}

std::vector<std::string> RunConfig::keys_for(const std::string& command) const {
    std::vector<std::string> out;
    for (const auto& k : keys()) {
        const auto dot = k.find('.');
        const std::string section = dot == std::string::npos ? "" : k.substr(0, dot);
        const bool own = section == command;
        const bool shared = section.empty() || section == "channel" || section == "basis" ||
                            section == "potential" || section == "output";
        if (own || shared) out.push_back(k);
    }
    return out;
}

double RunConfig::number(const std::string& key) const { return parse_double(get(key), key); }
int RunConfig::integer(const std::string& key) const { return parse_int(get(key), key); }

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty() || !std::isfinite(v))
        throw ConfigError(what + ": expected a number, got '" + text + "'");
    return v;
}

int parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    int v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError(what + ": expected an integer, got '" + text + "'");
    return v;
}

std::vector<double> Grid::points() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? start : start + (stop - start) * double(i) / double(count - 1);
    return out;
}

Grid parse_grid(const std::string& text, const std::string& what) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(what + ": expected start:stop:count, got '" + text + "'");
    Grid g{parse_double(parts[0], what), parse_double(parts[1], what), parse_int(parts[2], what)};
    if (g.count < 1) throw ConfigError(what + ": count must be positive");
    if (g.count > 1 && !(g.stop > g.start)) throw ConfigError(what + ": grid must be ascending");
    return g;
}

Rect parse_rect(const std::string& text, const std::string& what) {
    const auto parts = split(text, ',');
    auto range = [&](const std::string& s) {
        const auto dots = s.find("..");
        if (dots == std::string::npos) throw ConfigError(what + ": expected lo..hi, got '" + s + "'");
        return std::pair{parse_double(s.substr(0, dots), what), parse_double(s.substr(dots + 2), what)};
    };
    if (parts.size() != 2) throw ConfigError(what + ": expected remin..remax,immin..immax, got '" + text + "'");
    const auto [a, b] = range(parts[0]);
    const auto [c, d] = range(parts[1]);
    return {a, b, c, d};
}

Complex parse_complex(const std::string& text, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ConfigError(what + ": expected re,im, got '" + text + "'");
    return {parse_double(parts[0], what), parse_double(parts[1], what)};
}

std::vector<Complex> parse_complex_list(const std::string& text, const std::string& what) {
    std::vector<Complex> out;
    for (const auto& item : split(text, ';'))
        if (!item.empty()) out.push_back(parse_complex(item, what));
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const auto& item : split(text, ','))
        if (!item.empty()) out.push_back(parse_int(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace jmcli
