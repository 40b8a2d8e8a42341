#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jmcli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration. Keys are fixed; values are kept as the text
// the user supplied so an echoed config replays bit-identically.
class RunConfig {
public:
    RunConfig();  // built-in defaults

    static const std::vector<std::string>& keys();
    static bool known(const std::string& key);

    const std::string& get(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    // key = value lines, '#' comments. Errors name the file and line.
    void merge_file(const std::string& path);
    void merge_text(const std::string& text, const std::string& origin);
    // Reads the "# key = value" echo at the head of a CSV output, or the
    // "config" object of a JSON output.
    void merge_echo(const std::string& path);

    // Keys relevant to one subcommand: shared sections plus its own.
    std::vector<std::string> keys_for(const std::string& command) const;

    double number(const std::string& key) const;
    int integer(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

struct Grid {
    double start, stop;
    int count;
    std::vector<double> points() const;
};

struct Rect {
    double re_min, re_max, im_min, im_max;
};

struct Complex {
    double re, im;
};

double parse_double(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);
Grid parse_grid(const std::string& text, const std::string& what);        // start:stop:count
Rect parse_rect(const std::string& text, const std::string& what);        // a..b,c..d
Complex parse_complex(const std::string& text, const std::string& what);  // re,im
std::vector<Complex> parse_complex_list(const std::string& text, const std::string& what);  // re,im;re,im
std::vector<int> parse_int_list(const std::string& text, const std::string& what);          // 100,150

std::string format_double(double v);  // 17 significant digits

}  // namespace jmcli
